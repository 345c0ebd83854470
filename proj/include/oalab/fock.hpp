#pragma once

// Truncated symmetric Fock space over C^d and Weyl quantization.
//
// Phi(psi) = (a(psi) + a(psi)^dagger) / sqrt(2) with a(.) conjugate-linear,
// which gives [Phi(psi), Phi(phi)] = i Im<psi, phi> exactly below the cutoff.
// Truncation only damages the top sectors, so identities are checked on
// sectors <= n_max - 2.

#include "oalab/locwedge.hpp"
#include "oalab/numkit.hpp"

#include <vector>

namespace oalab::fock {

inline constexpr Eigen::Index kDefaultFockCap = 4000;

class FockSpace {
public:
  /// Throws std::invalid_argument for d < 1, n_max < 1 or a total dimension above cap.
  FockSpace(int d, int n_max, Eigen::Index cap = kDefaultFockCap);

  int one_particle_dim() const { return d_; }
  int cutoff() const { return n_max_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }

  /// Occupation numbers, ordered by total particle number first.
  const std::vector<std::vector<int>>& basis() const { return basis_; }
  int sector(Eigen::Index i) const { return sector_[static_cast<std::size_t>(i)]; }
  /// Number of basis states in sectors <= s (they form a prefix of the basis).
  Eigen::Index prefix_dim(int s) const;
  /// -1 when the occupation is outside the truncation.
  Eigen::Index index_of(const std::vector<int>& occ) const;

  const CMat& creation(int mode) const { return create_[static_cast<std::size_t>(mode)]; }
  /// sum_i psi_i a_i^dagger.
  CMat a_dag(const CVec& psi) const;
  /// sum_i conj(psi_i) a_i.
  CMat a(const CVec& psi) const;
  CVec vacuum() const;

private:
  int d_;
  int n_max_;
  std::vector<std::vector<int>> basis_;
  std::vector<int> sector_;
  std::vector<CMat> create_;
};

/// sum_{k <= n_max} C(k + d - 1, k).
Eigen::Index fock_dimension(int d, int n_max);

struct FieldOperator {
  CVec psi;
  CMat matrix;
};

/// Throws std::invalid_argument for the zero vector or a wrong dimension.
FieldOperator field_operator(const FockSpace& f, const CVec& psi);

/// ||P X P|| (spectral norm) with P the projector onto sectors <= s.
double restricted_norm(const FockSpace& f, const CMat& x, int s);

/// ||P([Phi(psi), Phi(phi)] - i Im<psi, phi>) P||, P on sectors <= n_max - 2.
/// Throws std::invalid_argument when n_max < 2.
double ccr_defect(const FockSpace& f, const CVec& psi, const CVec& phi);

/// ||P [Phi(psi), Phi(phi)] P||.
double commutator_norm(const FockSpace& f, const CVec& psi, const CVec& phi);

/// max commutator norm over pairs of basis vectors of K and Kp.
double locality_check(const FockSpace& f, const locwedge::RealSubspace& k, const locwedge::RealSubspace& kp);

/// exp(i Phi(psi)); psi = 0 gives the identity.
CMat weyl_operator(const FockSpace& f, const CVec& psi);

/// ||P (W W^dagger - 1) P|| on sectors <= n_max - 2.
double weyl_unitarity_defect(const FockSpace& f, const CMat& w);

/// ||P_out (W(psi) W(phi) - e^{-i Im<psi,phi>/2} W(psi + phi)) P_in|| with
/// P_in on sectors <= in_sector and P_out on sectors <= out_sector.
double weyl_relation_defect(const FockSpace& f, const CVec& psi, const CVec& phi, int in_sector, int out_sector);

/// Ranks of span{Phi(psi_{i1}) ... Phi(psi_{ik}) Omega : k <= D} for D = 0..degree,
/// psi running over the complex form of a real basis of K.
std::vector<Eigen::Index> cyclicity_ranks(const FockSpace& f, const locwedge::RealSubspace& k, int degree);
Eigen::Index cyclicity_rank(const FockSpace& f, const locwedge::RealSubspace& k, int degree);

/// Gamma(U), built from (U a^dagger U^dagger) applied to the vacuum. Throws
/// std::invalid_argument if U is not unitary.
CMat second_quantize(const FockSpace& f, const CMat& u);

/// ||P (Gamma(U) Phi(psi) Gamma(U)^dagger - Phi(U psi)) P|| on sectors <= n_max - 2.
double covariance_defect(const FockSpace& f, const CMat& u, const CVec& psi);

}  // namespace oalab::fock
