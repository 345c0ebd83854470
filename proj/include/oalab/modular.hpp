#pragma once

// Tomita-Takesaki data for a finite-dimensional algebra with a cyclic and
// separating vector. S is the closure of x Omega -> x* Omega, and
// S = J Delta^{1/2} is its polar decomposition.

#include "oalab/numkit.hpp"
#include "oalab/vnalg.hpp"

#include "json.hpp"

#include <vector>

namespace oalab::modular {

struct ModularData {
  numkit::AntilinearMap s;
  CMat delta;
  numkit::HermitianEigen delta_eig;  // ascending spectrum = delta_eig.values
  numkit::AntilinearMap j;
  vnalg::OperatorAlgebra algebra;
  CVec omega;
  /// Relative least-squares residual of S(b_i Omega) = b_i* Omega.
  double consistency_residual = 0.0;

  const RVec& spectrum() const { return delta_eig.values; }
  /// Delta^{it}.
  CMat delta_it(double t) const;
  CMat delta_power(double p) const;
};

/// Builds S from its defining relations, then polar-decomposes it.
/// Throws std::invalid_argument naming the failed property when Omega is not
/// cyclic or not separating for A.
ModularData tomita(const vnalg::OperatorAlgebra& a, const CVec& omega,
                   const numkit::Tolerance& tol = numkit::default_tolerance());

struct ModularDefects {
  double polar = 0.0;         // ||S - J Delta^{1/2}||
  double s_squared = 0.0;     // ||S^2 - 1||
  double j_squared = 0.0;     // ||J^2 - 1||
  double j_delta_j = 0.0;     // ||J Delta J - Delta^{-1}||
  double delta_omega = 0.0;   // ||Delta Omega - Omega||
  double s_omega = 0.0;       // ||S Omega - Omega||
};
ModularDefects invariant_defects(const ModularData& md);

/// Delta^{it} x Delta^{-it}. Throws std::invalid_argument for x outside the algebra.
CMat modular_flow(const ModularData& md, const CMat& x, double t);

/// |<Omega, x y Omega> - <Omega, y D x Omega>| with D = Delta.
double kms_defect(const ModularData& md, const CMat& x, const CMat& y);
/// Same expression for a caller-supplied positive operator D (used for
/// negative controls and for the commutant form with D = Delta^{-1}).
double kms_defect_with(const ModularData& md, const CMat& d, const CMat& x, const CMat& y);

struct CommutantImage {
  CMat image;       // J x J
  double residual;  // relative residual of the image in the commutant
};
CommutantImage commutant_map_check(const ModularData& md, const CMat& x);

/// span{J b_i J} vs commutant(A), as a span distance.
double commutant_map_span_defect(const ModularData& md);

/// psi = sum_i sqrt(p_i) u_i (x) e_i on C^k (x) C^m, eigenvalues in descending
/// order, each u_i phased so its largest-modulus entry is real positive.
/// Throws std::invalid_argument when m < rank(rho) or rho is not a state.
CVec purify(const CMat& rho, std::size_t m, const numkit::Tolerance& tol = numkit::default_tolerance());

/// All ratios p_i / p_j, sorted ascending.
std::vector<double> ratio_multiset(const RVec& p);

/// Report record {dims, delta_spectrum, max_kms_defect, flow_residual, commutant_map_residual}.
nlohmann::json report(const ModularData& md, double max_kms, double flow_residual, double commutant_residual);

}  // namespace oalab::modular
