#pragma once

// One-particle modular localization for the 1+1 standard wedge.
//
// The boost acts as translation in rapidity, so the generator is
// K = -i d/dtheta (Fourier spectral derivative on a periodic grid) and
// Delta = exp(-2 pi K). J is componentwise conjugation in the rapidity basis.
// Delta itself is never formed as a dense matrix: its spectrum spans dozens of
// orders of magnitude, so everything goes through the Fourier modes.

#include "oalab/numkit.hpp"

namespace oalab::locwedge {

/// [[cosh s, sinh s], [sinh s, cosh s]].
RMat boost_matrix(double s);

struct WedgeModel {
  int n = 0;
  double theta_max = 0.0;
  double mass = 1.0;
  RVec theta;       // grid points -theta_max + j h
  RVec k;           // wavenumber of each Fourier column (Nyquist column has k = 0)
  CMat fourier;     // unitary, columns e^{i k theta_j} / sqrt(n)
  CMat k_op;        // F diag(k) F^dagger
  numkit::HermitianEigen k_eig;
  numkit::AntilinearMap j;

  /// Delta^{it} = exp(-2 pi i t K), via the spectral calculus of K.
  CMat delta_it(double t) const;
  /// Delta^{z} for real z, via the Fourier representation. Only sensible for
  /// small |z| * max|k|.
  CMat delta_power(double z) const;
  /// ||J K J + K||, the generator form of J Delta J = Delta^{-1}.
  double conjugation_defect() const;
};

/// Throws std::invalid_argument unless n >= 8 is even and theta_max > 0.
WedgeModel wedge_one_particle(int n, double theta_max, double mass = 1.0);

/// Max-norm error of K applied to a Gaussian of the given width against the
/// exact -i d/dtheta; measures the periodic truncation of the grid.
double derivative_truncation_error(const WedgeModel& m, double width);

/// S = J Delta^{1/2}, restricted to the retained spectral subspace.
struct RetainedS {
  numkit::AntilinearMap s;  // retained coordinates
  numkit::AntilinearMap j;  // J in retained coordinates
  CMat basis;               // n x r orthonormal basis of the retained subspace
  numkit::HermitianEigen delta_eig;  // Delta in retained coordinates
  double condition = 1.0;   // cond(Delta^{1/2}) on the retained subspace
  double leakage = 0.0;     // ||(1 - P) J P||, J-invariance of the subspace
  bool regularized = false;

  Eigen::Index dim() const { return basis.cols(); }
  /// Delta^{is} in retained coordinates.
  CMat delta_is(double s) const;
  /// ||S^2 - 1|| in retained coordinates.
  double involution_defect() const;
  /// ||J Delta J - Delta^{-1}|| / ||Delta^{-1}|| in retained coordinates.
  double relative_conjugation_defect() const;
};

/// Generic version for an explicitly given, moderately conditioned Delta.
/// When cond(Delta^{1/2}) exceeds `cut`, throws std::invalid_argument unless
/// `regularize` is set, in which case eigenvectors with |log Delta| <= log cut
/// are retained.
RetainedS s_operator(const CMat& delta, const numkit::AntilinearMap& j, bool regularize, double cut = 1e8);
/// Wedge version: retained modes are |k| <= log(cut) / (2 pi).
RetainedS s_operator(const WedgeModel& m, bool regularize, double cut = 1e8);

// ---------------------------------------------------------------------------

/// Real-linear subspace of C^n stored as an orthonormal basis of its image in
/// R^{2n} under v -> (Re v, Im v).
struct RealSubspace {
  Eigen::Index ambient = 0;
  RMat basis;

  Eigen::Index real_dim() const { return basis.cols(); }
  /// Real span of the given realified columns.
  static RealSubspace span(Eigen::Index ambient, const RMat& columns, double rel = 1e-9);
  /// Real span of complex vectors.
  static RealSubspace span_complex(const CMat& vectors, double rel = 1e-9);
  /// Basis vectors as complex vectors (columns).
  CMat complex_basis() const;
};

struct StandardSubspace {
  RealSubspace k;
  double fixed_point_defect = 0.0;  // max ||S phi - phi|| over the basis
  double spectral_gap = 0.0;        // sigma_{r+1} / sigma_r of the normalized (1 + S) columns
};

/// K = {phi : S phi = phi}, computed as the range of 1 + S (which equals the
/// +1 eigenspace of the real linearization when S^2 = 1).
StandardSubspace standard_subspace(const numkit::AntilinearMap& s);

/// {psi : Im<psi, phi> = 0 for all phi in K}.
RealSubspace symplectic_complement(const RealSubspace& k);

struct Standardness {
  Eigen::Index intersection_dim;  // dim_R (K cap iK)
  Eigen::Index sum_dim;           // dim_R (K + iK)
  bool is_standard;
};
Standardness standardness_check(const RealSubspace& k);

/// Image of K under a linear or antilinear map.
RealSubspace image(const CMat& linear, const RealSubspace& k);
RealSubspace image(const numkit::AntilinearMap& anti, const RealSubspace& k);

double subspace_distance(const RealSubspace& a, const RealSubspace& b);

/// Distance between K' and J K.
double duality_check(const RealSubspace& k, const numkit::AntilinearMap& j);

/// max over s of the distance between Delta^{is} K and K.
double flow_invariance(const RetainedS& rs, const RealSubspace& k, const std::vector<double>& s_values);

/// The two-dimensional model Delta = diag(d, 1/d), J = swap then conjugate.
struct ToyModel {
  CMat delta;
  numkit::AntilinearMap j;
};
ToyModel toy_model(double d);

}  // namespace oalab::locwedge
