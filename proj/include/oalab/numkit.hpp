#pragma once

// Dense complex linear algebra kernel shared by every other module.
//
// Conventions:
//  * Matrices are Eigen::MatrixXcd; vectors are column vectors.
//  * Inner products are conjugate-linear in the first slot: <u, v> = u^dagger v.
//  * An antilinear map is stored as its "conjugation matrix" M, acting as
//    v -> M * conj(v).
//  * Real linearizations use the block embedding v -> (Re v, Im v).
//  * Norms of operators are Frobenius unless a function says otherwise.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace oalab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace numkit {

/// Absolute / relative slack used by predicates. Identities checked here are
/// exact in exact arithmetic, so this is floating-point slack only.
class Tolerance {
public:
  Tolerance() = default;
  Tolerance(double abs, double rel);

  double abs() const { return abs_; }
  double rel() const { return rel_; }

private:
  double abs_ = 1e-10;
  double rel_ = 1e-8;
};

/// Process-wide default; the CLI overrides it from --tol-abs / --tol-rel.
Tolerance default_tolerance();
void set_default_tolerance(const Tolerance& tol);

// ---------------------------------------------------------------------------
// Hermitian spectral calculus

struct HermitianEigen {
  RVec values;   // ascending
  CMat vectors;  // columns are orthonormal eigenvectors
};

double hermiticity_defect(const CMat& m);
bool is_hermitian(const CMat& m, const Tolerance& tol = default_tolerance());

/// Throws std::invalid_argument if m is not Hermitian within tolerance.
HermitianEigen hermitian_eigen(const CMat& m, const Tolerance& tol = default_tolerance());

/// max_j ||H v_j - lambda_j v_j|| / ||H||  (the accuracy contract of the backend).
double max_eigen_residual(const CMat& h, const HermitianEigen& eig);

class SpectralFn {
public:
  enum class Kind { Exp, Log, Sqrt, Power, ImaginaryPower, Phase };

  static SpectralFn exp() { return {Kind::Exp, 0.0}; }
  static SpectralFn log() { return {Kind::Log, 0.0}; }
  static SpectralFn sqrt() { return {Kind::Sqrt, 0.0}; }
  static SpectralFn power(double t) { return {Kind::Power, t}; }
  /// lambda -> lambda^{i t} = exp(i t log lambda); needs lambda > 0.
  static SpectralFn imaginary_power(double t) { return {Kind::ImaginaryPower, t}; }
  /// lambda -> exp(i t lambda); defined for every real spectrum.
  static SpectralFn phase(double t) { return {Kind::Phase, t}; }

  Kind kind() const { return kind_; }
  double parameter() const { return t_; }

  /// True when the function needs a strictly positive spectrum.
  bool needs_positive() const;
  /// True when the function needs a non-negative spectrum.
  bool needs_nonnegative() const;

  Complex operator()(double lambda) const;

private:
  SpectralFn(Kind k, double t) : kind_(k), t_(t) {}
  Kind kind_;
  double t_;
};

/// U f(diag) U^dagger. Throws std::invalid_argument for non-Hermitian input
/// and std::domain_error when the spectrum is outside the domain of f.
CMat herm_fn(const CMat& h, const SpectralFn& f, const Tolerance& tol = default_tolerance());
CMat herm_fn(const HermitianEigen& eig, const SpectralFn& f, const Tolerance& tol = default_tolerance());

// ---------------------------------------------------------------------------
// Antilinear maps

class AntilinearMap {
public:
  AntilinearMap() = default;
  explicit AntilinearMap(CMat conj_matrix);

  static AntilinearMap conjugation(Eigen::Index n);

  const CMat& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.cols(); }

  CVec apply(const CVec& v) const { return m_ * v.conjugate(); }

  /// Adjoint in the antilinear sense: <phi, S psi> = <psi, S* phi>.
  AntilinearMap adjoint() const { return AntilinearMap(m_.transpose()); }

  /// True when the conjugation matrix is unitary.
  bool is_antiunitary(const Tolerance& tol = default_tolerance()) const;

private:
  CMat m_;
};

// Composition rules; A(B(v)) in every case.
CMat compose(const AntilinearMap& a, const AntilinearMap& b);
AntilinearMap compose(const AntilinearMap& a, const CMat& b);
AntilinearMap compose(const CMat& a, const AntilinearMap& b);

/// The linear operator J X J for antilinear J.
CMat sandwich(const AntilinearMap& j, const CMat& x);

double distance(const AntilinearMap& a, const AntilinearMap& b);

struct AntilinearPolar {
  AntilinearMap j;
  CMat delta;          // S* S, positive
  HermitianEigen delta_eig;
  double reconstruction_defect = 0.0;  // ||S - J Delta^{1/2}||
};

/// Polar decomposition S = J Delta^{1/2}. Throws std::invalid_argument when S
/// is singular (smallest singular value <= tol.abs()).
AntilinearPolar antilinear_polar(const AntilinearMap& s, const Tolerance& tol = default_tolerance());

// ---------------------------------------------------------------------------
// Real linearization, v -> (Re v, Im v)

RMat real_linearize(const CMat& m);
RMat real_linearize(const AntilinearMap& s);
RVec realify(const CVec& v);
CVec complexify(const RVec& x);
/// Columns realified one by one.
RMat realify_columns(const CMat& m);
CMat complexify_columns(const RMat& x);

// ---------------------------------------------------------------------------
// Subspaces, ranks, norms

/// Singular values below rel * sigma_max (and below abs) are treated as zero.
Eigen::Index numerical_rank(const CMat& m, double rel = 1e-9, double abs = 1e-14);
Eigen::Index numerical_rank(const RMat& m, double rel = 1e-9, double abs = 1e-14);

/// Orthonormal basis (as columns) of the column span.
CMat orthonormal_basis(const CMat& columns, double rel = 1e-9);
RMat orthonormal_basis(const RMat& columns, double rel = 1e-9);

/// Orthonormal basis of the right null space.
CMat null_space(const CMat& m, double rel = 1e-9);
RMat null_space(const RMat& m, double rel = 1e-9);

/// ||P_a - P_b||_F for the orthogonal projectors onto two column spans.
double subspace_distance(const RMat& a, const RMat& b, double rel = 1e-9);
double subspace_distance(const CMat& a, const CMat& b, double rel = 1e-9);

double operator_norm(const CMat& m);
double trace_norm(const CMat& m);
double min_singular_value(const CMat& m);

CMat kron(const CMat& a, const CMat& b);
CVec kron(const CVec& a, const CVec& b);

/// Reduced density matrix on the legs marked `keep`; legs are ordered with the
/// first leg most significant.
CMat partial_trace(const CMat& rho, std::span<const std::size_t> dims, const std::vector<bool>& keep);

/// Index permutation that regroups a multi-leg space so that the legs marked
/// `front` come first (in their original relative order).
std::vector<std::size_t> grouping_permutation(std::span<const std::size_t> dims, const std::vector<bool>& front);

CMat permute_matrix(const CMat& m, std::span<const std::size_t> perm);
CVec permute_vector(const CVec& v, std::span<const std::size_t> perm);

// ---------------------------------------------------------------------------
// Seeded randomness

using Rng = std::mt19937_64;

/// Per-sample seed derived from a master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

CMat random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);
CVec random_unit_vector(Rng& rng, Eigen::Index n);
CMat haar_unitary(Rng& rng, Eigen::Index n);
CMat random_hermitian(Rng& rng, Eigen::Index n);
/// Full-rank density matrix from a Ginibre square.
CMat random_density(Rng& rng, Eigen::Index n);

// ---------------------------------------------------------------------------
// CSV matrix dump: header "rows,cols" then one line per row with re,im pairs.

void write_csv(std::ostream& out, const CMat& m);
CMat read_csv(std::istream& in);

}  // namespace numkit
}  // namespace oalab
