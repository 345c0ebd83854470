#pragma once

// Finite-dimensional von Neumann algebras: unital *-closed matrix spans.
//
// An OperatorAlgebra is an immutable value (cheap to copy; shares its basis).
// Two storage layouts exist behind the same interface:
//  * dense:     an explicit Hilbert-Schmidt orthonormal basis;
//  * subsystem: B(H_S) (x) 1 on a multi-leg space H = (x)_l C^{d_l}, where S
//               is a chosen subset of legs. Approximants with thousands of
//               basis elements use this layout and are never materialized.

#include "oalab/numkit.hpp"

#include "json.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oalab::vnalg {

/// Relative residual below which an element counts as a member of a span.
inline constexpr double kMembershipThreshold = 1e-9;

/// Largest ambient dimension for which a dense commutant is computed.
inline constexpr Eigen::Index kDenseCommutantCap = 32;

struct SubsystemLayout {
  std::vector<std::size_t> legs;  // leg dimensions, first leg most significant
  std::vector<bool> acting;       // legs carrying B(C^{d_l})

  std::size_t acting_dim() const;
  std::size_t rest_dim() const;
  std::size_t ambient_dim() const { return acting_dim() * rest_dim(); }
};

class OperatorAlgebra {
public:
  /// Smallest span containing `spanning` (no closure is taken; see vn_closure).
  /// Throws std::invalid_argument on shape mismatch.
  static OperatorAlgebra from_span(const std::vector<CMat>& spanning, Eigen::Index ambient_dim);
  static OperatorAlgebra subsystem(std::vector<std::size_t> legs, std::vector<bool> acting);
  static OperatorAlgebra scalars(Eigen::Index n);
  static OperatorAlgebra full(Eigen::Index n);
  /// B(C^k) (x) 1_m on C^k (x) C^m.
  static OperatorAlgebra left_factor(std::size_t k, std::size_t m);
  /// 1_k (x) B(C^m) on C^k (x) C^m.
  static OperatorAlgebra right_factor(std::size_t k, std::size_t m);
  /// Matrices diagonal in the standard basis.
  static OperatorAlgebra diagonal(Eigen::Index n);

  Eigen::Index ambient_dim() const;
  Eigen::Index dim() const;
  const std::optional<SubsystemLayout>& layout() const;

  /// i-th Hilbert-Schmidt orthonormal basis element.
  CMat element(Eigen::Index i) const;
  CVec apply(Eigen::Index i, const CVec& v) const;
  CVec apply_adjoint(Eigen::Index i, const CVec& v) const;

  /// HS coefficients <b_i, x>.
  CVec coefficients(const CMat& x) const;
  CMat project(const CMat& x) const;
  CMat from_coefficients(const CVec& c) const;
  /// ||x - P x||_F.
  double residual(const CMat& x) const;
  bool contains(const CMat& x, double rel = kMembershipThreshold) const;

  /// Same span, dense layout. Throws when ambient_dim^2 * dim would be huge.
  OperatorAlgebra densified() const;

  /// n^2 x dim matrix whose columns are vec(b_i) (column-major vec).
  CMat basis_matrix() const;

  /// max residuals of adjoint and product closure, and of the identity.
  struct ClosureDefects {
    double adjoint = 0.0;
    double product = 0.0;
    double identity = 0.0;
  };
  ClosureDefects closure_defects() const;

private:
  struct Impl;
  explicit OperatorAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Tensor product algebra on the product space. Subsystem layouts stay
/// structured; otherwise the product basis is materialized.
OperatorAlgebra tensor(const OperatorAlgebra& a, const OperatorAlgebra& b);

/// Max residual of a's basis inside b.
double containment_residual(const OperatorAlgebra& a, const OperatorAlgebra& b);
/// max of the two containment residuals.
double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b);

struct AlgebraElement {
  OperatorAlgebra algebra;
  CVec coefficients;

  /// Throws std::invalid_argument when x is not in the algebra.
  static AlgebraElement from_matrix(const OperatorAlgebra& a, const CMat& x);
  CMat matrix() const { return algebra.from_coefficients(coefficients); }
};

// ---------------------------------------------------------------------------

/// Smallest unital *-closed span containing the generators, by iterated
/// products up to a fixed point (hard cap dim <= n^2).
OperatorAlgebra vn_closure(const std::vector<CMat>& generators, Eigen::Index ambient_dim);

enum class CommutantMethod { Auto, NullSpace };

/// {X : [b, X] = 0 for all basis b}. Subsystem layouts map to the complementary
/// subsystem unless NullSpace is forced. Dense computation requires
/// ambient_dim <= kDenseCommutantCap.
OperatorAlgebra commutant(const OperatorAlgebra& a, CommutantMethod method = CommutantMethod::Auto);
OperatorAlgebra commutant_of(const std::vector<CMat>& generators, Eigen::Index ambient_dim);

/// Span intersection.
OperatorAlgebra intersection(const OperatorAlgebra& a, const OperatorAlgebra& b);

struct CenterInfo {
  OperatorAlgebra center;
  bool is_factor;
};
CenterInfo center_and_factor(const OperatorAlgebra& a);

/// dim span{E b_i E}.
Eigen::Index compression_dim(const OperatorAlgebra& a, const CMat& e);

/// A projector E in A with dim span(E A E) = 1.
CMat minimal_projector(const OperatorAlgebra& a);

struct CyclicSeparating {
  bool is_cyclic;
  bool is_separating;
  Eigen::Index orbit_rank;  // rank{b_i Omega}
};

/// Cyclic: the orbit spans the ambient space. Separating: x Omega = 0 forces
/// x = 0, i.e. the orbit map is injective. Throws for the zero vector.
CyclicSeparating cyclic_separating(const OperatorAlgebra& a, const CVec& omega);
/// Orbit vectors b_i Omega as columns.
CMat orbit_matrix(const OperatorAlgebra& a, const CVec& omega);

// ---------------------------------------------------------------------------

struct GnsRepresentation {
  OperatorAlgebra source;      // algebra on C^k
  CMat rho;                    // the state
  CMat classes;                // k^2 x r: vec of matrices u_r representing an orthonormal basis of A/N
  Eigen::Index null_dim = 0;   // dim of {a : omega(a* a) = 0}
  CVec omega;                  // class of the identity

  Eigen::Index dim() const { return classes.cols(); }
  /// pi(x) as an r x r matrix; x must lie in `source`.
  CMat represent(const CMat& x) const;
  /// The represented algebra pi(A) as an OperatorAlgebra on C^r.
  OperatorAlgebra represented_algebra() const;
};

/// GNS construction for the state tr(rho .) on a matrix algebra. Throws for
/// rho not positive or not of unit trace.
GnsRepresentation gns(const OperatorAlgebra& a, const CMat& rho,
                      const numkit::Tolerance& tol = numkit::default_tolerance());

// ---------------------------------------------------------------------------
// Serialization: JSON manifest {ambient_dim, basis: [{"block": i}, ...]},
// matrix blocks stored back to back in CSV (numkit::write_csv format).

struct AlgebraArchive {
  nlohmann::json manifest;
  std::string csv;
};

AlgebraArchive serialize(const OperatorAlgebra& a);
OperatorAlgebra deserialize(const AlgebraArchive& archive);

}  // namespace oalab::vnalg
