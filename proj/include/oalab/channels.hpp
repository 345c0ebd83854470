#pragma once

// Kraus channels, local preparation and disentanglement on H_1 (x) H_2,
// partial-transpose entanglement tests, and the finite-dimensional rank
// obstruction to isometries W with W*W = 1, WW* = E != 1.

#include "oalab/numkit.hpp"
#include "oalab/vnalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace oalab::channels {

class Channel {
public:
  /// Throws std::invalid_argument for an empty family or mismatched shapes.
  explicit Channel(std::vector<CMat> kraus);

  const std::vector<CMat>& kraus() const { return kraus_; }
  Eigen::Index input_dim() const { return kraus_.front().cols(); }
  Eigen::Index output_dim() const { return kraus_.front().rows(); }

  /// ||sum K_i^dagger K_i - 1||.
  double trace_deficit() const;
  bool is_trace_preserving(double tol = 1e-10) const { return trace_deficit() <= tol; }

private:
  std::vector<CMat> kraus_;
};

/// sum K_i rho K_i^dagger. Throws std::invalid_argument on dimension mismatch.
CMat kraus_apply(const CMat& rho, const Channel& ch);

Channel identity_channel(Eigen::Index n);
/// {1, sx, sy, sz} / 2: every qubit input goes to 1/2.
Channel depolarizing_qubit();

/// H = H_1 (x) H_2 with H_1 = C^{da} (x) C^{db}. The inner algebra is
/// B(C^{da}) (x) 1 (strictly smaller than B(H_1) (x) 1 when db > 1, which is
/// the margin between the local algebra and the type I factor); the outer
/// algebra is 1 (x) B(H_2).
struct SplitData {
  std::size_t da = 1, db = 1, d2 = 1;
  vnalg::OperatorAlgebra inner;
  vnalg::OperatorAlgebra outer;

  std::size_t d1() const { return da * db; }
  std::size_t ambient_dim() const { return d1() * d2; }

  static SplitData standard(std::size_t d1, std::size_t d2);
  static SplitData with_margin(std::size_t da, std::size_t db, std::size_t d2);
  /// max ||[a, b]|| over basis pairs of inner x outer.
  double commutation_defect() const;
};

/// Reduced states on H_1, on the inner algebra's leg C^{da}, and on H_2.
CMat marginal_h1(const SplitData& s, const CMat& rho);
CMat marginal_inner(const SplitData& s, const CMat& rho);
CMat marginal_outer(const SplitData& s, const CMat& rho);

/// ||rho - tr_2(rho) (x) tr_1(rho)||_1.
double product_defect(const SplitData& s, const CMat& rho);

/// {|xi><e_i| (x) 1}: depends on xi only. Throws for |xi| != 1.
Channel preparation_channel(const SplitData& s, const CVec& xi);

/// |xi><xi| (x) tr_1(rho).
CMat local_prepare(const SplitData& s, const CVec& xi, const CMat& rho);

struct DisentangleResult {
  CMat output;
  Channel channel;
  bool used_purification;  // false: mixed replacement with the H_1 marginal
  double inner_deviation;  // ||inner marginal change||_1
  double outer_deviation;  // ||outer marginal change||_1
};

/// Product state with the input's marginals on the inner and outer algebras.
/// When db >= rank of the inner marginal the target is a purifying vector in
/// H_1; otherwise the Kraus family {sqrt(p_j) |u_j><e_i| (x) 1} replaces the
/// H_1 factor by the input's own H_1 marginal.
DisentangleResult disentangle(const SplitData& s, const CMat& rho);

/// Partial transpose on the second factor.
CMat partial_transpose(const CMat& rho, std::size_t d1, std::size_t d2);

struct EntanglementVerdict {
  bool entangled;
  double min_pt_eigenvalue;
};

/// Exact PPT test; refuses (std::invalid_argument) when d1 * d2 > 6.
EntanglementVerdict is_entangled(const CMat& rho, std::size_t d1, std::size_t d2, double tol = 1e-10);

/// One-way witness for any dims: a value < 0 certifies entanglement, a value
/// >= 0 decides nothing.
double pt_witness(const CMat& rho, std::size_t d1, std::size_t d2);

enum class ScanMode { HaarPure, Products, MixedGinibre };

struct GenericityResult {
  int samples = 0;
  int entangled = 0;
  double fraction = 0.0;
  double min_schmidt = 0.0;  // smallest second Schmidt coefficient seen (pure modes)
};

/// Requires samples >= 100. Each sample uses derive_seed(seed, i).
GenericityResult genericity_scan(int samples, std::uint64_t seed, ScanMode mode = ScanMode::HaarPure);

struct IsometryReport {
  Eigen::Index n = 0;
  Eigen::Index rank_e = 0;
  bool solution_exists = false;     // only for E = 1 (W = 1)
  bool impossibility_certified = false;
  int candidates_checked = 0;
  bool ranks_agree = true;          // rank(W*W) == rank(WW*) on every candidate
};

/// Throws std::invalid_argument when E is not an orthogonal projector.
IsometryReport isometry_impossibility_check(const CMat& e, numkit::Rng& rng, int candidates = 20);

}  // namespace oalab::channels
