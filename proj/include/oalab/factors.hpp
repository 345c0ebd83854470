#pragma once

// Finite tensor powers of M_2 (Powers) and M_3 (Araki-Woods) in product
// states, with spectral signatures of their modular operators.
//
// Each site lives on the doubled space C^d (x) C^d with the algebra acting on
// the first leg, so the global space is (C^d (x) C^d)^{(x) N}.

#include "oalab/modular.hpp"
#include "oalab/vnalg.hpp"

#include "json.hpp"

#include <optional>
#include <vector>

namespace oalab::factors {

inline constexpr std::size_t kDefaultDimensionCap = 4096;

enum class Kind { Powers, ArakiWoods };

struct ApproximantSpec {
  Kind kind = Kind::Powers;
  double lambda = 0.5;
  double mu = 0.3;  // Araki-Woods only
  int n = 1;
  std::size_t cap = kDefaultDimensionCap;

  std::size_t site_dim() const { return kind == Kind::Powers ? 2 : 3; }
  std::size_t ambient_dim() const;
  /// Throws std::invalid_argument for parameters out of range or above the cap.
  void validate() const;
};

struct Approximant {
  ApproximantSpec spec;
  vnalg::OperatorAlgebra algebra;
  CVec omega;
  modular::ModularData modular;
  RVec site_weights;                // spectrum of the single-site state, descending
  std::vector<std::size_t> legs;    // 2N legs of dimension site_dim
  std::vector<bool> acting;         // true on the algebra's legs
};

/// diag(1, lambda)/(1 + lambda) or diag(1, lambda, mu)/(1 + lambda + mu).
RVec site_weights(const ApproximantSpec& spec);

/// The modular data of the product is assembled from the per-site data
/// (S, J and Delta are tensor products). Lambda = 1 gives the tracial state.
Approximant build(const ApproximantSpec& spec);
Approximant powers_approximant(double lambda, int n, std::size_t cap = kDefaultDimensionCap);
Approximant araki_woods_approximant(double lambda, double mu, int n, std::size_t cap = kDefaultDimensionCap);

/// Tensor product of modular data on H_1 (x) H_2.
modular::ModularData tensor(const modular::ModularData& a, const modular::ModularData& b);

struct SpectrumSignature {
  std::vector<double> log_spectrum;  // sorted multiset
  std::vector<double> distinct;      // distinct points of the log-spectrum
  double window = 1.0;
  double max_gap = 0.0;              // in [-window, window], endpoints included
  std::optional<double> reduced_purity;
  double symmetry_defect = 0.0;      // max |l_i + l_{n-1-i}|
};

/// Purity is available for subsystem-layout algebras (partial trace over the
/// legs the algebra does not act on).
SpectrumSignature signature(const modular::ModularData& md, double window);

/// Distinct values of a sorted list, merging neighbours closer than tol.
std::vector<double> distinct_sorted(const std::vector<double>& sorted, double tol = 1e-9);

/// Largest gap between consecutive points of `points` inside [-w, w], with
/// -w and w themselves counted as points.
double max_gap_in_window(const std::vector<double>& points, double w);

/// tr(rho^2) for the restriction of |omega><omega| to the acting legs.
double reduced_purity(const CVec& omega, const std::vector<std::size_t>& legs, const std::vector<bool>& acting);

struct RationalApprox {
  long long p = 0;
  long long q = 1;
  double error = 0.0;  // |x - p/q|
};
/// Continued-fraction convergents of x.
std::vector<RationalApprox> convergents(double x, int terms);

/// {kind, lambda, mu, N, log_spectrum, max_gap, purity}.
nlohmann::json report(const Approximant& a, const SpectrumSignature& sig);

}  // namespace oalab::factors
