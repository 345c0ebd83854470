#pragma once

// Free scalar field on a periodic chain with unit spacing:
// H = 1/2 sum_x [pi_x^2 + (phi_{x+1} - phi_x)^2 + m^2 phi_x^2],
// dispersion omega(k) = sqrt(m^2 + 4 sin^2(k/2)).

#include "oalab/numkit.hpp"

#include <complex>
#include <vector>

namespace oalab::lattice {

struct ChainSpec {
  int sites = 2;
  double mass = 1.0;
  /// Required for m = 0: drop the k = 0 mode instead of dividing by zero.
  bool exclude_zero_mode = false;

  /// Throws std::invalid_argument for N < 2, m < 0, or m = 0 without the zero-mode policy.
  void validate() const;
};

/// omega(2 pi j / N) for j = 0..N-1.
RVec dispersion(const ChainSpec& spec);

struct GaussianState {
  ChainSpec spec;
  RMat g_phi;  // <phi_x phi_y>
  RMat g_pi;   // <pi_x pi_y>; the phi-pi cross term vanishes in the ground state
};

GaussianState ground_state(const ChainSpec& spec);

/// Connected two-point function G_phi(0, r), for 0 <= r <= N/2.
double cluster_function(const GaussianState& s, int r);

struct DecayFit {
  double rate = 0.0;                // minus the least-squares slope of log|F|
  double expected = 0.0;            // 2 asinh(m/2)
  double relative_deviation = 0.0;
  double curvature = 0.0;           // relative slope difference between the two halves
  bool exponential = false;         // curvature below 10%
  int r_lo = 0, r_hi = 0;
};

/// Throws std::invalid_argument when the range leaves (0, N/2] or |F| drops
/// below 1e-14 inside it.
DecayFit decay_rate_fit(const GaussianState& s, int r_lo, int r_hi);

/// Symplectic eigenvalues of the covariance restricted to `region`, ascending.
RVec symplectic_eigenvalues(const GaussianState& s, const std::vector<int>& region);

/// Von Neumann entropy (nats) of the reduced state on `region`.
double reduced_entropy(const GaussianState& s, const std::vector<int>& region);

/// Entropy of a single mode with symplectic eigenvalue nu (clipped at 1/2).
double mode_entropy(double nu);

// ---------------------------------------------------------------------------
// Local differences

/// Trace norm of rho1 - rho2 (the sup over contractions in the full matrix
/// algebra of the region). Throws for mismatched truncations.
double local_difference(const CMat& rho1, const CMat& rho2);

/// Independent estimate of sup |tr((rho1 - rho2) A)| over Hermitian
/// contractions A. The sample budget is spent on random-walk proposals of the
/// form A = V diag(+-1) V^dagger, one walk per sign pattern.
double brute_force_local_difference(const CMat& rho1, const CMat& rho2, int samples, numkit::Rng& rng);

/// A pure two-mode state whose first mode carries the single-site vacuum
/// statistics (symplectic eigenvalue nu = sqrt(<phi^2><pi^2>) of one site):
/// sum_n sqrt(1 - q) q^{n/2} |n, n>, q = nbar / (nbar + 1), nbar = nu - 1/2,
/// truncated at `cutoff` quanta per mode and renormalized. Index n * (c+1) + n'.
CVec site_partner_state(const GaussianState& s, int cutoff);

// ---------------------------------------------------------------------------
// Causality probe

/// Smooth bump supported on sites [lo, hi], unit norm.
CVec packet(int sites, int lo, int hi);

/// <chi, exp(-i h t) psi> with h the one-particle energy F diag(omega) F^dagger.
std::complex<double> causality_amplitude(const ChainSpec& spec, const CVec& chi, const CVec& psi, double t);

struct ProbeResult {
  std::vector<double> times;
  std::vector<double> amplitudes;  // |A(t)|
  double at_zero = 0.0;
  double max_amplitude = 0.0;
  double floor = 1e-14;
  bool not_identically_zero = false;  // max over t > 0 exceeds 10 x floor
};

/// Packets on [in_lo, in_hi] and [out_lo, out_hi]; throws for overlapping supports.
ProbeResult causality_probe(const ChainSpec& spec, int in_lo, int in_hi, int out_lo, int out_hi,
                            const std::vector<double>& times);

}  // namespace oalab::lattice
