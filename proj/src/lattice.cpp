#include "oalab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oalab::lattice {

using std::numbers::pi;

void ChainSpec::validate() const {
  if (sites < 2) throw std::invalid_argument("chain: need at least 2 sites");
  if (!(mass >= 0.0)) throw std::invalid_argument("chain: mass must be non-negative");
  if (mass == 0.0 && !exclude_zero_mode) {
    throw std::invalid_argument("chain: m = 0 needs the zero-mode policy (exclude_zero_mode)");
  }
}

RVec dispersion(const ChainSpec& spec) {
  spec.validate();
  RVec w(spec.sites);
  for (int j = 0; j < spec.sites; ++j) {
    const double s = std::sin(pi * j / spec.sites);
    w(j) = std::sqrt(spec.mass * spec.mass + 4.0 * s * s);
  }
  return w;
}

GaussianState ground_state(const ChainSpec& spec) {
  const RVec w = dispersion(spec);
  const int n = spec.sites;
  RVec cphi = RVec::Zero(n), cpi = RVec::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (j == 0 && spec.exclude_zero_mode) continue;
    const double k = 2.0 * pi * j / n;
    for (int r = 0; r < n; ++r) {
      const double c = std::cos(k * r);
      cphi(r) += c / (2.0 * w(j));
      cpi(r) += c * w(j) / 2.0;
    }
  }
  cphi /= n;
  cpi /= n;
  GaussianState s{spec, RMat(n, n), RMat(n, n)};
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int r = ((y - x) % n + n) % n;
      s.g_phi(x, y) = cphi(r);
      s.g_pi(x, y) = cpi(r);
    }
  }
  return s;
}

double cluster_function(const GaussianState& s, int r) {
  if (r < 0 || r > s.spec.sites / 2) throw std::invalid_argument("cluster_function: separation outside [0, N/2]");
  return s.g_phi(0, r);
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

DecayFit decay_rate_fit(const GaussianState& s, int r_lo, int r_hi) {
  if (r_lo < 1 || r_hi > s.spec.sites / 2 || r_hi - r_lo < 4) {
    throw std::invalid_argument("decay_rate_fit: fit range must lie in (0, N/2] and span at least 5 points");
  }
  std::vector<double> r, y;
  for (int d = r_lo; d <= r_hi; ++d) {
    const double f = std::abs(cluster_function(s, d));
    if (f < 1e-14) throw std::invalid_argument("decay_rate_fit: |F| hits the numerical floor at r = " + std::to_string(d));
    r.push_back(d);
    y.push_back(std::log(f));
  }
  DecayFit fit;
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;
  fit.rate = -ls_slope(r, y);
  fit.expected = 2.0 * std::asinh(s.spec.mass / 2.0);
  fit.relative_deviation = fit.expected > 0.0 ? std::abs(fit.rate - fit.expected) / fit.expected
                                              : std::numeric_limits<double>::infinity();
  const std::size_t mid = r.size() / 2;
  const std::vector<double> r1(r.begin(), r.begin() + mid + 1), y1(y.begin(), y.begin() + mid + 1);
  const std::vector<double> r2(r.begin() + mid, r.end()), y2(y.begin() + mid, y.end());
  const double s1 = ls_slope(r1, y1), s2 = ls_slope(r2, y2);
  fit.curvature = std::abs(s1 - s2) / std::max(std::abs(fit.rate), 1e-300);
  fit.exponential = fit.curvature < 0.1;
  return fit;
}

RVec symplectic_eigenvalues(const GaussianState& s, const std::vector<int>& region) {
  if (region.empty()) throw std::invalid_argument("symplectic_eigenvalues: empty region");
  const auto n = static_cast<Eigen::Index>(region.size());
  RMat x(n, n), p(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const int ia = region[a], ib = region[b];
      if (ia < 0 || ia >= s.spec.sites || ib < 0 || ib >= s.spec.sites) {
        throw std::invalid_argument("symplectic_eigenvalues: site outside the chain");
      }
      x(a, b) = s.g_phi(ia, ib);
      p(a, b) = s.g_pi(ia, ib);
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> xs(x);
  if (xs.eigenvalues().minCoeff() <= 0.0) throw std::domain_error("symplectic_eigenvalues: field covariance not positive");
  const RMat root = xs.eigenvectors() * xs.eigenvalues().cwiseSqrt().asDiagonal() * xs.eigenvectors().transpose();
  Eigen::SelfAdjointEigenSolver<RMat> ms(root * p * root, Eigen::EigenvaluesOnly);
  return ms.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

double mode_entropy(double nu) {
  const double v = std::max(nu, 0.5);
  const double plus = v + 0.5, minus = v - 0.5;
  return plus * std::log(plus) - (minus > 0.0 ? minus * std::log(minus) : 0.0);
}

double reduced_entropy(const GaussianState& s, const std::vector<int>& region) {
  const RVec nu = symplectic_eigenvalues(s, region);
  double out = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) out += mode_entropy(nu(i));
  return out;
}

// ---------------------------------------------------------------------------

double local_difference(const CMat& rho1, const CMat& rho2) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols() || rho1.rows() != rho1.cols()) {
    throw std::invalid_argument("local_difference: region states use different truncations");
  }
  return numkit::trace_norm(rho1 - rho2);
}

double brute_force_local_difference(const CMat& rho1, const CMat& rho2, int samples, numkit::Rng& rng) {
  if (rho1.rows() != rho2.rows()) throw std::invalid_argument("brute_force_local_difference: dimension mismatch");
  const Eigen::Index d = rho1.rows();
  const CMat diff = rho1 - rho2;
  const int per_pattern = std::max(1, samples / static_cast<int>(d + 1));
  double best = 0.0;
  for (Eigen::Index plus = 0; plus <= d; ++plus) {
    RVec signs = -RVec::Ones(d);
    signs.head(plus).setOnes();
    const CMat s = signs.cast<Complex>().asDiagonal();
    auto value = [&](const CMat& v) { return std::abs((diff * v * s * v.adjoint()).trace()); };
    CMat v = numkit::haar_unitary(rng, d);
    double cur = value(v);
    double step = 0.5;
    for (int i = 1; i < per_pattern; ++i) {
      const CMat kick = numkit::herm_fn(numkit::random_hermitian(rng, d), numkit::SpectralFn::phase(step));
      const CMat w = kick * v;
      const double val = value(w);
      if (val > cur) {
        v = w;
        cur = val;
        step *= 1.5;
      } else {
        step = std::max(step * 0.95, 1e-6);
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

CVec site_partner_state(const GaussianState& s, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("site_partner_state: cutoff must be >= 1");
  const double nu = std::sqrt(s.g_phi(0, 0) * s.g_pi(0, 0));
  const double nbar = std::max(nu - 0.5, 0.0);
  const double q = nbar / (nbar + 1.0);
  const Eigen::Index c = cutoff + 1;
  CVec psi = CVec::Zero(c * c);
  for (Eigen::Index n = 0; n < c; ++n) psi(n * c + n) = std::sqrt(1.0 - q) * std::pow(q, 0.5 * static_cast<double>(n));
  return psi / psi.norm();
}

// ---------------------------------------------------------------------------

CVec packet(int sites, int lo, int hi) {
  if (lo < 0 || hi >= sites || lo > hi) throw std::invalid_argument("packet: support outside the chain");
  CVec v = CVec::Zero(sites);
  const int len = hi - lo + 1;
  for (int j = 0; j < len; ++j) {
    const double s = std::sin(pi * (j + 1) / (len + 1));
    v(lo + j) = s * s;
  }
  return v / v.norm();
}

namespace {

CVec to_modes(const CVec& v) {
  const auto n = v.size();
  CVec out = CVec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double k = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    for (Eigen::Index x = 0; x < n; ++x) {
      if (v(x) != 0.0) out(j) += std::polar(1.0, -k * static_cast<double>(x)) * v(x);
    }
  }
  return out / std::sqrt(static_cast<double>(n));
}

std::complex<double> amplitude_from_modes(const RVec& w, const CVec& chi_hat, const CVec& psi_hat, double t) {
  Complex acc{};
  for (Eigen::Index j = 0; j < w.size(); ++j) acc += std::conj(chi_hat(j)) * std::polar(1.0, -w(j) * t) * psi_hat(j);
  return acc;
}

}  // namespace

std::complex<double> causality_amplitude(const ChainSpec& spec, const CVec& chi, const CVec& psi, double t) {
  if (chi.size() != spec.sites || psi.size() != spec.sites) throw std::invalid_argument("causality_amplitude: wrong dimension");
  return amplitude_from_modes(dispersion(spec), to_modes(chi), to_modes(psi), t);
}

ProbeResult causality_probe(const ChainSpec& spec, int in_lo, int in_hi, int out_lo, int out_hi,
                            const std::vector<double>& times) {
  if (!(in_hi < out_lo || out_hi < in_lo)) throw std::invalid_argument("causality_probe: supports overlap");
  const RVec w = dispersion(spec);
  const CVec psi_hat = to_modes(packet(spec.sites, in_lo, in_hi));
  const CVec chi_hat = to_modes(packet(spec.sites, out_lo, out_hi));
  ProbeResult res;
  res.times = times;
  res.at_zero = std::abs(amplitude_from_modes(w, chi_hat, psi_hat, 0.0));
  for (double t : times) {
    const double a = std::abs(amplitude_from_modes(w, chi_hat, psi_hat, t));
    res.amplitudes.push_back(a);
    if (t > 0.0) res.max_amplitude = std::max(res.max_amplitude, a);
  }
  res.not_identically_zero = res.max_amplitude > 10.0 * res.floor;
  return res;
}

}  // namespace oalab::lattice
