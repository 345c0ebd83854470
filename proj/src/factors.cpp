#include "oalab/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oalab::factors {

std::size_t ApproximantSpec::ambient_dim() const {
  const std::size_t site = site_dim() * site_dim();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > cap) break;  // avoid overflow; validate() reports the cap
    total *= site;
  }
  return total;
}

void ApproximantSpec::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("approximant: lambda must lie in (0, 1]");
  if (kind == Kind::ArakiWoods && !(mu > 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("approximant: mu must lie in (0, 1]");
  }
  if (n < 1) throw std::invalid_argument("approximant: N must be at least 1");
  if (ambient_dim() > cap) {
    throw std::invalid_argument("approximant: ambient dimension exceeds cap " + std::to_string(cap));
  }
}

RVec site_weights(const ApproximantSpec& spec) {
  RVec w(spec.site_dim());
  if (spec.kind == Kind::Powers) {
    w << 1.0, spec.lambda;
  } else {
    w << 1.0, spec.lambda, spec.mu;
  }
  return w / w.sum();
}

modular::ModularData tensor(const modular::ModularData& a, const modular::ModularData& b) {
  using numkit::kron;
  const RVec& va = a.delta_eig.values;
  const RVec& vb = b.delta_eig.values;
  const Eigen::Index n = va.size() * vb.size();
  RVec vals(n);
  for (Eigen::Index i = 0; i < va.size(); ++i)
    for (Eigen::Index j = 0; j < vb.size(); ++j) vals(i * vb.size() + j) = va(i) * vb(j);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return vals(x) < vals(y); });
  const CMat vecs = kron(a.delta_eig.vectors, b.delta_eig.vectors);

  numkit::HermitianEigen eig{RVec(n), CMat(n, n)};
  for (Eigen::Index c = 0; c < n; ++c) {
    eig.values(c) = vals(order[c]);
    eig.vectors.col(c) = vecs.col(order[c]);
  }
  return modular::ModularData{numkit::AntilinearMap(kron(a.s.matrix(), b.s.matrix())),
                              kron(a.delta, b.delta),
                              std::move(eig),
                              numkit::AntilinearMap(kron(a.j.matrix(), b.j.matrix())),
                              vnalg::tensor(a.algebra, b.algebra),
                              kron(a.omega, b.omega),
                              std::max(a.consistency_residual, b.consistency_residual)};
}

Approximant build(const ApproximantSpec& spec) {
  spec.validate();
  const std::size_t d = spec.site_dim();
  const RVec w = site_weights(spec);
  const CMat rho = w.cast<Complex>().asDiagonal();
  const CVec psi = modular::purify(rho, d);
  const auto site = modular::tomita(vnalg::OperatorAlgebra::left_factor(d, d), psi);

  modular::ModularData md = site;
  for (int i = 1; i < spec.n; ++i) md = tensor(md, site);

  std::vector<std::size_t> legs(2 * static_cast<std::size_t>(spec.n), d);
  std::vector<bool> acting(legs.size());
  for (std::size_t l = 0; l < legs.size(); ++l) acting[l] = (l % 2 == 0);
  RVec sorted = w;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  return Approximant{spec, md.algebra, md.omega, md, sorted, legs, acting};
}

Approximant powers_approximant(double lambda, int n, std::size_t cap) {
  return build({Kind::Powers, lambda, 0.0, n, cap});
}

Approximant araki_woods_approximant(double lambda, double mu, int n, std::size_t cap) {
  return build({Kind::ArakiWoods, lambda, mu, n, cap});
}

std::vector<double> distinct_sorted(const std::vector<double>& sorted, double tol) {
  std::vector<double> out;
  for (double v : sorted) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return out;
}

double max_gap_in_window(const std::vector<double>& points, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("max_gap_in_window: window must be positive");
  std::vector<double> in{-w, w};
  for (double p : points) if (p > -w && p < w) in.push_back(p);
  std::sort(in.begin(), in.end());
  double gap = 0.0;
  for (std::size_t i = 1; i < in.size(); ++i) gap = std::max(gap, in[i] - in[i - 1]);
  return gap;
}

double reduced_purity(const CVec& omega, const std::vector<std::size_t>& legs, const std::vector<bool>& acting) {
  std::size_t ds = 1, dr = 1;
  for (std::size_t l = 0; l < legs.size(); ++l) (acting[l] ? ds : dr) *= legs[l];
  if (static_cast<std::size_t>(omega.size()) != ds * dr) throw std::invalid_argument("reduced_purity: dimension mismatch");
  const CVec g = numkit::permute_vector(omega, numkit::grouping_permutation(legs, acting));
  // Grouped index s * dr + q, so the row-major reshape is psi(s, q).
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi(
      g.data(), static_cast<Eigen::Index>(ds), static_cast<Eigen::Index>(dr));
  const CMat rho = psi * psi.adjoint();
  return (rho * rho).trace().real();
}

SpectrumSignature signature(const modular::ModularData& md, double window) {
  SpectrumSignature sig;
  sig.window = window;
  const RVec& spec = md.spectrum();
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (!(spec(i) > 0.0)) throw std::domain_error("signature: modular spectrum must be positive");
    sig.log_spectrum.push_back(std::log(spec(i)));
  }
  std::sort(sig.log_spectrum.begin(), sig.log_spectrum.end());
  const std::size_t n = sig.log_spectrum.size();
  for (std::size_t i = 0; i < n; ++i) {
    sig.symmetry_defect = std::max(sig.symmetry_defect, std::abs(sig.log_spectrum[i] + sig.log_spectrum[n - 1 - i]));
  }
  sig.distinct = distinct_sorted(sig.log_spectrum);
  sig.max_gap = max_gap_in_window(sig.distinct, window);
  if (const auto& lay = md.algebra.layout()) sig.reduced_purity = reduced_purity(md.omega, lay->legs, lay->acting);
  return sig;
}

std::vector<RationalApprox> convergents(double x, int terms) {
  std::vector<RationalApprox> out;
  long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // h_{-1}, h_{-2}, k_{-1}, k_{-2}
  double r = x;
  for (int i = 0; i < terms; ++i) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e12) break;
    const auto ai = static_cast<long long>(a);
    const long long h = ai * h0 + h1, k = ai * k0 + k1;
    h1 = h0; h0 = h;
    k1 = k0; k0 = k;
    out.push_back({h, k, std::abs(x - static_cast<double>(h) / static_cast<double>(k))});
    const double frac = r - a;
    if (frac < 1e-14) break;
    r = 1.0 / frac;
  }
  return out;
}

nlohmann::json report(const Approximant& a, const SpectrumSignature& sig) {
  nlohmann::json j{{"kind", a.spec.kind == Kind::Powers ? "powers" : "araki-woods"},
                   {"lambda", a.spec.lambda},
                   {"N", a.spec.n},
                   {"log_spectrum", sig.distinct},
                   {"max_gap", sig.max_gap}};
  j["mu"] = a.spec.kind == Kind::ArakiWoods ? nlohmann::json(a.spec.mu) : nlohmann::json(nullptr);
  j["purity"] = sig.reduced_purity ? nlohmann::json(*sig.reduced_purity) : nlohmann::json(nullptr);
  return j;
}

}  // namespace oalab::factors
