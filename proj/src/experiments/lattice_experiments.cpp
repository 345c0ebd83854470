#include "context.hpp"

#include "oalab/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace oalab::experiments::detail {

namespace {

lattice::ChainSpec chain(const Context& c) {
  lattice::ChainSpec spec{c.integer("sites"), c.real("m"), c.flag("exclude_zero_mode")};
  spec.validate();
  return spec;
}

void cluster_decay(Context& c) {
  const auto spec = chain(c);
  const auto gs = lattice::ground_state(spec);
  const double expected = 2.0 * std::asinh(spec.mass / 2.0);
  int r_hi = c.integer("r_hi");
  if (r_hi < 0) {
    // Stop where |F| is still ~e^{-24}, well above the 1e-14 floor.
    r_hi = expected > 0.0 ? static_cast<int>(std::floor(24.0 / expected)) : spec.sites / 2;
    r_hi = std::min(r_hi, spec.sites / 2);
  }
  const auto fit = lattice::decay_rate_fit(gs, c.integer("r_lo"), r_hi);
  const int r_probe = c.integer("r_probe");
  const double f_probe = std::abs(lattice::cluster_function(gs, r_probe));

  Table& tab = c.table("cluster_function", {"r", "F"});
  for (int r = 0; r <= spec.sites / 2; ++r) tab.rows.push_back({double(r), lattice::cluster_function(gs, r)});
  c.metric("fitted_rate", fit.rate);
  c.metric("expected_rate", fit.expected);
  c.metric("relative_deviation", fit.relative_deviation);
  c.metric("curvature", fit.curvature);
  c.metric("fit_r_lo", fit.r_lo);
  c.metric("fit_r_hi", fit.r_hi);
  c.metric("abs_F_at_probe", f_probe);
  c.at_most("rate_within_relative", fit.relative_deviation, c.real("rate_tolerance"));
  c.is_true("log_linear", fit.exponential);
  c.at_most("F_at_probe_below_bound", f_probe, c.real("probe_bound"));
}

void entropy_scan(Context& c) {
  const auto spec = chain(c);
  const auto gs = lattice::ground_state(spec);
  const int max_len = std::min(c.integer("max_len"), spec.sites - 1);
  Table& tab = c.table("entropy", {"length", "entropy", "complement_entropy"});
  double min_nu = std::numeric_limits<double>::infinity(), min_s = std::numeric_limits<double>::infinity();
  double sym = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<int> region, rest;
    for (int x = 0; x < spec.sites; ++x) (x < len ? region : rest).push_back(x);
    const RVec nu = lattice::symplectic_eigenvalues(gs, region);
    min_nu = std::min(min_nu, nu.minCoeff());
    double s = 0;
    for (Eigen::Index i = 0; i < nu.size(); ++i) s += lattice::mode_entropy(nu(i));
    const double sc = lattice::reduced_entropy(gs, rest);
    min_s = std::min(min_s, s);
    sym = std::max(sym, std::abs(s - sc));
    tab.rows.push_back({double(len), s, sc});
  }
  c.metric("min_symplectic_eigenvalue", min_nu);
  c.metric("min_entropy", min_s);
  c.metric("complement_asymmetry", sym);
  c.at_least("uncertainty_bound", min_nu, 0.5 - 1e-10);
  c.greater_than("region_entangled", min_s, 0.0);
  // Pure global state: S(A) = S(complement), up to the dropped zero mode.
  if (!spec.exclude_zero_mode) c.at_most_abs("entropy_complement_symmetry", sym, 1e-8);
}

void local_difference(Context& c) {
  const int dim = c.integer("dim"), samples = c.integer("samples");
  double worst_ratio = std::numeric_limits<double>::infinity(), best_ratio = 0;
  Table& tab = c.table("trials", {"trace_norm", "brute_force", "ratio"});
  for (int t = 0; t < c.integer("trials"); ++t) {
    auto rng = c.rng(static_cast<std::uint64_t>(t));
    const CMat r1 = numkit::random_density(rng, dim), r2 = numkit::random_density(rng, dim);
    const double exact = lattice::local_difference(r1, r2);
    const double brute = lattice::brute_force_local_difference(r1, r2, samples, rng);
    const double ratio = brute / exact;
    worst_ratio = std::min(worst_ratio, ratio);
    best_ratio = std::max(best_ratio, ratio);
    tab.rows.push_back({exact, brute, ratio});
  }
  c.metric("min_brute_force_ratio", worst_ratio);
  c.metric("max_brute_force_ratio", best_ratio);
  c.at_least("brute_force_matches_trace_norm", worst_ratio, 1.0 - c.real("match_tolerance"));
  // The sampled sup can never exceed the true sup.
  c.at_most("brute_force_not_above_sup", best_ratio, 1.0 + 1e-9);

  // Outside operations: a unitary on the partner mode leaves the site's state alone.
  lattice::ChainSpec spec{c.integer("sites"), c.real("m"), false};
  spec.validate();
  const auto gs = lattice::ground_state(spec);
  const int cutoff = c.integer("cutoff");
  const CVec psi = lattice::site_partner_state(gs, cutoff);
  const std::size_t q = static_cast<std::size_t>(cutoff + 1);
  const std::vector<std::size_t> dims{q, q};
  const std::vector<bool> keep{true, false};
  auto region = [&](const CVec& v) { return numkit::partial_trace(CMat(v * v.adjoint()), dims, keep); };
  CVec ref = CVec::Zero(psi.size());
  ref(0) = 1.0;  // both modes empty
  const CMat rho_ref = region(ref);
  const double base = lattice::local_difference(region(psi), rho_ref);
  auto rng = c.rng(1000);
  double shift = 0;
  for (int t = 0; t < c.integer("trials"); ++t) {
    const CMat u = numkit::kron(CMat::Identity(q, q), numkit::haar_unitary(rng, static_cast<Eigen::Index>(q)));
    const CVec moved = u * psi;
    shift = std::max(shift, std::abs(lattice::local_difference(region(moved), rho_ref) - base));
  }
  c.metric("site_local_difference", base);
  c.metric("outside_operation_shift", shift);
  c.at_most_abs("outside_operation_invisible", shift, 1e-12);
}

void causality_probe(Context& c) {
  lattice::ChainSpec spec{c.integer("sites"), c.real("m"), false};
  spec.validate();
  const int width = c.integer("width"), gap = c.integer("gap");
  const int steps = c.integer("steps");
  const double t_max = c.real("t_max"), t_check = c.real("t_check");
  std::vector<double> times;
  for (int i = 0; i <= steps; ++i) times.push_back(t_max * i / steps);
  if (std::find(times.begin(), times.end(), t_check) == times.end()) {
    times.push_back(t_check);
    std::sort(times.begin(), times.end());
  }

  // Several placements along the chain, plus one with the roles swapped.
  std::vector<std::array<int, 4>> pairs;
  for (int lo : {0, spec.sites / 4, spec.sites / 2}) {
    const int in_hi = lo + width - 1, out_lo = in_hi + 1 + gap, out_hi = out_lo + width - 1;
    if (out_hi < spec.sites) pairs.push_back({lo, in_hi, out_lo, out_hi});
  }
  if (!pairs.empty()) {
    const auto p = pairs.front();
    pairs.push_back({p[2], p[3], p[0], p[1]});
  }
  if (pairs.empty()) throw std::invalid_argument("causality-probe: chain too short for width and gap");

  double max_zero = 0, min_check = std::numeric_limits<double>::infinity(), min_max = min_check;
  bool nonzero = true;
  Table& tab = c.table("probe_series", {"pair", "t", "abs_amplitude"});
  nlohmann::json placements = nlohmann::json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const auto res = lattice::causality_probe(spec, p[0], p[1], p[2], p[3], times);
    max_zero = std::max(max_zero, res.at_zero);
    const auto it = std::find(times.begin(), times.end(), t_check);
    const double at_check = res.amplitudes[static_cast<std::size_t>(it - times.begin())];
    min_check = std::min(min_check, at_check);
    min_max = std::min(min_max, res.max_amplitude);
    nonzero = nonzero && res.not_identically_zero;
    for (std::size_t k = 0; k < times.size(); ++k) tab.rows.push_back({double(i), times[k], res.amplitudes[k]});
    placements.push_back({{"in", {p[0], p[1]}}, {"out", {p[2], p[3]}}, {"at_zero", res.at_zero},
                          {"at_check", at_check}, {"max_amplitude", res.max_amplitude}});
  }
  c.data()["pairs"] = placements;
  c.metric("max_abs_amplitude_t0", max_zero);
  c.metric("min_abs_amplitude_at_check", min_check);
  c.metric("min_max_amplitude", min_max);
  c.at_most("zero_at_t0", max_zero, 1e-14);
  c.greater_than("positive_at_check_time", min_check, 1e-8);
  c.is_true("not_identically_zero", nonzero);
}

}  // namespace

void register_lattice(std::vector<Entry>& out) {
  const auto sites = [](int def) { return int_param("sites", def, "chain length N (periodic)", 2, 100000); };
  const auto mass = [](double def) { return real_param("m", def, "mass", 0.0); };
  const auto zero = bool_param("exclude_zero_mode", false, "drop the k = 0 mode (required for m = 0)");
  out.push_back({{"cluster-decay", "Vacuum two-point function on the chain: fitted decay rate against 2 asinh(m/2)",
                  {mass(1.0), sites(400), zero, int_param("r_lo", 10, "first fitted separation", 1),
                   int_param("r_hi", -1, "last fitted separation (-1: automatic, where |F| ~ e^-24)", -1),
                   real_param("rate_tolerance", 0.10, "allowed relative deviation of the rate", 0.0),
                   int_param("r_probe", 40, "separation of the |F| bound check", 0),
                   real_param("probe_bound", 1e-6, "bound on |F(r_probe)|", 0.0)}},
                 cluster_decay});
  out.push_back({{"entropy-scan", "Entanglement entropy of intervals from symplectic eigenvalues",
                  {mass(1.0), sites(64), zero, int_param("max_len", 16, "longest interval", 1)}},
                 entropy_scan});
  out.push_back({{"local-difference",
                  "Trace-norm local difference against a brute-force contraction search; outside operations",
                  {int_param("dim", 4, "dimension of the region's matrix algebra", 2, 16),
                   int_param("samples", 10000, "random contractions per trial", 100),
                   int_param("trials", 5, "state pairs / outside unitaries", 1, 1000),
                   real_param("match_tolerance", 0.02, "allowed relative shortfall of the search", 0.0, 1.0),
                   mass(1.0), sites(64), int_param("cutoff", 4, "quanta per mode for the site-partner state", 1, 12)}},
                 local_difference});
  out.push_back({{"causality-probe", "Overlap <chi, e^{-iht} psi> of disjoint packets on the chain",
                  {mass(1.0), sites(256), int_param("width", 8, "packet width in sites", 1),
                   int_param("gap", 4, "empty sites between the packets", 1), real_param("t_max", 3.0, "end of the time grid", 0.0),
                   int_param("steps", 60, "time grid intervals", 1, 100000),
                   real_param("t_check", 0.5, "time at which positivity is asserted", 0.0)}},
                 causality_probe});
}

}  // namespace oalab::experiments::detail
