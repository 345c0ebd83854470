#include "context.hpp"

#include "oalab/factors.hpp"

#include <algorithm>
#include <cmath>

namespace oalab::experiments::detail {

namespace {

// Max distance from each computed point to the expected set and back.
double set_distance(const std::vector<double>& got, const std::vector<double>& want) {
  double worst = 0;
  auto nearest = [](double v, const std::vector<double>& pool) {
    double best = std::numeric_limits<double>::infinity();
    for (double p : pool) best = std::min(best, std::abs(v - p));
    return best;
  };
  for (double v : got) worst = std::max(worst, nearest(v, want));
  for (double v : want) worst = std::max(worst, nearest(v, got));
  return worst;
}

void powers(Context& c) {
  const double lambda = c.real("lambda");
  const int nmax = c.integer("N");
  double spec_dev = 0, purity_dev = 0, sym = 0;
  bool decreasing = true, counts_ok = true;
  double prev_purity = 2.0;
  Table& tab = c.table("purity", {"N", "purity", "expected", "distinct_points"});
  nlohmann::json per_n = nlohmann::json::array();
  for (int n = 1; n <= nmax; ++n) {
    const auto a = factors::powers_approximant(lambda, n);
    const auto sig = factors::signature(a.modular, c.real("window"));
    std::vector<double> points;
    for (double l : sig.distinct) points.push_back(std::exp(l));
    std::vector<double> want;
    for (int k = -n; k <= n; ++k) want.push_back(std::pow(lambda, k));
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    spec_dev = std::max(spec_dev, set_distance(points, want));
    counts_ok = counts_ok && points.size() == want.size();
    const double expected = std::pow((1 + lambda * lambda) / ((1 + lambda) * (1 + lambda)), n);
    const double purity = sig.reduced_purity.value();
    purity_dev = std::max(purity_dev, std::abs(purity - expected));
    decreasing = decreasing && purity < prev_purity;
    prev_purity = purity;
    sym = std::max(sym, sig.symmetry_defect);
    tab.rows.push_back({double(n), purity, expected, double(points.size())});
    per_n.push_back(factors::report(a, sig));
  }
  c.data()["approximants"] = per_n;
  c.metric("max_spectrum_deviation", spec_dev);
  c.metric("max_purity_deviation", purity_dev);
  c.metric("max_log_symmetry_defect", sym);
  c.at_most_abs("spectrum_set", spec_dev, 1e-9);
  c.is_true("spectrum_point_count", counts_ok);
  c.at_most_abs("reduced_purity", purity_dev, 1e-10);
  c.is_true("purity_strictly_decreasing", decreasing);
}

void araki_woods(Context& c) {
  const double lambda = c.real("lambda"), mu = c.real("mu");
  const int nmax = c.integer("N");
  const double window = c.real("window");
  double prev_gap = std::numeric_limits<double>::infinity();
  bool non_increasing = true;
  double set_dev = 0;
  bool count_ok = true;
  Table& tab = c.table("max_gap", {"N", "max_gap", "distinct_points"});
  nlohmann::json per_n = nlohmann::json::array();
  for (int n = 1; n <= nmax; ++n) {
    const auto a = factors::araki_woods_approximant(lambda, mu, n);
    const auto sig = factors::signature(a.modular, window);
    if (n == 1) {
      const double ll = std::log(lambda), lm = std::log(mu);
      std::vector<double> want{0.0, ll, -ll, lm, -lm, ll - lm, lm - ll};
      std::sort(want.begin(), want.end());
      set_dev = set_distance(sig.distinct, want);
      count_ok = sig.distinct.size() == factors::distinct_sorted(want).size();
      c.data()["log_spectrum_n1"] = sig.distinct;
    }
    non_increasing = non_increasing && sig.max_gap <= prev_gap + 1e-12;
    prev_gap = sig.max_gap;
    tab.rows.push_back({double(n), sig.max_gap, double(sig.distinct.size())});
    per_n.push_back(factors::report(a, sig));
  }
  const double ratio = std::log(lambda) / std::log(mu);
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& r : factors::convergents(ratio, 8)) conv.push_back({{"p", r.p}, {"q", r.q}, {"error", r.error}});
  c.data()["log_ratio"] = ratio;
  c.data()["log_ratio_convergents"] = conv;
  c.data()["approximants"] = per_n;
  c.metric("n1_log_spectrum_deviation", set_dev);
  c.metric("final_max_gap", prev_gap);
  c.at_most_abs("n1_log_spectrum_set", set_dev, 1e-9);
  c.is_true("n1_point_count", count_ok);
  c.is_true("max_gap_non_increasing", non_increasing);
}

}  // namespace

void register_factors(std::vector<Entry>& out) {
  out.push_back({{"powers", "Powers approximants on M_2^{(x) N}: modular spectrum {lambda^k}, reduced purity, monotonicity",
                  {real_param("lambda", 0.5, "site parameter (lambda = 1 is the tracial state)", 1e-6, 1.0),
                   int_param("N", 4, "largest number of sites (runs N = 1..N)", 1, 5),
                   real_param("window", 1.0, "log-spectrum window for the gap report", 1e-6)}},
                 powers});
  out.push_back({{"araki-woods", "Araki-Woods approximants on M_3^{(x) N}: N = 1 log-spectrum and the max gap as N grows",
                  {real_param("lambda", 0.5, "first site parameter", 1e-6, 1.0),
                   real_param("mu", 0.3, "second site parameter", 1e-6, 1.0),
                   int_param("N", 3, "largest number of sites (runs N = 1..N)", 1, 3),
                   real_param("window", 1.0, "log-spectrum window [-w, w] for the max gap", 1e-6)}},
                 araki_woods});
}

}  // namespace oalab::experiments::detail
