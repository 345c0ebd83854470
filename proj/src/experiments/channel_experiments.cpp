#include "context.hpp"

#include "oalab/channels.hpp"
#include "oalab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace oalab::experiments::detail {

namespace {

bool same_bytes(const channels::Channel& a, const channels::Channel& b) {
  if (a.kraus().size() != b.kraus().size()) return false;
  for (std::size_t i = 0; i < a.kraus().size(); ++i) {
    const CMat& x = a.kraus()[i];
    const CMat& y = b.kraus()[i];
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if (std::memcmp(x.data(), y.data(), sizeof(Complex) * static_cast<std::size_t>(x.size())) != 0) return false;
  }
  return true;
}

CMat random_projector(numkit::Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const CMat u = numkit::haar_unitary(rng, n);
  return u.leftCols(rank) * u.leftCols(rank).adjoint();
}

void local_prepare(Context& c) {
  const auto s = channels::SplitData::with_margin(static_cast<std::size_t>(c.integer("da")),
                                                  static_cast<std::size_t>(c.integer("db")),
                                                  static_cast<std::size_t>(c.integer("d2")));
  auto rng = c.rng(0);
  const CVec xi = numkit::random_unit_vector(rng, static_cast<Eigen::Index>(s.d1()));
  const CMat target_h1 = xi * xi.adjoint();
  const std::vector<std::size_t> h1dims{s.da, s.db};
  const CMat target_inner = numkit::partial_trace(target_h1, h1dims, {true, false});
  const auto reference = channels::preparation_channel(s, xi);

  double product = 0, inner = 0, outer = 0, h1 = 0;
  bool independent = true;
  for (int i = 0; i < c.integer("inputs"); ++i) {
    auto r = c.rng(static_cast<std::uint64_t>(i + 1));
    const CMat rho = numkit::random_density(r, static_cast<Eigen::Index>(s.ambient_dim()));
    const auto ch = channels::preparation_channel(s, xi);
    independent = independent && same_bytes(ch, reference);
    const CMat out = channels::kraus_apply(rho, ch);
    product = std::max(product, channels::product_defect(s, out));
    inner = std::max(inner, numkit::trace_norm(channels::marginal_inner(s, out) - target_inner));
    h1 = std::max(h1, numkit::trace_norm(channels::marginal_h1(s, out) - target_h1));
    outer = std::max(outer, numkit::trace_norm(channels::marginal_outer(s, out) - channels::marginal_outer(s, rho)));
  }
  c.metric("ambient_dim", static_cast<double>(s.ambient_dim()));
  c.metric("trace_deficit", reference.trace_deficit());
  c.metric("split_commutation_defect", s.commutation_defect());
  c.metric("product_defect", product);
  c.metric("inner_marginal_deviation", inner);
  c.metric("h1_marginal_deviation", h1);
  c.metric("outer_marginal_deviation", outer);
  c.at_most_abs("trace_preserving", reference.trace_deficit(), 1e-12);
  c.at_most_abs("output_product", product, 1e-12);
  c.at_most_abs("inner_marginal_is_target", inner, 1e-12);
  c.at_most_abs("outer_marginal_unchanged", outer, 1e-12);
  c.is_true("kraus_family_input_independent", independent);

  // Rank obstruction for isometries onto proper projectors.
  bool all_certified = true;
  int tested = 0;
  auto prng = c.rng(5000);
  for (Eigen::Index n = 2; n <= c.integer("max_projector_dim"); ++n) {
    for (Eigen::Index rank = 0; rank < n; ++rank) {
      const CMat e = random_projector(prng, n, rank);
      const auto rep = channels::isometry_impossibility_check(e, prng);
      all_certified = all_certified && rep.impossibility_certified && !rep.solution_exists;
      ++tested;
    }
  }
  const auto identity = channels::isometry_impossibility_check(CMat::Identity(3, 3), prng);
  c.metric("projectors_tested", tested);
  c.is_true("isometry_obstruction_certified", all_certified);
  c.is_true("identity_control_solvable", identity.solution_exists && !identity.impossibility_certified);
}

CMat bell_state() {
  CVec v = CVec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

void disentangle(Context& c) {
  const std::string which = c.choice("state");
  CMat rho;
  channels::SplitData s = channels::SplitData::standard(2, 2);
  if (which == "bell") {
    rho = bell_state();
  } else if (which == "gaussian-pair") {
    lattice::ChainSpec spec{c.integer("sites"), c.real("m"), false};
    spec.validate();
    const CVec psi = lattice::site_partner_state(lattice::ground_state(spec), c.integer("cutoff"));
    const auto q = static_cast<std::size_t>(c.integer("cutoff") + 1);
    s = channels::SplitData::standard(q, q);
    rho = psi * psi.adjoint();
  } else {
    auto rng = c.rng(0);
    s = channels::SplitData::with_margin(2, 2, 2);
    const CVec v = numkit::random_unit_vector(rng, 8);
    rho = v * v.adjoint();
  }
  const std::size_t d1 = s.d1(), d2 = s.d2;
  const double before = channels::pt_witness(rho, d1, d2);
  const auto res = channels::disentangle(s, rho);
  const double after = channels::pt_witness(res.output, d1, d2);

  c.data()["state"] = which;
  c.data()["used_purification"] = res.used_purification;
  c.metric("pt_min_eigenvalue_before", before);
  c.metric("pt_min_eigenvalue_after", after);
  c.metric("inner_marginal_deviation", res.inner_deviation);
  c.metric("outer_marginal_deviation", res.outer_deviation);
  c.metric("trace_deficit", res.channel.trace_deficit());
  c.at_most_abs("inner_marginal_preserved", res.inner_deviation, 1e-10);
  c.at_most_abs("outer_marginal_preserved", res.outer_deviation, 1e-10);
  c.at_most_abs("output_product", channels::product_defect(s, res.output), 1e-10);
  c.at_most_abs("trace_preserving", res.channel.trace_deficit(), 1e-10);
  // A negative PT eigenvalue certifies entanglement in any dimension.
  c.greater_than("input_entangled_margin", -before, 1e-10);
}

void genericity(Context& c) {
  const int samples = c.integer("samples");
  const auto haar = channels::genericity_scan(samples, c.seed(), channels::ScanMode::HaarPure);
  const auto prod = channels::genericity_scan(std::max(100, samples / 10), numkit::derive_seed(c.seed(), 1),
                                              channels::ScanMode::Products);
  const auto mixed = channels::genericity_scan(std::max(100, samples / 10), numkit::derive_seed(c.seed(), 2),
                                               channels::ScanMode::MixedGinibre);
  const double bell = channels::is_entangled(bell_state(), 2, 2).min_pt_eigenvalue;
  const double p = c.real("werner_p");
  const CMat werner = p * bell_state() + (1.0 - p) * CMat::Identity(4, 4) / 4.0;
  const auto w = channels::is_entangled(werner, 2, 2);
  const double werner_expected = (1.0 - 3.0 * p) / 4.0;

  c.metric("haar_entangled_fraction", haar.fraction);
  c.metric("haar_min_second_schmidt", haar.min_schmidt);
  c.metric("product_entangled_fraction", prod.fraction);
  c.metric("mixed_entangled_fraction", mixed.fraction);
  c.metric("bell_pt_min_eigenvalue", bell);
  c.metric("werner_pt_min_eigenvalue", w.min_pt_eigenvalue);
  c.metric("werner_expected", werner_expected);
  c.at_least("haar_fraction_is_one", haar.fraction, 1.0);
  c.at_most("product_control_fraction", prod.fraction, 0.0);
  c.at_most_abs("bell_pt_eigenvalue", std::abs(bell + 0.5), 1e-10);
  c.at_most_abs("werner_pt_eigenvalue", std::abs(w.min_pt_eigenvalue - werner_expected), 1e-10);
}

void isometry_impossibility(Context& c) {
  const int n = c.integer("n");
  auto rng = c.rng(0);
  bool all = true, agree = true;
  Table& tab = c.table("projectors", {"rank", "certified"});
  for (Eigen::Index rank = 0; rank < n; ++rank) {
    const auto rep = channels::isometry_impossibility_check(random_projector(rng, n, rank), rng, c.integer("candidates"));
    all = all && rep.impossibility_certified;
    agree = agree && rep.ranks_agree;
    tab.rows.push_back({double(rank), rep.impossibility_certified ? 1.0 : 0.0});
  }
  const auto id = channels::isometry_impossibility_check(CMat::Identity(n, n), rng);
  c.is_true("every_proper_projector_certified", all);
  c.is_true("rank_equality_on_candidates", agree);
  c.is_true("identity_has_solution", id.solution_exists);
}

}  // namespace

void register_channels(std::vector<Entry>& out) {
  out.push_back({{"local-prepare",
                  "Kraus preparation {|xi><e_i| (x) 1}: product output, target inner marginal, outer marginal kept",
                  {int_param("da", 2, "dimension of the inner algebra's leg", 1, 8),
                   int_param("db", 1, "margin leg inside H_1", 1, 8), int_param("d2", 2, "dimension of H_2", 1, 8),
                   int_param("inputs", 50, "random input states", 1, 10000),
                   int_param("max_projector_dim", 4, "largest n for the isometry obstruction sweep", 2, 8)}},
                 local_prepare});
  out.push_back({{"disentangle", "Marginal-preserving product replacement of an entangled state",
                  {choice_param("state", "bell", {"bell", "gaussian-pair", "random-margin"}, "input state"),
                   real_param("m", 1.0, "mass for gaussian-pair", 1e-9), int_param("sites", 64, "chain for gaussian-pair", 2),
                   int_param("cutoff", 2, "quanta per mode for gaussian-pair", 1, 8)}},
                 disentangle});
  out.push_back({{"genericity", "Entangled fraction of Haar-random pure states on C^2 (x) C^2 with PT checks",
                  {int_param("samples", 10000, "Haar samples", 100, 10000000),
                   real_param("werner_p", 0.5, "Werner mixing parameter", 0.0, 1.0)}},
                 genericity});
  out.push_back({{"isometry-impossibility", "No W with W*W = 1 and WW* = E for a proper projector E in finite dimension",
                  {int_param("n", 4, "dimension", 1, 32), int_param("candidates", 20, "random W per projector", 1, 10000)}},
                 isometry_impossibility});
}

}  // namespace oalab::experiments::detail
