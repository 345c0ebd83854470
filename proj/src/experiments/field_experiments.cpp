#include "context.hpp"

#include "oalab/fock.hpp"
#include "oalab/locwedge.hpp"

#include <algorithm>
#include <cmath>

namespace oalab::experiments::detail {

namespace {

void wedge_localization(Context& c) {
  const auto m = locwedge::wedge_one_particle(c.integer("n"), c.real("theta_max"), c.real("mass"));
  const auto rs = locwedge::s_operator(m, true, c.real("cut"));
  const auto ss = locwedge::standard_subspace(rs.s);
  const auto st = locwedge::standardness_check(ss.k);
  const double dual = locwedge::duality_check(ss.k, rs.j);
  std::vector<double> svals;
  for (int i = 0; i <= 8; ++i) svals.push_back(-1.0 + 0.25 * i);
  const double flow = locwedge::flow_invariance(rs, ss.k, svals);

  const double t = 0.3, s = -0.45;
  const double group = (m.delta_it(t) * m.delta_it(s) - m.delta_it(t + s)).norm();

  c.metric("retained_dim", static_cast<double>(rs.dim()));
  c.metric("retained_condition", rs.condition);
  c.metric("retained_leakage", rs.leakage);
  c.metric("k_real_dim", static_cast<double>(ss.k.real_dim()));
  c.metric("k_spectral_gap", ss.spectral_gap);
  c.metric("generator_conjugation_defect", m.conjugation_defect());
  c.metric("retained_relative_j_delta_j", rs.relative_conjugation_defect());
  c.metric("derivative_truncation_error", locwedge::derivative_truncation_error(m, 1.0));
  c.metric("intersection_dim", static_cast<double>(st.intersection_dim));
  c.metric("sum_dim", static_cast<double>(st.sum_dim));

  c.at_most_abs("s_squared_retained", rs.involution_defect(), 1e-8);
  c.at_most_abs("fixed_point_defect", ss.fixed_point_defect, 1e-8);
  c.is_true("standard", st.is_standard);
  c.at_most_abs("duality_residual", dual, 1e-8);
  c.at_most_abs("boost_flow_invariance", flow, 1e-8);
  // J K J = -K is the generator form of J Delta J = Delta^{-1}.
  c.at_most_abs("generator_conjugation", m.conjugation_defect(), 1e-9);
  c.at_most_abs("relative_j_delta_j_retained", rs.relative_conjugation_defect(), 1e-9);
  c.at_most_abs("delta_it_group_law", group, 1e-9);
}

locwedge::RealSubspace random_standard(numkit::Rng& rng, Eigen::Index d) {
  // U R^d is standard for any unitary U.
  return locwedge::RealSubspace::span_complex(numkit::haar_unitary(rng, d));
}

void fock_ccr(Context& c) {
  const int d = c.integer("d"), nmax = c.integer("n_max");
  const fock::FockSpace f(d, nmax);
  auto rng = c.rng(0);
  double ccr = 0, loc = 0;
  Table& tab = c.table("pairs", {"im_inner", "commutator_norm", "ccr_defect"});
  for (int p = 0; p < c.integer("pairs"); ++p) {
    const CVec psi = numkit::random_unit_vector(rng, d), phi = numkit::random_unit_vector(rng, d);
    const double im = psi.dot(phi).imag();
    const double cd = fock::ccr_defect(f, psi, phi);
    const double cn = fock::commutator_norm(f, psi, phi);
    ccr = std::max(ccr, cd);
    loc = std::max(loc, std::abs(cn - std::abs(im)));
    tab.rows.push_back({im, cn, cd});
  }
  const auto k = random_standard(rng, d);
  const auto kp = locwedge::symplectic_complement(k);
  const double complement = fock::locality_check(f, k, kp);

  const CMat u = numkit::haar_unitary(rng, d);
  const CVec psi = numkit::random_unit_vector(rng, d);
  const double cov = fock::covariance_defect(f, u, psi);
  const CVec a = 0.05 * numkit::random_unit_vector(rng, d), b = 0.05 * numkit::random_unit_vector(rng, d);
  const double weyl = fock::weyl_relation_defect(f, a, b, nmax - 2, nmax - 2);
  const double unit = fock::weyl_unitarity_defect(f, fock::weyl_operator(f, psi));

  c.metric("total_dim", static_cast<double>(f.dim()));
  c.metric("ccr_defect_max", ccr);
  c.metric("locality_max", loc);
  c.metric("complement_commutator", complement);
  c.metric("covariance_defect", cov);
  c.metric("weyl_relation_defect_small", weyl);
  c.metric("weyl_unitarity_defect", unit);
  c.data()["truncation"] = "CCR and covariance claims are checked on sectors <= n_max - 2";

  c.at_most_abs("ccr_defect", ccr, 1e-10);
  c.at_most_abs("commutator_equals_im_inner", loc, 1e-10);
  c.at_most_abs("complement_locality", complement, 1e-10);
  c.at_most_abs("second_quantization_covariance", cov, 1e-10);
}

void reeh_schlieder(Context& c) {
  const int d = c.integer("d"), nmax = c.integer("n_max");
  int degree = c.integer("degree");
  if (degree < 0) degree = nmax;
  const fock::FockSpace f(d, nmax);
  auto rng = c.rng(0);
  const auto k = random_standard(rng, d);
  const auto st = locwedge::standardness_check(k);
  const auto ranks = fock::cyclicity_ranks(f, k, degree);
  CMat e1 = CMat::Zero(d, 1);
  e1(0) = 1.0;
  const auto line = locwedge::RealSubspace::span_complex(e1);
  const auto control = fock::cyclicity_ranks(f, line, degree);

  Table& tab = c.table("cyclicity", {"degree", "rank_standard", "rank_line"});
  for (std::size_t i = 0; i < ranks.size(); ++i) tab.rows.push_back({double(i), double(ranks[i]), double(control[i])});
  c.metric("total_dim", static_cast<double>(f.dim()));
  c.metric("final_rank", static_cast<double>(ranks.back()));
  c.metric("control_rank", static_cast<double>(control.back()));
  c.is_true("k_standard", st.is_standard);
  c.is_true("rank_reaches_total_dim", ranks.back() == f.dim());
  c.is_true("line_control_rank", control.back() == std::min<Eigen::Index>(degree, nmax) + 1);
}

}  // namespace

void register_fields(std::vector<Entry>& out) {
  out.push_back({{"wedge-localization",
                  "Wedge modular localization on a rapidity grid: S^2, standardness, duality K' = JK, boost invariance",
                  {int_param("n", 64, "rapidity grid points (even)", 8, 512),
                   real_param("theta_max", 6.0, "grid half-width in rapidity", 1e-3),
                   real_param("mass", 1.0, "particle mass", 1e-9),
                   real_param("cut", 1e8, "spectral cut on cond(Delta^{1/2})", 1.0)}},
                 wedge_localization});
  out.push_back({{"fock-ccr", "Truncated Fock space: CCR, commutator = Im<psi, phi>, locality against the symplectic complement",
                  {int_param("d", 3, "one-particle dimension", 1, 6), int_param("n_max", 4, "particle-number cutoff", 2, 8),
                   int_param("pairs", 20, "random vector pairs", 1, 1000)}},
                 fock_ccr});
  out.push_back({{"reeh-schlieder-rank", "Cyclicity rank of polynomials in Phi(K) on the vacuum, with the K = R e_1 control",
                  {int_param("d", 2, "one-particle dimension", 1, 6), int_param("n_max", 3, "particle-number cutoff", 1, 8),
                   int_param("degree", -1, "polynomial degree (-1 means n_max)", -1, 16)}},
                 reeh_schlieder});
}

}  // namespace oalab::experiments::detail
