#include "context.hpp"

#include "oalab/factors.hpp"
#include "oalab/modular.hpp"
#include "oalab/vnalg.hpp"

#include <algorithm>
#include <cmath>

namespace oalab::experiments::detail {

namespace {

constexpr double kFaithfulRatio = 1e-3;  // p_min / p_max below this is redrawn

// Omega on C^k (x) C^k read as a k x k matrix W (first leg = row).
CMat as_matrix(const CVec& omega, Eigen::Index k) {
  CMat w(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index a = 0; a < k; ++a) w(i, a) = omega(i * k + a);
  return w;
}

CVec random_faithful_vector(numkit::Rng& rng, Eigen::Index k) {
  for (;;) {
    const CVec v = numkit::random_unit_vector(rng, k * k);
    Eigen::JacobiSVD<CMat> svd(as_matrix(v, k));
    const auto& s = svd.singularValues();
    if (s(k - 1) * s(k - 1) >= kFaithfulRatio * s(0) * s(0)) return v;
  }
}

CMat random_faithful_state(numkit::Rng& rng, Eigen::Index k) {
  for (;;) {
    const CMat rho = numkit::random_density(rng, k);
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) >= kFaithfulRatio * es.eigenvalues()(k - 1)) return rho;
  }
}

// Delta for M_k (x) 1 and Omega = vec(W): Delta(X) = rho X (W^dagger W)^{-1}.
CMat closed_form_delta(const CVec& omega, Eigen::Index k) {
  const CMat w = as_matrix(omega, k);
  const CMat rho = w * w.adjoint();
  const CMat right = (w.adjoint() * w).inverse();
  return numkit::kron(rho, CMat(right.transpose()));
}

void kms_random(Context& c) {
  const int instances = c.integer("instances");
  const int dim = c.integer("dim");
  const bool mixed = c.flag("mixed_dims");
  const int flow_samples = c.integer("flow_samples");

  double polar = 0, s2 = 0, jdj = 0, domega = 0, somega = 0, kms = 0, comm = 0, comm_span = 0, flow = 0;
  double group = 0, oracle = 0, consistency = 0, control = 0;
  nlohmann::json records = nlohmann::json::array();
  for (int inst = 0; inst < instances; ++inst) {
    auto rng = c.rng(static_cast<std::uint64_t>(inst));
    const Eigen::Index k = mixed ? 2 + inst % 3 : dim;
    const CVec omega = random_faithful_vector(rng, k);
    const auto alg = vnalg::OperatorAlgebra::left_factor(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    const auto md = modular::tomita(alg, omega);

    const auto d = modular::invariant_defects(md);
    polar = std::max(polar, d.polar);
    s2 = std::max(s2, d.s_squared);
    jdj = std::max(jdj, d.j_delta_j);
    domega = std::max(domega, d.delta_omega);
    somega = std::max(somega, d.s_omega);
    consistency = std::max(consistency, md.consistency_residual);
    oracle = std::max(oracle, (md.delta - closed_form_delta(omega, k)).norm() / md.delta.norm());

    double inst_kms = 0, inst_comm = 0, inst_flow = 0, inst_control = 0;
    const CMat d2 = md.delta * md.delta;
    for (Eigen::Index i = 0; i < alg.dim(); ++i) {
      const CMat x = alg.element(i);
      inst_comm = std::max(inst_comm, modular::commutant_map_check(md, x).residual);
      for (Eigen::Index j = 0; j < alg.dim(); ++j) {
        const CMat y = alg.element(j);
        inst_kms = std::max(inst_kms, modular::kms_defect(md, x, y));
        inst_control = std::max(inst_control, modular::kms_defect_with(md, d2, x, y));
      }
    }
    for (int r = 0; r < flow_samples; ++r) {
      const CMat x = alg.from_coefficients(numkit::random_ginibre(rng, alg.dim(), 1).col(0));
      std::uniform_real_distribution<double> ut(-3.0, 3.0);
      const double t = ut(rng), s = ut(rng);
      const CMat fx = modular::modular_flow(md, x, t);
      inst_flow = std::max(inst_flow, alg.residual(fx) / std::max(fx.norm(), 1e-300));
      const CMat composed = modular::modular_flow(md, modular::modular_flow(md, x, s), t);
      group = std::max(group, (composed - modular::modular_flow(md, x, s + t)).norm() / x.norm());
    }
    const double span = modular::commutant_map_span_defect(md);
    kms = std::max(kms, inst_kms);
    comm = std::max(comm, inst_comm);
    comm_span = std::max(comm_span, span);
    flow = std::max(flow, inst_flow);
    control = inst == 0 ? inst_control : std::min(control, inst_control);
    records.push_back(modular::report(md, inst_kms, inst_flow, inst_comm));
  }
  c.data()["instances"] = records;
  c.metric("max_polar_defect", polar);
  c.metric("max_s_squared_defect", s2);
  c.metric("max_j_delta_j_defect", jdj);
  c.metric("max_delta_omega_defect", domega);
  c.metric("max_s_omega_defect", somega);
  c.metric("max_kms_defect", kms);
  c.metric("max_commutant_residual", comm);
  c.metric("max_commutant_span_defect", comm_span);
  c.metric("max_flow_residual", flow);
  c.metric("max_flow_group_defect", group);
  c.metric("max_delta_oracle_deviation", oracle);
  c.metric("max_consistency_residual", consistency);
  c.metric("min_delta_squared_control", control);

  c.at_most_abs("polar_defect", polar, 1e-10);
  c.at_most_abs("s_squared_defect", s2, 1e-9);
  c.at_most_abs("j_delta_j_defect", jdj, 1e-9);
  c.at_most_abs("delta_omega_defect", domega, 1e-10);
  c.at_most_abs("kms_defect", kms, 1e-9);
  c.at_most_abs("commutant_residual", comm, 1e-9);
  c.at_most_abs("commutant_span_defect", comm_span, 1e-9);
  c.at_most_abs("flow_membership_residual", flow, 1e-8);
  c.at_most_abs("flow_group_defect", group, 1e-9);
  c.at_most_rel("delta_vs_closed_form", oracle, 1e-9);
  // Delta -> Delta^2 must visibly break KMS on every instance.
  c.greater_than("delta_squared_control", control, 0.01);
}

void modular_flow_experiment(Context& c) {
  const double lambda = c.real("lambda");
  const double t = c.real("t");
  const auto a = factors::powers_approximant(lambda, 1);
  const auto& md = a.modular;
  CMat e12 = CMat::Zero(2, 2);
  e12(0, 1) = 1.0;
  const CMat x = numkit::kron(e12, CMat::Identity(2, 2));
  const CMat fx = modular::modular_flow(md, x, t);
  const Complex phase = (x.adjoint() * fx).trace() / (x.adjoint() * x).trace();
  // rho^{it} E_12 rho^{-it} = (p_1 / p_2)^{it} E_12 = lambda^{-it} E_12.
  const Complex expected = std::exp(-kI * t * std::log(lambda));
  c.metric("phase_re", phase.real());
  c.metric("phase_im", phase.imag());
  c.metric("expected_phase_re", expected.real());
  c.metric("expected_phase_im", expected.imag());
  c.at_most_abs("phase_defect", std::abs(phase - expected), 1e-10);
  c.at_most_abs("eigen_direction_defect", (fx - phase * x).norm(), 1e-10);
  c.at_most_abs("t_zero_defect", (modular::modular_flow(md, x, 0.0) - x).norm(), 1e-12);

  auto rng = c.rng(0);
  double group = 0, member = 0;
  const int samples = c.integer("samples");
  std::uniform_real_distribution<double> ut(-2.0, 2.0);
  for (int i = 0; i < samples; ++i) {
    const CMat y = md.algebra.from_coefficients(numkit::random_ginibre(rng, md.algebra.dim(), 1).col(0));
    const double s = ut(rng), u = ut(rng);
    const CMat fy = modular::modular_flow(md, y, u);
    member = std::max(member, md.algebra.residual(fy) / fy.norm());
    group = std::max(group, (modular::modular_flow(md, fy, s) - modular::modular_flow(md, y, s + u)).norm() / y.norm());
  }
  c.at_most_abs("flow_membership_residual", member, 1e-8);
  c.at_most_abs("flow_group_defect", group, 1e-9);

  // Tracial case: the flow is trivial.
  const auto tr = factors::powers_approximant(1.0, 1);
  double trivial = 0;
  for (Eigen::Index i = 0; i < tr.modular.algebra.dim(); ++i) {
    const CMat y = tr.modular.algebra.element(i);
    trivial = std::max(trivial, (modular::modular_flow(tr.modular, y, t) - y).norm());
  }
  c.at_most_abs("tracial_flow_defect", trivial, 1e-10);

  Table& tab = c.table("phase_series", {"t", "re", "im"});
  for (int i = 0; i <= 40; ++i) {
    const double ti = -2.0 + 0.1 * i;
    const CMat f = modular::modular_flow(md, x, ti);
    const Complex p = (x.adjoint() * f).trace() / (x.adjoint() * x).trace();
    tab.rows.push_back({ti, p.real(), p.imag()});
  }
}

void spectrum_law(Context& c) {
  const int samples = c.integer("samples");
  const int max_dim = c.integer("max_dim");
  double worst = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < samples; ++i) {
    auto rng = c.rng(static_cast<std::uint64_t>(i));
    const Eigen::Index k = 2 + i % (max_dim - 1);
    const CMat rho = random_faithful_state(rng, k);
    const CVec psi = modular::purify(rho, static_cast<std::size_t>(k));
    const auto alg = vnalg::OperatorAlgebra::left_factor(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    const auto md = modular::tomita(alg, psi);
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    const auto ratios = modular::ratio_multiset(es.eigenvalues());
    const RVec& spec = md.spectrum();
    double dev = 0;
    for (Eigen::Index j = 0; j < spec.size(); ++j) {
      dev = std::max(dev, std::abs(spec(j) - ratios[static_cast<std::size_t>(j)]) / ratios[static_cast<std::size_t>(j)]);
    }
    worst = std::max(worst, dev);
    rows.push_back({{"k", k}, {"relative_deviation", dev}});
  }
  c.data()["samples"] = rows;
  c.metric("max_relative_deviation", worst);
  c.at_most_rel("spectrum_matches_ratios", worst, 1e-9);
}

}  // namespace

void register_modular(std::vector<Entry>& out) {
  out.push_back({{"kms-random",
                  "Tomita engine on M_k (x) 1 with random faithful vectors: polar, J Delta J, KMS, commutant and flow checks",
                  {int_param("dim", 3, "k for M_k (x) 1 on C^k (x) C^k", 2, 4),
                   bool_param("mixed_dims", false, "cycle k through 2, 3, 4 instead of using dim"),
                   int_param("instances", 20, "number of seeded random instances", 1, 1000),
                   int_param("flow_samples", 20, "random (x, t) pairs per instance for the flow checks", 1, 1000)}},
                 kms_random});
  out.push_back({{"modular-flow",
                  "Modular flow of the Powers factor state at N = 1: eigen-phase of E_12 (x) 1, group law, tracial case",
                  {real_param("lambda", 0.5, "Powers parameter", 1e-6, 1.0), real_param("t", 0.7, "flow parameter"),
                   int_param("samples", 20, "random elements for membership and group-law checks", 1, 1000)}},
                 modular_flow_experiment});
  out.push_back({{"spectrum-law",
                  "Delta spectrum of (M_k (x) 1, purify(rho)) against all ratios p_i / p_j",
                  {int_param("samples", 20, "random faithful spectra", 1, 1000),
                   int_param("max_dim", 4, "largest k (k cycles through 2..max_dim)", 2, 4)}},
                 spectrum_law});
}

}  // namespace oalab::experiments::detail
