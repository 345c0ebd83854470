#include "oalab/modular.hpp"
#include "oalab/numkit.hpp"
#include "oalab/vnalg.hpp"
#include "oalab/factors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace oalab;

namespace {

numkit::Rng rng_for(std::uint64_t i) { return numkit::Rng(numkit::derive_seed(2024, i)); }

CMat e_ij(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  CMat m = CMat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- numkit

TEST(Numkit, HermFnMatchesDiagonalOracle) {
  auto rng = rng_for(1);
  const CMat u = numkit::haar_unitary(rng, 3);
  RVec lam(3);
  lam << 0.25, 1.0, 4.0;
  const CMat h = u * lam.cast<Complex>().asDiagonal() * u.adjoint();
  const CMat sq = numkit::herm_fn(h, numkit::SpectralFn::sqrt());
  RVec root = lam.cwiseSqrt();
  EXPECT_LT((sq - u * root.cast<Complex>().asDiagonal() * u.adjoint()).norm(), 1e-12);
  const CMat it = numkit::herm_fn(h, numkit::SpectralFn::imaginary_power(0.3));
  EXPECT_LT((it * it.adjoint() - CMat::Identity(3, 3)).norm(), 1e-12);
  EXPECT_THROW(numkit::herm_fn(-h, numkit::SpectralFn::log()), std::domain_error);
  EXPECT_THROW(numkit::herm_fn(numkit::random_ginibre(rng, 3, 3), numkit::SpectralFn::exp()), std::invalid_argument);
}

TEST(Numkit, AntilinearAdjointRelation) {
  auto rng = rng_for(2);
  const numkit::AntilinearMap s(numkit::random_ginibre(rng, 4, 4));
  const CVec psi = numkit::random_unit_vector(rng, 4), phi = numkit::random_unit_vector(rng, 4);
  const Complex lhs = phi.dot(s.apply(psi));
  const Complex rhs = psi.dot(s.adjoint().apply(phi));
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(Numkit, PolarRecoversKnownFactors) {
  auto rng = rng_for(3);
  const CMat ju = numkit::haar_unitary(rng, 4);
  const CMat v = numkit::haar_unitary(rng, 4);
  RVec d(4);
  d << 0.1, 0.5, 2.0, 7.0;
  const CMat delta = v * d.cast<Complex>().asDiagonal() * v.adjoint();
  const CMat half = v * d.cwiseSqrt().cast<Complex>().asDiagonal() * v.adjoint();
  // S = J Delta^{1/2} with J = ju * conj(.): conjugation matrix ju * conj(half).
  const numkit::AntilinearMap s(ju * half.conjugate());
  const auto p = numkit::antilinear_polar(s);
  EXPECT_LT((p.delta - delta).norm(), 1e-11);
  EXPECT_LT((p.j.matrix() - ju).norm(), 1e-11);
  EXPECT_LT(p.reconstruction_defect, 1e-12);
  EXPECT_TRUE(p.j.is_antiunitary());
  EXPECT_THROW(numkit::antilinear_polar(numkit::AntilinearMap(CMat::Zero(2, 2))), std::invalid_argument);
}

TEST(Numkit, RealLinearizationIntertwines) {
  auto rng = rng_for(4);
  const numkit::AntilinearMap s(numkit::random_ginibre(rng, 3, 3));
  const CVec v = numkit::random_unit_vector(rng, 3);
  EXPECT_LT((numkit::real_linearize(s) * numkit::realify(v) - numkit::realify(s.apply(v))).norm(), 1e-13);
  const CMat m = numkit::random_ginibre(rng, 3, 3);
  EXPECT_LT((numkit::real_linearize(m) * numkit::realify(v) - numkit::realify(m * v)).norm(), 1e-13);
  EXPECT_LT((numkit::complexify(numkit::realify(v)) - v).norm(), 0.0 + 1e-15);
}

TEST(Numkit, PartialTraceOfProduct) {
  auto rng = rng_for(5);
  const CMat a = numkit::random_density(rng, 2), b = numkit::random_density(rng, 3);
  const std::vector<std::size_t> dims{2, 3};
  EXPECT_LT((numkit::partial_trace(numkit::kron(a, b), dims, {true, false}) - a).norm(), 1e-13);
  EXPECT_LT((numkit::partial_trace(numkit::kron(a, b), dims, {false, true}) - b).norm(), 1e-13);
}

TEST(Numkit, RanksNormsAndSeeds) {
  CMat m = CMat::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  EXPECT_EQ(numkit::numerical_rank(m), 2);
  EXPECT_NEAR(numkit::trace_norm(m), 7.0, 1e-13);
  EXPECT_NEAR(numkit::operator_norm(m), 4.0, 1e-13);
  EXPECT_EQ(numkit::null_space(m).cols(), 1);
  EXPECT_EQ(numkit::derive_seed(9, 3), numkit::derive_seed(9, 3));
  EXPECT_NE(numkit::derive_seed(9, 3), numkit::derive_seed(9, 4));
  auto r1 = rng_for(6), r2 = rng_for(6);
  EXPECT_EQ(numkit::random_density(r1, 3), numkit::random_density(r2, 3));
}

TEST(Numkit, CsvRoundTrip) {
  auto rng = rng_for(7);
  const CMat m = numkit::random_ginibre(rng, 2, 3);
  std::stringstream ss;
  numkit::write_csv(ss, m);
  EXPECT_EQ(numkit::read_csv(ss), m);
}

// ---------------------------------------------------------------- vnalg

TEST(Vnalg, CommutantOfLeftFactorIsRightFactor) {
  const auto a = vnalg::OperatorAlgebra::left_factor(2, 3);
  EXPECT_EQ(a.dim(), 4);
  const auto c = vnalg::commutant(a, vnalg::CommutantMethod::NullSpace);
  EXPECT_EQ(c.dim(), 9);
  EXPECT_LT(vnalg::span_distance(c, vnalg::OperatorAlgebra::right_factor(2, 3)), 1e-9);
  EXPECT_LT(vnalg::span_distance(vnalg::commutant(c), a), 1e-9);
}

TEST(Vnalg, ClosureAndCenter) {
  CMat sx = CMat::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const auto a = vnalg::vn_closure({sx}, 2);
  EXPECT_EQ(a.dim(), 2);
  const auto def = a.closure_defects();
  EXPECT_LT(def.product, 1e-12);
  EXPECT_FALSE(vnalg::center_and_factor(vnalg::OperatorAlgebra::diagonal(3)).is_factor);
  EXPECT_TRUE(vnalg::center_and_factor(vnalg::OperatorAlgebra::full(3)).is_factor);
  EXPECT_EQ(vnalg::center_and_factor(vnalg::OperatorAlgebra::diagonal(3)).center.dim(), 3);
  const CMat p = vnalg::minimal_projector(vnalg::OperatorAlgebra::full(3));
  EXPECT_EQ(numkit::numerical_rank(p), 1);
}

TEST(Vnalg, CyclicSeparatingForEntangledAndProductVectors) {
  const auto a = vnalg::OperatorAlgebra::left_factor(2, 2);
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto ok = vnalg::cyclic_separating(a, bell);
  EXPECT_TRUE(ok.is_cyclic);
  EXPECT_TRUE(ok.is_separating);
  CVec prod = CVec::Zero(4);
  prod(0) = 1.0;
  const auto bad = vnalg::cyclic_separating(a, prod);
  EXPECT_FALSE(bad.is_cyclic);
  EXPECT_FALSE(bad.is_separating);
  EXPECT_THROW(vnalg::cyclic_separating(a, CVec::Zero(4)), std::invalid_argument);
}

TEST(Vnalg, GnsDimensions) {
  const auto full = vnalg::OperatorAlgebra::full(2);
  auto rng = rng_for(8);
  const auto faithful = vnalg::gns(full, numkit::random_density(rng, 2));
  EXPECT_EQ(faithful.dim(), 4);
  EXPECT_EQ(faithful.null_dim, 0);
  const auto pure = vnalg::gns(full, e_ij(2, 0, 0));
  EXPECT_EQ(pure.dim(), 2);
  EXPECT_EQ(pure.null_dim, 2);
  // pi is multiplicative.
  const CMat x = numkit::random_ginibre(rng, 2, 2), y = numkit::random_ginibre(rng, 2, 2);
  EXPECT_LT((faithful.represent(x * y) - faithful.represent(x) * faithful.represent(y)).norm(), 1e-11);
}

TEST(Vnalg, SerializeRoundTrip) {
  const auto a = vnalg::OperatorAlgebra::left_factor(2, 2).densified();
  const auto b = vnalg::deserialize(vnalg::serialize(a));
  EXPECT_LT(vnalg::span_distance(a, b), 1e-12);
}

// ---------------------------------------------------------------- modular

TEST(Modular, DeltaMatchesClosedForm) {
  // M_k (x) 1 with Omega = vec(W): Delta = rho (x) ((W^dagger W)^{-1})^T.
  auto rng = rng_for(9);
  const Eigen::Index k = 3;
  const CVec omega = numkit::random_unit_vector(rng, k * k);
  CMat w(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index a = 0; a < k; ++a) w(i, a) = omega(i * k + a);
  const CMat expect = numkit::kron(CMat(w * w.adjoint()), CMat((w.adjoint() * w).inverse().transpose()));
  const auto md = modular::tomita(vnalg::OperatorAlgebra::left_factor(3, 3), omega);
  EXPECT_LT((md.delta - expect).norm() / expect.norm(), 1e-9);
  const auto d = modular::invariant_defects(md);
  EXPECT_LT(d.j_squared, 1e-9);
  EXPECT_LT(d.s_omega, 1e-10);
}

TEST(Modular, CommutantSatisfiesInverseKms) {
  auto rng = rng_for(10);
  const CVec omega = numkit::random_unit_vector(rng, 4);
  const auto md = modular::tomita(vnalg::OperatorAlgebra::left_factor(2, 2), omega);
  const auto comm = vnalg::OperatorAlgebra::right_factor(2, 2);
  const CMat dinv = md.delta.inverse();
  double worst = 0, control = 0;
  for (Eigen::Index i = 0; i < comm.dim(); ++i)
    for (Eigen::Index j = 0; j < comm.dim(); ++j) {
      worst = std::max(worst, modular::kms_defect_with(md, dinv, comm.element(i), comm.element(j)));
      control = std::max(control, modular::kms_defect_with(md, md.delta, comm.element(i), comm.element(j)));
    }
  EXPECT_LT(worst, 1e-10);
  EXPECT_GT(control, 1e-3);
}

TEST(Modular, GlobalTomitaAgreesWithTensorAssembly) {
  // N = 2 Powers approximant: per-site assembly vs the engine on the whole space.
  const auto a = factors::powers_approximant(0.4, 2);
  const auto direct = modular::tomita(a.algebra.densified(), a.omega);
  EXPECT_LT((direct.delta - a.modular.delta).norm() / a.modular.delta.norm(), 1e-9);
  EXPECT_LT((direct.spectrum() - a.modular.spectrum()).norm(), 1e-9);
}

TEST(Modular, FlowPhaseOnMatrixUnit) {
  // Delta = rho (x) rho^{-1}; sigma_t(E12 (x) 1) = (p1/p2)^{it} E12 (x) 1.
  const double lambda = 0.5, t = 0.9;
  const auto a = factors::powers_approximant(lambda, 1);
  const CMat x = numkit::kron(e_ij(2, 0, 1), CMat::Identity(2, 2));
  const CMat fx = modular::modular_flow(a.modular, x, t);
  EXPECT_LT((fx - std::exp(-kI * t * std::log(lambda)) * x).norm(), 1e-10);
}

TEST(Modular, PurifyAndRatios) {
  auto rng = rng_for(11);
  const CMat rho = numkit::random_density(rng, 3);
  const CVec psi = modular::purify(rho, 3);
  const std::vector<std::size_t> dims{3, 3};
  EXPECT_LT((numkit::partial_trace(CMat(psi * psi.adjoint()), dims, {true, false}) - rho).norm(), 1e-12);
  EXPECT_THROW(modular::purify(rho, 2), std::invalid_argument);
  RVec p(2);
  p << 0.25, 0.75;
  const auto r = modular::ratio_multiset(p);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r.front(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.back(), 3.0, 1e-15);
}

TEST(Modular, RejectsNonSeparatingVector) {
  CVec prod = CVec::Zero(4);
  prod(0) = 1.0;
  EXPECT_THROW(modular::tomita(vnalg::OperatorAlgebra::left_factor(2, 2), prod), std::invalid_argument);
  const CMat y = numkit::kron(CMat::Identity(2, 2), e_ij(2, 0, 1));
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto md = modular::tomita(vnalg::OperatorAlgebra::left_factor(2, 2), bell);
  EXPECT_THROW(modular::modular_flow(md, y, 0.1), std::invalid_argument);
}
