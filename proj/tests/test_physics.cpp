#include "oalab/channels.hpp"
#include "oalab/factors.hpp"
#include "oalab/fock.hpp"
#include "oalab/lattice.hpp"
#include "oalab/locwedge.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace oalab;

namespace {

numkit::Rng rng_for(std::uint64_t i) { return numkit::Rng(numkit::derive_seed(77, i)); }

CMat bell() {
  CVec v = CVec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

// ---------------------------------------------------------------- factors

TEST(Factors, SiteWeightsAndSingleSitePurity) {
  factors::ApproximantSpec spec;
  spec.lambda = 0.3;
  const RVec w = factors::site_weights(spec);
  EXPECT_NEAR(w(0), 1.0 / 1.3, 1e-15);
  EXPECT_NEAR(w(1), 0.3 / 1.3, 1e-15);
  const auto a = factors::powers_approximant(0.3, 1);
  const auto sig = factors::signature(a.modular, 1.0);
  EXPECT_NEAR(sig.reduced_purity.value(), (1 + 0.09) / (1.3 * 1.3), 1e-12);
  // log-spectrum {log 0.3, 0, 0, -log 0.3}
  ASSERT_EQ(sig.distinct.size(), 3u);
  EXPECT_NEAR(sig.distinct.front(), std::log(0.3), 1e-10);
}

TEST(Factors, TracialCaseHasTrivialSpectrum) {
  const auto a = factors::powers_approximant(1.0, 2);
  for (Eigen::Index i = 0; i < a.modular.spectrum().size(); ++i) EXPECT_NEAR(a.modular.spectrum()(i), 1.0, 1e-10);
}

TEST(Factors, HelpersAndValidation) {
  EXPECT_NEAR(factors::max_gap_in_window({0.0}, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(factors::max_gap_in_window({-0.5, 0.25}, 1.0), 0.75, 1e-15);
  const auto d = factors::distinct_sorted({0.0, 1e-12, 1.0});
  EXPECT_EQ(d.size(), 2u);
  const auto c = factors::convergents(0.5, 3);
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c.back().p, 1);
  EXPECT_EQ(c.back().q, 2);
  EXPECT_THROW(factors::powers_approximant(0.0, 1), std::invalid_argument);
  EXPECT_THROW(factors::powers_approximant(0.5, 9), std::invalid_argument);
}

// ---------------------------------------------------------------- locwedge

TEST(Locwedge, ToyModelStandardSubspace) {
  // Delta = diag(d, 1/d), J swap + conjugation: every claim is checkable by hand.
  const auto toy = locwedge::toy_model(3.0);
  const auto rs = locwedge::s_operator(toy.delta, toy.j, false);
  EXPECT_LT(rs.involution_defect(), 1e-12);
  const auto ss = locwedge::standard_subspace(rs.s);
  EXPECT_EQ(ss.k.real_dim(), 2);
  const auto st = locwedge::standardness_check(ss.k);
  EXPECT_TRUE(st.is_standard);
  EXPECT_EQ(st.intersection_dim, 0);
  EXPECT_EQ(st.sum_dim, 4);
  EXPECT_LT(locwedge::duality_check(ss.k, rs.j), 1e-10);
}

TEST(Locwedge, IllConditionedDeltaNeedsRegularization) {
  const auto toy = locwedge::toy_model(1e10);
  EXPECT_THROW(locwedge::s_operator(toy.delta, toy.j, false, 1e8), std::invalid_argument);
}

TEST(Locwedge, BoostPreservesMinkowskiForm) {
  const RMat b = locwedge::boost_matrix(0.7);
  RMat eta = RMat::Identity(2, 2);
  eta(1, 1) = -1.0;
  EXPECT_LT((b.transpose() * eta * b - eta).norm(), 1e-13);
  EXPECT_LT((locwedge::boost_matrix(0.3) * locwedge::boost_matrix(0.4) - b).norm(), 1e-13);
}

TEST(Locwedge, WedgeModelGeneratorAndFlow) {
  const auto m = locwedge::wedge_one_particle(32, 5.0);
  EXPECT_LT(m.conjugation_defect(), 1e-10);
  const CMat u = m.delta_it(0.4);
  EXPECT_LT((u * u.adjoint() - CMat::Identity(32, 32)).norm(), 1e-10);
  EXPECT_THROW(locwedge::wedge_one_particle(7, 5.0), std::invalid_argument);
}

// ---------------------------------------------------------------- fock

TEST(Fock, DimensionsMatchBinomialCount) {
  EXPECT_EQ(fock::fock_dimension(2, 3), 10);
  EXPECT_EQ(fock::fock_dimension(3, 4), 35);
  const fock::FockSpace f(2, 3);
  EXPECT_EQ(f.dim(), 10);
  EXPECT_EQ(f.prefix_dim(1), 3);
}

TEST(Fock, CreationOnVacuumAndCcr) {
  const fock::FockSpace f(2, 4);
  CVec e0 = CVec::Zero(2);
  e0(0) = 1.0;
  const CVec one = f.a_dag(e0) * f.vacuum();
  const Eigen::Index idx = f.index_of({1, 0});
  ASSERT_GE(idx, 0);
  EXPECT_NEAR(std::abs(one(idx)), 1.0, 1e-14);
  auto rng = rng_for(1);
  const CVec psi = numkit::random_unit_vector(rng, 2), phi = numkit::random_unit_vector(rng, 2);
  EXPECT_LT(fock::ccr_defect(f, psi, phi), 1e-12);
  EXPECT_NEAR(fock::commutator_norm(f, psi, phi), std::abs(psi.dot(phi).imag()), 1e-12);
}

TEST(Fock, CommutingFieldsForRealSubspaceAndComplement) {
  const fock::FockSpace f(2, 3);
  const auto k = locwedge::RealSubspace::span_complex(CMat::Identity(2, 2));  // R^2
  const auto kp = locwedge::symplectic_complement(k);
  EXPECT_EQ(kp.real_dim(), 2);
  EXPECT_LT(fock::locality_check(f, k, kp), 1e-12);
  EXPECT_THROW(fock::field_operator(f, CVec::Zero(2)), std::invalid_argument);
}

// ---------------------------------------------------------------- lattice

TEST(Lattice, DispersionAndVacuumVariance) {
  const lattice::ChainSpec spec{16, 0.8, false};
  const RVec w = lattice::dispersion(spec);
  EXPECT_NEAR(w(0), 0.8, 1e-15);
  const auto gs = lattice::ground_state(spec);
  // <phi_0^2> = (1/N) sum_k 1 / (2 omega_k)
  EXPECT_NEAR(gs.g_phi(0, 0), (0.5 * w.cwiseInverse()).sum() / 16.0, 1e-13);
  EXPECT_THROW((lattice::ChainSpec{16, 0.0, false}.validate()), std::invalid_argument);
}

TEST(Lattice, PureChainHasMinimalSymplecticEigenvalues) {
  const auto gs = lattice::ground_state({12, 1.0, false});
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[static_cast<std::size_t>(i)] = i;
  const RVec nu = lattice::symplectic_eigenvalues(gs, all);
  for (Eigen::Index i = 0; i < nu.size(); ++i) EXPECT_NEAR(nu(i), 0.5, 1e-10);
  EXPECT_NEAR(lattice::mode_entropy(0.5), 0.0, 1e-15);
}

TEST(Lattice, LocalDifferenceOfOrthogonalPureStates) {
  CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  EXPECT_NEAR(lattice::local_difference(a, b), 2.0, 1e-14);
  auto rng = rng_for(2);
  EXPECT_LE(lattice::brute_force_local_difference(a, b, 500, rng), 2.0 + 1e-12);
}

TEST(Lattice, DisjointPacketsAreOrthogonalAtTimeZero) {
  const lattice::ChainSpec spec{64, 1.0, false};
  const CVec chi = lattice::packet(64, 0, 5), psi = lattice::packet(64, 10, 15);
  EXPECT_LT(std::abs(lattice::causality_amplitude(spec, chi, psi, 0.0)), 1e-15);
  EXPECT_GT(std::abs(lattice::causality_amplitude(spec, chi, psi, 1.0)), 1e-12);
  EXPECT_THROW(lattice::causality_probe(spec, 0, 5, 3, 8, {0.0}), std::invalid_argument);
}

// ---------------------------------------------------------------- channels

TEST(Channels, DepolarizingAndIdentity) {
  auto rng = rng_for(3);
  const CMat rho = numkit::random_density(rng, 2);
  EXPECT_LT((channels::kraus_apply(rho, channels::depolarizing_qubit()) - 0.5 * CMat::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((channels::kraus_apply(rho, channels::identity_channel(2)) - rho).norm(), 1e-15);
  EXPECT_TRUE(channels::depolarizing_qubit().is_trace_preserving());
  EXPECT_THROW(channels::Channel({}), std::invalid_argument);
}

TEST(Channels, PartialTransposeOfBell) {
  const CMat pt = channels::partial_transpose(bell(), 2, 2);
  // The swap operator / 2: eigenvalues {-1/2, 1/2, 1/2, 1/2}.
  EXPECT_NEAR(channels::pt_witness(bell(), 2, 2), -0.5, 1e-12);
  EXPECT_LT((pt * pt - 0.25 * CMat::Identity(4, 4)).norm(), 1e-14);
  EXPECT_TRUE(channels::is_entangled(bell(), 2, 2).entangled);
  EXPECT_FALSE(channels::is_entangled(CMat::Identity(4, 4) / 4.0, 2, 2).entangled);
  EXPECT_THROW(channels::is_entangled(CMat::Identity(9, 9) / 9.0, 3, 3), std::invalid_argument);
}

TEST(Channels, LocalPrepareAgreesWithKrausForm) {
  const auto s = channels::SplitData::standard(2, 2);
  auto rng = rng_for(4);
  const CVec xi = numkit::random_unit_vector(rng, 2);
  const CMat rho = numkit::random_density(rng, 4);
  const auto ch = channels::preparation_channel(s, xi);
  EXPECT_LT((channels::kraus_apply(rho, ch) - channels::local_prepare(s, xi, rho)).norm(), 1e-14);
  EXPECT_LT(s.commutation_defect(), 1e-14);
  EXPECT_THROW(channels::preparation_channel(s, 2.0 * xi), std::invalid_argument);
}

TEST(Channels, DisentangleBellKeepsMarginals) {
  const auto s = channels::SplitData::standard(2, 2);
  const auto r = channels::disentangle(s, bell());
  EXPECT_FALSE(r.used_purification);  // the inner marginal has rank 2 > db = 1
  EXPECT_LT(r.inner_deviation, 1e-12);
  EXPECT_LT(r.outer_deviation, 1e-12);
  EXPECT_LT(channels::product_defect(s, r.output), 1e-12);
  EXPECT_FALSE(channels::is_entangled(r.output, 2, 2).entangled);
}

TEST(Channels, IsometryRankObstruction) {
  auto rng = rng_for(5);
  CMat e = CMat::Zero(4, 4);
  e(0, 0) = e(1, 1) = 1.0;
  const auto rep = channels::isometry_impossibility_check(e, rng);
  EXPECT_TRUE(rep.impossibility_certified);
  EXPECT_FALSE(rep.solution_exists);
  EXPECT_TRUE(rep.ranks_agree);
  EXPECT_EQ(rep.rank_e, 2);
  EXPECT_TRUE(channels::isometry_impossibility_check(CMat::Identity(4, 4), rng).solution_exists);
  EXPECT_THROW(channels::isometry_impossibility_check(2.0 * e, rng), std::invalid_argument);
}

TEST(Channels, GenericityControls) {
  EXPECT_EQ(channels::genericity_scan(100, 3, channels::ScanMode::Products).entangled, 0);
  EXPECT_EQ(channels::genericity_scan(100, 3, channels::ScanMode::HaarPure).entangled, 100);
  EXPECT_THROW(channels::genericity_scan(99, 3), std::invalid_argument);
}
