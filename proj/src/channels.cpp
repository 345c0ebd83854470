#include "oalab/channels.hpp"

#include "oalab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oalab::channels {

Channel::Channel(std::vector<CMat> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw std::invalid_argument("Channel: empty Kraus family");
  for (const CMat& k : kraus_) {
    if (k.rows() != kraus_.front().rows() || k.cols() != kraus_.front().cols()) {
      throw std::invalid_argument("Channel: Kraus operators have different shapes");
    }
  }
}

double Channel::trace_deficit() const {
  CMat sum = CMat::Zero(input_dim(), input_dim());
  for (const CMat& k : kraus_) sum += k.adjoint() * k;
  return (sum - CMat::Identity(input_dim(), input_dim())).norm();
}

CMat kraus_apply(const CMat& rho, const Channel& ch) {
  if (rho.rows() != ch.input_dim() || rho.cols() != ch.input_dim()) {
    throw std::invalid_argument("kraus_apply: state does not match the channel input");
  }
  CMat out = CMat::Zero(ch.output_dim(), ch.output_dim());
  for (const CMat& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

Channel identity_channel(Eigen::Index n) { return Channel({CMat::Identity(n, n)}); }

Channel depolarizing_qubit() {
  CMat sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  return Channel({0.5 * CMat::Identity(2, 2), 0.5 * sx, 0.5 * sy, 0.5 * sz});
}

// ---------------------------------------------------------------------------

SplitData SplitData::standard(std::size_t d1, std::size_t d2) { return with_margin(d1, 1, d2); }

SplitData SplitData::with_margin(std::size_t da, std::size_t db, std::size_t d2) {
  if (da == 0 || db == 0 || d2 == 0) throw std::invalid_argument("SplitData: zero dimension");
  return {da, db, d2, vnalg::OperatorAlgebra::subsystem({da, db, d2}, {true, false, false}),
          vnalg::OperatorAlgebra::subsystem({da, db, d2}, {false, false, true})};
}

double SplitData::commutation_defect() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < inner.dim(); ++i) {
    const CMat a = inner.element(i);
    for (Eigen::Index j = 0; j < outer.dim(); ++j) {
      const CMat b = outer.element(j);
      worst = std::max(worst, (a * b - b * a).norm());
    }
  }
  return worst;
}

namespace {

void check_state(const SplitData& s, const CMat& rho) {
  const auto n = static_cast<Eigen::Index>(s.ambient_dim());
  if (rho.rows() != n || rho.cols() != n) throw std::invalid_argument("split: state has the wrong dimension");
}

CMat trace_legs(const SplitData& s, const CMat& rho, std::vector<bool> keep) {
  check_state(s, rho);
  const std::vector<std::size_t> dims{s.da, s.db, s.d2};
  return numkit::partial_trace(rho, dims, keep);
}

}  // namespace

CMat marginal_h1(const SplitData& s, const CMat& rho) { return trace_legs(s, rho, {true, true, false}); }
CMat marginal_inner(const SplitData& s, const CMat& rho) { return trace_legs(s, rho, {true, false, false}); }
CMat marginal_outer(const SplitData& s, const CMat& rho) { return trace_legs(s, rho, {false, false, true}); }

double product_defect(const SplitData& s, const CMat& rho) {
  return numkit::trace_norm(rho - numkit::kron(marginal_h1(s, rho), marginal_outer(s, rho)));
}

Channel preparation_channel(const SplitData& s, const CVec& xi) {
  const auto d1 = static_cast<Eigen::Index>(s.d1());
  const auto d2 = static_cast<Eigen::Index>(s.d2);
  if (xi.size() != d1) throw std::invalid_argument("preparation_channel: target has the wrong dimension");
  if (std::abs(xi.norm() - 1.0) > 1e-10) throw std::invalid_argument("preparation_channel: target must be a unit vector");
  std::vector<CMat> kraus;
  const CMat id2 = CMat::Identity(d2, d2);
  for (Eigen::Index i = 0; i < d1; ++i) {
    CMat k = CMat::Zero(d1, d1);
    k.col(i) = xi;
    kraus.push_back(numkit::kron(k, id2));
  }
  return Channel(std::move(kraus));
}

CMat local_prepare(const SplitData& s, const CVec& xi, const CMat& rho) {
  check_state(s, rho);
  return kraus_apply(rho, preparation_channel(s, xi));
}

DisentangleResult disentangle(const SplitData& s, const CMat& rho) {
  check_state(s, rho);
  const CMat inner = marginal_inner(s, rho);
  const CMat outer = marginal_outer(s, rho);
  const auto eig_inner = numkit::hermitian_eigen(inner);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < eig_inner.values.size(); ++i) if (eig_inner.values(i) > 1e-12) ++rank;

  const auto d1 = static_cast<Eigen::Index>(s.d1());
  const auto d2 = static_cast<Eigen::Index>(s.d2);
  std::optional<Channel> ch;
  const bool purify = s.db >= rank;
  if (purify) {
    // Trace-normalize first: the inner marginal may be off by rounding.
    const CVec xi = modular::purify(inner / inner.trace().real(), s.db);
    ch = preparation_channel(s, xi);
  } else {
    const auto eig = numkit::hermitian_eigen(marginal_h1(s, rho));
    std::vector<CMat> kraus;
    const CMat id2 = CMat::Identity(d2, d2);
    for (Eigen::Index j = 0; j < d1; ++j) {
      const double p = std::max(eig.values(j), 0.0);
      if (p <= 1e-15) continue;
      for (Eigen::Index i = 0; i < d1; ++i) {
        CMat k = CMat::Zero(d1, d1);
        k.col(i) = std::sqrt(p) * eig.vectors.col(j);
        kraus.push_back(numkit::kron(k, id2));
      }
    }
    ch = Channel(std::move(kraus));
  }
  CMat out = kraus_apply(rho, *ch);
  const double din = numkit::trace_norm(marginal_inner(s, out) - inner);
  const double dout = numkit::trace_norm(marginal_outer(s, out) - outer);
  return {std::move(out), std::move(*ch), purify, din, dout};
}

// ---------------------------------------------------------------------------

CMat partial_transpose(const CMat& rho, std::size_t d1, std::size_t d2) {
  const auto n = static_cast<Eigen::Index>(d1 * d2);
  if (rho.rows() != n || rho.cols() != n) throw std::invalid_argument("partial_transpose: dimension mismatch");
  CMat out(n, n);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t a = 0; a < d2; ++a)
      for (std::size_t j = 0; j < d1; ++j)
        for (std::size_t b = 0; b < d2; ++b)
          out(i * d2 + a, j * d2 + b) = rho(i * d2 + b, j * d2 + a);
  return out;
}

double pt_witness(const CMat& rho, std::size_t d1, std::size_t d2) {
  const CMat pt = partial_transpose(rho, d1, d2);
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

EntanglementVerdict is_entangled(const CMat& rho, std::size_t d1, std::size_t d2, double tol) {
  if (d1 * d2 > 6) {
    throw std::invalid_argument("is_entangled: the partial-transpose test is exact only for d1 * d2 <= 6; use pt_witness");
  }
  const double m = pt_witness(rho, d1, d2);
  return {m < -tol, m};
}

GenericityResult genericity_scan(int samples, std::uint64_t seed, ScanMode mode) {
  if (samples < 100) throw std::invalid_argument("genericity_scan: need at least 100 samples");
  GenericityResult res;
  res.samples = samples;
  res.min_schmidt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    numkit::Rng rng(numkit::derive_seed(seed, static_cast<std::uint64_t>(i)));
    bool ent = false;
    if (mode == ScanMode::MixedGinibre) {
      ent = is_entangled(numkit::random_density(rng, 4), 2, 2).entangled;
    } else {
      CVec psi;
      if (mode == ScanMode::HaarPure) {
        psi = numkit::random_unit_vector(rng, 4);
      } else {
        psi = numkit::kron(numkit::random_unit_vector(rng, 2), numkit::random_unit_vector(rng, 2));
      }
      // Schmidt coefficients are the singular values of the 2x2 reshape.
      CMat m(2, 2);
      m << psi(0), psi(1), psi(2), psi(3);
      Eigen::JacobiSVD<CMat> svd(m);
      const double second = svd.singularValues()(1);
      res.min_schmidt = std::min(res.min_schmidt, second);
      ent = second > 1e-10;
    }
    if (ent) ++res.entangled;
  }
  res.fraction = static_cast<double>(res.entangled) / samples;
  return res;
}

IsometryReport isometry_impossibility_check(const CMat& e, numkit::Rng& rng, int candidates) {
  const Eigen::Index n = e.rows();
  if (e.cols() != n || (e * e - e).norm() > 1e-10 || (e - e.adjoint()).norm() > 1e-10) {
    throw std::invalid_argument("isometry_impossibility_check: E must be an orthogonal projector");
  }
  IsometryReport rep;
  rep.n = n;
  rep.rank_e = numkit::numerical_rank(e, 1e-9, 1e-12);
  if (rep.rank_e == n) {
    rep.solution_exists = true;  // W = 1
    return rep;
  }
  // rank(W*W) = rank(W) = rank(WW*) for every W, while W*W = 1 needs rank n
  // and WW* = E has rank < n. Candidates illustrate the equality numerically.
  for (int c = 0; c < candidates; ++c) {
    CMat w = numkit::random_ginibre(rng, n, n);
    if (c % 2 == 1) w = e * w;  // candidates with range inside E H
    const Eigen::Index r1 = numkit::numerical_rank(CMat(w.adjoint() * w), 1e-9, 1e-12);
    const Eigen::Index r2 = numkit::numerical_rank(CMat(w * w.adjoint()), 1e-9, 1e-12);
    rep.ranks_agree = rep.ranks_agree && r1 == r2;
    ++rep.candidates_checked;
  }
  rep.impossibility_certified = rep.rank_e < n && rep.ranks_agree;
  return rep;
}

}  // namespace oalab::channels
