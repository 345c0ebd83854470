#include "oalab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oalab::fock {

Eigen::Index fock_dimension(int d, int n_max) {
  // C(k + d - 1, k) computed incrementally.
  Eigen::Index total = 0;
  double term = 1.0;
  for (int k = 0; k <= n_max; ++k) {
    if (k > 0) term = term * (k + d - 1) / k;
    total += static_cast<Eigen::Index>(std::llround(term));
  }
  return total;
}

FockSpace::FockSpace(int d, int n_max, Eigen::Index cap) : d_(d), n_max_(n_max) {
  if (d < 1) throw std::invalid_argument("FockSpace: one-particle dimension must be >= 1");
  if (n_max < 1) throw std::invalid_argument("FockSpace: cutoff must be >= 1");
  const Eigen::Index total = fock_dimension(d, n_max);
  if (total > cap) {
    throw std::invalid_argument("FockSpace: total dimension " + std::to_string(total) + " exceeds cap " +
                                std::to_string(cap));
  }
  // Sector by sector, occupations in lexicographically decreasing order.
  std::vector<int> occ(static_cast<std::size_t>(d), 0);
  std::function<void(int, int, int)> fill = [&](int mode, int left, int total_n) {
    if (mode == d - 1) {
      occ[static_cast<std::size_t>(mode)] = left;
      basis_.push_back(occ);
      sector_.push_back(total_n);
      return;
    }
    for (int c = left; c >= 0; --c) {
      occ[static_cast<std::size_t>(mode)] = c;
      fill(mode + 1, left - c, total_n);
    }
  };
  for (int s = 0; s <= n_max; ++s) fill(0, s, s);

  const Eigen::Index n = dim();
  create_.assign(static_cast<std::size_t>(d), CMat::Zero(n, n));
  for (Eigen::Index col = 0; col < n; ++col) {
    if (sector_[static_cast<std::size_t>(col)] == n_max) continue;
    for (int i = 0; i < d; ++i) {
      std::vector<int> up = basis_[static_cast<std::size_t>(col)];
      const int before = up[static_cast<std::size_t>(i)]++;
      create_[static_cast<std::size_t>(i)](index_of(up), col) = std::sqrt(static_cast<double>(before + 1));
    }
  }
}

Eigen::Index FockSpace::prefix_dim(int s) const {
  if (s < 0) return 0;
  return fock_dimension(d_, std::min(s, n_max_));
}

Eigen::Index FockSpace::index_of(const std::vector<int>& occ) const {
  // The basis is small; a binary search would need a custom order, a scan is enough.
  int total = 0;
  for (int c : occ) total += c;
  if (static_cast<int>(occ.size()) != d_ || total > n_max_) return -1;
  for (Eigen::Index i = prefix_dim(total - 1); i < prefix_dim(total); ++i) {
    if (basis_[static_cast<std::size_t>(i)] == occ) return i;
  }
  return -1;
}

CMat FockSpace::a_dag(const CVec& psi) const {
  if (psi.size() != d_) throw std::invalid_argument("FockSpace: one-particle vector has wrong dimension");
  CMat out = CMat::Zero(dim(), dim());
  for (int i = 0; i < d_; ++i) out += psi(i) * create_[static_cast<std::size_t>(i)];
  return out;
}

CMat FockSpace::a(const CVec& psi) const { return a_dag(psi).adjoint(); }

CVec FockSpace::vacuum() const {
  CVec v = CVec::Zero(dim());
  v(0) = 1.0;
  return v;
}

FieldOperator field_operator(const FockSpace& f, const CVec& psi) {
  if (psi.size() != f.one_particle_dim()) throw std::invalid_argument("field_operator: wrong dimension");
  if (psi.norm() == 0.0) throw std::invalid_argument("field_operator: zero vector");
  const CMat ad = f.a_dag(psi);
  return {psi, (ad + ad.adjoint()) / std::sqrt(2.0)};
}

namespace {

// Phi(psi) without the zero-vector check (psi = 0 is a valid Weyl argument).
CMat phi_matrix(const FockSpace& f, const CVec& psi) {
  const CMat ad = f.a_dag(psi);
  return (ad + ad.adjoint()) / std::sqrt(2.0);
}

double im_inner(const CVec& psi, const CVec& phi) { return psi.dot(phi).imag(); }

void need_cutoff(const FockSpace& f) {
  if (f.cutoff() < 2) throw std::invalid_argument("Fock checks need n_max >= 2");
}

}  // namespace

double restricted_norm(const FockSpace& f, const CMat& x, int s) {
  const Eigen::Index p = f.prefix_dim(s);
  return numkit::operator_norm(CMat(x.topLeftCorner(p, p)));
}

double ccr_defect(const FockSpace& f, const CVec& psi, const CVec& phi) {
  need_cutoff(f);
  const CMat a = phi_matrix(f, psi), b = phi_matrix(f, phi);
  const CMat c = a * b - b * a - kI * im_inner(psi, phi) * CMat::Identity(f.dim(), f.dim());
  return restricted_norm(f, c, f.cutoff() - 2);
}

double commutator_norm(const FockSpace& f, const CVec& psi, const CVec& phi) {
  need_cutoff(f);
  const CMat a = phi_matrix(f, psi), b = phi_matrix(f, phi);
  return restricted_norm(f, a * b - b * a, f.cutoff() - 2);
}

double locality_check(const FockSpace& f, const locwedge::RealSubspace& k, const locwedge::RealSubspace& kp) {
  if (k.ambient != f.one_particle_dim() || kp.ambient != f.one_particle_dim()) {
    throw std::invalid_argument("locality_check: subspaces do not live in the one-particle space");
  }
  const CMat kb = k.complex_basis(), kpb = kp.complex_basis();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < kb.cols(); ++i)
    for (Eigen::Index j = 0; j < kpb.cols(); ++j)
      worst = std::max(worst, commutator_norm(f, kb.col(i), kpb.col(j)));
  return worst;
}

CMat weyl_operator(const FockSpace& f, const CVec& psi) {
  if (psi.size() != f.one_particle_dim()) throw std::invalid_argument("weyl_operator: wrong dimension");
  return numkit::herm_fn(phi_matrix(f, psi), numkit::SpectralFn::phase(1.0));
}

double weyl_unitarity_defect(const FockSpace& f, const CMat& w) {
  need_cutoff(f);
  return restricted_norm(f, w * w.adjoint() - CMat::Identity(f.dim(), f.dim()), f.cutoff() - 2);
}

double weyl_relation_defect(const FockSpace& f, const CVec& psi, const CVec& phi, int in_sector, int out_sector) {
  const CMat lhs = weyl_operator(f, psi) * weyl_operator(f, phi);
  const CMat rhs = std::exp(-0.5 * kI * im_inner(psi, phi)) * weyl_operator(f, psi + phi);
  const CMat diff = lhs - rhs;
  const Eigen::Index pin = f.prefix_dim(in_sector), pout = f.prefix_dim(out_sector);
  return numkit::operator_norm(CMat(diff.topLeftCorner(pout, pin)));
}

std::vector<Eigen::Index> cyclicity_ranks(const FockSpace& f, const locwedge::RealSubspace& k, int degree) {
  if (degree < 0 || degree > f.cutoff()) throw std::invalid_argument("cyclicity_rank: degree must lie in [0, n_max]");
  if (k.ambient != f.one_particle_dim()) throw std::invalid_argument("cyclicity_rank: dimension mismatch");
  const CMat kb = k.complex_basis();
  std::vector<CMat> fields;
  for (Eigen::Index i = 0; i < kb.cols(); ++i) fields.push_back(phi_matrix(f, kb.col(i)));

  CMat span = f.vacuum();
  std::vector<Eigen::Index> ranks{1};
  for (int level = 1; level <= degree; ++level) {
    CMat grown(f.dim(), span.cols() * (1 + static_cast<Eigen::Index>(fields.size())));
    grown.leftCols(span.cols()) = span;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      grown.middleCols(span.cols() * static_cast<Eigen::Index>(j + 1), span.cols()) = fields[j] * span;
    }
    span = numkit::orthonormal_basis(grown, 1e-10);
    ranks.push_back(span.cols());
  }
  return ranks;
}

Eigen::Index cyclicity_rank(const FockSpace& f, const locwedge::RealSubspace& k, int degree) {
  return cyclicity_ranks(f, k, degree).back();
}

CMat second_quantize(const FockSpace& f, const CMat& u) {
  const Eigen::Index d = f.one_particle_dim();
  if (u.rows() != d || u.cols() != d) throw std::invalid_argument("second_quantize: wrong dimension");
  if ((u.adjoint() * u - CMat::Identity(d, d)).norm() > 1e-9) {
    throw std::invalid_argument("second_quantize: operator is not unitary");
  }
  // Gamma(U) a_j^dagger Gamma(U)^dagger = sum_i U_ij a_i^dagger.
  std::vector<CMat> b;
  for (Eigen::Index j = 0; j < d; ++j) b.push_back(f.a_dag(u.col(j)));
  CMat g(f.dim(), f.dim());
  for (Eigen::Index col = 0; col < f.dim(); ++col) {
    CVec v = f.vacuum();
    double norm = 1.0;
    const auto& occ = f.basis()[static_cast<std::size_t>(col)];
    for (Eigen::Index j = 0; j < d; ++j) {
      for (int c = 0; c < occ[static_cast<std::size_t>(j)]; ++c) {
        v = b[static_cast<std::size_t>(j)] * v;
        norm *= std::sqrt(static_cast<double>(c + 1));
      }
    }
    g.col(col) = v / norm;
  }
  return g;
}

double covariance_defect(const FockSpace& f, const CMat& u, const CVec& psi) {
  need_cutoff(f);
  const CMat g = second_quantize(f, u);
  const CMat diff = g * phi_matrix(f, psi) * g.adjoint() - phi_matrix(f, u * psi);
  return restricted_norm(f, diff, f.cutoff() - 2);
}

}  // namespace oalab::fock
