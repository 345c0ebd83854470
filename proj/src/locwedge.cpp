#include "oalab/locwedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oalab::locwedge {

using numkit::AntilinearMap;
using std::numbers::pi;

RMat boost_matrix(double s) {
  RMat b(2, 2);
  b << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
  return b;
}

WedgeModel wedge_one_particle(int n, double theta_max, double mass) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("wedge_one_particle: grid size must be even and >= 8");
  if (!(theta_max > 0.0)) throw std::invalid_argument("wedge_one_particle: theta_max must be positive");
  if (!(mass > 0.0)) throw std::invalid_argument("wedge_one_particle: mass must be positive");
  WedgeModel m;
  m.n = n;
  m.theta_max = theta_max;
  m.mass = mass;
  const double h = 2.0 * theta_max / n;
  m.theta.resize(n);
  for (int j = 0; j < n; ++j) m.theta(j) = -theta_max + j * h;

  m.k.resize(n);
  m.fourier.resize(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int c = 0; c < n; ++c) {
    const int q = c - n / 2 + 1;  // -n/2+1 .. n/2, the last one is Nyquist
    const double kq = pi * q / theta_max;
    // The Nyquist mode is real on the grid; giving it k = 0 keeps K purely imaginary.
    m.k(c) = (q == n / 2) ? 0.0 : kq;
    for (int j = 0; j < n; ++j) m.fourier(j, c) = std::polar(norm, kq * m.theta(j));
  }
  m.k_op = m.fourier * m.k.cast<Complex>().asDiagonal() * m.fourier.adjoint();
  m.k_op = 0.5 * (m.k_op + m.k_op.adjoint()).eval();
  m.k_eig = numkit::hermitian_eigen(m.k_op);
  m.j = AntilinearMap::conjugation(n);
  return m;
}

CMat WedgeModel::delta_it(double t) const { return numkit::herm_fn(k_eig, numkit::SpectralFn::phase(-2.0 * pi * t)); }

CMat WedgeModel::delta_power(double z) const {
  CVec d(n);
  for (int c = 0; c < n; ++c) d(c) = std::exp(-2.0 * pi * z * k(c));
  return fourier * d.asDiagonal() * fourier.adjoint();
}

double WedgeModel::conjugation_defect() const { return (numkit::sandwich(j, k_op) + k_op).norm(); }

double derivative_truncation_error(const WedgeModel& m, double width) {
  CVec g(m.n), dg(m.n);
  for (int j = 0; j < m.n; ++j) {
    const double t = m.theta(j);
    g(j) = std::exp(-t * t / (2.0 * width * width));
    dg(j) = -t / (width * width) * g(j);
  }
  return (m.k_op * g + kI * dg).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

CMat RetainedS::delta_is(double s) const { return numkit::herm_fn(delta_eig, numkit::SpectralFn::imaginary_power(s)); }

double RetainedS::involution_defect() const {
  return (numkit::compose(s, s) - CMat::Identity(dim(), dim())).norm();
}

double RetainedS::relative_conjugation_defect() const {
  const CMat d = numkit::herm_fn(delta_eig, numkit::SpectralFn::power(1.0));
  const CMat dinv = numkit::herm_fn(delta_eig, numkit::SpectralFn::power(-1.0));
  return (numkit::sandwich(j, d) - dinv).norm() / dinv.norm();
}

namespace {

// q: n x r retained basis; eig: Delta expressed in the coordinates of q.
RetainedS assemble(const CMat& q, numkit::HermitianEigen eig, const CMat& jm, bool regularized) {
  RetainedS rs;
  rs.basis = q;
  rs.regularized = regularized;
  const CMat jq = jm * q.conjugate();
  const CMat jr = q.adjoint() * jq;
  rs.leakage = (jq - q * jr).norm();
  rs.j = AntilinearMap(jr);
  const CMat root = numkit::herm_fn(eig, numkit::SpectralFn::sqrt());
  rs.s = AntilinearMap(jr * root.conjugate());
  const RVec& v = eig.values;
  rs.condition = v.size() ? std::sqrt(v.maxCoeff() / v.minCoeff()) : 1.0;
  rs.delta_eig = std::move(eig);
  return rs;
}

void check_condition(double cond, double cut, bool regularize) {
  if (cond > cut && !regularize) {
    throw std::invalid_argument("s_operator: cond(Delta^{1/2}) = " + std::to_string(cond) + " exceeds " +
                                std::to_string(cut) + "; set the regularization flag");
  }
}

}  // namespace

RetainedS s_operator(const CMat& delta, const AntilinearMap& j, bool regularize, double cut) {
  if (delta.rows() != j.dim()) throw std::invalid_argument("s_operator: dimension mismatch");
  const auto eig = numkit::hermitian_eigen(delta);
  if (!(eig.values(0) > 0.0)) throw std::invalid_argument("s_operator: Delta must be strictly positive");
  const double cond = std::sqrt(eig.values(eig.values.size() - 1) / eig.values(0));
  check_condition(cond, cut, regularize);
  if (cond <= cut) {
    // Nothing to trim: keep the original coordinates.
    const Eigen::Index n = delta.rows();
    return assemble(CMat::Identity(n, n), eig, j.matrix(), false);
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (std::abs(std::log(eig.values(i))) <= std::log(cut)) keep.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(keep.size());
  CMat q(delta.rows(), r);
  numkit::HermitianEigen er{RVec(r), CMat::Identity(r, r)};
  for (Eigen::Index c = 0; c < r; ++c) {
    q.col(c) = eig.vectors.col(keep[c]);
    er.values(c) = eig.values(keep[c]);
  }
  return assemble(q, std::move(er), j.matrix(), true);
}

RetainedS s_operator(const WedgeModel& m, bool regularize, double cut) {
  const double cond = std::exp(pi * (m.k.maxCoeff() - m.k.minCoeff()));
  check_condition(cond, cut, regularize);
  const bool trim = cond > cut;
  const double kcut = std::log(cut) / (2.0 * pi);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < m.k.size(); ++c) {
    if (!trim || std::abs(m.k(c)) <= kcut) keep.push_back(c);
  }
  // Fourier modes diagonalize Delta, so retained coordinates are mode amplitudes.
  const auto r = static_cast<Eigen::Index>(keep.size());
  CMat q(m.n, r);
  numkit::HermitianEigen er{RVec(r), CMat::Identity(r, r)};
  for (Eigen::Index c = 0; c < r; ++c) {
    q.col(c) = m.fourier.col(keep[c]);
    er.values(c) = std::exp(-2.0 * pi * m.k(keep[c]));
  }
  return assemble(q, std::move(er), m.j.matrix(), trim);
}

// ---------------------------------------------------------------------------

RealSubspace RealSubspace::span(Eigen::Index ambient, const RMat& columns, double rel) {
  if (columns.rows() != 2 * ambient) throw std::invalid_argument("RealSubspace: realified columns must have 2n rows");
  return {ambient, numkit::orthonormal_basis(columns, rel)};
}

RealSubspace RealSubspace::span_complex(const CMat& vectors, double rel) {
  return span(vectors.rows(), numkit::realify_columns(vectors), rel);
}

CMat RealSubspace::complex_basis() const { return numkit::complexify_columns(basis); }

namespace {

RMat symplectic_form(Eigen::Index n) {
  // x^T Om y = Im <x, y> for realified x, y.
  RMat om = RMat::Zero(2 * n, 2 * n);
  om.topRightCorner(n, n) = RMat::Identity(n, n);
  om.bottomLeftCorner(n, n) = -RMat::Identity(n, n);
  return om;
}

}  // namespace

StandardSubspace standard_subspace(const AntilinearMap& s) {
  const Eigen::Index r = s.dim();
  const RMat rl = numkit::real_linearize(s);
  RMat cols = RMat::Identity(2 * r, 2 * r) + rl;
  // Column scaling first: the columns of 1 + S differ in size by cond(S).
  // Columns that cancel to rounding noise (S e_c = -e_c) must not be blown up.
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    const double nc = cols.col(c).norm();
    if (nc <= 1e-8 * (1.0 + rl.col(c).norm())) {
      cols.col(c).setZero();
    } else {
      cols.col(c) /= nc;
    }
  }
  Eigen::JacobiSVD<RMat> svd(cols, Eigen::ComputeThinU);
  const RVec& sv = svd.singularValues();
  StandardSubspace out;
  out.spectral_gap = r < sv.size() ? sv(r) / sv(r - 1) : 0.0;
  if (out.spectral_gap > 1e-6) {
    throw std::runtime_error("standard_subspace: fixed-point space is not half-dimensional (S is not an involution)");
  }
  out.k = {r, svd.matrixU().leftCols(r)};
  for (Eigen::Index c = 0; c < r; ++c) {
    const RVec b = out.k.basis.col(c);
    out.fixed_point_defect = std::max(out.fixed_point_defect, (rl * b - b).norm());
  }
  return out;
}

RealSubspace symplectic_complement(const RealSubspace& k) {
  const Eigen::Index n = k.ambient;
  if (k.real_dim() == 0) return {n, RMat::Identity(2 * n, 2 * n)};
  const RMat rows = k.basis.transpose() * symplectic_form(n);
  return {n, numkit::null_space(rows, 1e-9)};
}

Standardness standardness_check(const RealSubspace& k) {
  const Eigen::Index n = k.ambient;
  const RMat ik = numkit::real_linearize(CMat(kI * CMat::Identity(n, n))) * k.basis;
  RMat both(2 * n, 2 * k.real_dim());
  both << k.basis, ik;
  const Eigen::Index sum = numkit::numerical_rank(both, 1e-9);
  const Eigen::Index inter = 2 * k.real_dim() - sum;
  return {inter, sum, inter == 0 && sum == 2 * n};
}

RealSubspace image(const CMat& linear, const RealSubspace& k) {
  if (linear.cols() != k.ambient) throw std::invalid_argument("image: dimension mismatch");
  return RealSubspace::span(linear.rows(), numkit::real_linearize(linear) * k.basis);
}

RealSubspace image(const AntilinearMap& anti, const RealSubspace& k) {
  if (anti.dim() != k.ambient) throw std::invalid_argument("image: dimension mismatch");
  return RealSubspace::span(anti.matrix().rows(), numkit::real_linearize(anti) * k.basis);
}

double subspace_distance(const RealSubspace& a, const RealSubspace& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subspace_distance: ambient dimension mismatch");
  if (a.real_dim() == 0 || b.real_dim() == 0) return std::sqrt(static_cast<double>(a.real_dim() + b.real_dim()));
  return numkit::subspace_distance(a.basis, b.basis);
}

double duality_check(const RealSubspace& k, const AntilinearMap& j) {
  return subspace_distance(symplectic_complement(k), image(j, k));
}

double flow_invariance(const RetainedS& rs, const RealSubspace& k, const std::vector<double>& s_values) {
  double worst = 0.0;
  for (double s : s_values) worst = std::max(worst, subspace_distance(image(rs.delta_is(s), k), k));
  return worst;
}

ToyModel toy_model(double d) {
  if (!(d > 0.0)) throw std::invalid_argument("toy_model: d must be positive");
  CMat delta = CMat::Zero(2, 2);
  delta(0, 0) = d;
  delta(1, 1) = 1.0 / d;
  CMat swap = CMat::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  return {delta, AntilinearMap(swap)};
}

}  // namespace oalab::locwedge
