#include "oalab/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace oalab::numkit {

namespace {

std::mutex& tolerance_mutex() {
  static std::mutex m;
  return m;
}

Tolerance& tolerance_storage() {
  static Tolerance t;
  return t;
}

double max_abs_entry(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

Tolerance::Tolerance(double abs, double rel) : abs_(abs), rel_(rel) {
  if (!(abs > 0.0) || !(rel > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

Tolerance default_tolerance() {
  std::lock_guard lock(tolerance_mutex());
  return tolerance_storage();
}

void set_default_tolerance(const Tolerance& tol) {
  std::lock_guard lock(tolerance_mutex());
  tolerance_storage() = tol;
}

// ---------------------------------------------------------------------------

double hermiticity_defect(const CMat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs_entry(m - m.adjoint());
}

bool is_hermitian(const CMat& m, const Tolerance& tol) {
  // Entry-wise slack scales with the matrix magnitude once entries exceed 1.
  return hermiticity_defect(m) <= tol.abs() * std::max(1.0, max_abs_entry(m));
}

HermitianEigen hermitian_eigen(const CMat& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigen: matrix is not square");
  if (!is_hermitian(m, tol)) throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");
  const CMat sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigen: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_eigen_residual(const CMat& h, const HermitianEigen& eig) {
  const double scale = std::max(operator_norm(h), 1e-300);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const CVec v = eig.vectors.col(j);
    worst = std::max(worst, (h * v - eig.values(j) * v).norm());
  }
  return worst / scale;
}

bool SpectralFn::needs_positive() const {
  switch (kind_) {
    case Kind::Log:
    case Kind::ImaginaryPower:
      return true;
    case Kind::Power:
      return t_ < 0.0;
    default:
      return false;
  }
}

bool SpectralFn::needs_nonnegative() const {
  if (kind_ == Kind::Sqrt) return true;
  if (kind_ == Kind::Power) return t_ != std::floor(t_);
  return needs_positive();
}

Complex SpectralFn::operator()(double lambda) const {
  switch (kind_) {
    case Kind::Exp:
      return std::exp(lambda);
    case Kind::Log:
      return std::log(lambda);
    case Kind::Sqrt:
      return std::sqrt(std::max(lambda, 0.0));
    case Kind::Power:
      if (t_ != std::floor(t_)) return std::pow(std::max(lambda, 0.0), t_);
      return std::pow(lambda, t_);
    case Kind::ImaginaryPower:
      return std::exp(kI * (t_ * std::log(lambda)));
    case Kind::Phase:
      return std::exp(kI * (t_ * lambda));
  }
  return {};
}

CMat herm_fn(const HermitianEigen& eig, const SpectralFn& f, const Tolerance& tol) {
  const Eigen::Index n = eig.values.size();
  if (n > 0) {
    const double lo = eig.values.minCoeff();
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    // Absolute: exactly known spectra (diagonal Delta) may span many decades.
    if (f.needs_positive() && lo <= tol.abs()) {
      throw std::domain_error("herm_fn: spectrum is not strictly positive");
    }
    if (f.needs_nonnegative() && lo < -tol.abs() * scale) {
      throw std::domain_error("herm_fn: spectrum has negative eigenvalues");
    }
  }
  CVec fvals(n);
  for (Eigen::Index j = 0; j < n; ++j) fvals(j) = f(eig.values(j));
  return eig.vectors * fvals.asDiagonal() * eig.vectors.adjoint();
}

CMat herm_fn(const CMat& h, const SpectralFn& f, const Tolerance& tol) {
  return herm_fn(hermitian_eigen(h, tol), f, tol);
}

// ---------------------------------------------------------------------------

AntilinearMap::AntilinearMap(CMat conj_matrix) : m_(std::move(conj_matrix)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("AntilinearMap: matrix must be square");
}

AntilinearMap AntilinearMap::conjugation(Eigen::Index n) {
  return AntilinearMap(CMat::Identity(n, n));
}

bool AntilinearMap::is_antiunitary(const Tolerance& tol) const {
  const CMat defect = m_.adjoint() * m_ - CMat::Identity(dim(), dim());
  return max_abs_entry(defect) <= tol.abs() * 10.0;
}

CMat compose(const AntilinearMap& a, const AntilinearMap& b) {
  return a.matrix() * b.matrix().conjugate();
}

AntilinearMap compose(const AntilinearMap& a, const CMat& b) {
  return AntilinearMap(a.matrix() * b.conjugate());
}

AntilinearMap compose(const CMat& a, const AntilinearMap& b) {
  return AntilinearMap(a * b.matrix());
}

CMat sandwich(const AntilinearMap& j, const CMat& x) {
  return j.matrix() * x.conjugate() * j.matrix().conjugate();
}

double distance(const AntilinearMap& a, const AntilinearMap& b) {
  return (a.matrix() - b.matrix()).norm();
}

AntilinearPolar antilinear_polar(const AntilinearMap& s, const Tolerance& tol) {
  const CMat& m = s.matrix();
  if (min_singular_value(m) <= tol.abs()) {
    throw std::invalid_argument("antilinear_polar: map is singular");
  }
  AntilinearPolar out;
  // M = U Sigma V^dagger gives S* S = conj(V) Sigma^2 V^T and J = U V^dagger.
  // Working from the SVD keeps the small end of the spectrum of Delta
  // relatively accurate, which Delta^{-1} needs.
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index n = m.cols();
  RVec values(n);
  CMat vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // JacobiSVD sorts descending; Delta's eigenvalues are stored ascending.
    const Eigen::Index src = n - 1 - i;
    const double sv = svd.singularValues()(src);
    values(i) = sv * sv;
    vectors.col(i) = svd.matrixV().col(src).conjugate();
  }
  out.delta_eig = {values, vectors};
  out.delta = vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
  out.j = AntilinearMap(CMat(svd.matrixU() * svd.matrixV().adjoint()));
  const CMat sqrt_d = herm_fn(out.delta_eig, SpectralFn::sqrt(), tol);
  out.reconstruction_defect = (m - compose(out.j, sqrt_d).matrix()).norm();
  return out;
}

// ---------------------------------------------------------------------------

RMat real_linearize(const CMat& m) {
  const Eigen::Index r = m.rows(), c = m.cols();
  RMat out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

RMat real_linearize(const AntilinearMap& s) {
  // M conj(v): conjugation is diag(1, -1) in the block embedding.
  const CMat& m = s.matrix();
  const Eigen::Index n = m.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.topRightCorner(n, n) = m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  out.bottomRightCorner(n, n) = -m.real();
  return out;
}

RVec realify(const CVec& v) {
  RVec x(2 * v.size());
  x.head(v.size()) = v.real();
  x.tail(v.size()) = v.imag();
  return x;
}

CVec complexify(const RVec& x) {
  const Eigen::Index n = x.size() / 2;
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(x(i), x(n + i));
  return v;
}

RMat realify_columns(const CMat& m) {
  RMat out(2 * m.rows(), m.cols());
  out.topRows(m.rows()) = m.real();
  out.bottomRows(m.rows()) = m.imag();
  return out;
}

CMat complexify_columns(const RMat& x) {
  const Eigen::Index n = x.rows() / 2;
  CMat out(n, x.cols());
  out.real() = x.topRows(n);
  out.imag() = x.bottomRows(n);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Mat>
Eigen::Index rank_impl(const Mat& m, double rel, double abs) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  const double cut = std::max(abs, rel * s(0));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > cut ? 1 : 0;
  return r;
}

template <typename Mat>
Mat basis_impl(const Mat& columns, double rel) {
  if (columns.cols() == 0 || columns.rows() == 0) return Mat(columns.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cut = std::max(1e-14, rel * s(0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

template <typename Mat>
Mat null_impl(const Mat& m, double rel) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(1e-14, rel * (s.size() ? s(0) : 0.0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

template <typename Mat>
double distance_impl(const Mat& a, const Mat& b, double rel) {
  const Mat qa = basis_impl(a, rel);
  const Mat qb = basis_impl(b, rel);
  const Mat pa = qa * qa.adjoint();
  const Mat pb = qb * qb.adjoint();
  return (pa - pb).norm();
}

}  // namespace

Eigen::Index numerical_rank(const CMat& m, double rel, double abs) { return rank_impl(m, rel, abs); }
Eigen::Index numerical_rank(const RMat& m, double rel, double abs) { return rank_impl(m, rel, abs); }
CMat orthonormal_basis(const CMat& columns, double rel) { return basis_impl(columns, rel); }
RMat orthonormal_basis(const RMat& columns, double rel) { return basis_impl(columns, rel); }
CMat null_space(const CMat& m, double rel) { return null_impl(m, rel); }
RMat null_space(const RMat& m, double rel) { return null_impl(m, rel); }
double subspace_distance(const RMat& a, const RMat& b, double rel) { return distance_impl(a, b, rel); }
double subspace_distance(const CMat& a, const CMat& b, double rel) { return distance_impl(a, b, rel); }

double operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double trace_norm(const CMat& m) {
  if (m.rows() == m.cols() && hermiticity_defect(m) <= 1e-14 * std::max(1.0, max_abs_entry(m))) {
    Eigen::SelfAdjointEigenSolver<CMat> solver(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues().sum();
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<std::size_t> grouping_permutation(std::span<const std::size_t> dims, const std::vector<bool>& front) {
  if (dims.size() != front.size()) throw std::invalid_argument("grouping_permutation: size mismatch");
  const std::size_t legs = dims.size();
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  // New leg order: front legs, then the rest.
  std::vector<std::size_t> order;
  for (std::size_t l = 0; l < legs; ++l) if (front[l]) order.push_back(l);
  for (std::size_t l = 0; l < legs; ++l) if (!front[l]) order.push_back(l);

  std::vector<std::size_t> perm(total);
  std::vector<std::size_t> digits(legs);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t l = legs; l-- > 0;) {
      digits[l] = rem % dims[l];
      rem /= dims[l];
    }
    std::size_t out = 0;
    for (std::size_t l : order) out = out * dims[l] + digits[l];
    perm[idx] = out;
  }
  return perm;
}

CMat permute_matrix(const CMat& m, std::span<const std::size_t> perm) {
  CMat out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(perm[i], perm[j]) = m(i, j);
  }
  return out;
}

CVec permute_vector(const CVec& v, std::span<const std::size_t> perm) {
  CVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(perm[i]) = v(i);
  return out;
}

CMat partial_trace(const CMat& rho, std::span<const std::size_t> dims, const std::vector<bool>& keep) {
  std::size_t dk = 1, dr = 1;
  for (std::size_t l = 0; l < dims.size(); ++l) (keep[l] ? dk : dr) *= dims[l];
  if (static_cast<std::size_t>(rho.rows()) != dk * dr || rho.rows() != rho.cols()) {
    throw std::invalid_argument("partial_trace: dimension mismatch");
  }
  const auto perm = grouping_permutation(dims, keep);
  const CMat g = permute_matrix(rho, perm);
  CMat out = CMat::Zero(dk, dk);
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t b = 0; b < dk; ++b) {
      Complex acc{};
      for (std::size_t q = 0; q < dr; ++q) acc += g(a * dr + q, b * dr + q);
      out(a, b) = acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CMat random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMat g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

CVec random_unit_vector(Rng& rng, Eigen::Index n) {
  CVec v = random_ginibre(rng, n, 1).col(0);
  return v / v.norm();
}

CMat haar_unitary(Rng& rng, Eigen::Index n) {
  const CMat g = random_ginibre(rng, n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

CMat random_hermitian(Rng& rng, Eigen::Index n) {
  const CMat g = random_ginibre(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

CMat random_density(Rng& rng, Eigen::Index n) {
  const CMat g = random_ginibre(rng, n, n);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace oalab::numkit
