#include "oalab/vnalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oalab::vnalg {

using numkit::kron;

std::size_t SubsystemLayout::acting_dim() const {
  std::size_t d = 1;
  for (std::size_t l = 0; l < legs.size(); ++l) if (acting[l]) d *= legs[l];
  return d;
}

std::size_t SubsystemLayout::rest_dim() const {
  std::size_t d = 1;
  for (std::size_t l = 0; l < legs.size(); ++l) if (!acting[l]) d *= legs[l];
  return d;
}

struct OperatorAlgebra::Impl {
  Eigen::Index n = 0;
  CMat basis;  // dense layout: n^2 x dim, orthonormal columns

  std::optional<SubsystemLayout> layout;
  std::vector<std::size_t> inv_perm;  // grouped index -> original index
  std::size_t ds = 1, dr = 1;

  std::size_t orig(std::size_t s, std::size_t q) const { return inv_perm[s * dr + q]; }
};

namespace {

CVec vec(const CMat& x) { return Eigen::Map<const CVec>(x.data(), x.size()); }

CMat unvec(const CVec& v, Eigen::Index n) { return Eigen::Map<const CMat>(v.data(), n, n); }

void check_square(const CMat& x, Eigen::Index n, const char* where) {
  if (x.rows() != n || x.cols() != n) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorAlgebra OperatorAlgebra::from_span(const std::vector<CMat>& spanning, Eigen::Index n) {
  if (n <= 0) throw std::invalid_argument("from_span: ambient dimension must be positive");
  CMat stack(n * n, static_cast<Eigen::Index>(spanning.size()));
  Eigen::Index used = 0;
  for (const CMat& x : spanning) {
    check_square(x, n, "from_span");
    const double nx = x.norm();
    if (nx == 0.0) continue;
    stack.col(used++) = vec(x) / nx;
  }
  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->basis = numkit::orthonormal_basis(CMat(stack.leftCols(used)), 1e-10);
  return OperatorAlgebra(std::move(impl));
}

OperatorAlgebra OperatorAlgebra::subsystem(std::vector<std::size_t> legs, std::vector<bool> acting) {
  if (legs.empty() || legs.size() != acting.size()) {
    throw std::invalid_argument("subsystem: legs and acting mask must be non-empty and of equal length");
  }
  for (std::size_t d : legs) if (d == 0) throw std::invalid_argument("subsystem: zero leg dimension");
  auto impl = std::make_shared<Impl>();
  SubsystemLayout lay{std::move(legs), std::move(acting)};
  impl->ds = lay.acting_dim();
  impl->dr = lay.rest_dim();
  impl->n = static_cast<Eigen::Index>(impl->ds * impl->dr);
  const auto perm = numkit::grouping_permutation(lay.legs, lay.acting);
  impl->inv_perm.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) impl->inv_perm[perm[i]] = i;
  impl->layout = std::move(lay);
  return OperatorAlgebra(std::move(impl));
}

OperatorAlgebra OperatorAlgebra::scalars(Eigen::Index n) {
  return subsystem({static_cast<std::size_t>(n)}, {false});
}

OperatorAlgebra OperatorAlgebra::full(Eigen::Index n) {
  return subsystem({static_cast<std::size_t>(n)}, {true});
}

OperatorAlgebra OperatorAlgebra::left_factor(std::size_t k, std::size_t m) {
  return subsystem({k, m}, {true, false});
}

OperatorAlgebra OperatorAlgebra::right_factor(std::size_t k, std::size_t m) {
  return subsystem({k, m}, {false, true});
}

OperatorAlgebra OperatorAlgebra::diagonal(Eigen::Index n) {
  std::vector<CMat> units;
  for (Eigen::Index i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = 1.0;
    units.push_back(e);
  }
  return from_span(units, n);
}

Eigen::Index OperatorAlgebra::ambient_dim() const { return impl_->n; }

Eigen::Index OperatorAlgebra::dim() const {
  if (impl_->layout) return static_cast<Eigen::Index>(impl_->ds * impl_->ds);
  return impl_->basis.cols();
}

const std::optional<SubsystemLayout>& OperatorAlgebra::layout() const { return impl_->layout; }

CMat OperatorAlgebra::element(Eigen::Index i) const {
  const Impl& m = *impl_;
  if (!m.layout) return unvec(m.basis.col(i), m.n);
  CMat out = CMat::Zero(m.n, m.n);
  const std::size_t r = static_cast<std::size_t>(i) / m.ds, c = static_cast<std::size_t>(i) % m.ds;
  const double w = 1.0 / std::sqrt(static_cast<double>(m.dr));
  for (std::size_t q = 0; q < m.dr; ++q) out(m.orig(r, q), m.orig(c, q)) = w;
  return out;
}

CVec OperatorAlgebra::apply(Eigen::Index i, const CVec& v) const {
  const Impl& m = *impl_;
  if (!m.layout) return element(i) * v;
  CVec out = CVec::Zero(m.n);
  const std::size_t r = static_cast<std::size_t>(i) / m.ds, c = static_cast<std::size_t>(i) % m.ds;
  const double w = 1.0 / std::sqrt(static_cast<double>(m.dr));
  for (std::size_t q = 0; q < m.dr; ++q) out(m.orig(r, q)) = w * v(m.orig(c, q));
  return out;
}

CVec OperatorAlgebra::apply_adjoint(Eigen::Index i, const CVec& v) const {
  const Impl& m = *impl_;
  if (!m.layout) return element(i).adjoint() * v;
  CVec out = CVec::Zero(m.n);
  const std::size_t r = static_cast<std::size_t>(i) / m.ds, c = static_cast<std::size_t>(i) % m.ds;
  const double w = 1.0 / std::sqrt(static_cast<double>(m.dr));
  for (std::size_t q = 0; q < m.dr; ++q) out(m.orig(c, q)) = w * v(m.orig(r, q));
  return out;
}

CVec OperatorAlgebra::coefficients(const CMat& x) const {
  const Impl& m = *impl_;
  check_square(x, m.n, "coefficients");
  if (!m.layout) return m.basis.adjoint() * vec(x);
  CVec out(dim());
  const double w = 1.0 / std::sqrt(static_cast<double>(m.dr));
  for (std::size_t r = 0; r < m.ds; ++r) {
    for (std::size_t c = 0; c < m.ds; ++c) {
      Complex acc{};
      for (std::size_t q = 0; q < m.dr; ++q) acc += x(m.orig(r, q), m.orig(c, q));
      out(r * m.ds + c) = w * acc;
    }
  }
  return out;
}

CMat OperatorAlgebra::from_coefficients(const CVec& coeffs) const {
  const Impl& m = *impl_;
  if (coeffs.size() != dim()) throw std::invalid_argument("from_coefficients: wrong coefficient count");
  if (!m.layout) return unvec(m.basis * coeffs, m.n);
  CMat out = CMat::Zero(m.n, m.n);
  const double w = 1.0 / std::sqrt(static_cast<double>(m.dr));
  for (std::size_t r = 0; r < m.ds; ++r) {
    for (std::size_t c = 0; c < m.ds; ++c) {
      const Complex v = w * coeffs(r * m.ds + c);
      for (std::size_t q = 0; q < m.dr; ++q) out(m.orig(r, q), m.orig(c, q)) = v;
    }
  }
  return out;
}

CMat OperatorAlgebra::project(const CMat& x) const { return from_coefficients(coefficients(x)); }

double OperatorAlgebra::residual(const CMat& x) const { return (x - project(x)).norm(); }

bool OperatorAlgebra::contains(const CMat& x, double rel) const {
  const double nx = x.norm();
  if (nx == 0.0) return true;
  return residual(x) <= rel * nx;
}

CMat OperatorAlgebra::basis_matrix() const {
  const Impl& m = *impl_;
  if (!m.layout) return m.basis;
  if (m.n > 64) throw std::invalid_argument("basis_matrix: subsystem algebra too large to materialize");
  CMat out(m.n * m.n, dim());
  for (Eigen::Index i = 0; i < dim(); ++i) out.col(i) = vec(element(i));
  return out;
}

OperatorAlgebra OperatorAlgebra::densified() const {
  if (!impl_->layout) return *this;
  auto impl = std::make_shared<Impl>();
  impl->n = impl_->n;
  impl->basis = basis_matrix();
  return OperatorAlgebra(std::move(impl));
}

OperatorAlgebra::ClosureDefects OperatorAlgebra::closure_defects() const {
  ClosureDefects d;
  const Eigen::Index n = ambient_dim();
  d.identity = residual(CMat::Identity(n, n)) / std::sqrt(static_cast<double>(n));
  std::vector<CMat> b;
  for (Eigen::Index i = 0; i < dim(); ++i) b.push_back(element(i));
  for (const CMat& x : b) d.adjoint = std::max(d.adjoint, residual(x.adjoint()));
  for (const CMat& x : b) {
    for (const CMat& y : b) {
      const CMat p = x * y;
      const double np = p.norm();
      if (np > 0.0) d.product = std::max(d.product, residual(p) / np);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------

OperatorAlgebra tensor(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.layout() && b.layout()) {
    SubsystemLayout la = *a.layout();
    const SubsystemLayout& lb = *b.layout();
    la.legs.insert(la.legs.end(), lb.legs.begin(), lb.legs.end());
    la.acting.insert(la.acting.end(), lb.acting.begin(), lb.acting.end());
    return OperatorAlgebra::subsystem(la.legs, la.acting);
  }
  std::vector<CMat> prods;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const CMat x = a.element(i);
    for (Eigen::Index j = 0; j < b.dim(); ++j) prods.push_back(kron(x, b.element(j)));
  }
  return OperatorAlgebra::from_span(prods, a.ambient_dim() * b.ambient_dim());
}

double containment_residual(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("containment_residual: dimension mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) worst = std::max(worst, b.residual(a.element(i)));
  return worst;
}

double span_distance(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

AlgebraElement AlgebraElement::from_matrix(const OperatorAlgebra& a, const CMat& x) {
  if (!a.contains(x)) throw std::invalid_argument("AlgebraElement: matrix is not in the algebra");
  return {a, a.coefficients(x)};
}

// ---------------------------------------------------------------------------

OperatorAlgebra vn_closure(const std::vector<CMat>& generators, Eigen::Index n) {
  for (const CMat& g : generators) check_square(g, n, "vn_closure");
  const Eigen::Index cap = n * n;
  CMat q(n * n, 0);
  std::vector<CMat> elems;

  auto add = [&](const CMat& x) {
    CVec v = vec(x);
    const double nv = v.norm();
    if (nv == 0.0) return;
    CVec r = v - q * (q.adjoint() * v);
    r -= q * (q.adjoint() * r);
    const double nr = r.norm();
    if (nr <= kMembershipThreshold * nv) return;
    if (q.cols() >= cap) throw std::logic_error("vn_closure: basis exceeded n^2 elements");
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = r / nr;
    elems.push_back(unvec(q.col(q.cols() - 1), n));
  };

  add(CMat::Identity(n, n));
  for (const CMat& g : generators) {
    add(g);
    add(g.adjoint());
  }
  for (std::size_t p = 0; p < elems.size(); ++p) {
    const CMat bp = elems[p];
    add(bp.adjoint());
    for (std::size_t j = 0; j <= p; ++j) {
      const CMat bj = elems[j];
      add(bp * bj);
      add(bj * bp);
    }
  }
  return OperatorAlgebra::from_span(elems, n);
}

namespace {

OperatorAlgebra null_space_commutant(const std::vector<CMat>& elems, Eigen::Index n) {
  if (n > kDenseCommutantCap) {
    throw std::invalid_argument("commutant: dense computation limited to ambient dim " +
                                std::to_string(kDenseCommutantCap));
  }
  // Gram matrix of the stacked commutator maps X -> [b, X] in column-major vec form.
  const CMat id = CMat::Identity(n, n);
  CMat sum_left = CMat::Zero(n, n), sum_right = CMat::Zero(n, n);
  CMat gram = CMat::Zero(n * n, n * n);
  for (const CMat& b : elems) {
    sum_left += b.adjoint() * b;
    sum_right += b.conjugate() * b.transpose();
    gram -= kron(CMat(b.transpose()), CMat(b.adjoint())) + kron(CMat(b.conjugate()), b);
  }
  gram += kron(id, sum_left) + kron(sum_right, id);
  gram = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(gram);
  const RVec& ev = solver.eigenvalues();
  const double cut = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<CMat> null_elems;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= cut) null_elems.push_back(unvec(solver.eigenvectors().col(i), n));
  }
  return OperatorAlgebra::from_span(null_elems, n);
}

}  // namespace

OperatorAlgebra commutant(const OperatorAlgebra& a, CommutantMethod method) {
  if (a.layout() && method == CommutantMethod::Auto) {
    SubsystemLayout lay = *a.layout();
    for (std::size_t l = 0; l < lay.acting.size(); ++l) lay.acting[l] = !lay.acting[l];
    return OperatorAlgebra::subsystem(lay.legs, lay.acting);
  }
  std::vector<CMat> elems;
  for (Eigen::Index i = 0; i < a.dim(); ++i) elems.push_back(a.element(i));
  return null_space_commutant(elems, a.ambient_dim());
}

OperatorAlgebra commutant_of(const std::vector<CMat>& generators, Eigen::Index n) {
  std::vector<CMat> elems;
  for (const CMat& g : generators) {
    check_square(g, n, "commutant_of");
    elems.push_back(g);
    elems.push_back(g.adjoint());
  }
  return null_space_commutant(elems, n);
}

OperatorAlgebra intersection(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("intersection: dimension mismatch");
  const CMat qa = a.basis_matrix();
  const CMat qb = b.basis_matrix();
  CMat stacked(qa.rows(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const CMat nul = numkit::null_space(stacked, 1e-8);
  std::vector<CMat> elems;
  for (Eigen::Index k = 0; k < nul.cols(); ++k) {
    elems.push_back(unvec(qa * nul.col(k).head(qa.cols()), a.ambient_dim()));
  }
  return OperatorAlgebra::from_span(elems, a.ambient_dim());
}

CenterInfo center_and_factor(const OperatorAlgebra& a) {
  if (a.layout()) {
    // B(H_S) (x) 1 always has trivial center.
    return {OperatorAlgebra::scalars(a.ambient_dim()), true};
  }
  OperatorAlgebra z = intersection(a, commutant(a));
  const bool factor = z.dim() == 1;
  return {std::move(z), factor};
}

Eigen::Index compression_dim(const OperatorAlgebra& a, const CMat& e) {
  CMat stack(a.ambient_dim() * a.ambient_dim(), a.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) stack.col(i) = vec(e * a.element(i) * e);
  return numkit::numerical_rank(stack, 1e-9, 1e-12);
}

CMat minimal_projector(const OperatorAlgebra& a) {
  const Eigen::Index n = a.ambient_dim();
  if (a.layout()) {
    return std::sqrt(static_cast<double>(a.layout()->rest_dim())) * a.element(0);
  }
  std::vector<CMat> hermitians;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    const CMat b = a.element(i);
    hermitians.push_back(b + b.adjoint());
    hermitians.push_back(kI * (b - b.adjoint()));
  }

  CMat e = CMat::Identity(n, n);
  bool refined = true;
  while (refined) {
    refined = false;
    Eigen::SelfAdjointEigenSolver<CMat> es(e);
    std::vector<Eigen::Index> range_cols;
    for (Eigen::Index i = 0; i < n; ++i) if (es.eigenvalues()(i) > 0.5) range_cols.push_back(i);
    CMat q(n, static_cast<Eigen::Index>(range_cols.size()));
    for (std::size_t c = 0; c < range_cols.size(); ++c) q.col(c) = es.eigenvectors().col(range_cols[c]);
    if (q.cols() <= 1) break;

    for (const CMat& h : hermitians) {
      const CMat hr = q.adjoint() * h * q;
      Eigen::SelfAdjointEigenSolver<CMat> hs(0.5 * (hr + hr.adjoint()));
      const RVec& w = hs.eigenvalues();
      const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
      if (w(w.size() - 1) - w(0) <= 1e-8 * scale) continue;  // h compresses to a multiple of E

      // Spectral projectors of the compression, clustered by eigenvalue.
      std::vector<CMat> candidates;
      Eigen::Index start = 0;
      for (Eigen::Index i = 1; i <= w.size(); ++i) {
        if (i == w.size() || w(i) - w(i - 1) > 1e-8 * scale) {
          const CMat v = q * hs.eigenvectors().middleCols(start, i - start);
          candidates.push_back(v * v.adjoint());
          start = i;
        }
      }
      // Deterministic choice: largest weight on e_1, ties go to the lowest eigenvalue.
      std::size_t pick = 0;
      for (std::size_t c = 1; c < candidates.size(); ++c) {
        if (candidates[c](0, 0).real() > candidates[pick](0, 0).real() + 1e-9) pick = c;
      }
      e = candidates[pick];
      refined = true;
      break;
    }
  }
  if (compression_dim(a, e) != 1) throw std::logic_error("minimal_projector: refinement did not reach a minimal projector");
  return e;
}

CMat orbit_matrix(const OperatorAlgebra& a, const CVec& omega) {
  if (omega.size() != a.ambient_dim()) throw std::invalid_argument("orbit_matrix: dimension mismatch");
  CMat v(a.ambient_dim(), a.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) v.col(i) = a.apply(i, omega);
  return v;
}

CyclicSeparating cyclic_separating(const OperatorAlgebra& a, const CVec& omega) {
  if (omega.norm() == 0.0) throw std::invalid_argument("cyclic_separating: zero vector");
  const CMat v = orbit_matrix(a, omega);
  const Eigen::Index r = numkit::numerical_rank(v, 1e-9);
  return {r == a.ambient_dim(), r == a.dim(), r};
}

// ---------------------------------------------------------------------------

CMat GnsRepresentation::represent(const CMat& x) const {
  if (!source.contains(x)) throw std::invalid_argument("GnsRepresentation::represent: element outside the algebra");
  const Eigen::Index k = source.ambient_dim();
  const Eigen::Index r = dim();
  std::vector<CMat> u(r);
  for (Eigen::Index s = 0; s < r; ++s) u[s] = unvec(classes.col(s), k);
  CMat out(r, r);
  for (Eigen::Index s = 0; s < r; ++s) {
    const CMat row = rho * u[s].adjoint() * x;
    for (Eigen::Index t = 0; t < r; ++t) out(s, t) = (row * u[t]).trace();
  }
  return out;
}

OperatorAlgebra GnsRepresentation::represented_algebra() const {
  std::vector<CMat> images;
  for (Eigen::Index i = 0; i < source.dim(); ++i) images.push_back(represent(source.element(i)));
  return OperatorAlgebra::from_span(images, dim());
}

GnsRepresentation gns(const OperatorAlgebra& a, const CMat& rho, const numkit::Tolerance& tol) {
  const Eigen::Index k = a.ambient_dim();
  check_square(rho, k, "gns");
  if (!numkit::is_hermitian(rho, tol)) throw std::invalid_argument("gns: state is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> rs(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (rs.eigenvalues().minCoeff() < -tol.abs()) throw std::invalid_argument("gns: state is not positive");
  if (std::abs(rho.trace() - 1.0) > 10.0 * tol.abs()) throw std::invalid_argument("gns: state is not normalized");

  const Eigen::Index d = a.dim();
  std::vector<CMat> b(d);
  for (Eigen::Index i = 0; i < d; ++i) b[i] = a.element(i);
  CMat gram(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const CMat left = rho * b[i].adjoint();
    for (Eigen::Index j = 0; j < d; ++j) gram(i, j) = (left * b[j]).trace();
  }
  gram = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> gs(gram);
  const RVec& g = gs.eigenvalues();
  const double cut = 1e-10 * std::max(g.maxCoeff(), 1e-300);

  GnsRepresentation rep{a, rho, CMat(k * k, 0), 0, CVec()};
  std::vector<CVec> cols;
  for (Eigen::Index r = 0; r < d; ++r) {
    if (g(r) <= cut) continue;
    CMat u = CMat::Zero(k, k);
    for (Eigen::Index j = 0; j < d; ++j) u += gs.eigenvectors()(j, r) * b[j];
    u /= std::sqrt(g(r));
    cols.push_back(vec(u));
  }
  rep.classes.resize(k * k, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) rep.classes.col(c) = cols[c];
  rep.null_dim = d - rep.classes.cols();
  rep.omega.resize(rep.classes.cols());
  for (Eigen::Index r = 0; r < rep.classes.cols(); ++r) {
    rep.omega(r) = (rho * unvec(rep.classes.col(r), k).adjoint()).trace();
  }
  return rep;
}

// ---------------------------------------------------------------------------

AlgebraArchive serialize(const OperatorAlgebra& a) {
  AlgebraArchive out;
  std::ostringstream csv;
  nlohmann::json refs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    numkit::write_csv(csv, a.element(i));
    refs.push_back({{"block", i}});
  }
  out.manifest = {{"ambient_dim", a.ambient_dim()}, {"basis", refs}};
  if (a.layout()) {
    out.manifest["layout"] = {{"legs", a.layout()->legs}, {"acting", a.layout()->acting}};
  }
  out.csv = csv.str();
  return out;
}

OperatorAlgebra deserialize(const AlgebraArchive& archive) {
  const auto n = archive.manifest.at("ambient_dim").get<Eigen::Index>();
  if (archive.manifest.contains("layout")) {
    const auto& lay = archive.manifest["layout"];
    return OperatorAlgebra::subsystem(lay.at("legs").get<std::vector<std::size_t>>(),
                                      lay.at("acting").get<std::vector<bool>>());
  }
  std::istringstream in(archive.csv);
  std::vector<CMat> blocks;
  while (in.peek() != std::char_traits<char>::eof()) blocks.push_back(numkit::read_csv(in));
  std::vector<CMat> basis;
  for (const auto& ref : archive.manifest.at("basis")) {
    const auto idx = ref.at("block").get<std::size_t>();
    if (idx >= blocks.size()) throw std::runtime_error("deserialize: block reference out of range");
    basis.push_back(blocks[idx]);
  }
  return OperatorAlgebra::from_span(basis, n);
}

}  // namespace oalab::vnalg
