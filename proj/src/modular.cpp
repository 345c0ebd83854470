#include "oalab/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oalab::modular {

using numkit::AntilinearMap;
using numkit::SpectralFn;

CMat ModularData::delta_it(double t) const { return numkit::herm_fn(delta_eig, SpectralFn::imaginary_power(t)); }

CMat ModularData::delta_power(double p) const { return numkit::herm_fn(delta_eig, SpectralFn::power(p)); }

ModularData tomita(const vnalg::OperatorAlgebra& a, const CVec& omega, const numkit::Tolerance& tol) {
  if (omega.size() != a.ambient_dim()) throw std::invalid_argument("tomita: vector has wrong dimension");
  const auto cs = vnalg::cyclic_separating(a, omega);
  if (!cs.is_cyclic || !cs.is_separating) {
    std::string why;
    if (!cs.is_cyclic) why += " not cyclic";
    if (!cs.is_separating) why += std::string(why.empty() ? "" : " and") + " not separating";
    throw std::invalid_argument("tomita: vector is" + why + " (orbit rank " + std::to_string(cs.orbit_rank) + ")");
  }

  const Eigen::Index n = a.ambient_dim();
  const Eigen::Index d = a.dim();
  CMat v(n, 2 * d), w(n, 2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const CVec bo = a.apply(i, omega);
    const CVec bso = a.apply_adjoint(i, omega);
    // S(b Omega) = b* Omega and, by antilinearity, S(i b Omega) = -i b* Omega.
    v.col(i) = bo;
    w.col(i) = bso;
    v.col(d + i) = kI * bo;
    w.col(d + i) = -kI * bso;
  }
  const RMat x = numkit::realify_columns(v);
  const RMat y = numkit::realify_columns(w);
  // Real-linear S with S x = y, solved in least squares form x^T S^T = y^T.
  Eigen::CompleteOrthogonalDecomposition<RMat> cod(x.transpose());
  const RMat r = cod.solve(y.transpose()).transpose();

  ModularData md{AntilinearMap(), CMat(), {}, AntilinearMap(), a, omega, 0.0};
  md.consistency_residual = (r * x - y).norm() / std::max(y.norm(), 1e-300);
  CMat m(n, n);
  m.real() = r.topLeftCorner(n, n);
  m.imag() = r.bottomLeftCorner(n, n);
  md.s = AntilinearMap(m);

  auto polar = numkit::antilinear_polar(md.s, tol);
  md.j = polar.j;
  md.delta = polar.delta;
  md.delta_eig = polar.delta_eig;
  return md;
}

ModularDefects invariant_defects(const ModularData& md) {
  const Eigen::Index n = md.delta.rows();
  const CMat id = CMat::Identity(n, n);
  ModularDefects d;
  const CMat root = md.delta_power(0.5);
  d.polar = numkit::distance(md.s, numkit::compose(md.j, root));
  d.s_squared = (numkit::compose(md.s, md.s) - id).norm();
  d.j_squared = (numkit::compose(md.j, md.j) - id).norm();
  d.j_delta_j = (numkit::sandwich(md.j, md.delta) - md.delta_power(-1.0)).norm();
  d.delta_omega = (md.delta * md.omega - md.omega).norm();
  d.s_omega = (md.s.apply(md.omega) - md.omega).norm();
  return d;
}

CMat modular_flow(const ModularData& md, const CMat& x, double t) {
  if (!md.algebra.contains(x)) throw std::invalid_argument("modular_flow: element outside the algebra");
  const CMat u = md.delta_it(t);
  return u * x * u.adjoint();
}

double kms_defect_with(const ModularData& md, const CMat& d, const CMat& x, const CMat& y) {
  const CVec& o = md.omega;
  const Complex lhs = o.dot(x * (y * o));
  const Complex rhs = o.dot(y * (d * (x * o)));
  return std::abs(lhs - rhs);
}

double kms_defect(const ModularData& md, const CMat& x, const CMat& y) { return kms_defect_with(md, md.delta, x, y); }

CommutantImage commutant_map_check(const ModularData& md, const CMat& x) {
  CommutantImage out;
  out.image = numkit::sandwich(md.j, x);
  const double ni = out.image.norm();
  out.residual = ni == 0.0 ? 0.0 : vnalg::commutant(md.algebra).residual(out.image) / ni;
  return out;
}

double commutant_map_span_defect(const ModularData& md) {
  std::vector<CMat> images;
  for (Eigen::Index i = 0; i < md.algebra.dim(); ++i) images.push_back(numkit::sandwich(md.j, md.algebra.element(i)));
  const auto jaj = vnalg::OperatorAlgebra::from_span(images, md.algebra.ambient_dim());
  return vnalg::span_distance(jaj, vnalg::commutant(md.algebra));
}

CVec purify(const CMat& rho, std::size_t m, const numkit::Tolerance& tol) {
  const auto eig = numkit::hermitian_eigen(rho, tol);
  if (eig.values.minCoeff() < -tol.abs()) throw std::invalid_argument("purify: state is not positive");
  if (std::abs(rho.trace() - 1.0) > 10.0 * tol.abs()) throw std::invalid_argument("purify: state is not normalized");
  const Eigen::Index k = rho.rows();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < k; ++i) if (eig.values(i) > tol.abs()) ++rank;
  if (m < rank) {
    throw std::invalid_argument("purify: purifying space of dim " + std::to_string(m) + " is smaller than rank " +
                                std::to_string(rank));
  }
  CVec psi = CVec::Zero(k * static_cast<Eigen::Index>(m));
  for (std::size_t slot = 0; slot < rank; ++slot) {
    const Eigen::Index i = k - 1 - static_cast<Eigen::Index>(slot);  // descending weights
    CVec u = eig.vectors.col(i);
    Eigen::Index big = 0;
    u.cwiseAbs().maxCoeff(&big);
    u *= std::conj(u(big)) / std::abs(u(big));
    const double w = std::sqrt(std::max(eig.values(i), 0.0));
    for (Eigen::Index r = 0; r < k; ++r) psi(r * static_cast<Eigen::Index>(m) + static_cast<Eigen::Index>(slot)) = w * u(r);
  }
  return psi;
}

std::vector<double> ratio_multiset(const RVec& p) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) out.push_back(p(i) / p(j));
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json report(const ModularData& md, double max_kms, double flow_residual, double commutant_residual) {
  std::vector<double> spec(md.spectrum().data(), md.spectrum().data() + md.spectrum().size());
  return {{"dims", {md.algebra.ambient_dim(), md.algebra.dim()}},
          {"delta_spectrum", spec},
          {"max_kms_defect", max_kms},
          {"flow_residual", flow_residual},
          {"commutant_map_residual", commutant_residual}};
}

}  // namespace oalab::modular
