#pragma once

#include <cmath>

#include <Eigen/Core>

#include "apstruct/ambient.hpp"
#include "apstruct/submanifold.hpp"
#include "apstruct/types.hpp"

// Closed-form expressions for the structure induced by a BlockSwap on the
// enclosing sphere and on a product of spheres. Everything is written in
// terms of a handful of scalar invariants of the point and tangent vector,
// so these serve as an independent cross-check of the projection-based
// engine in induced.hpp.
namespace apstruct::closed_form {

template <typename Scalar>
struct PointInvariants {
  Scalar sigma;  // sum_i nu_i x^i y^i
  Scalar tau;    // sum_j eps_j (z^j)^2
  Scalar r1sq;   // |x|^2
  Scalar r2sq;   // |y|^2
  Scalar r3sq;   // |z|^2
  Scalar rsq;    // r1sq + r2sq
  Scalar Rsq;    // rsq + r3sq
};

template <typename Scalar>
struct TangentInvariants {
  Scalar gamma;  // sum_i nu_i (x^i Y^i + y^i X^i)
  Scalar mu;     // sum_j eps_j z^j Z^j
};

template <typename Scalar, typename Derived>
PointInvariants<Scalar> point_invariants(const BlockSwap<Scalar>& s,
                                         const Eigen::MatrixBase<Derived>& pt) {
  detail::require(pt.size() == s.dim(), "point_invariants: dimension mismatch");
  const Index p = s.p(), q = s.q();
  const auto x = pt.head(p).array();
  const auto y = pt.segment(p, p).array();
  const auto z = pt.tail(q).array();
  PointInvariants<Scalar> inv;
  inv.sigma = (s.nu() * x * y).sum();
  inv.tau = (s.eps() * z.square()).sum();
  inv.r1sq = x.square().sum();
  inv.r2sq = y.square().sum();
  inv.r3sq = z.square().sum();
  inv.rsq = inv.r1sq + inv.r2sq;
  inv.Rsq = inv.rsq + inv.r3sq;
  return inv;
}

template <typename Scalar, typename DerivedP, typename DerivedX>
TangentInvariants<Scalar> tangent_invariants(const BlockSwap<Scalar>& s,
                                             const Eigen::MatrixBase<DerivedP>& pt,
                                             const Eigen::MatrixBase<DerivedX>& tangent) {
  detail::require(pt.size() == s.dim() && tangent.size() == s.dim(),
                  "tangent_invariants: dimension mismatch");
  const Index p = s.p(), q = s.q();
  const auto x = pt.head(p).array();
  const auto y = pt.segment(p, p).array();
  const auto z = pt.tail(q).array();
  const auto tx = tangent.head(p).array();
  const auto ty = tangent.segment(p, p).array();
  const auto tz = tangent.tail(q).array();
  TangentInvariants<Scalar> inv;
  inv.gamma = (s.nu() * (x * ty + y * tx)).sum();
  inv.mu = (s.eps() * z * tz).sum();
  return inv;
}

namespace detail_cf {

template <typename Scalar>
void require_on_sphere(const Hypersphere<Scalar>& sph, const Vec<Scalar>& pt,
                       double tol) {
  apstruct::detail::require(
      static_cast<double>(sph.membership_residual(pt)) <= tol,
      "closed_form: point is not on the sphere");
}

template <typename Scalar>
void require_tangent(const Vec<Scalar>& pt, const TangentVector<Scalar>& x,
                     double tol) {
  using std::abs;
  const Scalar nx = x.coords.norm();
  if (nx == Scalar(0)) return;
  const Scalar res = abs(pt.dot(x.coords)) / (pt.norm() * nx);
  apstruct::detail::require(static_cast<double>(res) <= tol,
                            "closed_form: vector is not tangent");
}

template <typename Scalar>
void require_shape_match(const BlockSwap<Scalar>& s, const ProductOfSpheres<Scalar>& prod) {
  apstruct::detail::require(s.p() == prod.p() && s.q() == prod.q(),
                            "closed_form: block layout does not match the product");
  apstruct::detail::require((s.eps() == s.eps()[0]).all(),
                            "closed_form: product formulas require a constant eps pattern");
}

}  // namespace detail_cf

template <typename Scalar>
struct SphereStructure {
  Scalar a11;
  Vec<Scalar> xi1;
};

// Structure induced on S^{m-1}(R):
//   a11 = (2 sigma + tau) / R^2
//   xi1 = (1/R) (nu.*y - a11 x,  nu.*x - a11 y,  (eps - a11).*z).
template <typename Scalar>
SphereStructure<Scalar> sphere_structure(const BlockSwap<Scalar>& s,
                                         const Hypersphere<Scalar>& sph,
                                         const ManifoldPoint<Scalar>& pt,
                                         double tol = kDefaultMembershipTol) {
  detail::require(s.dim() == sph.ambient_dim(), "closed_form: dimension mismatch");
  detail_cf::require_on_sphere(sph, pt.coords, tol);
  const Index p = s.p(), q = s.q();
  const Scalar R = sph.radius();
  const auto inv = point_invariants(s, pt.coords);
  const auto x = pt.coords.head(p).array();
  const auto y = pt.coords.segment(p, p).array();
  const auto z = pt.coords.tail(q).array();
  SphereStructure<Scalar> out;
  out.a11 = (Scalar(2) * inv.sigma + inv.tau) / (R * R);
  out.xi1.resize(s.dim());
  out.xi1.head(p) = ((s.nu() * y - out.a11 * x) / R).matrix();
  out.xi1.segment(p, p) = ((s.nu() * x - out.a11 * y) / R).matrix();
  out.xi1.tail(q) = (((s.eps() - out.a11) * z) / R).matrix();
  return out;
}

template <typename Scalar>
struct SphereAction {
  Scalar u1;
  Vec<Scalar> px;
};

// Action on a tangent vector of S^{m-1}(R):
//   u1  = (gamma + mu) / R
//   P X = (nu.*Y - (u1/R) x,  nu.*X - (u1/R) y,  eps.*Z - (u1/R) z).
template <typename Scalar>
SphereAction<Scalar> sphere_action(const BlockSwap<Scalar>& s,
                                   const Hypersphere<Scalar>& sph,
                                   const TangentVector<Scalar>& tangent,
                                   double tol = kDefaultMembershipTol) {
  detail::require(s.dim() == sph.ambient_dim(), "closed_form: dimension mismatch");
  detail_cf::require_on_sphere(sph, tangent.base.coords, tol);
  detail_cf::require_tangent(tangent.base.coords, tangent, tol);
  const Index p = s.p(), q = s.q();
  const Scalar R = sph.radius();
  const auto inv = tangent_invariants(s, tangent.base.coords, tangent.coords);
  const auto x = tangent.base.coords.head(p).array();
  const auto y = tangent.base.coords.segment(p, p).array();
  const auto z = tangent.base.coords.tail(q).array();
  const auto tx = tangent.coords.head(p).array();
  const auto ty = tangent.coords.segment(p, p).array();
  const auto tz = tangent.coords.tail(q).array();
  SphereAction<Scalar> out;
  out.u1 = (inv.gamma + inv.mu) / R;
  const Scalar k = out.u1 / R;
  out.px.resize(s.dim());
  out.px.head(p) = (s.nu() * ty - k * x).matrix();
  out.px.segment(p, p) = (s.nu() * tx - k * y).matrix();
  out.px.tail(q) = (s.eps() * tz - k * z).matrix();
  return out;
}

template <typename Scalar>
struct ProductStructure {
  Mat<Scalar> a;  // 2 x 2
  Vec<Scalar> xi1;
  Vec<Scalar> xi2;
};

// Structure induced on S^{2p-1}(r) x S^{q-1}(r3), R^2 = r^2 + r3^2:
//   a11 = (2 sigma + tau) / R^2
//   a12 = ((r3/r) 2 sigma - (r/r3) tau) / R^2
//   a22 = ((r3/r)^2 2 sigma + (r/r3)^2 tau) / R^2
//   xi1 = (1/R) (nu.*y - (2 sigma/r^2) x,  nu.*x - (2 sigma/r^2) y,
//                (eps - tau/r3^2).*z)
//   xi2 = (1/R) ((r3/r)(nu.*y - (2 sigma/r^2) x),
//                (r3/r)(nu.*x - (2 sigma/r^2) y),
//               -(r/r3)(eps - tau/r3^2).*z).
// The eps pattern must be constant for the z block to stay on the factor
// sphere; mixed patterns are rejected.
template <typename Scalar>
ProductStructure<Scalar> product_structure(const BlockSwap<Scalar>& s,
                                           const ProductOfSpheres<Scalar>& prod,
                                           const ManifoldPoint<Scalar>& pt,
                                           double tol = kDefaultMembershipTol) {
  detail_cf::require_shape_match(s, prod);
  detail::require(static_cast<double>(prod.membership_residual(pt.coords)) <= tol,
                  "closed_form: point is not on the product");
  const Index p = s.p(), q = s.q();
  const Scalar r = prod.r(), r3 = prod.r3();
  const Scalar Rsq = r * r + r3 * r3;
  const Scalar R = prod.enclosing_radius();
  const auto inv = point_invariants(s, pt.coords);
  const auto x = pt.coords.head(p).array();
  const auto y = pt.coords.segment(p, p).array();
  const auto z = pt.coords.tail(q).array();
  const Scalar ratio = r3 / r, inv_ratio = r / r3;
  ProductStructure<Scalar> out;
  out.a.resize(2, 2);
  out.a(0, 0) = (Scalar(2) * inv.sigma + inv.tau) / Rsq;
  out.a(0, 1) = (ratio * Scalar(2) * inv.sigma - inv_ratio * inv.tau) / Rsq;
  out.a(1, 0) = out.a(0, 1);
  out.a(1, 1) = (ratio * ratio * Scalar(2) * inv.sigma +
                 inv_ratio * inv_ratio * inv.tau) / Rsq;
  const Scalar kx = Scalar(2) * inv.sigma / (r * r);
  const Scalar kz = inv.tau / (r3 * r3);
  out.xi1.resize(s.dim());
  out.xi1.head(p) = ((s.nu() * y - kx * x) / R).matrix();
  out.xi1.segment(p, p) = ((s.nu() * x - kx * y) / R).matrix();
  out.xi1.tail(q) = (((s.eps() - kz) * z) / R).matrix();
  out.xi2.resize(s.dim());
  out.xi2.head(p) = ratio * out.xi1.head(p);
  out.xi2.segment(p, p) = ratio * out.xi1.segment(p, p);
  out.xi2.tail(q) = -inv_ratio * out.xi1.tail(q);
  return out;
}

template <typename Scalar>
struct ProductAction {
  Scalar u1;
  Scalar u2;
  Vec<Scalar> px;
};

// Action on a tangent vector of the product:
//   u1  = (gamma + mu) / R
//   u2  = ((r3/r) gamma - (r/r3) mu) / R
//   P X = (nu.*Y - (gamma/r^2) x,  nu.*X - (gamma/r^2) y,
//          eps.*Z - (mu/r3^2) z).
template <typename Scalar>
ProductAction<Scalar> product_action(const BlockSwap<Scalar>& s,
                                     const ProductOfSpheres<Scalar>& prod,
                                     const TangentVector<Scalar>& tangent,
                                     double tol = kDefaultMembershipTol) {
  using std::abs;
  detail_cf::require_shape_match(s, prod);
  detail::require(static_cast<double>(prod.membership_residual(tangent.base.coords)) <= tol,
                  "closed_form: point is not on the product");
  const Index p = s.p(), q = s.q();
  // Tangency to the product means tangency to each factor sphere.
  const Scalar nx = tangent.coords.norm();
  if (nx > Scalar(0)) {
    const Scalar t1 = abs(tangent.base.coords.head(2 * p).dot(tangent.coords.head(2 * p))) /
                      (prod.r() * nx);
    const Scalar t2 = abs(tangent.base.coords.tail(q).dot(tangent.coords.tail(q))) /
                      (prod.r3() * nx);
    detail::require(static_cast<double>(t1) <= tol && static_cast<double>(t2) <= tol,
                    "closed_form: vector is not tangent to the product");
  }
  const Scalar r = prod.r(), r3 = prod.r3();
  const Scalar R = prod.enclosing_radius();
  const auto inv = tangent_invariants(s, tangent.base.coords, tangent.coords);
  const auto x = tangent.base.coords.head(p).array();
  const auto y = tangent.base.coords.segment(p, p).array();
  const auto z = tangent.base.coords.tail(q).array();
  const auto tx = tangent.coords.head(p).array();
  const auto ty = tangent.coords.segment(p, p).array();
  const auto tz = tangent.coords.tail(q).array();
  ProductAction<Scalar> out;
  out.u1 = (inv.gamma + inv.mu) / R;
  out.u2 = ((r3 / r) * inv.gamma - (r / r3) * inv.mu) / R;
  const Scalar kx = inv.gamma / (r * r);
  const Scalar kz = inv.mu / (r3 * r3);
  out.px.resize(s.dim());
  out.px.head(p) = (s.nu() * ty - kx * x).matrix();
  out.px.segment(p, p) = (s.nu() * tx - kx * y).matrix();
  out.px.tail(q) = (s.eps() * tz - kz * z).matrix();
  return out;
}

}  // namespace apstruct::closed_form
