#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include <Eigen/Core>

#include "apstruct/induced.hpp"
#include "apstruct/types.hpp"

// Residual evaluators for the algebraic identities an induced structure
// satisfies when the ambient structure squares to +Id. Each identity has a
// stable id; the *_needs_tangent tables say whether an identity depends on
// the probe vectors or on the point alone, which drives sample accounting in
// the verification suite and in the reproduction helpers.
namespace apstruct {

inline constexpr std::array<std::string_view, 7> kCodim1IdentityIds = {
    "c1.p_squared",   "c1.u_after_p",      "c1.u_on_xi", "c1.p_on_xi",
    "c1.u_via_metric", "c1.p_self_adjoint", "c1.p_gram",
};

inline constexpr std::array<bool, 7> kCodim1NeedsTangent = {
    true, true, false, false, true, true, true,
};

inline constexpr std::array<std::string_view, 13> kCodim2IdentityIds = {
    "c2.p_squared",     "c2.u1_after_p",   "c2.u2_after_p",
    "c2.u1_on_xi1",     "c2.u2_on_xi1",    "c2.u1_on_xi2",
    "c2.u2_on_xi2",     "c2.p_on_xi1",     "c2.p_on_xi2",
    "c2.u1_via_metric", "c2.u2_via_metric", "c2.p_self_adjoint",
    "c2.p_gram",
};

inline constexpr std::array<bool, 13> kCodim2NeedsTangent = {
    true, true, true, false, false, false, false,
    false, false, true, true, true, true,
};

namespace detail {

template <typename Scalar>
Scalar rel(Scalar err, Scalar scale) {
  return err / std::max(Scalar(1), scale);
}

}  // namespace detail

// Residuals of the seven codimension-one identities at a probe pair (X, Y),
// indexed like kCodim1IdentityIds. The point-level identities (u_on_xi,
// p_on_xi) ignore the probes. All residuals are relative to
// max(1, operand norms).
//
//   P(P X)     = X - u1(X) xi1
//   u1(P X)    = -a11 u1(X)
//   u1(xi1)    = 1 - a11^2
//   P(xi1)     = -a11 xi1
//   u1(X)      = <X, xi1>
//   <P X, Y>   = <X, P Y>
//   <P X, P Y> = <X, Y> - u1(X) u1(Y)
template <typename Scalar>
std::array<Scalar, 7> codim1_identity_residuals(const AmbientStructure<Scalar>& s,
                                                const InducedStructure<Scalar>& st,
                                                const Vec<Scalar>& x,
                                                const Vec<Scalar>& y) {
  using std::abs;
  detail::require(st.codim() == 1, "codim1 identities need a codimension-1 structure");
  detail::require(st.epsilon == 1, "identities hold for structures squaring to +Id");
  const Mat<Scalar>& f = st.frame;
  const Vec<Scalar> xi = st.xi.col(0);
  const Scalar a11 = st.a(0, 0);

  const Vec<Scalar> px = detail::induced_p(s, f, x);
  const Vec<Scalar> py = detail::induced_p(s, f, y);
  const Scalar ux = detail::induced_u(s, f, x)[0];
  const Scalar uy = detail::induced_u(s, f, y)[0];
  const Vec<Scalar> ppx = detail::induced_p(s, f, px);
  const Scalar upx = detail::induced_u(s, f, px)[0];
  const Scalar u_xi = detail::induced_u(s, f, xi)[0];
  const Vec<Scalar> p_xi = detail::induced_p(s, f, xi);

  const Scalar nx = x.norm(), ny = y.norm(), nxi = xi.norm();
  std::array<Scalar, 7> r;
  r[0] = detail::rel((ppx - x + ux * xi).template lpNorm<Eigen::Infinity>(), nx);
  r[1] = detail::rel(abs(upx + a11 * ux), nx);
  r[2] = detail::rel(abs(u_xi - (Scalar(1) - a11 * a11)), nxi);
  r[3] = detail::rel((p_xi + a11 * xi).template lpNorm<Eigen::Infinity>(), nxi);
  r[4] = detail::rel(abs(ux - x.dot(xi)), nx);
  r[5] = detail::rel(abs(px.dot(y) - x.dot(py)), nx * ny);
  r[6] = detail::rel(abs(px.dot(py) - (x.dot(y) - ux * uy)), nx * ny);
  return r;
}

// Residuals of the thirteen codimension-two identities at a probe pair,
// indexed like kCodim2IdentityIds.
//
//   P(P X)     = X - u1(X) xi1 - u2(X) xi2
//   u1(P X)    = -a11 u1(X) - a12 u2(X)
//   u2(P X)    = -a21 u1(X) - a22 u2(X)
//   u1(xi1)    = 1 - a11^2 - a12^2
//   u2(xi1)    = -a11 a12 - a12 a22
//   u1(xi2)    = -a11 a12 - a12 a22
//   u2(xi2)    = 1 - a12^2 - a22^2
//   P(xi1)     = -a11 xi1 - a12 xi2
//   P(xi2)     = -a12 xi1 - a22 xi2
//   u1(X)      = <X, xi1>
//   u2(X)      = <X, xi2>
//   <P X, Y>   = <X, P Y>
//   <P X, P Y> = <X, Y> - u1(X) u1(Y) - u2(X) u2(Y)
template <typename Scalar>
std::array<Scalar, 13> codim2_identity_residuals(const AmbientStructure<Scalar>& s,
                                                 const InducedStructure<Scalar>& st,
                                                 const Vec<Scalar>& x,
                                                 const Vec<Scalar>& y) {
  using std::abs;
  detail::require(st.codim() == 2, "codim2 identities need a codimension-2 structure");
  detail::require(st.epsilon == 1, "identities hold for structures squaring to +Id");
  const Mat<Scalar>& f = st.frame;
  const Vec<Scalar> xi1 = st.xi.col(0);
  const Vec<Scalar> xi2 = st.xi.col(1);
  const Scalar a11 = st.a(0, 0), a12 = st.a(0, 1), a21 = st.a(1, 0), a22 = st.a(1, 1);

  const Vec<Scalar> px = detail::induced_p(s, f, x);
  const Vec<Scalar> py = detail::induced_p(s, f, y);
  const Vec<Scalar> ux = detail::induced_u(s, f, x);
  const Vec<Scalar> uy = detail::induced_u(s, f, y);
  const Vec<Scalar> ppx = detail::induced_p(s, f, px);
  const Vec<Scalar> upx = detail::induced_u(s, f, px);
  const Vec<Scalar> u_xi1 = detail::induced_u(s, f, xi1);
  const Vec<Scalar> u_xi2 = detail::induced_u(s, f, xi2);
  const Vec<Scalar> p_xi1 = detail::induced_p(s, f, xi1);
  const Vec<Scalar> p_xi2 = detail::induced_p(s, f, xi2);

  const Scalar nx = x.norm(), ny = y.norm();
  const Scalar nxi1 = xi1.norm(), nxi2 = xi2.norm();
  const Scalar cross = -a11 * a12 - a12 * a22;
  std::array<Scalar, 13> r;
  r[0] = detail::rel((ppx - x + ux[0] * xi1 + ux[1] * xi2).template lpNorm<Eigen::Infinity>(), nx);
  r[1] = detail::rel(abs(upx[0] + a11 * ux[0] + a12 * ux[1]), nx);
  r[2] = detail::rel(abs(upx[1] + a21 * ux[0] + a22 * ux[1]), nx);
  r[3] = detail::rel(abs(u_xi1[0] - (Scalar(1) - a11 * a11 - a12 * a12)), nxi1);
  r[4] = detail::rel(abs(u_xi1[1] - cross), nxi1);
  r[5] = detail::rel(abs(u_xi2[0] - cross), nxi2);
  r[6] = detail::rel(abs(u_xi2[1] - (Scalar(1) - a12 * a12 - a22 * a22)), nxi2);
  r[7] = detail::rel((p_xi1 + a11 * xi1 + a12 * xi2).template lpNorm<Eigen::Infinity>(), nxi1);
  r[8] = detail::rel((p_xi2 + a12 * xi1 + a22 * xi2).template lpNorm<Eigen::Infinity>(), nxi2);
  r[9] = detail::rel(abs(ux[0] - x.dot(xi1)), nx);
  r[10] = detail::rel(abs(ux[1] - x.dot(xi2)), nx);
  r[11] = detail::rel(abs(px.dot(y) - x.dot(py)), nx * ny);
  r[12] = detail::rel(abs(px.dot(py) - (x.dot(y) - ux[0] * uy[0] - ux[1] * uy[1])), nx * ny);
  return r;
}

}  // namespace apstruct
