#pragma once

#include <cmath>
#include <span>
#include <utility>

#include <Eigen/Core>

#include "apstruct/ambient.hpp"
#include "apstruct/submanifold.hpp"
#include "apstruct/types.hpp"

namespace apstruct {

// The structure a submanifold inherits from an ambient structure at one
// point: the normal frame N_alpha (columns of `frame`), the tangential
// fields xi_alpha (columns of `xi`), and the normal-to-normal coefficients
// a(alpha, beta) = <s(N_alpha), N_beta>. Together these give the splitting
//
//   s(X)       = P(X) + sum_alpha u_alpha(X) N_alpha        (X tangent)
//   s(N_alpha) = epsilon * xi_alpha + sum_beta a(alpha, beta) N_beta
//
// with epsilon the sign of the ambient square.
template <typename Scalar>
struct InducedStructure {
  ManifoldPoint<Scalar> base;
  Mat<Scalar> frame;  // m x r, orthonormal columns
  Mat<Scalar> xi;     // m x r, tangential structure fields
  Mat<Scalar> a;      // r x r
  int epsilon = 1;

  Index codim() const { return frame.cols(); }
};

namespace detail {

// Tangential part of s(x) at the given frame: s(x) - F F^T s(x).
template <typename Scalar>
Vec<Scalar> induced_p(const AmbientStructure<Scalar>& s, const Mat<Scalar>& frame,
                      const Vec<Scalar>& x) {
  Vec<Scalar> w = s.apply(x);
  return w - frame * (frame.transpose() * w);
}

// Normal components of s(x): u_alpha(x) = <s(x), N_alpha>.
template <typename Scalar>
Vec<Scalar> induced_u(const AmbientStructure<Scalar>& s, const Mat<Scalar>& frame,
                      const Vec<Scalar>& x) {
  return frame.transpose() * s.apply(x);
}

}  // namespace detail

// Decomposes the ambient structure at one submanifold point. Everything is
// obtained by projecting s(N_alpha) against the frame:
//
//   a      = W^T F          with W = [s(N_1) .. s(N_r)], F the frame,
//   xi     = epsilon (W - F a^T),
//
// which inverts the defining relation s(N_alpha) = epsilon xi_alpha +
// sum_beta a(alpha, beta) N_beta using orthonormality of the frame.
template <typename Scalar, Submanifold M>
InducedStructure<Scalar> induce_at_point(const AmbientStructure<Scalar>& s,
                                         const M& sub,
                                         const ManifoldPoint<Scalar>& pt,
                                         double tol = kDefaultMembershipTol) {
  static_assert(std::is_same_v<typename M::ScalarType, Scalar>,
                "submanifold and structure must share a scalar type");
  detail::require(s.dim() == sub.ambient_dim(),
                  "induce_at_point: ambient dimensions disagree");
  const Mat<Scalar> f = normal_frame(sub, pt, tol);
  const Index r = f.cols();
  Mat<Scalar> w(f.rows(), r);
  for (Index alpha = 0; alpha < r; ++alpha) w.col(alpha) = s.apply(f.col(alpha));
  const Scalar eps = static_cast<Scalar>(s.epsilon());
  InducedStructure<Scalar> st;
  st.base = pt;
  st.frame = f;
  st.a = w.transpose() * f;
  st.xi = eps * (w - f * st.a.transpose());
  st.epsilon = s.epsilon();
  return st;
}

// u_alpha(X) for a tangent vector X based at the structure's point.
template <typename Scalar>
Vec<Scalar> evaluate_u(const AmbientStructure<Scalar>& s,
                       const InducedStructure<Scalar>& st,
                       const TangentVector<Scalar>& x) {
  detail::require(detail::same_point(x.base, st.base),
                  "evaluate_u: tangent vector is based at a different point");
  detail::require(x.coords.size() == s.dim(), "evaluate_u: dimension mismatch");
  return detail::induced_u(s, st.frame, x.coords);
}

// P(X): the tangential part of s(X).
template <typename Scalar>
TangentVector<Scalar> apply_induced_P(const AmbientStructure<Scalar>& s,
                                      const InducedStructure<Scalar>& st,
                                      const TangentVector<Scalar>& x) {
  detail::require(detail::same_point(x.base, st.base),
                  "apply_induced_P: tangent vector is based at a different point");
  detail::require(x.coords.size() == s.dim(), "apply_induced_P: dimension mismatch");
  return {detail::induced_p(s, st.frame, x.coords), st.base};
}

// Two-step induction: first onto the enclosing sphere, then onto the product
// sitting inside it. The sphere inherits (P1, u1, xi1, a11); restricting that
// structure to the product splits xi1 and s(N2) once more against N2. Valid
// only for structures squaring to +Id, where the intermediate decomposition
// has the same shape as the ambient one.
template <typename Scalar>
InducedStructure<Scalar> chain_induce(const AmbientStructure<Scalar>& s,
                                      const Hypersphere<Scalar>& outer,
                                      const ProductOfSpheres<Scalar>& inner,
                                      const ManifoldPoint<Scalar>& pt,
                                      double tol = kDefaultMembershipTol) {
  using std::abs;
  detail::require(s.epsilon() == 1,
                  "chain_induce: requires a structure squaring to +Id");
  detail::require(s.dim() == inner.ambient_dim() && s.dim() == outer.ambient_dim(),
                  "chain_induce: ambient dimensions disagree");
  const Scalar rsq = outer.radius() * outer.radius();
  const Scalar nest = abs(inner.enclosing_radius() * inner.enclosing_radius() - rsq) / rsq;
  detail::require(static_cast<double>(nest) <= tol,
                  "chain_induce: product does not lie on the sphere");
  detail::require(contains(inner, pt.coords, tol),
                  "chain_induce: point is not on the product");

  // Step one: structure induced on the sphere.
  const Vec<Scalar> n1 = outer.frame(pt.coords).col(0);
  const Vec<Scalar> w1 = s.apply(n1);
  const Scalar a11 = w1.dot(n1);
  const Vec<Scalar> xi1_sphere = w1 - a11 * n1;

  // Step two: the product has one extra normal N2 inside the sphere's
  // tangent spaces. Splitting xi1 against N2 produces the off-diagonal
  // coefficient twice over, once as <xi1, N2> and once as <s(N1), N2>;
  // the two routes must agree.
  const Vec<Scalar> n2 = inner.frame(pt.coords).col(1);
  const Scalar c = xi1_sphere.dot(n2);
  if (static_cast<double>(abs(c - w1.dot(n2))) > 1e-10)
    throw std::logic_error("chain_induce: off-diagonal coefficient routes disagree");
  const Vec<Scalar> xi1 = xi1_sphere - c * n2;

  const Vec<Scalar> w2 = s.apply(n2);
  const Vec<Scalar> p1_n2 = w2 - w2.dot(n1) * n1;
  const Scalar a22 = p1_n2.dot(n2);
  const Vec<Scalar> xi2 = p1_n2 - a22 * n2;

  InducedStructure<Scalar> st;
  st.base = pt;
  st.frame = Mat<Scalar>(s.dim(), 2);
  st.frame.col(0) = n1;
  st.frame.col(1) = n2;
  st.xi = Mat<Scalar>(s.dim(), 2);
  st.xi.col(0) = xi1;
  st.xi.col(1) = xi2;
  st.a = Mat<Scalar>(2, 2);
  st.a << a11, c, c, a22;
  st.epsilon = 1;
  return st;
}

// Largest disagreement between two structures at the same point: the a
// matrices, the xi fields, and the action of P and u on the given probe
// vectors. Residuals are absolute; frames and probes are O(1) here.
template <typename Scalar>
Scalar compare_structures(const AmbientStructure<Scalar>& s,
                          const InducedStructure<Scalar>& lhs,
                          const InducedStructure<Scalar>& rhs,
                          std::span<const TangentVector<Scalar>> probes) {
  using std::max;
  detail::require(detail::same_point(lhs.base, rhs.base),
                  "compare_structures: structures live at different points");
  detail::require(lhs.codim() == rhs.codim(),
                  "compare_structures: codimensions disagree");
  Scalar res = (lhs.a - rhs.a).cwiseAbs().maxCoeff();
  res = max(res, (lhs.xi - rhs.xi).cwiseAbs().maxCoeff());
  for (const TangentVector<Scalar>& x : probes) {
    detail::require(detail::same_point(x.base, lhs.base),
                    "compare_structures: probe is based at a different point");
    const Vec<Scalar> pl = detail::induced_p(s, lhs.frame, x.coords);
    const Vec<Scalar> pr = detail::induced_p(s, rhs.frame, x.coords);
    res = max(res, (pl - pr).cwiseAbs().maxCoeff());
    const Vec<Scalar> ul = detail::induced_u(s, lhs.frame, x.coords);
    const Vec<Scalar> ur = detail::induced_u(s, rhs.frame, x.coords);
    res = max(res, (ul - ur).cwiseAbs().maxCoeff());
  }
  return res;
}

}  // namespace apstruct
