#pragma once

#include <cmath>
#include <concepts>
#include <utility>

#include <Eigen/Core>

#include "apstruct/rng.hpp"
#include "apstruct/types.hpp"

namespace apstruct {

template <typename Scalar>
struct ManifoldPoint {
  Vec<Scalar> coords;
};

// A tangent vector remembers its base point; operations that mix tangent
// vectors with a structure at a different point are rejected.
template <typename Scalar>
struct TangentVector {
  Vec<Scalar> coords;
  ManifoldPoint<Scalar> base;
};

namespace detail {

template <typename Scalar>
bool same_point(const ManifoldPoint<Scalar>& a, const ManifoldPoint<Scalar>& b) {
  return a.coords.size() == b.coords.size() && a.coords == b.coords;
}

}  // namespace detail

// Round sphere of radius R about the origin, codimension 1.
template <typename Scalar>
class Hypersphere {
 public:
  using ScalarType = Scalar;

  Hypersphere(Index ambient_dim, Scalar radius)
      : dim_(ambient_dim), radius_(radius) {
    detail::require(dim_ >= 2, "Hypersphere: ambient dimension must be >= 2");
    detail::require(radius_ > Scalar(0), "Hypersphere: radius must be positive");
  }

  Index ambient_dim() const { return dim_; }
  static constexpr Index codim() { return 1; }
  Scalar radius() const { return radius_; }

  // Defining-equation residual, relative to the squared radius.
  template <typename Derived>
  Scalar membership_residual(const Eigen::MatrixBase<Derived>& pt) const {
    detail::require(pt.size() == dim_, "Hypersphere: dimension mismatch");
    using std::abs;
    return abs(pt.squaredNorm() - radius_ * radius_) / (radius_ * radius_);
  }

  // Unit normal frame at a point assumed to lie on the sphere: the single
  // column x / R.
  template <typename Derived>
  Mat<Scalar> frame(const Eigen::MatrixBase<Derived>& pt) const {
    detail::require(pt.size() == dim_, "Hypersphere: dimension mismatch");
    Mat<Scalar> f(dim_, 1);
    f.col(0) = pt / radius_;
    return f;
  }

  // Uniform point on the sphere: a normalised Gaussian draw.
  Vec<Scalar> sample(Rng& rng) const {
    for (;;) {
      Vec<Scalar> g = rng.gaussian_vector<Scalar>(dim_);
      const Scalar n = g.norm();
      if (n > Scalar(1e-6)) return (radius_ / n) * g;
    }
  }

 private:
  Index dim_;
  Scalar radius_;
};

// S^{2p-1}(r) x S^{q-1}(r3) sitting in E^{2p+q} with the (x, y) block of
// radius r and the z block of radius r3, codimension 2. The z factor must be
// a genuine sphere, so q >= 2.
template <typename Scalar>
class ProductOfSpheres {
 public:
  using ScalarType = Scalar;

  ProductOfSpheres(Index p, Index q, Scalar r, Scalar r3)
      : p_(p), q_(q), r_(r), r3_(r3) {
    detail::require(p_ >= 1, "ProductOfSpheres: p must be positive");
    detail::require(q_ >= 2, "ProductOfSpheres: q must be >= 2");
    detail::require(r_ > Scalar(0) && r3_ > Scalar(0),
                    "ProductOfSpheres: radii must be positive");
  }

  Index p() const { return p_; }
  Index q() const { return q_; }
  Index ambient_dim() const { return 2 * p_ + q_; }
  static constexpr Index codim() { return 2; }
  Scalar r() const { return r_; }
  Scalar r3() const { return r3_; }

  // Radius of the smallest origin-centred sphere containing the product.
  Scalar enclosing_radius() const {
    using std::sqrt;
    return sqrt(r_ * r_ + r3_ * r3_);
  }

  // Worst defining-equation residual of the two factors, each relative to
  // its squared radius.
  template <typename Derived>
  Scalar membership_residual(const Eigen::MatrixBase<Derived>& pt) const {
    detail::require(pt.size() == ambient_dim(), "ProductOfSpheres: dimension mismatch");
    using std::abs;
    using std::max;
    const Scalar first = abs(pt.head(2 * p_).squaredNorm() - r_ * r_) / (r_ * r_);
    const Scalar second = abs(pt.tail(q_).squaredNorm() - r3_ * r3_) / (r3_ * r3_);
    return max(first, second);
  }

  // Orthonormal normal frame at a point assumed on the product:
  //   N1 = pt / R,
  //   N2 = (1/R) ((r3/r) x, (r3/r) y, -(r/r3) z),
  // with R the enclosing radius.
  template <typename Derived>
  Mat<Scalar> frame(const Eigen::MatrixBase<Derived>& pt) const {
    detail::require(pt.size() == ambient_dim(), "ProductOfSpheres: dimension mismatch");
    const Scalar R = enclosing_radius();
    Mat<Scalar> f(ambient_dim(), 2);
    f.col(0) = pt / R;
    f.col(1).head(2 * p_) = (r3_ / r_) * pt.head(2 * p_) / R;
    f.col(1).tail(q_) = -(r_ / r3_) * pt.tail(q_) / R;
    return f;
  }

  Vec<Scalar> sample(Rng& rng) const {
    Vec<Scalar> pt(ambient_dim());
    for (;;) {
      Vec<Scalar> g = rng.gaussian_vector<Scalar>(2 * p_);
      const Scalar n = g.norm();
      if (n > Scalar(1e-6)) {
        pt.head(2 * p_) = (r_ / n) * g;
        break;
      }
    }
    for (;;) {
      Vec<Scalar> g = rng.gaussian_vector<Scalar>(q_);
      const Scalar n = g.norm();
      if (n > Scalar(1e-6)) {
        pt.tail(q_) = (r3_ / n) * g;
        break;
      }
    }
    return pt;
  }

 private:
  Index p_, q_;
  Scalar r_, r3_;
};

// Interface a submanifold type must expose: ambient dimension, codimension,
// a defining-equation residual, and a normal frame (m x codim, orthonormal
// columns) at an on-manifold point. frame() may assume membership; the free
// functions below check it.
template <typename M>
concept Submanifold = requires(const M& m, const Vec<typename M::ScalarType>& x) {
  typename M::ScalarType;
  { m.ambient_dim() } -> std::convertible_to<Index>;
  { m.codim() } -> std::convertible_to<Index>;
  { m.membership_residual(x) } -> std::convertible_to<typename M::ScalarType>;
  { m.frame(x) } -> std::convertible_to<Mat<typename M::ScalarType>>;
};

// Submanifolds that can also draw random points from themselves.
template <typename M>
concept SampleableSubmanifold =
    Submanifold<M> && requires(const M& m, Rng& rng) {
      { m.sample(rng) } -> std::convertible_to<Vec<typename M::ScalarType>>;
    };

template <Submanifold M, typename Derived>
bool contains(const M& sub, const Eigen::MatrixBase<Derived>& pt,
              double tol = kDefaultMembershipTol) {
  return static_cast<double>(sub.membership_residual(pt)) <= tol;
}

// Wraps raw coordinates as a point of the submanifold; off-manifold input is
// rejected.
template <Submanifold M>
ManifoldPoint<typename M::ScalarType> make_point(const M& sub,
                                                 Vec<typename M::ScalarType> coords,
                                                 double tol = kDefaultMembershipTol) {
  detail::require(contains(sub, coords, tol), "make_point: point is not on the submanifold");
  return {std::move(coords)};
}

template <Submanifold M>
Mat<typename M::ScalarType> normal_frame(const M& sub,
                                         const ManifoldPoint<typename M::ScalarType>& pt,
                                         double tol = kDefaultMembershipTol) {
  detail::require(contains(sub, pt.coords, tol),
                  "normal_frame: point is not on the submanifold");
  return sub.frame(pt.coords);
}

// Orthogonal projection of an ambient vector onto the tangent space at pt.
template <Submanifold M, typename Derived>
TangentVector<typename M::ScalarType> project_tangent(
    const M& sub, const ManifoldPoint<typename M::ScalarType>& pt,
    const Eigen::MatrixBase<Derived>& v, double tol = kDefaultMembershipTol) {
  using Scalar = typename M::ScalarType;
  detail::require(v.size() == sub.ambient_dim(), "project_tangent: dimension mismatch");
  const Mat<Scalar> f = normal_frame(sub, pt, tol);
  Vec<Scalar> t = v - f * (f.transpose() * v);
  return {std::move(t), pt};
}

template <SampleableSubmanifold M>
ManifoldPoint<typename M::ScalarType> sample_point(const M& sub, Rng& rng) {
  return {sub.sample(rng)};
}

// Random tangent vector at pt: a Gaussian ambient draw projected onto the
// tangent space, redrawn in the measure-zero event that the projection is
// numerically degenerate.
template <Submanifold M>
TangentVector<typename M::ScalarType> sample_tangent(
    const M& sub, const ManifoldPoint<typename M::ScalarType>& pt, Rng& rng,
    double tol = kDefaultMembershipTol) {
  using Scalar = typename M::ScalarType;
  const Mat<Scalar> f = normal_frame(sub, pt, tol);
  for (;;) {
    Vec<Scalar> g = rng.gaussian_vector<Scalar>(sub.ambient_dim());
    Vec<Scalar> t = g - f * (f.transpose() * g);
    if (t.norm() > Scalar(1e-6) * g.norm()) return {std::move(t), pt};
  }
}

}  // namespace apstruct
