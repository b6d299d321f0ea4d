#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "apstruct/types.hpp"

namespace apstruct {

// Coordinate-swap structure on E^{2p+q}. With coordinates laid out as
// (x^1..x^p, y^1..y^p, z^1..z^q) it maps
//
//   (x, y, z)  |->  (nu .* y, nu .* x, eps .* z),   nu_i, eps_j in {+1, -1}.
//
// It squares to the identity and preserves the Euclidean inner product for
// any choice of signs.
template <typename Scalar>
class BlockSwap {
 public:
  using ScalarType = Scalar;
  using Signs = SignArray<Scalar>;

  BlockSwap(Index p, Index q, Signs nu, Signs eps)
      : p_(p), q_(q), nu_(std::move(nu)), eps_(std::move(eps)) {
    detail::require(p_ >= 1 && q_ >= 1, "BlockSwap: p and q must be positive");
    detail::require(nu_.size() == p_, "BlockSwap: nu must have p entries");
    detail::require(eps_.size() == q_, "BlockSwap: eps must have q entries");
    detail::require((nu_.abs() == Scalar(1)).all(),
                    "BlockSwap: nu entries must be +1 or -1");
    detail::require((eps_.abs() == Scalar(1)).all(),
                    "BlockSwap: eps entries must be +1 or -1");
  }

  Index p() const { return p_; }
  Index q() const { return q_; }
  Index dim() const { return 2 * p_ + q_; }
  const Signs& nu() const { return nu_; }
  const Signs& eps() const { return eps_; }

  // The square is +Id regardless of the sign patterns.
  static constexpr int epsilon() { return 1; }

  template <typename Derived>
  Vec<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    detail::require(v.size() == dim(), "BlockSwap: dimension mismatch");
    Vec<Scalar> out(dim());
    out.head(p_) = (nu_ * v.segment(p_, p_).array()).matrix();
    out.segment(p_, p_) = (nu_ * v.head(p_).array()).matrix();
    out.tail(q_) = (eps_ * v.tail(q_).array()).matrix();
    return out;
  }

  Mat<Scalar> to_matrix() const {
    Mat<Scalar> m = Mat<Scalar>::Zero(dim(), dim());
    for (Index i = 0; i < p_; ++i) {
      m(i, p_ + i) = nu_[i];
      m(p_ + i, i) = nu_[i];
    }
    for (Index j = 0; j < q_; ++j) m(2 * p_ + j, 2 * p_ + j) = eps_[j];
    return m;
  }

 private:
  Index p_, q_;
  Signs nu_, eps_;
};

// Parses a pattern such as "+-+" into a sign array.
template <typename Scalar = double>
SignArray<Scalar> signs_from_string(const std::string& pattern) {
  detail::require(!pattern.empty(), "sign pattern must be non-empty");
  SignArray<Scalar> s(static_cast<Index>(pattern.size()));
  for (Index i = 0; i < s.size(); ++i) {
    const char c = pattern[static_cast<std::size_t>(i)];
    detail::require(c == '+' || c == '-', "sign pattern may contain only + and -");
    s[i] = (c == '+') ? Scalar(1) : Scalar(-1);
  }
  return s;
}

// Arbitrary structure given by a dense matrix M with M^2 = epsilon * Id,
// epsilon in {+1, -1}, and M orthogonal (both conditions are what the
// induced-structure machinery relies on; validate_structure checks them).
template <typename Scalar>
class GenericInvolution {
 public:
  using ScalarType = Scalar;

  GenericInvolution(Mat<Scalar> matrix, int epsilon)
      : matrix_(std::move(matrix)), epsilon_(epsilon) {
    detail::require(matrix_.rows() == matrix_.cols(),
                    "GenericInvolution: matrix must be square");
    detail::require(matrix_.rows() >= 1, "GenericInvolution: empty matrix");
    detail::require(epsilon_ == 1 || epsilon_ == -1,
                    "GenericInvolution: epsilon must be +1 or -1");
  }

  Index dim() const { return matrix_.rows(); }
  int epsilon() const { return epsilon_; }
  const Mat<Scalar>& matrix() const { return matrix_; }

  template <typename Derived>
  Vec<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    detail::require(v.size() == dim(), "GenericInvolution: dimension mismatch");
    return matrix_ * v;
  }

 private:
  Mat<Scalar> matrix_;
  int epsilon_;
};

// A structure on the ambient Euclidean space: either the coordinate swap in
// closed form or a generic matrix involution.
template <typename Scalar>
class AmbientStructure {
 public:
  using ScalarType = Scalar;

  AmbientStructure(BlockSwap<Scalar> s) : impl_(std::move(s)) {}
  AmbientStructure(GenericInvolution<Scalar> s) : impl_(std::move(s)) {}

  Index dim() const {
    return std::visit([](const auto& s) { return s.dim(); }, impl_);
  }

  int epsilon() const {
    return std::visit([](const auto& s) { return static_cast<int>(s.epsilon()); },
                      impl_);
  }

  template <typename Derived>
  Vec<Scalar> apply(const Eigen::MatrixBase<Derived>& v) const {
    return std::visit([&](const auto& s) { return s.apply(v); }, impl_);
  }

  Mat<Scalar> to_matrix() const {
    if (const auto* b = std::get_if<BlockSwap<Scalar>>(&impl_)) return b->to_matrix();
    return std::get<GenericInvolution<Scalar>>(impl_).matrix();
  }

  const BlockSwap<Scalar>* block_swap() const {
    return std::get_if<BlockSwap<Scalar>>(&impl_);
  }

  const GenericInvolution<Scalar>* generic() const {
    return std::get_if<GenericInvolution<Scalar>>(&impl_);
  }

 private:
  std::variant<BlockSwap<Scalar>, GenericInvolution<Scalar>> impl_;
};

template <typename Scalar, typename Derived>
Vec<Scalar> apply_structure(const AmbientStructure<Scalar>& s,
                            const Eigen::MatrixBase<Derived>& v) {
  return s.apply(v);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar inner_product(const Eigen::MatrixBase<DerivedA>& u,
                                        const Eigen::MatrixBase<DerivedB>& v) {
  detail::require(u.size() == v.size(), "inner_product: dimension mismatch");
  return u.dot(v);
}

struct Violation {
  std::string check;
  double residual = 0.0;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the two structural requirements: the square is epsilon * Id and the
// map preserves the inner product. BlockSwap satisfies both by construction;
// a GenericInvolution is checked against its matrix.
template <typename Scalar>
ValidationResult validate_structure(const AmbientStructure<Scalar>& s,
                                    double tol = kDefaultValidationTol) {
  detail::require(tol > 0, "validate_structure: tolerance must be positive");
  ValidationResult result;
  if (s.block_swap() != nullptr) return result;

  const Mat<Scalar>& m = s.generic()->matrix();
  const Index n = m.rows();
  const Scalar eps = static_cast<Scalar>(s.epsilon());
  const double square_residual = static_cast<double>(
      (m * m - eps * Mat<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff());
  if (square_residual > tol)
    result.violations.push_back({"square is not epsilon * identity", square_residual});
  const double metric_residual = static_cast<double>(
      (m.transpose() * m - Mat<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff());
  if (metric_residual > tol)
    result.violations.push_back({"map does not preserve the inner product", metric_residual});
  return result;
}

}  // namespace apstruct
