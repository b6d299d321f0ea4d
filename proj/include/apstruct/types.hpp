#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace apstruct {

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Sign patterns (entries +1 or -1) kept as an Eigen array so they broadcast
// over coordinate blocks without materialising a diagonal matrix.
template <typename Scalar>
using SignArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

// All residuals in this library are relative: |error| / max(1, operand scale).
inline constexpr double kDefaultValidationTol = 1e-10;
inline constexpr double kDefaultMembershipTol = 1e-10;
inline constexpr double kDefaultIdentityTol = 1e-10;

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace detail

}  // namespace apstruct
