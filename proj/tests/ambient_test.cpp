#include <stdexcept>

#include "doctest.h"

#include "apstruct/ambient.hpp"
#include "apstruct/rng.hpp"
#include "test_support.hpp"

using apstruct::AmbientStructure;
using apstruct::BlockSwap;
using apstruct::GenericInvolution;
using apstruct::Mat;
using apstruct::Rng;
using apstruct::Vec;
using apstruct::signs_from_string;
using test_support::vec3;

namespace {

Mat<double> rotation_j(apstruct::Index half) {
  // Block rotation by a quarter turn: squares to -Id, preserves the metric.
  Mat<double> j = Mat<double>::Zero(2 * half, 2 * half);
  for (apstruct::Index i = 0; i < half; ++i) {
    j(2 * i, 2 * i + 1) = -1.0;
    j(2 * i + 1, 2 * i) = 1.0;
  }
  return j;
}

}  // namespace

TEST_CASE("block swap exchanges the paired blocks and signs the fixed one") {
  const BlockSwap<double> s(1, 1, signs_from_string("+"), signs_from_string("+"));
  CHECK(s.apply(vec3(1, 2, 3)) == vec3(2, 1, 3));

  const BlockSwap<double> t(2, 1, signs_from_string("+-"), signs_from_string("-"));
  Vec<double> in(5);
  in << 1, 2, 3, 4, 5;
  Vec<double> expected(5);
  expected << 3, -4, 1, -2, -5;
  CHECK(t.apply(in) == expected);
}

TEST_CASE("block swap squares to the identity for every sign pattern") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const BlockSwap<double> s = test_support::random_block_swap(rng);
    const Vec<double> v = rng.gaussian_vector(s.dim());
    const Vec<double> twice = s.apply(s.apply(v));
    CHECK((twice - v).lpNorm<Eigen::Infinity>() <= 1e-13 * v.norm());
  }
}

TEST_CASE("block swap preserves the inner product") {
  Rng rng(2025);
  for (int trial = 0; trial < 50; ++trial) {
    const BlockSwap<double> s = test_support::random_block_swap(rng);
    const Vec<double> u = rng.gaussian_vector(s.dim());
    const Vec<double> v = rng.gaussian_vector(s.dim());
    const double lhs = apstruct::inner_product(s.apply(u), s.apply(v));
    const double rhs = apstruct::inner_product(u, v);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, u.norm() * v.norm()));
  }
}

TEST_CASE("block swap agrees with its dense matrix") {
  Rng rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    const BlockSwap<double> s = test_support::random_block_swap(rng);
    const Mat<double> m = s.to_matrix();
    const Vec<double> v = rng.gaussian_vector(s.dim());
    CHECK((s.apply(v) - m * v).lpNorm<Eigen::Infinity>() <= 1e-14 * v.norm());
  }
}

TEST_CASE("structures are self or skew adjoint according to their square") {
  Rng rng(2027);

  const AmbientStructure<double> swap(
      BlockSwap<double>(2, 2, signs_from_string("+-"), signs_from_string("-+")));
  for (int trial = 0; trial < 20; ++trial) {
    const Vec<double> u = rng.gaussian_vector(swap.dim());
    const Vec<double> v = rng.gaussian_vector(swap.dim());
    const double lhs = swap.apply(u).dot(v);
    const double rhs = swap.epsilon() * u.dot(swap.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, u.norm() * v.norm()));
  }

  const AmbientStructure<double> rot(GenericInvolution<double>(rotation_j(2), -1));
  CHECK(rot.epsilon() == -1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec<double> u = rng.gaussian_vector(rot.dim());
    const Vec<double> v = rng.gaussian_vector(rot.dim());
    const double lhs = rot.apply(u).dot(v);
    const double rhs = rot.epsilon() * u.dot(rot.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, u.norm() * v.norm()));
  }
}

TEST_CASE("validate_structure accepts what satisfies the axioms") {
  const AmbientStructure<double> swap(
      BlockSwap<double>(1, 2, signs_from_string("-"), signs_from_string("+-")));
  CHECK(apstruct::validate_structure(swap).ok());

  const AmbientStructure<double> identity(
      GenericInvolution<double>(Mat<double>::Identity(3, 3), 1));
  CHECK(apstruct::validate_structure(identity).ok());

  const AmbientStructure<double> rot(GenericInvolution<double>(rotation_j(1), -1));
  CHECK(apstruct::validate_structure(rot).ok());
}

TEST_CASE("validate_structure reports each violated axiom with its residual") {
  // Identity declared as squaring to -Id: wrong square, right metric.
  const AmbientStructure<double> wrong_square(
      GenericInvolution<double>(Mat<double>::Identity(3, 3), -1));
  const auto r1 = apstruct::validate_structure(wrong_square);
  REQUIRE(r1.violations.size() == 1);
  CHECK(r1.violations[0].residual == doctest::Approx(2.0));

  // A scaled involution: right square direction but wrong scale, so both
  // axioms fail.
  const AmbientStructure<double> scaled(
      GenericInvolution<double>(2.0 * Mat<double>::Identity(3, 3), 1));
  const auto r2 = apstruct::validate_structure(scaled);
  CHECK(r2.violations.size() == 2);
}

TEST_CASE("malformed structures are rejected at construction") {
  CHECK_THROWS_AS(BlockSwap<double>(0, 1, signs_from_string("+"), signs_from_string("+")),
                  std::invalid_argument);
  CHECK_THROWS_AS(BlockSwap<double>(2, 1, signs_from_string("+"), signs_from_string("+")),
                  std::invalid_argument);
  apstruct::SignArray<double> bad(1);
  bad << 0.5;
  CHECK_THROWS_AS(BlockSwap<double>(1, 1, bad, signs_from_string("+")),
                  std::invalid_argument);
  CHECK_THROWS_AS(signs_from_string("+x"), std::invalid_argument);
  CHECK_THROWS_AS(GenericInvolution<double>(Mat<double>::Zero(2, 3), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(GenericInvolution<double>(Mat<double>::Identity(2, 2), 0),
                  std::invalid_argument);
}

TEST_CASE("dimension mismatches are rejected when applying a structure") {
  const BlockSwap<double> s(1, 1, signs_from_string("+"), signs_from_string("+"));
  Vec<double> wrong(4);
  wrong.setZero();
  CHECK_THROWS_AS(s.apply(wrong), std::invalid_argument);
  CHECK_THROWS_AS(apstruct::inner_product(vec3(1, 0, 0), wrong), std::invalid_argument);
}

TEST_CASE("block swap works for any floating scalar") {
  const BlockSwap<long double> s(1, 1, apstruct::signs_from_string<long double>("+"),
                                 apstruct::signs_from_string<long double>("-"));
  Vec<long double> v(3);
  v << 1.0L, 2.0L, 3.0L;
  Vec<long double> expected(3);
  expected << 2.0L, 1.0L, -3.0L;
  CHECK(s.apply(v) == expected);
}
