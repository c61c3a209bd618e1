#include <doctest.h>

#include <cmath>

#include "dirzero/error.hpp"
#include "dirzero/geometry.hpp"
#include "generators.hpp"

using namespace dirzero;

namespace {

PointSequence on_axis(std::vector<double> sigmas, std::vector<double> ts = {}) {
  std::vector<SequencePoint> pts;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    pts.push_back({sigmas[k], ts.empty() ? 0.0 : ts[k], 1});
  }
  return PointSequence(std::move(pts));
}

}  // namespace

TEST_CASE("point sequences reject the boundary and record bounds") {
  CHECK_THROWS_AS(PointSequence({{0.5, 0.0, 1}}), Error);
  CHECK_THROWS_AS(PointSequence({{0.4, 0.0, 1}}), Error);
  CHECK_THROWS_AS(PointSequence({{1.0, 0.0, 0}}), Error);
  const PointSequence S({{1.0, -3.0, 2}, {2.5, 1.0, 1}});
  CHECK(S.total_multiplicity() == 3);
  CHECK(S.max_sigma() == 2.5);
  CHECK(S.max_abs_t() == 3.0);
  CHECK(S.inside(StripRegion(3.0, 2.0)));
  CHECK_FALSE(S.inside(StripRegion(2.0, 2.0)));
}

TEST_CASE("strip region") {
  const StripRegion O(5.0, 2.0);
  CHECK(O.area() == 20.0);
  CHECK(O.contains({1.0, 4.9}));
  CHECK_FALSE(O.contains({2.6, 0.0}));
  CHECK_FALSE(O.contains({0.4, 0.0}));
  CHECK(O.distance({1.0, 0.0}) == 0.0);
  CHECK(O.distance({1.0, 8.0}) == doctest::Approx(3.0));
  CHECK(O.distance({5.5, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("blaschke factor") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Complex s = gen::half_plane_point(rng, -2.0, 4.0, 10.0);
    if (std::abs(s + 0.5) < 1e-3) continue;
    CHECK(std::abs(blaschke_factor(1.5, s) - half_plane_to_disk(s)) < 1e-14);
  }
  CHECK(std::abs(blaschke_factor(1.5, 1.5)) == 0.0);
  CHECK(std::abs(std::abs(blaschke_factor({1.0, 1.0}, 0.5)) - 1.0) < 1e-14);
}

TEST_CASE("blaschke product values") {
  const BlaschkeProduct B(on_axis({1.5}));
  CHECK(std::abs(B(2.5) - 1.0 / 3.0) < 1e-15);
  const BlaschkeProduct B2(PointSequence({{1.5, 0.0, 2}}));
  const auto [v, dv] = B2.value_and_derivative(1.5);
  CHECK(std::abs(v) == 0.0);
  CHECK(std::abs(dv) < 1e-15);
}

TEST_CASE("blaschke product is inner") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<SequencePoint> pts;
    for (int k = 0; k < 4; ++k) {
      const Complex w = gen::half_plane_point(rng, 0.55, 3.0, 5.0);
      pts.push_back({w.real(), w.imag(), 1 + k % 2});
    }
    const BlaschkeProduct B{PointSequence(pts)};
    CHECK(std::abs(std::abs(B({0.5, 7.0})) - 1.0) < 1e-10);
    for (int k = 0; k < 50; ++k) {
      CHECK(std::abs(std::abs(B(Complex{0.5, -20.0 + 0.8 * k})) - 1.0) < 1e-10);
      CHECK(std::abs(B(gen::half_plane_point(rng, 0.5, 6.0, 20.0))) <= 1.0 + 1e-12);
    }
    for (const auto& p : pts) {
      const auto [v, dv] = B.value_and_derivative(p.point());
      CHECK(std::abs(v) < 1e-14);
      if (p.multiplicity == 2) CHECK(std::abs(dv) < 1e-12);
    }
  }
}

TEST_CASE("blaschke derivative matches finite differences") {
  const BlaschkeProduct B(PointSequence({{1.0, 0.5, 1}, {2.0, -1.0, 2}}));
  const Complex s{1.4, 0.3};
  const double h = 1e-6;
  const Complex fd = (B(s + h) - B(s - h)) / (2.0 * h);
  CHECK(std::abs(B.value_and_derivative(s).second - fd) < 1e-8);
}

TEST_CASE("blaschke condition") {
  std::vector<double> geo, harm;
  for (int j = 1; j <= 20; ++j) geo.push_back(0.5 + std::ldexp(1.0, -j));
  for (int j = 1; j <= 10; ++j) harm.push_back(0.5 + 1.0 / j);
  CHECK(blaschke_condition(on_axis(geo)).sum == doctest::Approx(1.0 - std::ldexp(1.0, -20)));
  CHECK(blaschke_condition(PointSequence{}).sum == 0.0);
  CHECK(blaschke_condition(on_axis(harm)).sum == doctest::Approx(2.928968254));
  const auto r = blaschke_condition(on_axis(geo));
  CHECK(r.prefix_sums.size() == 20);
  CHECK(r.prefix_sums.front() == doctest::Approx(0.5));
}

TEST_CASE("carleson condition") {
  std::vector<double> quartic;
  for (int j = 1; j <= 200; ++j) quartic.push_back(0.5 + std::pow(double(j), -4.0));
  const auto r = carleson_condition(on_axis(quartic), 0.5);
  double expect = 0.0;
  for (int j = 1; j <= 200; ++j) expect += 1.0 / (double(j) * j);
  CHECK(r.sum == doctest::Approx(expect));
  CHECK(r.late_share < 0.01);
  CHECK(carleson_condition(on_axis({1.5}), 0.5).sum == doctest::Approx(1.0));
  const auto S = on_axis({0.6, 0.75, 1.3});
  CHECK(carleson_condition(S, 1e-9).sum ==
        doctest::Approx(blaschke_condition(S).sum).epsilon(1e-8));
  CHECK_THROWS_AS(carleson_condition(S, 1.0), Error);
}

TEST_CASE("shapiro shields condition") {
  // 1/2 + e^{-j^2} is only distinguishable from 1/2 in double precision for small j.
  std::vector<double> a, b;
  for (int j = 1; j <= 5; ++j) a.push_back(0.5 + std::exp(-double(j) * j));
  for (int j = 1; j <= 10; ++j) b.push_back(0.5 + std::exp(-double(j)));
  CHECK(shapiro_shields_condition(on_axis(a)).sum == doctest::Approx(1.463611111).epsilon(1e-6));
  const auto rb = shapiro_shields_condition(on_axis(b));
  CHECK(rb.sum == doctest::Approx(2.928968254));
  CHECK(rb.late_share > shapiro_shields_condition(on_axis(a)).late_share);
  CHECK_THROWS_AS(shapiro_shields_condition(on_axis({1.5})), Error);
}

TEST_CASE("cone condition") {
  std::vector<SequencePoint> pts;
  for (int j = 1; j <= 20; ++j) pts.push_back({0.5 + std::ldexp(1.0, -j), std::ldexp(1.0, -j), 1});
  CHECK(cone_condition(PointSequence(pts), 0.0, 1.0));
  CHECK_FALSE(cone_condition(PointSequence({{1.5, 10.0, 1}}), 0.0, 1.0));
  CHECK(cone_condition(PointSequence{}, 3.0, 0.1));
}

TEST_CASE("conformal transfer") {
  const auto one = conformal_transfer([](Complex) { return Complex{1.0}; }, 1.0);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const Complex s = gen::half_plane_point(rng, 0.6, 4.0, 10.0);
    CHECK(std::abs(one(s) - 1.0 / (s + 0.5)) < 1e-14);
  }
  const auto z = conformal_transfer([](Complex w) { return w; }, 1.0);
  CHECK(std::abs(z(1.5)) < 1e-15);
  CHECK(std::abs(z(0.5)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(conformal_transfer([](Complex) { return Complex{1.0}; }, 2.0), Error);
}
