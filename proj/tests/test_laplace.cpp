#include <doctest.h>

#include <cmath>

#include "dirzero/error.hpp"
#include "dirzero/laplace.hpp"
#include "generators.hpp"

using namespace dirzero;

namespace {

GridFunction constant_on(double a, double b, Complex v = 1.0) {
  return GridFunction({a, b}, {v});
}

}  // namespace

TEST_CASE("laplace transform closed forms") {
  CHECK(std::abs(constant_on(0.0, 1.0).laplace(1.5) - (1.0 - std::exp(-1.0))) < 1e-15);
  CHECK(std::abs(GridFunction::uniform(0.0, 3.0, 7).laplace({2.0, 1.0})) == 0.0);

  const std::size_t K = 10000;
  std::vector<double> br(K + 1);
  std::vector<Complex> v(K);
  for (std::size_t k = 0; k <= K; ++k) br[k] = 30.0 * double(k) / double(K);
  for (std::size_t k = 0; k < K; ++k) v[k] = std::exp(-0.5 * (br[k] + br[k + 1]));
  const GridFunction e(br, v);
  CHECK(std::abs(e.laplace(1.0) - 2.0 / 3.0) < 1e-4);
}

TEST_CASE("laplace derivatives match finite differences") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 10; ++k) {
    const auto phi = gen::density(rng, 0.0, 6.0, 40);
    const Complex s = gen::half_plane_point(rng, 0.6, 2.0, 10.0);
    const double h = 1e-5;
    const Complex fd = (phi.laplace(s + h) - phi.laplace(s - h)) / (2.0 * h);
    CHECK(std::abs(phi.laplace(s, 1) - fd) < 1e-7 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("cell moments") {
  const Complex lam{0.7, -3.0};
  // int_1^2 x e^{-lam x} by parts.
  auto anti = [&](double x) { return -std::exp(-lam * x) * (x / lam + 1.0 / (lam * lam)); };
  CHECK(std::abs(exp_cell_moment(1.0, 2.0, lam, 1) - (anti(2.0) - anti(1.0))) < 1e-13);
  const double a = 1.0, b = 1.0 + 1e-9;
  CHECK(std::abs(exp_cell_integral(a, b, lam) - (b - a) * std::exp(-lam * (a + b) / 2.0)) < 1e-24);
  CHECK(std::abs(exp_cell_moment(0.0, 5.0, lam, 0) - exp_cell_integral(0.0, 5.0, lam)) < 1e-13);
}

TEST_CASE("norms and integrals of densities") {
  const GridFunction phi({0.0, 1.0, 3.0}, {Complex{2.0}, Complex{0.0, 1.0}});
  CHECK(phi.l2_norm() == doctest::Approx(std::sqrt(4.0 + 2.0)));
  CHECK(std::abs(phi.integrate(0.5, 2.0) - Complex(1.0, 1.0)) < 1e-15);
  CHECK(phi.power_weighted_norm(0.0) == doctest::Approx(phi.l2_norm()));
  CHECK(phi.dbeta_norm(1.0) == doctest::Approx(std::sqrt(6.0 + 4.0 * 0.5 + (9.0 - 1.0) / 2.0)));
  const std::vector<double> nodes{0.0, 0.25, 1.5, 3.0};
  const auto parts = phi.integrate_partition(nodes);
  CHECK(std::abs(parts[1] - Complex(1.5, 0.5)) < 1e-15);
  CHECK_THROWS_AS(GridFunction({0.0, 0.0}, {Complex{1.0}}), Error);
}

TEST_CASE("h2 coefficients") {
  const auto phi = constant_on(std::log(2.0), std::log(4.0));
  const auto F = build_h2_coefficients(phi, 2);
  CHECK(std::abs(F.coeff(2) - std::sqrt(2.0) * std::log(1.5)) < 1e-15);
  CHECK(std::abs(F.coeff(3) - std::sqrt(3.0) * std::log(4.0 / 3.0)) < 1e-15);
  CHECK(F.coeff(1) == Complex{});
  CHECK(F.coeff(4) == Complex{});
  const double l1 = std::log(1.5), l2 = std::log(4.0 / 3.0);
  CHECK(norm_h2(F) * norm_h2(F) == doctest::Approx(2 * l1 * l1 + 3 * l2 * l2).epsilon(1e-14));
  CHECK(norm_h2(F) <= phi.l2_norm());
  CHECK(build_h2_coefficients(GridFunction::uniform(1.0, 3.0, 4), 2).terms().empty());
  CHECK_THROWS_AS(build_h2_coefficients(phi, 3), Error);
}

TEST_CASE("defect bound worked example") {
  const auto phi = constant_on(std::log(2.0), std::log(4.0));
  const auto F = build_h2_coefficients(phi, 2);
  const Complex Phi = defect(phi, F, 1.5);
  CHECK(std::abs(Phi) == doctest::Approx(std::abs(0.25 - std::log(1.5) / 2 - std::log(4.0 / 3.0) / 3)));
  CHECK(std::abs(Phi) == doctest::Approx(0.04863).epsilon(1e-3));
  const std::vector<Complex> samples{1.5};
  const auto rep = defect_bound_check_h2(phi, 2, F, samples);
  CHECK(rep.max_ratio == doctest::Approx(std::abs(Phi) / (0.5 * std::sqrt(std::log(2.0)))));

  const auto zero = GridFunction::uniform(1.0, 2.0, 3);
  const auto Z = build_h2_coefficients(zero, 2);
  CHECK(defect_bound_check_h2(zero, 2, Z, samples).max_ratio == 0.0);
}

TEST_CASE("coefficient map contracts and the defect obeys its bound") {
  std::mt19937_64 rng(8);
  for (std::size_t N : {4u, 16u, 64u}) {
    for (int k = 0; k < 30; ++k) {
      const double lo = std::log(double(N));
      const auto phi = gen::density(rng, lo, lo + 3.0, 25);
      const auto F = build_h2_coefficients(phi, N);
      CHECK(norm_h2(F) <= phi.l2_norm());
      std::vector<Complex> samples;
      for (int q = 0; q < 50; ++q) samples.push_back(gen::half_plane_point(rng, 0.5, 3.0, 30.0));
      CHECK(defect_bound_check_h2(phi, N, F, samples).max_ratio <= 1.0);
    }
  }
}

TEST_CASE("defect decays with the shift") {
  // Same density shape moved to start at log N; at sigma = 3/2 the defect scales like N^{-2}.
  std::vector<double> mags;
  for (std::size_t N : {4u, 8u, 16u, 32u}) {
    const double lo = std::log(double(N));
    const auto phi = constant_on(lo, lo + 1.0);
    mags.push_back(std::abs(defect(phi, build_h2_coefficients(phi, N), 1.5)) * double(N) * N);
  }
  for (std::size_t k = 1; k < mags.size(); ++k) {
    CHECK(mags[k] / mags[k - 1] >= 0.5);
    CHECK(mags[k] / mags[k - 1] <= 2.0);
  }
}

TEST_CASE("defect is exact against brute-force integration") {
  const GridFunction phi({1.0, 1.4, 2.2}, {Complex{1.0, -0.5}, Complex{0.3, 2.0}});
  const auto F = build_h2_coefficients(phi, 2);
  const Complex s{0.9, 2.5};
  Complex lap{};
  const int M = 100000;
  auto piece = [&](double lo, double hi, Complex v) {
    for (int k = 0; k < M; ++k) {
      const double x = lo + (hi - lo) * (k + 0.5) / M;
      lap += v * std::exp(-(s - 0.5) * x) * ((hi - lo) / M);
    }
  };
  piece(1.0, 1.4, {1.0, -0.5});
  piece(1.4, 2.2, {0.3, 2.0});
  CHECK(std::abs(defect(phi, F, s) - (lap - F(s))) < 1e-9);
}
