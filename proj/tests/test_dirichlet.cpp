#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dirzero/dirichlet.hpp"
#include "dirzero/divisor.hpp"
#include "dirzero/error.hpp"
#include "generators.hpp"

using namespace dirzero;
using std::numbers::pi;

namespace {

DirichletPolynomial poly(std::initializer_list<DirichletPolynomial::Term> terms) {
  std::vector<DirichletPolynomial::Term> v(terms);
  return DirichletPolynomial::from_terms(v);
}

std::uint32_t naive_d(std::uint64_t n) {
  std::uint32_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += (n % k == 0);
  return c;
}

}  // namespace

TEST_CASE("divisor table matches trial division and is multiplicative") {
  const DivisorTable d(5000);
  CHECK(d(1) == 1);
  for (std::uint64_t n = 1; n <= 400; ++n) CHECK(d(n) == naive_d(n));
  for (std::uint64_t m = 1; m <= 70; ++m) {
    for (std::uint64_t n = 1; n <= 70; ++n) {
      CHECK(d(m * n) <= d(m) * d(n));
      if (std::gcd(m, n) == 1) CHECK(d(m * n) == d(m) * d(n));
    }
  }
  CHECK(d.is_prime(97));
  CHECK_FALSE(d.is_prime(91));
}

TEST_CASE("segmented divisor counts agree with the sieve") {
  const DivisorTable d(3000);
  const auto seg = divisor_counts_range(2000, 3000);
  REQUIRE(seg.size() == 1000);
  for (std::uint64_t n = 2000; n < 3000; ++n) CHECK(seg[n - 2000] == d(n));
}

TEST_CASE("evaluate") {
  CHECK(std::abs(evaluate(poly({{1, 1.0}}), 2.0) - 1.0) < 1e-15);
  CHECK(std::abs(evaluate(poly({{2, 1.0}}), 1.0) - 0.5) < 1e-15);
  const Complex s{1.0, 2.0 * pi / std::log(2.0)};
  CHECK(std::abs(evaluate(poly({{1, 1.0}, {2, -2.0}}), s)) < 1e-14);
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto p = gen::polynomial(rng, 30);
    const Complex s = gen::half_plane_point(rng, 0.7, 2.0, 20.0);
    const double h = 1e-5;
    const Complex fd = (p(s + h) - p(s - h)) / (2.0 * h);
    CHECK(std::abs(p.derivative(s, 1) - fd) < 1e-7 * (1.0 + std::abs(fd)));
    const Complex fd2 = (p.derivative(s + h, 1) - p.derivative(s - h, 1)) / (2.0 * h);
    CHECK(std::abs(p.derivative(s, 2) - fd2) < 1e-6 * (1.0 + std::abs(fd2)));
  }
}

TEST_CASE("norm_h2") {
  CHECK(norm_h2(poly({{1, 3.0}, {4, 4.0}})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm_h2(DirichletPolynomial{}) == 0.0);
  std::vector<Complex> c(1000);
  double sum = 0.0;
  for (int n = 1; n <= 1000; ++n) {
    c[n - 1] = 1.0 / n;
    sum += 1.0 / (double(n) * n);
  }
  CHECK(norm_h2(DirichletPolynomial(c)) == doctest::Approx(std::sqrt(sum)).epsilon(1e-14));
  CHECK(norm_h2(DirichletPolynomial(c)) == doctest::Approx(1.282160).epsilon(1e-6));
}

TEST_CASE("norm_dalpha") {
  const DivisorTable d(100);
  CHECK(norm_dalpha(poly({{1, 1.0}, {2, 1.0}}), SpaceWeight::finite(1.0), d) ==
        doctest::Approx(std::sqrt(3.0)));
  CHECK(norm_dalpha(poly({{6, 1.0}}), SpaceWeight::finite(2.0), d) == doctest::Approx(4.0));
  CHECK_THROWS_AS(norm_dalpha(poly({{4, 1.0}}), SpaceWeight::infinite(), d), Error);
  CHECK(norm_dalpha(poly({{1, 1.0}, {7, 2.0}}), SpaceWeight::infinite(), d) ==
        doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("weighted norms dominate the plain norm") {
  const DivisorTable d(64);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto p = gen::polynomial(rng, 64);
    const double h2 = norm_h2(p);
    const double d1 = norm_dalpha(p, SpaceWeight::finite(1.0), d);
    const double d2 = norm_dalpha(p, SpaceWeight::finite(2.0), d);
    CHECK(h2 <= d1 * (1 + 1e-15));
    CHECK(d1 <= d2 * (1 + 1e-15));
  }
}

TEST_CASE("divisor sum asymptotics") {
  const DivisorTable d(2000000);
  CHECK(divisor_sum_asymptotic(0.0, 1000, d).normalized_ratio == 1.0);
  CHECK(divisor_sum_asymptotic(0.0, 12345, d).normalized_ratio == 1.0);
  const auto a = divisor_sum_asymptotic(1.0, 10, d);
  CHECK(static_cast<double>(a.partial_sum) == doctest::Approx(53.0 / 12.0).epsilon(1e-15));
  const double r1 = divisor_sum_asymptotic(1.0, 1000000, d).normalized_ratio;
  const double r2 = divisor_sum_asymptotic(1.0, 2000000, d).normalized_ratio;
  CHECK(std::abs(r1 - r2) / r1 < 0.05);
}

TEST_CASE("coefficient convolution") {
  const auto sq = coefficient_convolution(poly({{1, 1.0}, {2, 1.0}}), poly({{1, 1.0}, {2, 1.0}}));
  CHECK(sq.coeff(1) == Complex(1.0));
  CHECK(sq.coeff(2) == Complex(2.0));
  CHECK(sq.coeff(3) == Complex(0.0));
  CHECK(sq.coeff(4) == Complex(1.0));
  const auto six = coefficient_convolution(poly({{2, 1.0}}), poly({{3, 1.0}}));
  CHECK(six.terms().size() == 1);
  CHECK(six.coeff(6) == Complex(1.0));
  const auto p = poly({{1, 1.0}, {2, 1.0}, {3, 1.0}});
  CHECK(coefficient_convolution(p, p).coeff(6) == Complex(2.0));
}

TEST_CASE("convolution is multiplication of series") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const auto p = gen::polynomial(rng, 12);
    const auto q = gen::polynomial(rng, 12);
    const auto pq = coefficient_convolution(p, q);
    const Complex s = gen::half_plane_point(rng, 0.6, 3.0, 50.0);
    CHECK(std::abs(pq(s) - p(s) * q(s)) < 1e-12 * (1.0 + std::abs(pq(s))));
  }
}

TEST_CASE("lattice evaluation matches pointwise evaluation") {
  std::mt19937_64 rng(9);
  const auto p = gen::polynomial(rng, 200);
  const std::vector<double> sigmas{0.55, 1.0, 1.7};
  const auto vals = evaluate_lattice(p, sigmas, -3.0, 0.37, 17, 1);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    for (std::size_t k = 0; k < 17; ++k) {
      const Complex s{sigmas[i], -3.0 + 0.37 * double(k)};
      CHECK(std::abs(vals[i * 17 + k] - p.derivative(s, 1)) < 1e-10);
    }
  }
}
