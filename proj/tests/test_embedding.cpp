#include <doctest.h>

#include <cmath>

#include "dirzero/divisor.hpp"
#include "dirzero/embedding.hpp"
#include "dirzero/error.hpp"
#include "generators.hpp"

using namespace dirzero;

namespace {

DirichletPolynomial poly(std::initializer_list<DirichletPolynomial::Term> terms) {
  std::vector<DirichletPolynomial::Term> v(terms);
  return DirichletPolynomial::from_terms(v);
}

}  // namespace

TEST_CASE("mean norms of small polynomials") {
  const auto f = poly({{1, 1.0}, {2, 1.0}});
  CHECK(hp_norm_even(f, 4) == doctest::Approx(std::pow(6.0, 0.25)).epsilon(1e-14));
  CHECK(hp_norm_even(f, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const auto c = poly({{1, Complex{3.0, -4.0}}});
  for (unsigned e : {2u, 4u, 8u, 16u}) CHECK(hp_norm_even(c, e) == doctest::Approx(5.0));
  CHECK_THROWS_AS(hp_norm_even(f, 3), Error);
  CHECK_THROWS_AS(hp_norm_even(f, 1), Error);
}

TEST_CASE("squaring identity") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto f = gen::polynomial(rng, 20);
    const double n2 = norm_h2(coefficient_convolution(f, f));
    CHECK(std::pow(hp_norm_even(f, 4), 4) == doctest::Approx(n2 * n2).epsilon(1e-12));
  }
}

TEST_CASE("fourth moment of a prime-supported polynomial") {
  // Distinct primes behave like independent rotations:
  // ||f||_4^4 = 2 (sum |a_p|^2)^2 - sum |a_p|^4.
  const std::vector<std::size_t> primes{2, 3, 5, 7, 11, 13};
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    std::vector<DirichletPolynomial::Term> terms;
    double s2 = 0.0, s4 = 0.0;
    for (auto p : primes) {
      const Complex a = gen::normal_complex(rng);
      terms.emplace_back(p, a);
      s2 += std::norm(a);
      s4 += std::norm(a) * std::norm(a);
    }
    const auto f = DirichletPolynomial::from_terms(terms);
    CHECK(std::pow(hp_norm_even(f, 4), 4) == doctest::Approx(2 * s2 * s2 - s4).epsilon(1e-12));
  }
}

TEST_CASE("mean norm agrees with a long time average") {
  const auto f = poly({{1, 1.0}, {2, Complex{0.5, 0.5}}, {3, -0.7}});
  const double T = 20000.0;
  const int M = 2000000;
  long double acc = 0.0L;
  for (int k = 0; k < M; ++k) {
    const double t = T * (k + 0.5) / M;
    const double v = std::norm(f(Complex{0.0, t}));
    acc += v * v;
  }
  const double mean = static_cast<double>(acc / M);
  CHECK(std::pow(mean, 0.25) == doctest::Approx(hp_norm_even(f, 4)).epsilon(1e-3));
}

TEST_CASE("contractive embedding") {
  const auto f = poly({{1, 1.0}, {2, 1.0}});
  const auto c = verify_contractive_embedding(f, 1);
  CHECK(c.lhs == doctest::Approx(std::pow(6.0, 0.25)));
  CHECK(c.rhs == doctest::Approx(std::sqrt(3.0)));
  CHECK(c.ok);
  for (int a : {0, 1, 2, 3}) {
    const auto one = verify_contractive_embedding(poly({{1, 1.0}}), a);
    CHECK(one.lhs == doctest::Approx(1.0));
    CHECK(one.rhs == doctest::Approx(1.0));
    CHECK(one.ok);
  }
}

TEST_CASE("contractive embedding holds for random polynomials") {
  std::mt19937_64 rng(7);
  int violations = 0;
  for (int a : {1, 2}) {
    for (int k = 0; k < 500; ++k) {
      if (!verify_contractive_embedding(gen::polynomial(rng, 8), a).ok) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("convolution cap") {
  std::vector<Complex> c(2000, Complex{1.0});
  const DirichletPolynomial f(c);
  CHECK_THROWS_AS(hp_norm_even(f, 4, 1000000), Error);
  CHECK_NOTHROW(hp_norm_even(f, 4, 10000000));
}

TEST_CASE("embedding exponent") {
  CHECK(embedding_exponent(1.0) == 4.0);
  CHECK(embedding_exponent(2.0) == 8.0);
  CHECK(embedding_exponent(0.5) == 8.0 / 3.0);
  CHECK(embedding_exponent(3.0) == 16.0);
  CHECK_THROWS_AS(embedding_exponent(0.0), Error);
  CHECK_THROWS_AS(embedding_exponent(-1.0), Error);
}

TEST_CASE("mean-norm zero criterion") {
  const PointSequence cone({{1.0, 0.2, 1}, {0.6, -0.05, 1}});
  const auto near4 = zero_criterion_for_hp(cone, 4.0 - 1e-9);
  CHECK(near4.beta_needed == doctest::Approx(0.5).epsilon(1e-6));
  const auto near2 = zero_criterion_for_hp(cone, 2.0 + 1e-9);
  CHECK(near2.beta_needed == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(near2.beta_needed >= 0.0);
  CHECK(near4.cone);
  CHECK(near4.certified);
  CHECK(near4.route == "cone");
  const PointSequence off({{0.6, 5.0, 1}});
  const auto r = zero_criterion_for_hp(off, 3.0);
  CHECK_FALSE(r.cone);
  CHECK(r.route == "carleson");
  CHECK(r.carleson_sum == doctest::Approx(std::pow(0.1, 1.0 - r.beta_needed)));
  CHECK_THROWS_AS(zero_criterion_for_hp(off, 4.0), Error);
  CHECK_THROWS_AS(zero_criterion_for_hp(off, 2.0), Error);
}
