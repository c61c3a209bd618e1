#include <doctest.h>

#include <cmath>

#include "dirzero/contraction.hpp"
#include "dirzero/error.hpp"
#include "generators.hpp"

using namespace dirzero;

namespace {

const PointSequence& single_point() {
  static const PointSequence S({{1.0, 0.0, 1}});
  return S;
}

const TOperator& h2_operator() {
  static const TOperator T(single_point(), 16, ConstructionConfig{});
  return T;
}

GridFunction smooth_density(const TOperator& T, double freq) {
  GridFunction f = T.zero_density();
  const auto br = f.breakpoints();
  auto vals = f.values();
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const double x = 0.5 * (br[k] + br[k + 1]) - br.front();
    vals[k] = Complex{std::cos(freq * x), std::sin(0.5 * x)} * std::exp(-0.4 * x);
  }
  return f;
}

}  // namespace

TEST_CASE("operator preconditions") {
  CHECK_THROWS_AS(ExponentialShift(1), Error);
  ConstructionConfig cfg;
  try {
    TOperator(PointSequence({{1.0, 3.5, 1}}), 16, cfg);
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportViolation);
  }
  try {
    TOperator(PointSequence({{1.2, 0.0, 1}}), 16, cfg);
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportViolation);
  }
  cfg.divisor_threshold = 0.5;
  try {
    TOperator(PointSequence({{1.0, 2.5, 3}}), 16, cfg);
    FAIL("expected a small divisor");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivisorTooSmall);
  }
}

TEST_CASE("zero density maps to zero") {
  const auto& T = h2_operator();
  const auto app = T.apply(T.zero_density(), T.N());
  CHECK(app.F.terms().empty());
  CHECK(T.density_norm(app.image) == 0.0);
  for (Complex v : app.targets) CHECK(v == Complex{});
}

TEST_CASE("operator is linear") {
  const auto& T = h2_operator();
  const auto f = smooth_density(T, 2.0);
  GridFunction g = f;
  const Complex c{0.3, -1.7};
  g *= c;
  const auto a = T.apply(f, T.N());
  const auto b = T.apply(g, T.N());
  double diff = 0.0;
  for (std::size_t k = 0; k < a.image.cells(); ++k) {
    diff = std::max(diff, std::abs(b.image.values()[k] - c * a.image.values()[k]));
  }
  CHECK(diff <= 1e-11 * std::abs(c) * T.density_norm(a.image));
}

TEST_CASE("image agrees with the defect on the sequence and is analytic") {
  const auto& T = h2_operator();
  const auto f = smooth_density(T, 3.0);
  const auto F = T.coefficients(f, T.N());
  const auto Tf = T.image_function(f, T.N());
  const Complex s0{1.0, 0.0};
  CHECK(std::abs(Tf(s0) - defect(f, F, s0)) < 1e-10 * (1.0 + std::abs(defect(f, F, s0))));

  // Cauchy-Riemann residual of T f for a unit-norm input, on probes covering the ramp.
  GridFunction unit = f;
  unit *= 1.0 / T.density_norm(f);
  const auto Tu = T.image_function(unit, T.N());
  std::vector<Complex> probes;
  for (double sigma = 0.6; sigma < 2.8; sigma += 0.137) {
    for (double t = -5.6; t < 5.6; t += 0.31) probes.emplace_back(sigma, t);
  }
  const auto zero = [](Complex) { return Complex{}; };
  CHECK(dbar_residual(Tu, zero, probes, 1e-2) <= 1e-3);
}

TEST_CASE("inverted image reproduces the constraint values") {
  const auto& T = h2_operator();
  const auto f = smooth_density(T, 1.0);
  auto app = T.apply(f, T.N());
  CHECK(app.inversion_defect <= 1e-2 * T.density_norm(f));
  CHECK(app.mass_below <= 1e-3 * T.density_norm(app.image));
  T.project(app.image, app.targets);
  const auto v = T.constraint_values(app.image);
  for (std::size_t q = 0; q < v.size(); ++q) {
    CHECK(std::abs(v[q] - app.targets[q]) <= 1e-10 * (1.0 + std::abs(app.targets[q])));
  }
}

TEST_CASE("starting density vanishes on the sequence") {
  const TOperator T(PointSequence({{1.0, 0.0, 2}, {0.8, 1.5, 1}}), 16, ConstructionConfig{});
  // Truncation to the working span perturbs the values slightly; projection restores them.
  auto f0 = starting_density(T);
  const double before = T.density_norm(f0);
  CHECK(before > 0.0);
  T.project(f0, std::vector<Complex>(T.constraint_count()));
  CHECK(T.density_norm(f0) == doctest::Approx(before).epsilon(0.05));
  for (Complex v : T.constraint_values(f0)) CHECK(std::abs(v) < 1e-10 * before);
}

TEST_CASE("more trials can only raise the contraction estimate") {
  const auto& T = h2_operator();
  const auto one = estimate_contraction(T, 1, 2, 5);
  const auto three = estimate_contraction(T, 3, 2, 5);
  CHECK(one.rho <= three.rho);
  CHECK(three.rho < 0.5);
  CHECK(contraction_ratio(T, starting_density(T)) < 1.0);
}

TEST_CASE("empty sequence gives the first approximation") {
  const auto res = construct_vanishing(PointSequence{}, ConstructionConfig{});
  CHECK(res.cert.certified);
  CHECK(res.cert.records.size() == 1);
  CHECK(norm_h2(res.F) > 0.0);
  CHECK(std::abs(res.F(1.5)) > 0.0);
  CHECK(res.F.start_index() >= 16);
}

TEST_CASE("double point vanishing") {
  const PointSequence S({{1.0, 0.0, 2}});
  const auto res = construct_vanishing(S, ConstructionConfig{});
  const double norm = norm_h2(res.F);
  CHECK(res.cert.certified);
  CHECK(std::abs(res.F(1.0)) <= 1e-3 * norm);
  CHECK(std::abs(res.F.derivative(1.0, 1)) <= 1e-3 * norm);
  CHECK(std::abs(res.F(1.5)) > 0.0);
}

TEST_CASE("target already vanishing on the sequence") {
  const auto& T = h2_operator();
  // Density from 0 with zero constraint values: project a smooth profile.
  const std::size_t cells = 300;
  std::vector<double> br(cells + 1);
  std::vector<Complex> v(cells);
  for (std::size_t k = 0; k <= cells; ++k) br[k] = 6.0 * double(k) / cells;
  for (std::size_t k = 0; k < cells; ++k) v[k] = std::exp(-0.5 * br[k]) * std::cos(br[k]);
  GridFunction target(br, v);
  T.project(target, std::vector<Complex>(T.constraint_count()));
  const auto res = run_iteration(T, &target);
  CHECK(res.cert.converged);
  CHECK(std::abs(res.F(1.0)) <= 1e-3 * T.density_norm(target));
}

TEST_CASE("bounded vanishing function") {
  const std::vector<SequencePoint> S{{1.0, 0.0, 1}};
  const auto B = construct_hinfty_vanishing(S);
  CHECK(std::abs(B(1.0)) < 1e-15);
  CHECK(std::abs(B(2.0) - Complex{-0.25 / 0.875}) < 1e-12);
  CHECK(B(2.0).real() == doctest::Approx(-0.2857142857));
  for (double t : {-3.0, 0.0, 0.7, 11.0}) CHECK(std::abs(std::abs(B(Complex{0.0, t})) - 1.0) < 1e-12);
  const std::vector<SequencePoint> bad{{0.0, 1.0, 1}};
  CHECK_THROWS_AS(construct_hinfty_vanishing(bad), Error);
}
