#include "dirzero/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "dirzero/error.hpp"

namespace dirzero {

StripRegion::StripRegion(double R, double tau) : R_(R), tau_(tau) {
  if (!(R > 0.0) || !(tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "strip region needs R > 0 and tau > 0");
  }
}

bool StripRegion::contains(Complex s) const noexcept {
  return s.real() >= 0.5 && s.real() <= 0.5 + tau_ && std::abs(s.imag()) <= R_;
}

double StripRegion::distance(Complex s) const noexcept {
  const double dx = std::max({0.5 - s.real(), 0.0, s.real() - 0.5 - tau_});
  const double dy = std::max(0.0, std::abs(s.imag()) - R_);
  return std::hypot(dx, dy);
}

PointSequence::PointSequence(std::vector<SequencePoint> points) : points_(std::move(points)) {
  for (const auto& p : points_) {
    if (!std::isfinite(p.sigma) || !std::isfinite(p.t)) {
      throw Error(ErrorCode::InvalidSequence, "non-finite point");
    }
    if (!(p.sigma > 0.5)) {
      throw Error(ErrorCode::InvalidSequence,
                  "point sigma = " + std::to_string(p.sigma) + " is not in Re s > 1/2");
    }
    if (p.multiplicity < 1) throw Error(ErrorCode::InvalidSequence, "multiplicity must be >= 1");
    max_sigma_ = std::max(max_sigma_, p.sigma);
    max_abs_t_ = std::max(max_abs_t_, std::abs(p.t));
  }
}

int PointSequence::total_multiplicity() const noexcept {
  int total = 0;
  for (const auto& p : points_) total += p.multiplicity;
  return total;
}

bool PointSequence::inside(const StripRegion& region) const noexcept {
  return std::all_of(points_.begin(), points_.end(),
                     [&](const SequencePoint& p) { return region.contains(p.point()); });
}

Complex blaschke_factor(Complex w, Complex s) {
  if (!(w.real() > 0.5)) throw Error(ErrorCode::InvalidArgument, "Blaschke zero needs Re w > 1/2");
  const Complex den = s + std::conj(w) - 1.0;
  if (den == Complex{}) throw Error(ErrorCode::PoleHit, "evaluation at the reflected point");
  return (s - w) / den;
}

Complex BlaschkeProduct::operator()(Complex s) const {
  Complex value{1.0, 0.0};
  for (const auto& p : zeros_.points()) {
    const Complex b = blaschke_factor(p.point(), s);
    for (int m = 0; m < p.multiplicity; ++m) value *= b;
  }
  return value;
}

std::pair<Complex, Complex> BlaschkeProduct::value_and_derivative(Complex s) const {
  Complex value{1.0, 0.0};
  Complex deriv{0.0, 0.0};
  for (const auto& p : zeros_.points()) {
    const Complex w = p.point();
    const Complex b = blaschke_factor(w, s);
    const Complex den = s + std::conj(w) - 1.0;
    const Complex db = (2.0 * w.real() - 1.0) / (den * den);
    for (int m = 0; m < p.multiplicity; ++m) {
      deriv = deriv * b + value * db;
      value *= b;
    }
  }
  return {value, deriv};
}

namespace {

template <class Term>
ConditionReport accumulate_condition(const PointSequence& S, Term term) {
  ConditionReport report;
  report.prefix_sums.reserve(S.size());
  double sum = 0.0;
  for (const auto& p : S.points()) {
    sum += p.multiplicity * term(p.sigma - 0.5);
    report.prefix_sums.push_back(sum);
  }
  report.sum = sum;
  if (!report.prefix_sums.empty() && sum > 0.0) {
    const std::size_t half = report.prefix_sums.size() / 2;
    const double first = half == 0 ? 0.0 : report.prefix_sums[half - 1];
    report.late_share = (sum - first) / sum;
  }
  return report;
}

}  // namespace

ConditionReport blaschke_condition(const PointSequence& S) {
  return accumulate_condition(S, [](double x) { return x; });
}

ConditionReport carleson_condition(const PointSequence& S, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Carleson condition needs beta in (0, 1)");
  }
  return accumulate_condition(S, [beta](double x) { return std::pow(x, 1.0 - beta); });
}

ConditionReport shapiro_shields_condition(const PointSequence& S) {
  return accumulate_condition(S, [](double x) {
    const double l = std::log(x);
    if (l == 0.0) throw Error(ErrorCode::LogSingular, "sigma - 1/2 = 1 gives log 0");
    return 1.0 / std::abs(l);
  });
}

bool cone_condition(const PointSequence& S, double t0, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "cone aperture must be positive");
  return std::all_of(S.points().begin(), S.points().end(), [&](const SequencePoint& p) {
    return std::abs(p.t - t0) <= c * (p.sigma - 0.5);
  });
}

Complex half_plane_to_disk(Complex s) {
  const Complex den = s + 0.5;
  if (den == Complex{}) throw Error(ErrorCode::PoleHit, "s = -1/2");
  return (s - 1.5) / den;
}

AnalyticFunction conformal_transfer(AnalyticFunction f_disk, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "conformal transfer needs beta in (0, 1]");
  }
  return [f = std::move(f_disk), beta](Complex s) {
    const Complex shifted = s + 0.5;
    if (shifted == Complex{}) throw Error(ErrorCode::PoleHit, "s = -1/2");
    return f(half_plane_to_disk(s)) * std::pow(shifted, beta - 2.0);
  };
}

}  // namespace dirzero
