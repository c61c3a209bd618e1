#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dirzero {

using Complex = std::complex<double>;

/// Rectangle Omega(R, tau) = [1/2, 1/2 + tau] x [-R, R] at the boundary of the half-plane.
class StripRegion {
 public:
  StripRegion(double R, double tau);

  double R() const noexcept { return R_; }
  double tau() const noexcept { return tau_; }
  double area() const noexcept { return 2.0 * R_ * tau_; }

  bool contains(Complex s) const noexcept;
  /// Euclidean distance from s to the closed rectangle (0 inside).
  double distance(Complex s) const noexcept;

 private:
  double R_;
  double tau_;
};

struct SequencePoint {
  double sigma = 1.0;
  double t = 0.0;
  int multiplicity = 1;

  Complex point() const noexcept { return {sigma, t}; }
};

/// Finite sequence in Re s > 1/2, with multiplicities.
class PointSequence {
 public:
  PointSequence() = default;
  /// Rejects sigma <= 1/2, non-finite coordinates and multiplicity < 1 (InvalidSequence).
  explicit PointSequence(std::vector<SequencePoint> points);

  std::span<const SequencePoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  int total_multiplicity() const noexcept;
  double max_sigma() const noexcept { return max_sigma_; }
  double max_abs_t() const noexcept { return max_abs_t_; }

  bool inside(const StripRegion& region) const noexcept;

 private:
  std::vector<SequencePoint> points_;
  double max_sigma_ = 0.5;
  double max_abs_t_ = 0.0;
};

/// (s - w) / (s + conj(w) - 1): zero at w, unimodular on Re s = 1/2.
Complex blaschke_factor(Complex w, Complex s);

class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(PointSequence zeros) : zeros_(std::move(zeros)) {}

  const PointSequence& zeros() const noexcept { return zeros_; }

  Complex operator()(Complex s) const;
  /// Value and first derivative, by forward-mode product rule (exact at the zeros).
  std::pair<Complex, Complex> value_and_derivative(Complex s) const;

 private:
  PointSequence zeros_;
};

/// Condition sums over a finite prefix. `prefix_sums[k]` is the sum over the first k+1
/// points; for a finite sequence the sum is finite, so `satisfied` is always true. The
/// prefix record is the growth report for truncations of infinite families.
struct ConditionReport {
  double sum = 0.0;
  bool satisfied = true;
  std::vector<double> prefix_sums;
  /// Share of the total contributed by the second half of the prefix (near 0 for
  /// families whose full sum converges quickly).
  double late_share = 0.0;
};

ConditionReport blaschke_condition(const PointSequence& S);
/// sum (sigma_j - 1/2)^{1 - beta}, beta in (0, 1).
ConditionReport carleson_condition(const PointSequence& S, double beta);
/// sum |log(sigma_j - 1/2)|^{-1}; LogSingular when some sigma_j - 1/2 == 1.
ConditionReport shapiro_shields_condition(const PointSequence& S);
/// Every point satisfies |t_j - t0| <= c (sigma_j - 1/2).
bool cone_condition(const PointSequence& S, double t0, double c);

/// (s - 3/2) / (s + 1/2), the half-plane to disk map sending 3/2 to 0.
Complex half_plane_to_disk(Complex s);

using AnalyticFunction = std::function<Complex(Complex)>;

/// s -> f(phi(s)) (s + 1/2)^{beta - 2}; beta in (0, 1]. The returned callable throws
/// PoleHit at s = -1/2.
AnalyticFunction conformal_transfer(AnalyticFunction f_disk, double beta);

}  // namespace dirzero
