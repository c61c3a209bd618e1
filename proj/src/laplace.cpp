#include "dirzero/laplace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

// Gauss-Legendre, 8 nodes on [-1, 1]; symmetric half listed.
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

}  // namespace

GridFunction::GridFunction(std::vector<double> breakpoints, std::vector<Complex> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (breaks_.empty() && values_.empty()) return;
  if (breaks_.size() != values_.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "grid function needs K+1 breakpoints for K values");
  }
  for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
    if (!(breaks_[k + 1] > breaks_[k])) {
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    }
  }
}

GridFunction GridFunction::uniform(double lo, double hi, std::size_t cells) {
  if (cells == 0 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "bad uniform grid");
  std::vector<double> b(cells + 1);
  const double step = (hi - lo) / static_cast<double>(cells);
  for (std::size_t k = 0; k <= cells; ++k) b[k] = lo + step * static_cast<double>(k);
  b.back() = hi;
  return GridFunction(std::move(b), std::vector<Complex>(cells));
}

GridFunction GridFunction::from_cell_integrals(std::vector<double> breakpoints,
                                               std::span<const Complex> integrals) {
  std::vector<Complex> values(integrals.size());
  GridFunction g(std::move(breakpoints), std::move(values));
  for (std::size_t k = 0; k < g.cells(); ++k) g.values_[k] = integrals[k] / g.width(k);
  return g;
}

double GridFunction::l2_norm() const {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < cells(); ++k) sum += std::norm(values_[k]) * width(k);
  return static_cast<double>(std::sqrt(sum));
}

double GridFunction::power_weighted_norm(double beta) const {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < cells(); ++k) {
    const long double a = breaks_[k];
    const long double b = breaks_[k + 1];
    const long double w = (std::pow(b, beta + 1.0L) - std::pow(a, beta + 1.0L)) / (beta + 1.0L);
    sum += std::norm(values_[k]) * w;
  }
  return static_cast<double>(std::sqrt(sum));
}

double GridFunction::dbeta_norm(double beta) const {
  const double a = l2_norm();
  const double b = power_weighted_norm(beta);
  return std::sqrt(a * a + b * b);
}

Complex GridFunction::integrate(double a, double b) const {
  if (empty() || !(b > a)) return {};
  const double nodes[2] = {a, b};
  return integrate_partition(nodes).front();
}

std::vector<Complex> GridFunction::integrate_partition(std::span<const double> nodes) const {
  std::vector<Complex> out(nodes.size() > 0 ? nodes.size() - 1 : 0);
  if (empty() || out.empty()) return out;
  const std::size_t K = cells();
  std::size_t k = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x0 = nodes[i];
    const double x1 = nodes[i + 1];
    while (k < K && breaks_[k + 1] <= x0) ++k;
    long double re = 0.0L;
    long double im = 0.0L;
    std::size_t j = k;
    while (j < K && breaks_[j] < x1) {
      const double lo = std::max(x0, breaks_[j]);
      const double hi = std::min(x1, breaks_[j + 1]);
      if (hi > lo) {
        re += static_cast<long double>(values_[j].real()) * (hi - lo);
        im += static_cast<long double>(values_[j].imag()) * (hi - lo);
      }
      if (breaks_[j + 1] > x1) break;
      ++j;
    }
    k = j;
    out[i] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

Complex exp_cell_integral(double a, double b, Complex lambda) {
  const double width = b - a;
  const Complex z = lambda * width;
  const Complex ea = std::exp(-lambda * a);
  if (std::abs(z) < 1e-3) {
    return ea * width * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
  }
  return (ea - std::exp(-lambda * b)) / lambda;
}

Complex exp_cell_moment(double a, double b, Complex lambda, int r) {
  if (r == 0) return exp_cell_integral(a, b, lambda);
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(lambda) * (b - a) / 2.0)));
  const double step = (b - a) / pieces;
  Complex sum{};
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * step;
    const double half = 0.5 * step;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      for (const double sign : {-1.0, 1.0}) {
        const double x = mid + sign * half * kGlNodes[q];
        sum += kGlWeights[q] * half * std::pow(x, r) * std::exp(-lambda * x);
      }
    }
  }
  return sum;
}

Complex GridFunction::laplace(Complex s, int order) const {
  if (empty()) return {};
  const Complex lambda = s - 0.5;
  Complex sum{};
  if (order == 0) {
    Complex e_lo = std::exp(-lambda * breaks_[0]);
    for (std::size_t k = 0; k < cells(); ++k) {
      const Complex e_hi = std::exp(-lambda * breaks_[k + 1]);
      if (values_[k] != Complex{}) {
        const double w = width(k);
        const Complex z = lambda * w;
        Complex cell;
        if (std::abs(z) < 1e-3) {
          cell = e_lo * w * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0);
        } else {
          cell = (e_lo - e_hi) / lambda;
        }
        sum += values_[k] * cell;
      }
      e_lo = e_hi;
    }
    return sum;
  }
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t k = 0; k < cells(); ++k) {
    if (values_[k] == Complex{}) continue;
    sum += values_[k] * exp_cell_moment(breaks_[k], breaks_[k + 1], lambda, order);
  }
  return sign * sum;
}

double GridFunction::support_lower() const noexcept {
  for (std::size_t k = 0; k < cells(); ++k) {
    if (values_[k] != Complex{}) return breaks_[k];
  }
  return upper();
}

double GridFunction::support_upper() const noexcept {
  for (std::size_t k = cells(); k-- > 0;) {
    if (values_[k] != Complex{}) return breaks_[k + 1];
  }
  return lower();
}

GridFunction& GridFunction::operator*=(Complex scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

std::vector<Complex> laplace_lattice(const GridFunction& phi, std::span<const double> sigmas,
                                     double t0, double dt, std::size_t nt, int order) {
  std::vector<Complex> out(sigmas.size() * nt);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    for (std::size_t k = 0; k < nt; ++k) {
      out[i * nt + k] = phi.laplace({sigmas[i], t0 + static_cast<double>(k) * dt}, order);
    }
  }
  return out;
}

DirichletPolynomial build_h2_coefficients(const GridFunction& phi, std::size_t N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  const double logN = std::log(static_cast<double>(N));
  if (phi.support_lower() < logN - 1e-12 * (1.0 + logN)) {
    throw Error(ErrorCode::SupportMismatch, "density has mass below log N");
  }
  if (phi.empty()) return DirichletPolynomial({}, N);
  const double top = phi.upper();
  if (top > std::log(5e7)) {
    throw Error(ErrorCode::IndexOverflow, "support reaches beyond the coefficient cap");
  }
  const auto M = static_cast<std::size_t>(std::ceil(std::exp(top)));
  if (M < N) return DirichletPolynomial({}, N);
  std::vector<double> nodes(M - N + 2);
  for (std::size_t n = N; n <= M + 1; ++n) nodes[n - N] = std::log(static_cast<double>(n));
  const auto integrals = phi.integrate_partition(nodes);
  std::vector<Complex> coeffs(M);
  for (std::size_t n = N; n <= M; ++n) {
    coeffs[n - 1] = std::sqrt(static_cast<double>(n)) * integrals[n - N];
  }
  return DirichletPolynomial(std::move(coeffs), N);
}

Complex defect(const GridFunction& phi, const DirichletPolynomial& F, Complex s, int order) {
  return phi.laplace(s, order) - F.derivative(s, order);
}

DefectBoundReport defect_bound_check_h2(const GridFunction& phi, std::size_t N,
                                        const DirichletPolynomial& F,
                                        std::span<const Complex> samples) {
  DefectBoundReport report;
  const double norm = phi.l2_norm();
  std::vector<Complex> offending;
  for (const Complex& s : samples) {
    const double value = std::abs(defect(phi, F, s));
    const double bound =
        2.0 * std::abs(s - 0.5) * std::pow(static_cast<double>(N), -s.real() - 0.5) * norm;
    double ratio = 0.0;
    if (bound > 0.0) {
      ratio = value / bound;
    } else if (value > 0.0) {
      ratio = INFINITY;
    }
    report.ratios.push_back(ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > 1.0 + 1e-9) offending.push_back(s);
  }
  if (!offending.empty()) {
    std::string where;
    for (const Complex& s : offending) {
      where += " (" + std::to_string(s.real()) + "," + std::to_string(s.imag()) + ")";
    }
    throw Error(ErrorCode::BoundViolation, "defect bound fails at" + where);
  }
  return report;
}

}  // namespace dirzero
