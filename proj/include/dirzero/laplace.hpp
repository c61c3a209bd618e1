#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dirzero/dirichlet.hpp"

namespace dirzero {

/// Piecewise-constant density phi on [xi_0, xi_K], zero outside. Stands for the
/// half-plane function f(s) = int phi(xi) e^{-(s-1/2) xi} d xi.
class GridFunction {
 public:
  GridFunction() = default;
  /// K+1 strictly increasing breakpoints and K cell values.
  GridFunction(std::vector<double> breakpoints, std::vector<Complex> values);

  static GridFunction uniform(double lo, double hi, std::size_t cells);
  /// Cell averages of `antiderivative` differences: value_k = (P(xi_{k+1}) - P(xi_k)) / width.
  static GridFunction from_cell_integrals(std::vector<double> breakpoints,
                                          std::span<const Complex> integrals);

  std::span<const double> breakpoints() const noexcept { return breaks_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  std::size_t cells() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double lower() const noexcept { return breaks_.empty() ? 0.0 : breaks_.front(); }
  double upper() const noexcept { return breaks_.empty() ? 0.0 : breaks_.back(); }
  double width(std::size_t k) const noexcept { return breaks_[k + 1] - breaks_[k]; }

  /// ||phi||_2.
  double l2_norm() const;
  /// (int |phi|^2 xi^beta)^{1/2}, exact per cell.
  double power_weighted_norm(double beta) const;
  /// (int |phi|^2 (1 + xi^beta))^{1/2}, the D_beta norm read on the density side.
  double dbeta_norm(double beta) const;

  /// Exact int_a^b phi.
  Complex integrate(double a, double b) const;
  /// Exact integrals over consecutive intervals [nodes[i], nodes[i+1]] (nodes increasing).
  std::vector<Complex> integrate_partition(std::span<const double> nodes) const;

  /// d^r/ds^r of the Laplace transform: int phi(xi) (-xi)^r e^{-(s-1/2) xi} d xi.
  Complex laplace(Complex s, int order = 0) const;

  /// Smallest xi carrying a nonzero value (upper() when phi == 0).
  double support_lower() const noexcept;
  double support_upper() const noexcept;

  GridFunction& operator*=(Complex scale);

 private:
  std::vector<double> breaks_;
  std::vector<Complex> values_;
};

/// int_a^b e^{-lambda xi} d xi, stable for small |lambda (b - a)|.
Complex exp_cell_integral(double a, double b, Complex lambda);
/// int_a^b xi^r e^{-lambda xi} d xi by Gauss-Legendre, subdividing when |lambda|(b-a) is large.
Complex exp_cell_moment(double a, double b, Complex lambda, int r);

/// Laplace transform of phi on the lattice sigma_i + i (t0 + k dt); row-major like
/// evaluate_lattice.
std::vector<Complex> laplace_lattice(const GridFunction& phi, std::span<const double> sigmas,
                                     double t0, double dt, std::size_t nt, int order = 0);

/// a_n = sqrt(n) int_{log n}^{log(n+1)} phi for n = N..M, M = ceil(e^{upper}).
/// SupportMismatch if phi carries mass below log N.
DirichletPolynomial build_h2_coefficients(const GridFunction& phi, std::size_t N);

/// Phi(s) = Laplace(phi)(s) - F(s) (or its r-th derivative). Exact: closed-form cell
/// integrals minus a finite sum.
Complex defect(const GridFunction& phi, const DirichletPolynomial& F, Complex s, int order = 0);

struct DefectBoundReport {
  double max_ratio = 0.0;
  std::vector<double> ratios;
};

/// Checks |Phi(s)| <= 2 |s - 1/2| N^{-sigma-1/2} ||phi||_2 at every sample; BoundViolation
/// otherwise (the inequality holds for every valid input, so a violation is a bug).
DefectBoundReport defect_bound_check_h2(const GridFunction& phi, std::size_t N,
                                        const DirichletPolynomial& F,
                                        std::span<const Complex> samples);

}  // namespace dirzero
