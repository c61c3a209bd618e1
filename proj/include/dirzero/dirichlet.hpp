#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "dirzero/divisor.hpp"

namespace dirzero {

using Complex = std::complex<double>;

/// Finite Dirichlet series sum_{n=N}^{M} a_n n^{-s}.
///
/// Coefficients are stored densely for n = 1..M. `start_index` is the N below which every
/// coefficient is zero; it is kept as metadata so that shifted subspaces (series starting
/// at n >= N) are explicit.
class DirichletPolynomial {
 public:
  using Term = std::pair<std::size_t, Complex>;

  DirichletPolynomial() = default;
  explicit DirichletPolynomial(std::vector<Complex> coeffs, std::size_t start_index = 1);

  static DirichletPolynomial from_terms(std::span<const Term> terms);

  /// M, the largest stored index.
  std::size_t length() const noexcept { return coeffs_.size(); }
  std::size_t start_index() const noexcept { return start_; }
  bool empty() const noexcept { return coeffs_.empty(); }

  Complex coeff(std::size_t n) const noexcept {
    return (n >= 1 && n <= coeffs_.size()) ? coeffs_[n - 1] : Complex{};
  }
  void set_coeff(std::size_t n, Complex value);

  /// a_1..a_M.
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// Nonzero terms, sorted by n.
  std::vector<Term> terms() const;

  Complex operator()(Complex s) const { return derivative(s, 0); }
  /// d^k/ds^k of the series: sum a_n (-log n)^k n^{-s}.
  Complex derivative(Complex s, int order) const;

  DirichletPolynomial& operator+=(const DirichletPolynomial& other);
  DirichletPolynomial& operator*=(Complex scale);

 private:
  std::vector<Complex> coeffs_;
  std::size_t start_ = 1;
};

Complex evaluate(const DirichletPolynomial& p, Complex s);

/// sqrt(sum |a_n|^2), accumulated left to right in extended precision.
double norm_h2(const DirichletPolynomial& p);

/// sqrt(sum |a_n|^2 d(n)^alpha). For alpha = infinity the polynomial must be supported on
/// n = 1 and primes (UnsupportedIndex otherwise) and the H^2 norm is returned.
double norm_dalpha(const DirichletPolynomial& p, const SpaceWeight& w, const DivisorTable& d);

/// Dirichlet convolution: coefficients of the product series, b_n = sum_{k|n} a_k c_{n/k}.
DirichletPolynomial coefficient_convolution(const DirichletPolynomial& p,
                                            const DirichletPolynomial& q);

/// Evaluate (or differentiate) on a rectangular lattice s = sigma_i + i (t0 + k dt),
/// k = 0..nt-1. Result is row-major: out[i * nt + k]. Summation over n runs in ascending
/// order for every lattice point.
std::vector<Complex> evaluate_lattice(const DirichletPolynomial& p, std::span<const double> sigmas,
                                      double t0, double dt, std::size_t nt, int order = 0);

}  // namespace dirzero
