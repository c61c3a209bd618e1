#include "dirzero/dirichlet.hpp"

#include <algorithm>
#include <cmath>

#include "dirzero/error.hpp"

namespace dirzero {

DirichletPolynomial::DirichletPolynomial(std::vector<Complex> coeffs, std::size_t start_index)
    : coeffs_(std::move(coeffs)), start_(std::max<std::size_t>(start_index, 1)) {
  for (std::size_t n = 1; n < start_ && n <= coeffs_.size(); ++n) {
    if (coeffs_[n - 1] != Complex{}) {
      throw Error(ErrorCode::InvalidArgument, "nonzero coefficient below start index");
    }
  }
}

DirichletPolynomial DirichletPolynomial::from_terms(std::span<const Term> terms) {
  std::size_t max_n = 0;
  std::size_t min_n = 0;
  for (const auto& [n, v] : terms) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "Dirichlet index must be >= 1");
    max_n = std::max(max_n, n);
    if (v != Complex{} && (min_n == 0 || n < min_n)) min_n = n;
  }
  std::vector<Complex> coeffs(max_n);
  for (const auto& [n, v] : terms) coeffs[n - 1] += v;
  return DirichletPolynomial(std::move(coeffs), min_n == 0 ? 1 : min_n);
}

void DirichletPolynomial::set_coeff(std::size_t n, Complex value) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Dirichlet index must be >= 1");
  if (n > coeffs_.size()) coeffs_.resize(n);
  coeffs_[n - 1] = value;
  if (n < start_ && value != Complex{}) start_ = n;
}

std::vector<DirichletPolynomial::Term> DirichletPolynomial::terms() const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != Complex{}) out.emplace_back(i + 1, coeffs_[i]);
  }
  return out;
}

Complex DirichletPolynomial::derivative(Complex s, int order) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = start_; n <= coeffs_.size(); ++n) {
    const Complex a = coeffs_[n - 1];
    if (a == Complex{}) continue;
    const double ln = std::log(static_cast<double>(n));
    Complex term = a * std::exp(-s * ln);
    if (order > 0) term *= std::pow(-ln, order);
    re += term.real();
    im += term.imag();
  }
  return {re, im};
}

DirichletPolynomial& DirichletPolynomial::operator+=(const DirichletPolynomial& other) {
  if (other.coeffs_.empty()) return *this;
  const bool was_empty = coeffs_.empty();
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  start_ = was_empty ? other.start_ : std::min(start_, other.start_);
  return *this;
}

DirichletPolynomial& DirichletPolynomial::operator*=(Complex scale) {
  for (auto& a : coeffs_) a *= scale;
  return *this;
}

Complex evaluate(const DirichletPolynomial& p, Complex s) { return p(s); }

double norm_h2(const DirichletPolynomial& p) {
  long double sum = 0.0L;
  for (const Complex& a : p.coeffs()) sum += static_cast<long double>(std::norm(a));
  return static_cast<double>(std::sqrt(sum));
}

double norm_dalpha(const DirichletPolynomial& p, const SpaceWeight& w, const DivisorTable& d) {
  const auto coeffs = p.coeffs();
  if (coeffs.size() > d.max_index()) {
    throw Error(ErrorCode::InvalidArgument, "divisor table does not cover the polynomial");
  }
  long double sum = 0.0L;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::size_t n = i + 1;
    const long double mag = std::norm(coeffs[i]);
    if (mag == 0.0L) continue;
    if (w.is_infinite()) {
      if (n > 1 && !d.is_prime(n)) {
        throw Error(ErrorCode::UnsupportedIndex,
                    "D_inf polynomial has a nonzero coefficient at composite n = " +
                        std::to_string(n));
      }
      sum += mag;
    } else {
      sum += mag * std::pow(static_cast<long double>(d(n)), static_cast<long double>(w.alpha()));
    }
  }
  return static_cast<double>(std::sqrt(sum));
}

DirichletPolynomial coefficient_convolution(const DirichletPolynomial& p,
                                            const DirichletPolynomial& q) {
  const auto a = p.coeffs();
  const auto c = q.coeffs();
  if (a.empty() || c.empty()) return {};
  std::vector<Complex> b(a.size() * c.size());
  for (std::size_t k = 1; k <= a.size(); ++k) {
    if (a[k - 1] == Complex{}) continue;
    for (std::size_t m = 1; m <= c.size(); ++m) {
      b[k * m - 1] += a[k - 1] * c[m - 1];
    }
  }
  // Trim trailing zeros so the stored length reflects the support.
  while (!b.empty() && b.back() == Complex{}) b.pop_back();
  return DirichletPolynomial(std::move(b), p.start_index() * q.start_index());
}

std::vector<Complex> evaluate_lattice(const DirichletPolynomial& p, std::span<const double> sigmas,
                                      double t0, double dt, std::size_t nt, int order) {
  const std::size_t rows = sigmas.size();
  std::vector<double> re(rows * nt, 0.0);
  std::vector<double> im(rows * nt, 0.0);
  std::vector<double> phase_re(nt);
  std::vector<double> phase_im(nt);
  constexpr std::size_t kReseed = 64;

  const auto coeffs = p.coeffs();
  for (std::size_t n = p.start_index(); n <= coeffs.size(); ++n) {
    const Complex a = coeffs[n - 1];
    if (a == Complex{}) continue;
    const double ln = std::log(static_cast<double>(n));
    // e^{-i t_k log n} by rotation, re-seeded every kReseed steps to bound drift.
    const Complex step = std::polar(1.0, -dt * ln);
    Complex z;
    for (std::size_t k = 0; k < nt; ++k) {
      if (k % kReseed == 0) {
        z = std::polar(1.0, -(t0 + static_cast<double>(k) * dt) * ln);
      } else {
        z *= step;
      }
      phase_re[k] = z.real();
      phase_im[k] = z.imag();
    }
    const double weight = order > 0 ? std::pow(-ln, order) : 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const Complex c = a * (weight * std::exp(-sigmas[i] * ln));
      const double cr = c.real();
      const double ci = c.imag();
      double* __restrict r = re.data() + i * nt;
      double* __restrict m = im.data() + i * nt;
      for (std::size_t k = 0; k < nt; ++k) {
        r[k] += cr * phase_re[k] - ci * phase_im[k];
        m[k] += cr * phase_im[k] + ci * phase_re[k];
      }
    }
  }
  std::vector<Complex> out(rows * nt);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

}  // namespace dirzero
