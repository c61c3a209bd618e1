#pragma once

#include <random>
#include <vector>

#include "dirzero/dirichlet.hpp"
#include "dirzero/geometry.hpp"
#include "dirzero/laplace.hpp"

namespace gen {

inline dirzero::Complex normal_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const double re = g(rng);
  return {re, g(rng)};
}

/// Length uniform in [1, max_len], Gaussian coefficients.
inline dirzero::DirichletPolynomial polynomial(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::vector<dirzero::Complex> c(len(rng));
  for (auto& a : c) a = normal_complex(rng);
  return dirzero::DirichletPolynomial(std::move(c));
}

/// Random breakpoints in [lo, hi] (cells of uneven width), Gaussian values.
inline dirzero::GridFunction density(std::mt19937_64& rng, double lo, double hi,
                                     std::size_t cells) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(cells);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  std::vector<double> br(cells + 1, lo);
  double acc = 0.0;
  for (std::size_t k = 0; k < cells; ++k) br[k + 1] = lo + (hi - lo) * ((acc += w[k]) / total);
  br.back() = hi;
  std::vector<dirzero::Complex> v(cells);
  for (auto& x : v) x = normal_complex(rng);
  return dirzero::GridFunction(std::move(br), std::move(v));
}

/// Point with sigma in [lo, hi], |t| <= t_max.
inline dirzero::Complex half_plane_point(std::mt19937_64& rng, double lo, double hi,
                                         double t_max) {
  std::uniform_real_distribution<double> s(lo, hi), t(-t_max, t_max);
  const double sigma = s(rng);
  return {sigma, t(rng)};
}

}  // namespace gen
