#pragma once

#include <cstddef>
#include <string>

#include "dirzero/dirichlet.hpp"
#include "dirzero/geometry.hpp"

namespace dirzero {

/// Besicovitch H^p norm for p = 2^m, m >= 1, computed exactly:
/// ||f||_{2^m}^{2^m} = ||f^{2^{m-1}}||_2^2 with powers taken as coefficient convolutions.
/// IndexOverflow when an intermediate power would need more than `cap` coefficients.
double hp_norm_even(const DirichletPolynomial& p, unsigned exponent, std::size_t cap = 1000000);

struct EmbeddingCheck {
  double lhs = 0.0;  // ||f||_{2^{alpha+1}}
  double rhs = 0.0;  // ||f||_{D_alpha}
  bool ok = false;
};

/// Compares ||f||_{H^{2^{alpha+1}}} with ||f||_{D_alpha} for integer alpha >= 0.
EmbeddingCheck verify_contractive_embedding(const DirichletPolynomial& p, int alpha,
                                            std::size_t cap = 1000000);

/// p = 2^{[alpha]+2} / (2 + [alpha] - alpha); InvalidArgument unless alpha > 0.
double embedding_exponent(double alpha);

struct HpZeroCriterion {
  double beta_needed = 0.0;  // 1 - 2^{-2 + 4/p}
  double carleson_sum = 0.0;
  bool carleson = false;     // sum (sigma - 1/2)^{1 - beta} finite (always, for finite S)
  bool cone = false;         // S inside |t - t0| <= c (sigma - 1/2)
  bool certified = false;
  std::string route;         // "cone", "carleson" or "none"
};

/// Sufficient conditions for S to be a zero set in H^p, 2 < p < 4, via D_beta with
/// beta = 1 - 2^{-2+4/p}. InvalidArgument unless 2 < p < 4.
HpZeroCriterion zero_criterion_for_hp(const PointSequence& S, double p, double t0 = 0.0,
                                      double c = 1.0);

}  // namespace dirzero
