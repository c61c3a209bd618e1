#include "dirzero/embedding.hpp"

#include <bit>
#include <cmath>

#include "dirzero/divisor.hpp"
#include "dirzero/error.hpp"

namespace dirzero {

double hp_norm_even(const DirichletPolynomial& p, unsigned exponent, std::size_t cap) {
  if (exponent < 2 || !std::has_single_bit(exponent)) {
    throw Error(ErrorCode::InvalidArgument, "exponent must be a power of two >= 2");
  }
  DirichletPolynomial g = p;
  for (unsigned e = 2; e < exponent; e *= 2) {
    const double need = static_cast<double>(g.length()) * static_cast<double>(g.length());
    if (need > static_cast<double>(cap)) {
      throw Error(ErrorCode::IndexOverflow,
                  "power needs " + std::to_string(need) + " coefficients (cap " +
                      std::to_string(cap) + ")");
    }
    g = coefficient_convolution(g, g);
  }
  const double n2 = norm_h2(g);
  return std::pow(n2, 2.0 / static_cast<double>(exponent));
}

EmbeddingCheck verify_contractive_embedding(const DirichletPolynomial& p, int alpha,
                                            std::size_t cap) {
  if (alpha < 0 || alpha > 20) throw Error(ErrorCode::InvalidArgument, "alpha must be in 0..20");
  EmbeddingCheck out;
  out.lhs = hp_norm_even(p, 1u << (alpha + 1), cap);
  if (alpha == 0) {
    out.rhs = norm_h2(p);
  } else {
    const DivisorTable d(std::max<std::size_t>(p.length(), 1));
    out.rhs = norm_dalpha(p, SpaceWeight::finite(alpha), d);
  }
  out.ok = out.lhs <= out.rhs + 1e-12 * out.rhs;
  return out;
}

double embedding_exponent(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  }
  const double ip = std::floor(alpha);
  return std::exp2(ip + 2.0) / (2.0 + ip - alpha);
}

HpZeroCriterion zero_criterion_for_hp(const PointSequence& S, double p, double t0, double c) {
  if (!(p > 2.0 && p < 4.0)) throw Error(ErrorCode::InvalidArgument, "p must lie in (2, 4)");
  HpZeroCriterion out;
  out.beta_needed = 1.0 - std::exp2(-2.0 + 4.0 / p);
  const auto rep = carleson_condition(S, out.beta_needed);
  out.carleson_sum = rep.sum;
  out.carleson = rep.satisfied && std::isfinite(rep.sum);
  out.cone = cone_condition(S, t0, c);
  out.certified = out.cone || out.carleson;
  out.route = out.cone ? "cone" : (out.carleson ? "carleson" : "none");
  return out;
}

}  // namespace dirzero
