#include "dirzero/divisor.hpp"

#include <cmath>

#include "dirzero/error.hpp"

namespace dirzero {

DivisorTable::DivisorTable(std::uint64_t max_n) : values_(max_n + 1, 0) {
  for (std::uint64_t i = 1; i <= max_n; ++i) {
    for (std::uint64_t j = i; j <= max_n; j += i) ++values_[j];
  }
}

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return primes;
}

}  // namespace

std::vector<std::uint32_t> divisor_counts_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 1) lo = 1;
  if (hi <= lo) return {};
  const std::uint64_t len = hi - lo;
  std::vector<std::uint64_t> rest(len);
  std::vector<std::uint32_t> count(len, 1);
  for (std::uint64_t i = 0; i < len; ++i) rest[i] = lo + i;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;
  for (std::uint64_t p : primes_up_to(root)) {
    for (std::uint64_t m = ((lo + p - 1) / p) * p; m < hi; m += p) {
      const std::uint64_t i = m - lo;
      std::uint32_t e = 0;
      while (rest[i] % p == 0) {
        rest[i] /= p;
        ++e;
      }
      count[i] *= e + 1;
    }
  }
  // At most one prime factor above sqrt(hi) survives.
  for (std::uint64_t i = 0; i < len; ++i) {
    if (rest[i] > 1) count[i] *= 2;
  }
  return count;
}

SpaceWeight SpaceWeight::finite(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be a positive finite number");
  }
  return SpaceWeight(alpha, false);
}

double SpaceWeight::beta() const noexcept {
  return infinite_ ? 1.0 : 1.0 - std::exp2(-alpha_);
}

DivisorSumAsymptotic divisor_sum_asymptotic(double alpha, std::uint64_t M, const DivisorTable& d) {
  if (M < 3) throw Error(ErrorCode::InvalidArgument, "divisor_sum_asymptotic needs M >= 3");
  if (!d.covers(M)) throw Error(ErrorCode::InvalidArgument, "divisor table does not reach M");
  long double sum = 0.0L;
  for (std::uint64_t n = 1; n <= M; ++n) {
    sum += std::pow(static_cast<long double>(d(n)), static_cast<long double>(-alpha));
  }
  const long double logM = std::log(static_cast<long double>(M));
  const long double scale =
      static_cast<long double>(M) * std::pow(logM, std::exp2l(-alpha) - 1.0L);
  return {sum, static_cast<double>(sum / scale)};
}

DivisorSumAsymptotic divisor_sum_asymptotic(const SpaceWeight& w, std::uint64_t M,
                                            const DivisorTable& d) {
  if (!w.is_infinite()) return divisor_sum_asymptotic(w.alpha(), M, d);
  if (M < 3) throw Error(ErrorCode::InvalidArgument, "divisor_sum_asymptotic needs M >= 3");
  if (!d.covers(M)) throw Error(ErrorCode::InvalidArgument, "divisor table does not reach M");
  long double primes = 0.0L;
  for (std::uint64_t n = 2; n <= M; ++n) {
    if (d.is_prime(n)) primes += 1.0L;
  }
  const long double scale = static_cast<long double>(M) / std::log(static_cast<long double>(M));
  return {primes, static_cast<double>(primes / scale)};
}

}  // namespace dirzero
