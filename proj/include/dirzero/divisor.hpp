#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dirzero {

/// Number-of-divisors table d(1..M), built by an additive sieve.
class DivisorTable {
 public:
  DivisorTable() = default;
  explicit DivisorTable(std::uint64_t max_n);

  std::uint64_t max_index() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
  bool covers(std::uint64_t n) const noexcept { return n >= 1 && n <= max_index(); }

  /// d(n); n must be in [1, max_index()].
  std::uint32_t operator()(std::uint64_t n) const { return values_.at(n); }

  bool is_prime(std::uint64_t n) const { return (*this)(n) == 2; }

  /// d(1)..d(M) as a view.
  std::span<const std::uint32_t> values() const noexcept {
    return values_.empty() ? std::span<const std::uint32_t>{}
                           : std::span<const std::uint32_t>(values_).subspan(1);
  }

 private:
  std::vector<std::uint32_t> values_;  // index 0 unused
};

/// d(n) for n in [lo, hi), by segmented trial division against primes up to sqrt(hi).
/// Suitable for ranges far beyond what a dense table can hold.
std::vector<std::uint32_t> divisor_counts_range(std::uint64_t lo, std::uint64_t hi);

/// Weight parameter alpha in (0, inf]; infinity is a distinct state, not a large float.
class SpaceWeight {
 public:
  static SpaceWeight finite(double alpha);
  static SpaceWeight infinite() { return SpaceWeight(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  double alpha() const noexcept { return alpha_; }
  /// beta = 1 - 2^{-alpha}, and 1 for alpha = infinity.
  double beta() const noexcept;

 private:
  SpaceWeight(double alpha, bool infinite) : alpha_(alpha), infinite_(infinite) {}
  double alpha_;
  bool infinite_;
};

struct DivisorSumAsymptotic {
  long double partial_sum;
  double normalized_ratio;
};

/// Partial sum of d(n)^{-alpha} over n <= M, normalized by M (log M)^{2^{-alpha}-1}.
/// alpha = 0 is accepted here (the weight collapses). For alpha = infinity the weight is
/// read as the limit of 2^alpha d(n)^{-alpha}, i.e. the sum counts primes up to M.
DivisorSumAsymptotic divisor_sum_asymptotic(double alpha, std::uint64_t M, const DivisorTable& d);
DivisorSumAsymptotic divisor_sum_asymptotic(const SpaceWeight& w, std::uint64_t M,
                                            const DivisorTable& d);

}  // namespace dirzero
