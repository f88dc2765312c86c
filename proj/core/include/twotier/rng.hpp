#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "twotier/errors.hpp"

namespace twotier {

/// Philox4x32-10 counter-based generator.  Each (key, stream) pair is an
/// independent stream; jumping to a stream is O(1), which lets every
/// replication of a simulation own its streams regardless of how work is
/// split across threads.
class Philox {
 public:
  Philox(std::uint64_t key, std::uint64_t stream_hi, std::uint64_t stream_lo)
      : key0_(static_cast<std::uint32_t>(key)),
        key1_(static_cast<std::uint32_t>(key >> 32)) {
    ctr_[0] = 0;
    ctr_[1] = static_cast<std::uint32_t>(stream_lo);
    ctr_[2] = static_cast<std::uint32_t>(stream_lo >> 32);
    ctr_[3] = static_cast<std::uint32_t>(stream_hi);
    // stream_hi is folded into the key as well so that more than 96 bits of
    // stream selector are honored.
    key0_ ^= static_cast<std::uint32_t>(stream_hi >> 32);
    refill();
  }

  using result_type = std::uint32_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint32_t>::max();
  }

  result_type operator()() { return next_u32(); }

  std::uint32_t next_u32() {
    if (have_ == 0) refill();
    return out_[--have_];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform01_open_low() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// One keyed 10-round block; exposed so tests can pin the published
  /// known-answer vectors.
  static void block(const std::uint32_t ctr[4], std::uint32_t k0,
                    std::uint32_t k1, std::uint32_t out[4]) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    for (int round = 0; round < 10; ++round) {
      const std::uint32_t hi0 = mulhi(0xD2511F53u, c0);
      const std::uint32_t lo0 = 0xD2511F53u * c0;
      const std::uint32_t hi1 = mulhi(0xCD9E8D57u, c2);
      const std::uint32_t lo1 = 0xCD9E8D57u * c2;
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
  }

 private:
  static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(a) * b) >> 32);
  }

  void refill() {
    std::uint32_t words[4];
    block(ctr_, key0_, key1_, words);
    out_[3] = words[0];
    out_[2] = words[1];
    out_[1] = words[2];
    out_[0] = words[3];
    have_ = 4;
    ++ctr_[0];  // 2^32 blocks of four words per stream
  }

  std::uint32_t key0_, key1_;
  std::uint32_t ctr_[4];
  std::uint32_t out_[4];
  int have_ = 0;
};

/// Role tags keep draws for unrelated purposes on disjoint streams, so adding
/// a draw in one place never shifts the values seen elsewhere.
enum class StreamRole : std::uint32_t {
  femto_field = 1,
  femto_marks = 2,
  macro_field = 3,
  macro_marks = 4,
  observer_cell = 5,
  shadow_moments = 6,
  out_of_cell_fit = 7,
  scratch = 8,
};

/// One replication-scoped stream with the distribution helpers the
/// simulator needs.  Distribution algorithms are fixed here (not delegated
/// to std::) so that a given (seed, replication, role) triple yields the
/// same numbers on every build of this code base.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replication, StreamRole role)
      : gen_(seed, static_cast<std::uint64_t>(role), replication) {}

  double uniform01() { return gen_.uniform01(); }
  std::uint32_t next_u32() { return gen_.next_u32(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(gen_.uniform01() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = gen_.uniform01_open_low();
    const double u2 = gen_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  /// Poisson with arbitrary non-negative mean.  Knuth product method below
  /// 12; Hormann's PTRD transformed-rejection above (exact, O(1)).
  unsigned poisson(double mean);

  /// Poisson conditioned on being >= 1, by inversion of the conditional pmf.
  /// The mean -> 0 limit (a point mass at 1) is honored.
  unsigned poisson_at_least_one(double mean);

  unsigned binomial(unsigned n, double p) {
    unsigned k = 0;
    for (unsigned i = 0; i < n; ++i) k += (gen_.uniform01() < p) ? 1u : 0u;
    return k;
  }

  /// 10*log10(X) ~ N(0, sigma_db^2), i.e. a log-normal shadowing factor.
  double shadow_factor(double sigma_db) {
    if (sigma_db == 0.0) return 1.0;
    return std::pow(10.0, sigma_db * normal() / 10.0);
  }

 private:
  Philox gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

inline unsigned RngStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) throw DomainError("poisson: bad mean");
  if (mean == 0.0) return 0;
  if (mean < 12.0) {
    const double limit = std::exp(-mean);
    unsigned k = 0;
    double prod = gen_.uniform01();
    while (prod > limit) {
      ++k;
      prod *= gen_.uniform01();
    }
    return k;
  }
  // PTRD (W. Hormann, "The transformed rejection method for generating
  // Poisson random variables", 1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u;
    double v = gen_.uniform01();
    if (v <= 0.86 * vr) {
      u = v / vr - 0.43;
      const double us = 0.5 - std::abs(u);
      return static_cast<unsigned>(
          std::floor((2.0 * a / us + b) * u + mean + 0.445));
    }
    if (v >= vr) {
      u = gen_.uniform01() - 0.5;
    } else {
      u = v / vr - 0.93;
      u = ((u < 0.0) ? -0.5 : 0.5) - u;
      v = gen_.uniform01() * vr;
    }
    const double us = 0.5 - std::abs(u);
    if (us < 0.013 && v > us) continue;
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    v = v * inv_alpha / (a / (us * us) + b);
    if (k >= 10.0) {
      const double log_sqrt_2pi = 0.91893853320467267;
      if (std::log(v * smu) <=
          (k + 0.5) * std::log(mean / k) - mean - log_sqrt_2pi + k -
              (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * k * k)) / (k * k)) /
                  k) {
        return static_cast<unsigned>(k);
      }
    } else if (k >= 0.0) {
      static const double log_fact[10] = {
          0.0,
          0.0,
          0.69314718055994530942,
          1.79175946922805500081,
          3.17805383034794561965,
          4.78749174278204599425,
          6.57925121201010099506,
          8.52516136106541430017,
          10.60460290274525022842,
          12.80182748008146961071};
      if (std::log(v) <= k * log_mean - mean - log_fact[static_cast<int>(k)]) {
        return static_cast<unsigned>(k);
      }
    }
  }
}

inline unsigned RngStream::poisson_at_least_one(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw DomainError("poisson_at_least_one: bad mean");
  }
  if (mean < 1e-12) return 1;  // conditional law collapses to {1}
  const double u = gen_.uniform01();
  const double norm = -std::expm1(-mean);  // P(N >= 1)
  double pmf = mean * std::exp(-mean) / norm;
  double cdf = pmf;
  unsigned k = 1;
  while (u > cdf && k < 4000) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

}  // namespace twotier
