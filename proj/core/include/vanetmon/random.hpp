#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "vanetmon/bignat.hpp"

namespace vanetmon {

/// Deterministic random source. Every piece of randomness in the library
/// (prime sampling, keys, testing words, sweep seeds) is drawn from an
/// explicitly injected Rng, so a run is a pure function of its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [lo, hi], inclusive. Rejection sampled, stable across
  /// standard libraries.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Uniform natural with exactly `bits` bits (top bit set) for bits >= 1.
  Nat random_bits(unsigned bits);

  /// Uniform in [0, bound).
  Nat random_below(const Nat& bound);

  std::string uppercase_alnum(std::size_t len);  // alphabet [0-9A-Z]
  std::string key_chars(std::size_t len);        // alphabet [0-9A-Za-z]
  Bytes random_bytes(std::size_t len);

  /// Independent derived stream; does not disturb this generator's state.
  Rng fork(std::uint64_t tag) const;

  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

 private:
  std::uint64_t base_seed_;
  std::mt19937_64 gen_;
};

}  // namespace vanetmon
