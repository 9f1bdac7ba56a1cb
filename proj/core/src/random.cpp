#include "vanetmon/random.hpp"

#include <stdexcept>

namespace vanetmon {

namespace {

constexpr char kUpperAlnum[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr char kKeyAlphabet[] =
    "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : base_seed_(seed), gen_(seed) {}

std::uint64_t Rng::next_u64() { return gen_(); }

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::uniform: lo > hi");
  const std::uint64_t range = hi - lo + 1;  // range==0 means the full domain
  if (range == 0) return next_u64();
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + v % range;
}

Nat Rng::random_bits(unsigned bits) {
  if (bits == 0) return Nat(0);
  Nat out(0);
  unsigned remaining = bits;
  while (remaining > 0) {
    const unsigned take = remaining < 64 ? remaining : 64;
    std::uint64_t word = next_u64();
    if (take < 64) word &= (1ULL << take) - 1;
    out <<= take;
    out += Nat(static_cast<unsigned long>(word >> 32)) << 32 |
           Nat(static_cast<unsigned long>(word & 0xffffffffULL));
    remaining -= take;
  }
  // force the top bit so the result has exactly `bits` bits
  Nat top = Nat(1) << (bits - 1);
  out |= top;
  return out;
}

Nat Rng::random_below(const Nat& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::random_below: bound <= 0");
  const auto bits = static_cast<unsigned>(bit_length(bound));
  while (true) {
    // rejection sampling without the forced top bit
    Nat candidate(0);
    unsigned remaining = bits;
    while (remaining > 0) {
      const unsigned take = remaining < 64 ? remaining : 64;
      std::uint64_t word = next_u64();
      if (take < 64) word &= (1ULL << take) - 1;
      candidate <<= take;
      candidate += Nat(static_cast<unsigned long>(word >> 32)) << 32 |
                   Nat(static_cast<unsigned long>(word & 0xffffffffULL));
      remaining -= take;
    }
    if (candidate < bound) return candidate;
  }
}

std::string Rng::uppercase_alnum(std::size_t len) {
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(kUpperAlnum[uniform(0, 35)]);
  return out;
}

std::string Rng::key_chars(std::size_t len) {
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(kKeyAlphabet[uniform(0, 61)]);
  return out;
}

Bytes Rng::random_bytes(std::size_t len) {
  Bytes out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(uniform(0, 255));
  return out;
}

Rng Rng::fork(std::uint64_t tag) const {
  return Rng(derive_seed(base_seed_, tag));
}

std::uint64_t Rng::derive_seed(std::uint64_t base, std::uint64_t tag) {
  return splitmix64(base ^ splitmix64(tag));
}

}  // namespace vanetmon
