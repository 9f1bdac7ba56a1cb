#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vanetmon {

/// Arbitrary-precision natural number. Backed by GMP; all protocol-level
/// arithmetic (keygen, encryption, signatures) is written against this alias.
using Nat = mpz_class;

using Bytes = std::vector<std::uint8_t>;

Nat powm(const Nat& base, const Nat& exp, const Nat& mod);
Nat lcm(const Nat& a, const Nat& b);

/// Modular inverse; returns false when gcd(a, mod) != 1.
bool invert(const Nat& a, const Nat& mod, Nat& out);

bool is_probable_prime(const Nat& n, int reps = 30);

std::size_t bit_length(const Nat& n);

/// Minimal big-endian representation; zero encodes as an empty byte string.
Bytes nat_to_bytes(const Nat& n);
Nat nat_from_bytes(const std::uint8_t* data, std::size_t len);
Nat nat_from_bytes(const Bytes& bytes);

}  // namespace vanetmon
