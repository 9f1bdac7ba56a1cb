#include "vanetmon/bignat.hpp"

#include <stdexcept>

namespace vanetmon {

Nat powm(const Nat& base, const Nat& exp, const Nat& mod) {
  if (mod == 0) throw std::domain_error("powm: zero modulus");
  Nat out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

Nat lcm(const Nat& a, const Nat& b) {
  Nat out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

bool invert(const Nat& a, const Nat& mod, Nat& out) {
  return mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) != 0;
}

bool is_probable_prime(const Nat& n, int reps) {
  return mpz_probab_prime_p(n.get_mpz_t(), reps) != 0;
}

std::size_t bit_length(const Nat& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

Bytes nat_to_bytes(const Nat& n) {
  if (n < 0) throw std::domain_error("nat_to_bytes: negative value");
  if (n == 0) return {};
  const std::size_t count = (bit_length(n) + 7) / 8;
  Bytes out(count);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, n.get_mpz_t());
  out.resize(written);
  return out;
}

Nat nat_from_bytes(const std::uint8_t* data, std::size_t len) {
  Nat out;
  if (len == 0) return out;
  mpz_import(out.get_mpz_t(), len, 1, 1, 1, 0, data);
  return out;
}

Nat nat_from_bytes(const Bytes& bytes) {
  return nat_from_bytes(bytes.data(), bytes.size());
}

}  // namespace vanetmon
