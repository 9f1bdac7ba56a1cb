#include "vanetmon/crypto.hpp"

#include <algorithm>
#include <stdexcept>

namespace vanetmon {

namespace {

Nat sample_prime(unsigned bit_length, Rng& rng) {
  while (true) {
    Nat candidate = rng.random_bits(bit_length);
    candidate |= 1;  // odd
    if (is_probable_prime(candidate)) return candidate;
  }
}

int key_code_of(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'Z') return 10 + (c - 'A');
  if (c >= 'a' && c <= 'z') return 46 + (c - 'a');
  return -1;
}

char key_char_of(long code) {
  if (code >= 0 && code <= 9) return static_cast<char>('0' + code);
  if (code >= 10 && code <= 35) return static_cast<char>('A' + (code - 10));
  if (code >= 46 && code <= 71) return static_cast<char>('a' + (code - 46));
  return '\0';
}

}  // namespace

SsKeyPair ss_keygen(unsigned bit_length, Rng& rng) {
  if (bit_length < 8) throw std::invalid_argument("ss_keygen: bit_length < 8");
  while (true) {
    Nat p = sample_prime(bit_length, rng);
    Nat q = sample_prime(bit_length, rng);
    if (p == q) continue;
    Nat n = p * p * q;
    Nat l = lcm(p - 1, q - 1);
    Nat d;
    if (!invert(n, l, d)) continue;  // n shares a factor with lcm; resample
    return SsKeyPair{p, q, n, d};
  }
}

Nat ss_encrypt(const Nat& m, const Nat& n_public) {
  if (m < 0 || m >= n_public)
    throw std::domain_error("ss_encrypt: plaintext outside [0, n)");
  return powm(m, n_public, n_public);
}

Nat ss_encrypt(const Nat& m, const SsKeyPair& kp) {
  if (m < 0 || m >= kp.pq())
    throw std::domain_error("ss_encrypt: plaintext outside [0, p*q)");
  return powm(m, kp.n_public, kp.n_public);
}

Nat ss_decrypt(const Nat& c, const SsKeyPair& kp) {
  if (c < 0) throw std::domain_error("ss_decrypt: negative ciphertext");
  return powm(c, kp.d_private, kp.pq());
}

SymmetricKey make_symmetric_key(Rng& rng) {
  return SymmetricKey{rng.key_chars(kSymKeyLen)};
}

bool is_valid_vehicle_id(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
  });
}

Nat encode_id(const std::string& id) {
  if (!is_valid_vehicle_id(id))
    throw std::invalid_argument("encode_id: id must be non-empty over [0-9A-Z]");
  Nat out(0);
  for (char c : id) {
    out *= 100;
    out += static_cast<int>(static_cast<unsigned char>(c));
  }
  return out;
}

std::string decode_id(const Nat& n) {
  if (n <= 0) throw CorruptEncodingError("decode_id: non-positive value");
  std::string out;
  Nat rest = n;
  while (rest > 0) {
    const long digit = mpz_class(rest % 100).get_si();
    const char c = static_cast<char>(digit);
    const bool ok = (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
    if (!ok) throw CorruptEncodingError("decode_id: digit outside id alphabet");
    out.push_back(c);
    rest /= 100;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Nat encode_key(const SymmetricKey& key) {
  if (key.chars.empty()) throw std::invalid_argument("encode_key: empty key");
  Nat out(0);
  for (char c : key.chars) {
    const int code = key_code_of(c);
    if (code < 0) throw std::invalid_argument("encode_key: char outside key map");
    out *= 100;
    out += code;
  }
  return out;
}

SymmetricKey decode_key(const Nat& n, std::size_t len) {
  if (n < 0) throw CorruptEncodingError("decode_key: negative value");
  if (len == 0) throw std::invalid_argument("decode_key: zero length");
  std::string out(len, '\0');
  Nat rest = n;
  for (std::size_t i = 0; i < len; ++i) {
    const long code = mpz_class(rest % 100).get_si();
    const char c = key_char_of(code);
    if (c == '\0') throw CorruptEncodingError("decode_key: code in unused gap");
    out[len - 1 - i] = c;
    rest /= 100;
  }
  if (rest != 0) throw CorruptEncodingError("decode_key: value longer than key length");
  return SymmetricKey{out};
}

Bytes rotate_left_bits(const Bytes& data, unsigned k) {
  const std::size_t n = data.size();
  if (n == 0) return {};
  const unsigned width = static_cast<unsigned>(n * 8);
  k %= width;
  if (k == 0) return data;
  Bytes out(n, 0);
  for (std::size_t bit = 0; bit < width; ++bit) {
    const std::size_t src = (bit + k) % width;
    const int v = (data[src / 8] >> (7 - src % 8)) & 1;
    out[bit / 8] = static_cast<std::uint8_t>(out[bit / 8] | (v << (7 - bit % 8)));
  }
  return out;
}

Bytes make_crypto_challenge(const std::string& cv, const std::string& testing_word,
                            unsigned left_num) {
  if (cv.size() != testing_word.size())
    throw std::invalid_argument("make_crypto_challenge: length mismatch");
  Bytes word(testing_word.begin(), testing_word.end());
  Bytes rotated = rotate_left_bits(word, left_num);
  Bytes out(cv.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(cv[i]) ^ rotated[i];
  return out;
}

Bytes make_crypto_response(const std::string& v, const Bytes& challenge) {
  if (v.size() != challenge.size())
    throw std::invalid_argument("make_crypto_response: length mismatch");
  Bytes out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(v[i]) ^ challenge[i];
  return out;
}

bool match_response(const Bytes& response, const std::string& testing_word,
                    unsigned left_num) {
  if (response.size() != testing_word.size()) return false;
  Bytes word(testing_word.begin(), testing_word.end());
  return response == rotate_left_bits(word, left_num);
}

}  // namespace vanetmon
