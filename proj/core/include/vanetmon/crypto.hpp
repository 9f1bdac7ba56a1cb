#pragma once

#include <cstdint>
#include <string>

#include "vanetmon/bignat.hpp"
#include "vanetmon/random.hpp"

namespace vanetmon {

/// Thrown when a numeric decoding (id / key digits) hits a value outside the
/// character map, which signals corruption of the underlying ciphertext.
class CorruptEncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trapdoor keypair over n = p^2 * q with d = n^-1 mod lcm(p-1, q-1).
/// Decryption happens modulo p*q, so plaintexts must stay below p*q.
struct SsKeyPair {
  Nat p;
  Nat q;
  Nat n_public;   // p^2 * q
  Nat d_private;  // n_public^-1 mod lcm(p-1, q-1)

  Nat pq() const { return p * q; }
};

/// Samples two distinct probable primes of `bit_length` bits each and derives
/// the keypair. Deterministic for a given rng state. bit_length >= 8.
SsKeyPair ss_keygen(unsigned bit_length, Rng& rng);

/// Raw public-key operation c = m^n mod n. The caller is responsible for the
/// plaintext staying inside the decryptable domain [0, p*q).
Nat ss_encrypt(const Nat& m, const Nat& n_public);

/// Keyholder-side encrypt with the domain guard m < p*q enforced.
Nat ss_encrypt(const Nat& m, const SsKeyPair& kp);

/// m = c^d mod (p*q).
Nat ss_decrypt(const Nat& c, const SsKeyPair& kp);

// --- Positional base-100 encodings -----------------------------------------
//
// Identities are packed as ascii codes, keys through a dedicated character
// map. Both restrict their alphabets so each position fits in two decimal
// digits, keeping the packing injective at a fixed length.

constexpr std::size_t kSymKeyLen = 16;

/// 128-bit symmetric key material as 16 characters over [0-9A-Za-z].
struct SymmetricKey {
  std::string chars;

  bool operator==(const SymmetricKey&) const = default;
};

SymmetricKey make_symmetric_key(Rng& rng);

bool is_valid_vehicle_id(const std::string& id);

/// Packs an id over [0-9A-Z] into sum(100^(len-1-i) * ascii(id[i])).
/// Rejects characters outside the alphabet.
Nat encode_id(const std::string& id);

/// Inverse of encode_id. Throws CorruptEncodingError when a base-100 digit
/// maps to no allowed character.
std::string decode_id(const Nat& n);

/// Character map: '0'-'9' -> 0..9, 'A'-'Z' -> 10..35, 'a'-'z' -> 46..71.
/// Codes in the gap 36..45 (and above 71) are invalid on decode.
Nat encode_key(const SymmetricKey& key);
SymmetricKey decode_key(const Nat& n, std::size_t len = kSymKeyLen);

// --- XOR presence challenge -------------------------------------------------

/// Circular left rotation of the byte string by `k` bits (mod total width).
Bytes rotate_left_bits(const Bytes& data, unsigned k);

/// challenge = bytes(cv) XOR rotl(bytes(testing_word), left_num).
/// cv and testing_word must have equal length.
Bytes make_crypto_challenge(const std::string& cv, const std::string& testing_word,
                            unsigned left_num);

/// response = bytes(v) XOR challenge.
Bytes make_crypto_response(const std::string& v, const Bytes& challenge);

/// True iff response == rotl(bytes(testing_word), left_num), i.e. the
/// responder's id was exactly the cv the challenge was built from.
bool match_response(const Bytes& response, const std::string& testing_word,
                    unsigned left_num);

}  // namespace vanetmon
