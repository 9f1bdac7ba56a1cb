#include "vanetmon/crypto.hpp"

#include <cstdint>

#include "doctest.h"
#include "vanetmon/random.hpp"
#include "vanetmon/signature.hpp"
#include "vanetmon/symcipher.hpp"

using namespace vanetmon;

namespace {

// independent modular exponentiation for small values (no bignum machinery)
std::uint64_t modexp_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

const SsKeyPair kToyKeys{Nat(7), Nat(11), Nat(539), Nat(29)};

}  // namespace

TEST_CASE("ss_keygen hand-checked toy keypairs") {
  // p=7, q=11: n = 7*7*11 = 539, lcm(6,10) = 30, 539^-1 mod 30 = 29
  CHECK(kToyKeys.n_public == 539);
  CHECK((kToyKeys.d_private * kToyKeys.n_public) % lcm(Nat(6), Nat(10)) == 1);
  CHECK(kToyKeys.d_private == 29);

  // p=3, q=5: n = 45, lcm(2,4) = 4, 45 = 1 mod 4 so d = 1
  Nat d;
  REQUIRE(invert(Nat(45), Nat(4), d));
  CHECK(d == 1);
}

TEST_CASE("ss_keygen output satisfies the keypair invariants") {
  Rng rng(11);
  for (const unsigned bits : {16u, 32u, 128u}) {
    const SsKeyPair kp = ss_keygen(bits, rng);
    CHECK(kp.p != kp.q);
    CHECK(is_probable_prime(kp.p));
    CHECK(is_probable_prime(kp.q));
    CHECK(kp.n_public == kp.p * kp.p * kp.q);
    CHECK((kp.d_private * kp.n_public) % lcm(kp.p - 1, kp.q - 1) == 1);
  }
}

TEST_CASE("ss_keygen is deterministic for a fixed random source") {
  Rng a(99), b(99);
  const SsKeyPair ka = ss_keygen(64, a);
  const SsKeyPair kb = ss_keygen(64, b);
  CHECK(ka.p == kb.p);
  CHECK(ka.q == kb.q);
  CHECK(ka.d_private == kb.d_private);
}

TEST_CASE("ss_keygen rejects undersized keys") {
  Rng rng(1);
  CHECK_THROWS_AS(ss_keygen(4, rng), std::invalid_argument);
}

TEST_CASE("ss_encrypt matches an independent modexp oracle") {
  // 42^539 mod 539 computed over plain 64-bit arithmetic
  CHECK(modexp_u64(42, 539, 539) == 49);
  CHECK(ss_encrypt(Nat(42), Nat(539)) == 49);
  CHECK(ss_decrypt(Nat(49), kToyKeys) == 42);

  SUBCASE("fixed points") {
    CHECK(ss_encrypt(Nat(1), Nat(539)) == 1);
    CHECK(ss_encrypt(Nat(0), Nat(539)) == 0);
    CHECK(ss_decrypt(Nat(1), kToyKeys) == 1);
  }
  SUBCASE("largest valid plaintext p*q - 1") {
    CHECK(ss_decrypt(ss_encrypt(Nat(76), kToyKeys), kToyKeys) == 76);
  }
  SUBCASE("plaintext domain guard") {
    CHECK_THROWS_AS(ss_encrypt(Nat(77), kToyKeys), std::domain_error);
    CHECK_THROWS_AS(ss_encrypt(Nat(539), Nat(539)), std::domain_error);
    CHECK_THROWS_AS(ss_encrypt(Nat(-1), Nat(539)), std::domain_error);
  }
}

TEST_CASE("schmidt-samoa round trip at full key size") {
  Rng rng(5);
  const SsKeyPair kp = ss_keygen(128, rng);
  for (int i = 0; i < 1000; ++i) {
    const Nat m = rng.random_below(kp.pq());
    CHECK(ss_decrypt(ss_encrypt(m, kp), kp) == m);
  }
}

TEST_CASE("encode_id packs ascii codes into base-100 positions") {
  CHECK(encode_id("AB") == 6566);  // 65*100 + 66
  CHECK(encode_id("0") == 48);
  CHECK(encode_id("CAR00042") == Nat("6765824848485250"));
  CHECK_THROWS_AS(encode_id(""), std::invalid_argument);
  CHECK_THROWS_AS(encode_id("ab"), std::invalid_argument);   // lowercase overflows
  CHECK_THROWS_AS(encode_id("A B"), std::invalid_argument);
}

TEST_CASE("decode_id inverts encode_id and flags corrupt digits") {
  CHECK(decode_id(Nat(6566)) == "AB");
  CHECK(decode_id(Nat(48)) == "0");
  CHECK_THROWS_AS(decode_id(Nat(99)), CorruptEncodingError);  // no such character
  CHECK_THROWS_AS(decode_id(Nat(0)), CorruptEncodingError);

  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const std::string id = rng.uppercase_alnum(1 + i % 12);
    CHECK(decode_id(encode_id(id)) == id);
  }
}

TEST_CASE("encode_key uses the printed character map") {
  CHECK(encode_key(SymmetricKey{"A0"}) == 1000);   // 10*100 + 00
  CHECK(encode_key(SymmetricKey{"az"}) == 4671);   // map endpoints 46 and 71
  CHECK(decode_key(Nat(1000), 2).chars == "A0");
  CHECK(decode_key(Nat(4671), 2).chars == "az");

  SUBCASE("codes in the unused gap 36..45 are corruption") {
    CHECK_THROWS_AS(decode_key(Nat(36), 1), CorruptEncodingError);
    CHECK_THROWS_AS(decode_key(Nat(45), 1), CorruptEncodingError);
    CHECK_THROWS_AS(decode_key(Nat(72), 1), CorruptEncodingError);
    CHECK_NOTHROW(decode_key(Nat(35), 1));  // 'Z'
    CHECK_NOTHROW(decode_key(Nat(46), 1));  // 'a'
  }
  SUBCASE("leading zero codes survive the round trip at fixed length") {
    CHECK(decode_key(encode_key(SymmetricKey{"0A"}), 2).chars == "0A");
  }

  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const SymmetricKey key = make_symmetric_key(rng);
    CHECK(decode_key(encode_key(key)) == key);
  }
}

TEST_CASE("id and key pipelines survive encryption end to end") {
  Rng rng(31);
  const SsKeyPair kp = ss_keygen(128, rng);
  for (int i = 0; i < 1000; ++i) {
    const std::string id = rng.uppercase_alnum(8);
    CHECK(decode_id(ss_decrypt(ss_encrypt(encode_id(id), kp.n_public), kp)) == id);
  }
  for (int i = 0; i < 1000; ++i) {
    const SymmetricKey key = make_symmetric_key(rng);
    CHECK(decode_key(ss_decrypt(ss_encrypt(encode_key(key), kp.n_public), kp)) == key);
  }
}

TEST_CASE("raw trapdoor encryption is deterministic") {
  Rng rng(41);
  const SsKeyPair kp = ss_keygen(64, rng);
  const Nat m = encode_id("CAR00042");
  CHECK(ss_encrypt(m, kp.n_public) == ss_encrypt(m, kp.n_public));
}

TEST_CASE("rotate_left_bits") {
  CHECK(rotate_left_bits({0x80, 0x00}, 1) == Bytes{0x00, 0x01});
  CHECK(rotate_left_bits({0x12, 0x34}, 16) == Bytes{0x12, 0x34});  // full width
  CHECK(rotate_left_bits({0x12, 0x34}, 4) == Bytes{0x23, 0x41});
  CHECK(rotate_left_bits({}, 3).empty());
}

TEST_CASE("crypto challenge construction") {
  SUBCASE("identity rotation with cv == testing word zeroes the challenge") {
    const Bytes challenge = make_crypto_challenge("AA", "AA", 16);
    CHECK(challenge == Bytes{0x00, 0x00});
  }
  SUBCASE("hand-traced bytes for cv=AA tw=AB shift 1") {
    const Bytes challenge = make_crypto_challenge("AA", "AB", 1);
    CHECK(challenge == Bytes{0xc3, 0xc5});
    const Bytes response = make_crypto_response("AA", challenge);
    CHECK(response == Bytes{0x82, 0x84});  // rotl(AB, 1)
    CHECK(match_response(response, "AB", 1));
  }
  SUBCASE("length mismatches are rejected") {
    CHECK_THROWS_AS(make_crypto_challenge("AA", "ABC", 1), std::invalid_argument);
    CHECK_THROWS_AS(make_crypto_response("A", Bytes{0, 0}), std::invalid_argument);
    CHECK_FALSE(match_response(Bytes{0}, "AB", 1));
  }
  SUBCASE("zero challenge echoes the vehicle id") {
    const Bytes zeros(2, 0);
    CHECK(make_crypto_response("AB", zeros) == Bytes{'A', 'B'});
  }
}

TEST_CASE("challenge matches exactly the targeted vehicle") {
  const char alphabet[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  Rng rng(59);

  SUBCASE("exhaustive at one character") {
    for (int c = 0; c < 36; ++c) {
      const std::string cv(1, alphabet[c]);
      const std::string tw = rng.uppercase_alnum(1);
      for (unsigned shift = 1; shift <= 7; ++shift) {
        const Bytes challenge = make_crypto_challenge(cv, tw, shift);
        for (int v = 0; v < 36; ++v) {
          const std::string vid(1, alphabet[v]);
          const bool matched =
              match_response(make_crypto_response(vid, challenge), tw, shift);
          CHECK(matched == (vid == cv));
        }
      }
    }
  }
  SUBCASE("randomized at id length 8") {
    for (int i = 0; i < 1000; ++i) {
      const std::string cv = rng.uppercase_alnum(8);
      const std::string tw = rng.uppercase_alnum(8);
      const unsigned shift = static_cast<unsigned>(rng.uniform(1, 63));
      const Bytes challenge = make_crypto_challenge(cv, tw, shift);
      CHECK(match_response(make_crypto_response(cv, challenge), tw, shift));
      const std::string other = rng.uppercase_alnum(8);
      if (other != cv) {
        CHECK_FALSE(
            match_response(make_crypto_response(other, challenge), tw, shift));
      }
    }
  }
  SUBCASE("random bytes only match by chance, never at one byte here") {
    const std::string tw = "Q";
    const Bytes challenge = make_crypto_challenge("K", tw, 3);
    int hits = 0;
    for (int b = 0; b < 256; ++b) {
      Bytes response{static_cast<std::uint8_t>(b)};
      if (match_response(response, tw, 3)) ++hits;
    }
    CHECK(hits == 1);  // exactly the rotated testing word
  }
}

TEST_CASE("xor cancellation property used by match_response") {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    const Bytes a = rng.random_bytes(8);
    const Bytes b = rng.random_bytes(8);
    Bytes x(8);
    for (int k = 0; k < 8; ++k) x[k] = a[k] ^ b[k];
    for (int k = 0; k < 8; ++k) x[k] = static_cast<std::uint8_t>(x[k] ^ a[k]);
    CHECK(x == b);
  }
}

TEST_CASE("signature round trip and tamper rejection") {
  Rng rng(71);
  const EgKeyPair keys = eg_keygen(rng);
  const EgSignature sig = eg_sign("CAR00042", keys.priv, rng);
  CHECK(eg_verify("CAR00042", sig, keys.pub));

  SUBCASE("any flipped signature bit fails verification") {
    for (int trial = 0; trial < 1000; ++trial) {
      EgSignature bad = sig;
      const unsigned bit = static_cast<unsigned>(rng.uniform(0, 255));
      if (trial % 2 == 0)
        bad.r ^= Nat(1) << bit;
      else
        bad.s ^= Nat(1) << bit;
      CHECK_FALSE(eg_verify("CAR00042", bad, keys.pub));
    }
  }
  SUBCASE("a different vehicle's key never verifies") {
    for (int trial = 0; trial < 100; ++trial) {
      const EgKeyPair other = eg_keygen(rng);
      CHECK_FALSE(eg_verify("CAR00042", sig, other.pub));
    }
  }
  SUBCASE("tampered message fails") {
    CHECK_FALSE(eg_verify("CAR00043", sig, keys.pub));
  }
  SUBCASE("malformed components are false, not exceptions") {
    CHECK_FALSE(eg_verify("CAR00042", EgSignature{Nat(0), sig.s}, keys.pub));
    CHECK_FALSE(eg_verify("CAR00042", EgSignature{sig.r, Nat(0)}, keys.pub));
    const Nat p = eg_default_params().p;
    CHECK_FALSE(eg_verify("CAR00042", EgSignature{p, sig.s}, keys.pub));
    CHECK_FALSE(eg_verify("CAR00042", EgSignature{sig.r, p - 1}, keys.pub));
  }
  SUBCASE("signature bytes survive the wire") {
    EgSignature back;
    REQUIRE(signature_from_bytes(signature_to_bytes(sig), back));
    CHECK(back.r == sig.r);
    CHECK(back.s == sig.s);
    CHECK_FALSE(signature_from_bytes(Bytes{1, 2, 3}, back));
  }
}

TEST_CASE("symmetric envelope") {
  Rng rng(83);
  const SymmetricKey key = make_symmetric_key(rng);

  SUBCASE("round trip for random packets") {
    for (int i = 0; i < 1000; ++i) {
      const Bytes plain = rng.random_bytes(rng.uniform(0, 120));
      const auto back = sym_decrypt(sym_encrypt(plain, key, rng), key);
      REQUIRE(back.has_value());
      CHECK(*back == plain);
    }
  }
  SUBCASE("empty plaintext round-trips") {
    const auto back = sym_decrypt(sym_encrypt({}, key, rng), key);
    REQUIRE(back.has_value());
    CHECK(back->empty());
  }
  SUBCASE("wrong key is an integrity failure") {
    const Bytes envelope = sym_encrypt({1, 2, 3}, key, rng);
    for (int i = 0; i < 100; ++i) {
      const SymmetricKey other = make_symmetric_key(rng);
      if (other == key) continue;
      CHECK_FALSE(sym_decrypt(envelope, other).has_value());
    }
  }
  SUBCASE("tampered ciphertext is rejected") {
    Bytes envelope = sym_encrypt({9, 9, 9, 9}, key, rng);
    envelope.back() ^= 0x01;
    CHECK_FALSE(sym_decrypt(envelope, key).has_value());
  }
  SUBCASE("truncated envelope is rejected") {
    CHECK_FALSE(sym_decrypt(Bytes{1, 2, 3}, key).has_value());
  }
}
