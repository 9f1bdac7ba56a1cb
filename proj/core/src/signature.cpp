#include "vanetmon/signature.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace vanetmon {

namespace {

// 257-bit safe prime, generator 5 is a primitive root.
constexpr const char* kGroupPrimeHex =
    "1000000000000000000000000000000000000000000000000000000000003832f";

Nat hash_to_nat(const std::string& message) {
  return nat_from_bytes(sha3_256(message));
}

}  // namespace

const EgParams& eg_default_params() {
  static const EgParams params{Nat(kGroupPrimeHex, 16), Nat(5)};
  return params;
}

EgKeyPair eg_keygen(Rng& rng, const EgParams& params) {
  const Nat order = params.p - 1;
  Nat x;
  do {
    x = rng.random_below(order - 1) + 1;  // [1, p-2]
  } while (x <= 1);
  EgPublicKey pub{powm(params.g, x, params.p)};
  return EgKeyPair{pub, EgPrivateKey{x}};
}

EgSignature eg_sign(const std::string& message, const EgPrivateKey& key, Rng& rng,
                    const EgParams& params) {
  const Nat order = params.p - 1;
  const Nat h = hash_to_nat(message) % order;
  while (true) {
    Nat k = rng.random_below(order - 2) + 2;  // [2, p-2]
    Nat k_inv;
    if (!invert(k, order, k_inv)) continue;
    Nat r = powm(params.g, k, params.p);
    Nat s = (k_inv * ((h - key.x * r) % order)) % order;
    if (s < 0) s += order;
    if (s == 0) continue;
    return EgSignature{r, s};
  }
}

bool eg_verify(const std::string& message, const EgSignature& sig,
               const EgPublicKey& key, const EgParams& params) {
  const Nat order = params.p - 1;
  if (sig.r <= 0 || sig.r >= params.p) return false;
  if (sig.s <= 0 || sig.s >= order) return false;
  if (key.y <= 0 || key.y >= params.p) return false;
  const Nat h = hash_to_nat(message) % order;
  const Nat lhs = powm(params.g, h, params.p);
  const Nat rhs = (powm(key.y, sig.r, params.p) * powm(sig.r, sig.s, params.p)) %
                  params.p;
  return lhs == rhs;
}

Bytes sha3_256(const Bytes& data) {
  Bytes digest(32);
  unsigned int out_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("sha3_256: EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha3_256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &out_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || out_len != 32) throw std::runtime_error("sha3_256: digest failed");
  return digest;
}

Bytes sha3_256(const std::string& data) {
  return sha3_256(Bytes(data.begin(), data.end()));
}

Bytes signature_to_bytes(const EgSignature& sig) {
  const Bytes r = nat_to_bytes(sig.r);
  const Bytes s = nat_to_bytes(sig.s);
  Bytes out;
  out.reserve(8 + r.size() + s.size());
  auto put_u32 = [&out](std::size_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
      out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  };
  put_u32(r.size());
  out.insert(out.end(), r.begin(), r.end());
  put_u32(s.size());
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

bool signature_from_bytes(const Bytes& bytes, EgSignature& out) {
  std::size_t pos = 0;
  auto get_u32 = [&bytes, &pos](std::uint32_t& v) {
    if (bytes.size() - pos < 4) return false;
    v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes[pos++];
    return true;
  };
  std::uint32_t r_len = 0;
  if (!get_u32(r_len) || bytes.size() - pos < r_len) return false;
  out.r = nat_from_bytes(bytes.data() + pos, r_len);
  pos += r_len;
  std::uint32_t s_len = 0;
  if (!get_u32(s_len) || bytes.size() - pos < s_len) return false;
  out.s = nat_from_bytes(bytes.data() + pos, s_len);
  pos += s_len;
  return pos == bytes.size();
}

}  // namespace vanetmon
