#include "vanetmon/symcipher.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace vanetmon {

namespace {

constexpr std::size_t kIvLen = 12;
constexpr std::size_t kTagLen = 16;

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

}  // namespace

Bytes sym_encrypt(const Bytes& plaintext, const SymmetricKey& key, Rng& rng) {
  if (key.chars.size() != kSymKeyLen)
    throw std::invalid_argument("sym_encrypt: key must be 16 characters");
  const Bytes iv = rng.random_bytes(kIvLen);

  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("sym_encrypt: ctx alloc failed");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr,
                         reinterpret_cast<const unsigned char*>(key.chars.data()),
                         iv.data()) != 1)
    throw std::runtime_error("sym_encrypt: init failed");

  Bytes out(kIvLen + kTagLen + plaintext.size());
  std::copy(iv.begin(), iv.end(), out.begin());
  int len = 0;
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kIvLen + kTagLen, &len,
                        plaintext.data(), static_cast<int>(plaintext.size())) != 1)
    throw std::runtime_error("sym_encrypt: update failed");
  int final_len = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kIvLen + kTagLen + len,
                          &final_len) != 1)
    throw std::runtime_error("sym_encrypt: final failed");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagLen,
                          out.data() + kIvLen) != 1)
    throw std::runtime_error("sym_encrypt: tag failed");
  return out;
}

std::optional<Bytes> sym_decrypt(const Bytes& envelope, const SymmetricKey& key) {
  if (key.chars.size() != kSymKeyLen) return std::nullopt;
  if (envelope.size() < kIvLen + kTagLen) return std::nullopt;
  const std::size_t ct_len = envelope.size() - kIvLen - kTagLen;

  CtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) return std::nullopt;
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr,
                         reinterpret_cast<const unsigned char*>(key.chars.data()),
                         envelope.data()) != 1)
    return std::nullopt;

  Bytes out(ct_len);
  int len = 0;
  if (ct_len > 0 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len,
                        envelope.data() + kIvLen + kTagLen,
                        static_cast<int>(ct_len)) != 1)
    return std::nullopt;

  Bytes tag(envelope.begin() + kIvLen, envelope.begin() + kIvLen + kTagLen);
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagLen, tag.data()) != 1)
    return std::nullopt;
  int final_len = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &final_len) != 1)
    return std::nullopt;  // authentication failure
  return out;
}

}  // namespace vanetmon
