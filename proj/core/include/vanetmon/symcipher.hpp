#pragma once

#include <optional>

#include "vanetmon/crypto.hpp"

namespace vanetmon {

/// AES-128-GCM envelope: iv(12) || tag(16) || ciphertext. The 16 key
/// characters are used directly as the 128-bit key. The iv is drawn from the
/// injected rng so encryption stays reproducible.
Bytes sym_encrypt(const Bytes& plaintext, const SymmetricKey& key, Rng& rng);

/// Returns nullopt on truncated input or authentication failure (wrong key or
/// tampered envelope).
std::optional<Bytes> sym_decrypt(const Bytes& envelope, const SymmetricKey& key);

}  // namespace vanetmon
