#pragma once

#include <string>

#include "vanetmon/bignat.hpp"
#include "vanetmon/random.hpp"

namespace vanetmon {

/// Shared signature group (prime modulus and generator). The default group is
/// a fixed 257-bit safe prime with primitive root 5; domain parameters are
/// public constants, only the per-vehicle exponents are secret.
struct EgParams {
  Nat p;
  Nat g;
};

const EgParams& eg_default_params();

struct EgPublicKey {
  Nat y;  // g^x mod p

  bool operator==(const EgPublicKey&) const = default;
};

struct EgPrivateKey {
  Nat x;
};

struct EgKeyPair {
  EgPublicKey pub;
  EgPrivateKey priv;
};

struct EgSignature {
  Nat r;
  Nat s;
};

EgKeyPair eg_keygen(Rng& rng, const EgParams& params = eg_default_params());

/// Signs SHA3-256(message). The nonce is drawn from the injected rng.
EgSignature eg_sign(const std::string& message, const EgPrivateKey& key, Rng& rng,
                    const EgParams& params = eg_default_params());

/// Verification never throws; malformed components simply fail.
bool eg_verify(const std::string& message, const EgSignature& sig,
               const EgPublicKey& key, const EgParams& params = eg_default_params());

Bytes sha3_256(const Bytes& data);
Bytes sha3_256(const std::string& data);

Bytes signature_to_bytes(const EgSignature& sig);
/// Returns false when the buffer is not a well-formed signature frame.
bool signature_from_bytes(const Bytes& bytes, EgSignature& out);

}  // namespace vanetmon
