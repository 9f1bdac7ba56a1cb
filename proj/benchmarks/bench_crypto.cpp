#include <benchmark/benchmark.h>

#include "vanetmon/crypto.hpp"
#include "vanetmon/signature.hpp"
#include "vanetmon/symcipher.hpp"

using namespace vanetmon;

namespace {

SsKeyPair shared_keys() {
  static Rng rng(1);
  static const SsKeyPair kp = ss_keygen(128, rng);
  return kp;
}

void BM_ss_keygen_128(benchmark::State& state) {
  Rng rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(ss_keygen(128, rng));
}
BENCHMARK(BM_ss_keygen_128);

void BM_ss_encrypt_id(benchmark::State& state) {
  const SsKeyPair kp = shared_keys();
  const Nat m = encode_id("CAR00042");
  for (auto _ : state) benchmark::DoNotOptimize(ss_encrypt(m, kp.n_public));
}
BENCHMARK(BM_ss_encrypt_id);

void BM_ss_decrypt_id(benchmark::State& state) {
  const SsKeyPair kp = shared_keys();
  const Nat c = ss_encrypt(encode_id("CAR00042"), kp.n_public);
  for (auto _ : state) benchmark::DoNotOptimize(ss_decrypt(c, kp));
}
BENCHMARK(BM_ss_decrypt_id);

void BM_eg_sign(benchmark::State& state) {
  Rng rng(9);
  const EgKeyPair keys = eg_keygen(rng);
  for (auto _ : state) benchmark::DoNotOptimize(eg_sign("CAR00042", keys.priv, rng));
}
BENCHMARK(BM_eg_sign);

void BM_eg_verify(benchmark::State& state) {
  Rng rng(9);
  const EgKeyPair keys = eg_keygen(rng);
  const EgSignature sig = eg_sign("CAR00042", keys.priv, rng);
  for (auto _ : state) benchmark::DoNotOptimize(eg_verify("CAR00042", sig, keys.pub));
}
BENCHMARK(BM_eg_verify);

void BM_sym_envelope(benchmark::State& state) {
  Rng rng(11);
  const SymmetricKey key = make_symmetric_key(rng);
  const Bytes payload = rng.random_bytes(256);
  for (auto _ : state) {
    const Bytes envelope = sym_encrypt(payload, key, rng);
    benchmark::DoNotOptimize(sym_decrypt(envelope, key));
  }
}
BENCHMARK(BM_sym_envelope);

void BM_challenge_roundtrip(benchmark::State& state) {
  Rng rng(13);
  const std::string cv = rng.uppercase_alnum(8);
  const std::string tw = rng.uppercase_alnum(8);
  for (auto _ : state) {
    const Bytes challenge = make_crypto_challenge(cv, tw, 11);
    benchmark::DoNotOptimize(
        match_response(make_crypto_response(cv, challenge), tw, 11));
  }
}
BENCHMARK(BM_challenge_roundtrip);

}  // namespace
