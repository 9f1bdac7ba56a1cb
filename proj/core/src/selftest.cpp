#include "vanetmon/selftest.hpp"

#include <algorithm>

#include "vanetmon/crypto.hpp"
#include "vanetmon/signature.hpp"

namespace vanetmon {
namespace selftest {

namespace {

constexpr char kIdAlphabet[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

DataPacket dummy_packet(const VehicleId& id, Event event) {
  DataPacket p;
  p.v_id = id;
  p.event = event;
  p.vel_mph100 = 2000;
  p.trajectory = {"RSU1"};
  return p;
}

VehicleId synth_id(int n) {
  std::string num = std::to_string(n);
  num.insert(0, 5 - num.size(), '0');
  return "CAR" + num;
}

}  // namespace

Nat modexp_reference(const Nat& base, const Nat& exp, const Nat& mod) {
  if (mod == 1) return Nat(0);
  Nat result(1);
  Nat b = base % mod;
  const std::size_t bits = bit_length(exp);
  for (std::size_t i = bits; i-- > 0;) {
    result = (result * result) % mod;
    if (mpz_tstbit(exp.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))
      result = (result * b) % mod;
  }
  return result;
}

std::optional<std::pair<VehicleId, VehicleId>> detect_poc_reference(
    const DecisionSimilarityGraph& dsg) {
  const auto ids = dsg.vertices();  // sorted
  std::optional<std::pair<VehicleId, VehicleId>> best;
  for (const VehicleId& a : ids) {
    for (const VehicleId& b : ids) {
      if (a == b || !dsg.has_edge(a, b)) continue;
      if (dsg.event_of(a) == dsg.event_of(b)) continue;
      const auto pair = std::make_pair(a, b);
      if (!best || pair < *best) best = pair;
    }
  }
  if (best) return best;
  std::map<std::string, std::vector<VehicleId>> by_rsu;
  for (const VehicleId& id : ids) by_rsu[dsg.rsu_of(id)].push_back(id);
  for (const auto& [rsu, members] : by_rsu) {
    for (std::size_t i = 0; i < members.size() && !best; ++i)
      for (std::size_t j = i + 1; j < members.size() && !best; ++j)
        if (dsg.event_of(members[i]) != dsg.event_of(members[j]))
          best = std::make_pair(members[i], members[j]);
    if (best) return best;
  }
  return std::nullopt;
}

std::pair<std::set<VehicleId>, std::set<VehicleId>> filter_reference(
    const DecisionSimilarityGraph& dsg, const VehicleId& seed) {
  // reachability by repeated expansion, no explicit stack
  std::set<VehicleId> reach{seed};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const VehicleId& a : dsg.vertices()) {
      if (reach.contains(a)) continue;
      for (const VehicleId& b : reach) {
        if (dsg.has_edge(a, b)) {
          reach.insert(a);
          grew = true;
          break;
        }
      }
    }
  }
  for (const VehicleId& a : dsg.vertices())
    if (dsg.rsu_of(a) == dsg.rsu_of(seed)) reach.insert(a);
  std::set<VehicleId> mal, nonmal;
  for (const VehicleId& a : reach)
    (dsg.event_of(a) == dsg.event_of(seed) ? mal : nonmal).insert(a);
  return {mal, nonmal};
}

DecisionSimilarityGraph random_dsg(Rng& rng, int max_vertices) {
  const int n = static_cast<int>(rng.uniform(1, static_cast<std::uint64_t>(max_vertices)));
  const int n_rsu = static_cast<int>(rng.uniform(1, 3));
  DecisionSimilarityGraph dsg;
  std::vector<VehicleId> ids;
  for (int i = 0; i < n; ++i) {
    const VehicleId id = synth_id(i + 1);
    const Event event = rng.uniform(0, 1) == 0 ? Event::Congested : Event::NonCongested;
    const std::string rsu = "RSU" + std::to_string(rng.uniform(1, n_rsu));
    dsg.add_vertex(id, event, dummy_packet(id, event), rsu);
    ids.push_back(id);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform(0, 99) < 30) dsg.add_edge(ids[i], ids[j]);
  return dsg;
}

CollusionCase generate_collusion_case(Rng& rng, bool force_insular) {
  CollusionCase out;
  out.threshold = static_cast<int>(rng.uniform(2, 5));
  int n_m, n_h;
  if (force_insular) {
    n_m = out.threshold + 1 + static_cast<int>(rng.uniform(0, 4));
    n_h = out.threshold + 1 + static_cast<int>(rng.uniform(0, 3));
  } else {
    n_m = 2 + static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(out.threshold - 2)));
    n_h = std::max<int>(out.threshold - n_m + 1, 1) + static_cast<int>(rng.uniform(0, 3));
  }
  out.insular = force_insular;

  const Event spoofed = rng.uniform(0, 1) == 0 ? Event::Congested : Event::NonCongested;
  std::vector<VehicleId> colluders, honest;
  int counter = 1;
  for (int i = 0; i < n_m; ++i) colluders.push_back(synth_id(counter++));
  for (int i = 0; i < n_h; ++i) honest.push_back(synth_id(counter++));

  for (const VehicleId& id : colluders) {
    out.dsg.add_vertex(id, spoofed, dummy_packet(id, spoofed), "RSU1");
    out.colluders.insert(id);
  }
  for (const VehicleId& id : honest) {
    out.dsg.add_vertex(id, opposite(spoofed), dummy_packet(id, opposite(spoofed)),
                       "RSU1");
    out.honest.insert(id);
  }

  // colluders fill from the group first; only when the group cannot cover the
  // threshold do honest ids leak into their lists
  for (std::size_t i = 0; i < colluders.size(); ++i) {
    int picked = 0;
    for (std::size_t j = 0; picked < out.threshold && j < colluders.size(); ++j) {
      if (j == i) continue;
      out.dsg.add_edge(colluders[i], colluders[j]);
      ++picked;
    }
    for (std::size_t j = 0; picked < out.threshold && j < honest.size(); ++j) {
      out.dsg.add_edge(colluders[i], honest[j]);
      ++picked;
    }
  }
  // honest vehicles list honest neighbors
  for (std::size_t i = 0; i < honest.size(); ++i) {
    int picked = 0;
    for (std::size_t j = 0; picked < out.threshold && j < honest.size(); ++j) {
      if (j == i) continue;
      out.dsg.add_edge(honest[i], honest[j]);
      ++picked;
    }
  }
  return out;
}

std::vector<CheckResult> run_all(
    std::uint64_t seed, const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, bool pass, std::string detail = "") {
    results.push_back(CheckResult{name, pass, std::move(detail)});
    if (on_result) on_result(results.back());
  };
  Rng rng(seed);

  {  // trapdoor round trip, toy keys and full-size keys
    const SsKeyPair toy{Nat(7), Nat(11), Nat(539), Nat(29)};
    bool ok = ss_decrypt(ss_encrypt(Nat(42), toy), toy) == 42 &&
              ss_decrypt(ss_encrypt(Nat(76), toy), toy) == 76;
    const SsKeyPair kp = ss_keygen(128, rng);
    ok = ok && (kp.d_private * kp.n_public) % lcm(kp.p - 1, kp.q - 1) == 1;
    for (int i = 0; ok && i < 200; ++i) {
      const Nat m = rng.random_below(kp.pq());
      ok = ss_decrypt(ss_encrypt(m, kp), kp) == m;
    }
    check("ss_roundtrip", ok);
  }
  {  // encrypted id pipeline
    const SsKeyPair kp = ss_keygen(128, rng);
    bool ok = true;
    for (int i = 0; ok && i < 200; ++i) {
      const std::string id = rng.uppercase_alnum(8);
      ok = decode_id(ss_decrypt(ss_encrypt(encode_id(id), kp.n_public), kp)) == id;
    }
    check("id_pipeline_roundtrip", ok);
  }
  {  // encrypted key pipeline
    const SsKeyPair kp = ss_keygen(128, rng);
    bool ok = true;
    for (int i = 0; ok && i < 200; ++i) {
      const SymmetricKey key = make_symmetric_key(rng);
      ok = decode_key(ss_decrypt(ss_encrypt(encode_key(key), kp.n_public), kp)) == key;
    }
    check("key_pipeline_roundtrip", ok);
  }
  {  // modular exponentiation against the bit-loop reference
    bool ok = powm(Nat(42), Nat(539), Nat(539)) == 49 &&
              modexp_reference(Nat(42), Nat(539), Nat(539)) == 49;
    for (int i = 0; ok && i < 100; ++i) {
      const Nat b = rng.random_bits(64);
      const Nat e = rng.random_bits(40);
      const Nat m = rng.random_bits(64) | 1;
      ok = powm(b, e, m) == modexp_reference(b, e, m);
    }
    check("modexp_oracle", ok);
  }
  {  // signature soundness and tamper rejection
    bool ok = true;
    for (int i = 0; ok && i < 50; ++i) {
      const std::string id = rng.uppercase_alnum(8);
      const EgKeyPair keys = eg_keygen(rng);
      const EgSignature sig = eg_sign(id, keys.priv, rng);
      ok = eg_verify(id, sig, keys.pub);
      if (!ok) break;
      EgSignature bad = sig;
      bad.s ^= Nat(1) << static_cast<unsigned>(rng.uniform(0, 200));
      ok = !eg_verify(id, bad, keys.pub);
      if (!ok) break;
      const EgKeyPair other = eg_keygen(rng);
      ok = !eg_verify(id, sig, other.pub);
    }
    check("signature_suite", ok);
  }
  {  // presence challenge: exhaustive at one character
    bool ok = true;
    for (int ci = 0; ok && ci < 36; ++ci) {
      const std::string cv(1, kIdAlphabet[ci]);
      const std::string tw = rng.uppercase_alnum(1);
      for (unsigned shift = 1; ok && shift <= 7; ++shift) {
        const Bytes challenge = make_crypto_challenge(cv, tw, shift);
        for (int vi = 0; ok && vi < 36; ++vi) {
          const std::string v(1, kIdAlphabet[vi]);
          const bool matched =
              match_response(make_crypto_response(v, challenge), tw, shift);
          ok = matched == (v == cv);
        }
      }
    }
    check("challenge_exhaustive_len1", ok);
  }
  {  // presence challenge: randomized at full id length
    bool ok = true;
    for (int i = 0; ok && i < 200; ++i) {
      const std::string cv = rng.uppercase_alnum(8);
      std::string v = rng.uppercase_alnum(8);
      if (i % 2 == 0) v = cv;
      const std::string tw = rng.uppercase_alnum(8);
      const unsigned shift = static_cast<unsigned>(rng.uniform(1, 63));
      const Bytes challenge = make_crypto_challenge(cv, tw, shift);
      const bool matched = match_response(make_crypto_response(v, challenge), tw, shift);
      ok = matched == (v == cv);
    }
    check("challenge_random_len8", ok);
  }
  {  // xor self-cancellation
    bool ok = true;
    for (int i = 0; ok && i < 200; ++i) {
      const Bytes a = rng.random_bytes(8);
      const Bytes b = rng.random_bytes(8);
      Bytes x(8);
      for (int k = 0; k < 8; ++k) x[k] = a[k] ^ b[k];
      for (int k = 0; k < 8; ++k) x[k] = static_cast<std::uint8_t>(x[k] ^ a[k]);
      ok = x == b;
    }
    check("xor_cancellation", ok);
  }
  {  // poc detection vs exhaustive scan
    bool ok = true;
    for (int i = 0; ok && i < 100; ++i) {
      const DecisionSimilarityGraph dsg = random_dsg(rng);
      ok = detect_poc(dsg) == detect_poc_reference(dsg);
    }
    check("poc_oracle", ok);
  }
  {  // dsg filtering vs event partition
    bool ok = true;
    for (int i = 0; ok && i < 100; ++i) {
      const DecisionSimilarityGraph dsg = random_dsg(rng);
      const auto ids = dsg.vertices();
      const VehicleId seed_id = ids[rng.uniform(0, ids.size() - 1)];
      ok = filter_dsg(dsg, seed_id) == filter_reference(dsg, seed_id);
    }
    check("filter_oracle", ok);
  }
  {  // collusion generator: pass-1 fires when the group cannot stay insular,
     // pass-2 when it can
    bool ok = true;
    for (int i = 0; ok && i < 100; ++i) {
      const bool insular = i % 2 == 0;
      const CollusionCase c = generate_collusion_case(rng, insular);
      const auto poc = detect_poc(c.dsg);
      ok = poc.has_value() &&
           c.dsg.event_of(poc->first) != c.dsg.event_of(poc->second);
      if (!ok) break;
      if (insular) {
        // no adjacent conflicting pair may exist
        for (const VehicleId& m : c.colluders)
          for (const VehicleId& h : c.honest) ok = ok && !c.dsg.has_edge(m, h);
      } else {
        // every colluder must be adjacent to at least one honest reporter
        for (const VehicleId& m : c.colluders) {
          bool has_honest = false;
          for (const VehicleId& h : c.honest)
            has_honest = has_honest || c.dsg.has_edge(m, h);
          ok = ok && has_honest;
        }
      }
    }
    check("collusion_generator", ok);
  }
  return results;
}

}  // namespace selftest
}  // namespace vanetmon
