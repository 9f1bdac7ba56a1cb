#include "vanetmon/vehicle.hpp"

#include <algorithm>

#include "vanetmon/symcipher.hpp"

namespace vanetmon {

const char* to_string(BehaviorProfile::Kind k) {
  switch (k) {
    case BehaviorProfile::Kind::Honest: return "honest";
    case BehaviorProfile::Kind::EventSpoof: return "event_spoof";
    case BehaviorProfile::Kind::VelocitySpoof: return "velocity_spoof";
    case BehaviorProfile::Kind::GpsSpoof: return "gps_spoof";
    case BehaviorProfile::Kind::Impersonate: return "impersonate";
    case BehaviorProfile::Kind::DropPackets: return "drop_packets";
    case BehaviorProfile::Kind::Colluding: return "colluding";
  }
  return "?";
}

Event record_event(const VehicleState& state, mph100_t vel_congested,
                   mph100_t vel_ncongested) {
  (void)vel_ncongested;
  const Event honest = state.velocity_mph100 < vel_congested ? Event::Congested
                                                             : Event::NonCongested;
  switch (state.behavior.kind) {
    case BehaviorProfile::Kind::EventSpoof:
      return opposite(honest);
    case BehaviorProfile::Kind::Colluding:
      return state.behavior.group_event;
    default:
      return honest;
  }
}

mph100_t reported_velocity(const VehicleState& state, mph100_t vel_congested,
                           mph100_t vel_ncongested) {
  const BehaviorProfile& b = state.behavior;
  if (b.kind == BehaviorProfile::Kind::VelocitySpoof)
    return std::max<mph100_t>(0, state.velocity_mph100 + b.vel_delta_mph100);
  if (b.slow_to_prove && (b.kind == BehaviorProfile::Kind::EventSpoof ||
                          b.kind == BehaviorProfile::Kind::Colluding)) {
    // report a velocity that matches the spoofed event
    const Event reported = record_event(state, vel_congested, vel_ncongested);
    if (reported == Event::Congested)
      return std::min<mph100_t>(state.velocity_mph100, vel_congested);
    return std::max<mph100_t>(state.velocity_mph100, vel_ncongested);
  }
  return state.velocity_mph100;
}

Nat make_enc_id(const VehicleState& state, const Nat& edge_n_public) {
  const VehicleId& id = state.behavior.kind == BehaviorProfile::Kind::Impersonate
                            ? state.behavior.target
                            : state.id;
  return ss_encrypt(encode_id(id), edge_n_public);
}

std::optional<DataPacket> build_data_packet(
    const VehicleState& state, const std::vector<NeighborEncId>& neighbor_enc_ids,
    int threshold, const Nat& edge_n_public, mph100_t vel_congested,
    mph100_t vel_ncongested, Rng& rng) {
  (void)edge_n_public;
  const BehaviorProfile& b = state.behavior;
  if (b.kind == BehaviorProfile::Kind::DropPackets) return std::nullopt;
  if (neighbor_enc_ids.size() < static_cast<std::size_t>(threshold))
    return std::nullopt;

  DataPacket p;
  p.v_id = b.kind == BehaviorProfile::Kind::Impersonate ? b.target : state.id;
  p.ds = signature_to_bytes(eg_sign(p.v_id, state.eg_keys.priv, rng));
  p.event = record_event(state, vel_congested, vel_ncongested);
  p.vel_mph100 = reported_velocity(state, vel_congested, vel_ncongested);

  std::int64_t gps_mm = mm_from_e7(state.position_e7);
  if (b.kind == BehaviorProfile::Kind::GpsSpoof) gps_mm += b.gps_delta_mm;
  p.gps_mm = gps_mm;

  // colluders fill their list from the group first
  std::vector<const NeighborEncId*> ordered;
  ordered.reserve(neighbor_enc_ids.size());
  if (b.kind == BehaviorProfile::Kind::Colluding) {
    for (const auto& n : neighbor_enc_ids)
      if (n.from_group) ordered.push_back(&n);
    for (const auto& n : neighbor_enc_ids)
      if (!n.from_group) ordered.push_back(&n);
  } else {
    for (const auto& n : neighbor_enc_ids) ordered.push_back(&n);
  }
  for (int i = 0; i < threshold; ++i) p.enc_ids.push_back(ordered[i]->enc_id);

  p.trajectory = state.trajectory;
  return p;
}

std::optional<EncryptedDataPacket> build_packets(
    const VehicleState& state, const std::vector<NeighborEncId>& neighbor_enc_ids,
    int threshold, const Nat& edge_n_public, mph100_t vel_congested,
    mph100_t vel_ncongested, Rng& rng) {
  auto plain = build_data_packet(state, neighbor_enc_ids, threshold, edge_n_public,
                                 vel_congested, vel_ncongested, rng);
  if (!plain) return std::nullopt;
  EncryptedDataPacket out;
  out.tau = ss_encrypt(encode_key(state.sym_key), edge_n_public);
  out.body = sym_encrypt(serialize_data_packet(*plain), state.sym_key, rng);
  return out;
}

std::optional<Bytes> answer_challenge(const VehicleState& state,
                                      const Bytes& challenge) {
  if (state.behavior.kind == BehaviorProfile::Kind::DropPackets) return std::nullopt;
  if (state.id.size() != challenge.size()) return std::nullopt;
  return make_crypto_response(state.id, challenge);
}

}  // namespace vanetmon
