#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vanetmon/crypto.hpp"
#include "vanetmon/messages.hpp"
#include "vanetmon/signature.hpp"
#include "vanetmon/units.hpp"

namespace vanetmon {

/// Behavior kinds from the threat model, plus Honest. A profile corrupts
/// exactly the fields its kind names; everything else matches ground truth.
struct BehaviorProfile {
  enum class Kind : std::uint8_t {
    Honest,
    EventSpoof,
    VelocitySpoof,
    GpsSpoof,
    Impersonate,
    DropPackets,
    Colluding,
  };

  Kind kind = Kind::Honest;
  mph100_t vel_delta_mph100 = 0;   // VelocitySpoof
  std::int64_t gps_delta_mm = 0;   // GpsSpoof
  VehicleId target;                // Impersonate
  int group_tag = 0;               // Colluding
  Event group_event = Event::Congested;  // event the colluding group agreed on

  // An event spoofer with this flag also reports a velocity consistent with
  // its fake event and physically adjusts speed during a challenge so it
  // reaches the expected RSU in time.
  bool slow_to_prove = false;

  bool is_malicious() const { return kind != Kind::Honest; }
};

const char* to_string(BehaviorProfile::Kind k);

struct VehicleState {
  VehicleId id;
  EgKeyPair eg_keys;
  pos_e7_t position_e7 = 0;
  mph100_t velocity_mph100 = 0;  // true velocity
  std::vector<std::string> trajectory;  // rsu ids ahead, engine-maintained
  BehaviorProfile behavior;
  SymmetricKey sym_key;  // fresh per reporting round
};

/// An enc_id as received over V2V, tagged with whether the sender belongs to
/// the receiver's colluding group (group members coordinate out of band).
struct NeighborEncId {
  Nat enc_id;
  bool from_group = false;
};

/// The event this vehicle reports: honest vehicles compare their own velocity
/// against the congested threshold, spoofers invert, colluders report the
/// group event, everyone else reports truthfully.
Event record_event(const VehicleState& state, mph100_t vel_congested,
                   mph100_t vel_ncongested);

/// Velocity the vehicle writes into its packet (true velocity except for
/// VelocitySpoof and slow_to_prove event spoofers).
mph100_t reported_velocity(const VehicleState& state, mph100_t vel_congested,
                           mph100_t vel_ncongested);

/// Encrypted identity broadcast to neighbors. Impersonators encrypt the
/// victim id. Raw trapdoor operation, so two calls in a round are identical.
Nat make_enc_id(const VehicleState& state, const Nat& edge_n_public);

/// Builds the encrypted packet for this round, or nothing when the profile
/// drops packets or fewer than `threshold` neighbor ids have arrived (the
/// engine re-polls in that case). Colluders take group enc_ids first.
std::optional<EncryptedDataPacket> build_packets(
    const VehicleState& state, const std::vector<NeighborEncId>& neighbor_enc_ids,
    int threshold, const Nat& edge_n_public, mph100_t vel_congested,
    mph100_t vel_ncongested, Rng& rng);

/// Plain (pre-encryption) packet, exposed for differential tests.
std::optional<DataPacket> build_data_packet(
    const VehicleState& state, const std::vector<NeighborEncId>& neighbor_enc_ids,
    int threshold, const Nat& edge_n_public, mph100_t vel_congested,
    mph100_t vel_ncongested, Rng& rng);

/// Every profile answers a challenge except DropPackets, which stays silent.
std::optional<Bytes> answer_challenge(const VehicleState& state,
                                      const Bytes& challenge);

}  // namespace vanetmon
