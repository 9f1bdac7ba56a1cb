#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vanetmon/bignat.hpp"

namespace vanetmon {

using VehicleId = std::string;

enum class Event : std::uint8_t { Congested = 0, NonCongested = 1 };

Event opposite(Event e);
const char* to_string(Event e);

enum class SearchResponse : std::uint8_t { Received = 0, NotReceived = 1 };

/// Decode failures carry a kind so callers can tell truncation from a
/// malformed length from an invariant violation.
class DecodeError : public std::runtime_error {
 public:
  enum class Kind { Truncated, LengthOverflow, BadValue, Invariant };

  DecodeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// --- Wire messages ----------------------------------------------------------
//
// Velocities travel as mph*100 and positions as signed millimetres along the
// corridor; integers are big-endian, strings and naturals length-prefixed
// with a 32-bit length. One byte string per value.

struct DataPacket {
  VehicleId v_id;
  Bytes ds;  // signature over v_id
  Event event = Event::Congested;
  std::int32_t vel_mph100 = 0;
  std::int64_t gps_mm = 0;
  std::vector<Nat> enc_ids;
  std::vector<std::string> trajectory;

  bool operator==(const DataPacket&) const = default;
};

struct EncryptedDataPacket {
  Nat tau;
  Bytes body;

  bool operator==(const EncryptedDataPacket&) const = default;
};

struct AggregatePacket {
  std::string rsu_id;
  std::int64_t location_mm = 0;
  std::vector<EncryptedDataPacket> packets;

  bool operator==(const AggregatePacket&) const = default;
};

struct ChallengeEntry {
  VehicleId cv;
  std::vector<std::string> expected_rsus;
  std::int32_t time_s = 0;

  bool operator==(const ChallengeEntry&) const = default;
};

struct ChallengePacket {
  std::array<ChallengeEntry, 2> entries;

  bool operator==(const ChallengePacket&) const = default;
};

struct VehicleSearch {
  std::string rsu_id;
  VehicleId cv;
  SearchResponse response = SearchResponse::NotReceived;

  bool operator==(const VehicleSearch&) const = default;
};

struct CryptoChallengeFrame {
  std::string rsu_id;
  Bytes challenge;

  bool operator==(const CryptoChallengeFrame&) const = default;
};

struct CryptoResponseFrame {
  Bytes response;

  bool operator==(const CryptoResponseFrame&) const = default;
};

Bytes serialize_data_packet(const DataPacket& m);
DataPacket deserialize_data_packet(const Bytes& b);

Bytes serialize_encrypted_data_packet(const EncryptedDataPacket& m);
EncryptedDataPacket deserialize_encrypted_data_packet(const Bytes& b);

Bytes serialize_aggregate_packet(const AggregatePacket& m);
AggregatePacket deserialize_aggregate_packet(const Bytes& b);

Bytes serialize_challenge_packet(const ChallengePacket& m);
ChallengePacket deserialize_challenge_packet(const Bytes& b);

Bytes serialize_vehicle_search(const VehicleSearch& m);
VehicleSearch deserialize_vehicle_search(const Bytes& b);

Bytes serialize_crypto_challenge(const CryptoChallengeFrame& m);
CryptoChallengeFrame deserialize_crypto_challenge(const Bytes& b);

Bytes serialize_crypto_response(const CryptoResponseFrame& m);
CryptoResponseFrame deserialize_crypto_response(const Bytes& b);

}  // namespace vanetmon
