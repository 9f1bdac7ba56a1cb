#pragma once

#include <map>
#include <mutex>
#include <string>

#include "vanetmon/metrics.hpp"
#include "vanetmon/signature.hpp"

namespace vanetmon {

/// Trusted registry: vehicle ids to signature public keys, regions to the
/// edge server owning them. Registration is serialized; lookups are
/// read-only and safe to run concurrently.
class CentralServer {
 public:
  explicit CentralServer(EgParams params = eg_default_params());

  /// Generates a keypair for a fresh id, stores the public part and hands the
  /// whole pair back for the vehicle's on-board unit. Duplicate ids throw.
  EgKeyPair register_vehicle(const VehicleId& id, Rng& rng);

  const EgPublicKey* find_public(const VehicleId& id) const;
  bool is_registered(const VehicleId& id) const;
  std::size_t registered_count() const;

  void bind_region(const std::string& roi, const std::string& edge_handle);
  /// Throws std::out_of_range for an unknown roi.
  const std::string& route_request(const std::string& roi) const;

  /// Majority verdict across edges; an exact tie is Undetermined. Throws on
  /// empty input.
  static Verdict aggregate_regions(const std::map<std::string, Verdict>& decisions);

  const EgParams& params() const { return params_; }

 private:
  EgParams params_;
  mutable std::mutex mutex_;
  std::map<VehicleId, EgPublicKey> keys_;
  std::map<std::string, std::string> regions_;
};

}  // namespace vanetmon
