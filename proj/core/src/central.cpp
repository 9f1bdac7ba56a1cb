#include "vanetmon/central.hpp"

#include <stdexcept>

namespace vanetmon {

CentralServer::CentralServer(EgParams params) : params_(std::move(params)) {}

EgKeyPair CentralServer::register_vehicle(const VehicleId& id, Rng& rng) {
  std::lock_guard lock(mutex_);
  if (keys_.contains(id))
    throw std::invalid_argument("register_vehicle: duplicate id " + id);
  EgKeyPair pair = eg_keygen(rng, params_);
  keys_.emplace(id, pair.pub);
  return pair;
}

const EgPublicKey* CentralServer::find_public(const VehicleId& id) const {
  std::lock_guard lock(mutex_);
  auto it = keys_.find(id);
  return it == keys_.end() ? nullptr : &it->second;
}

bool CentralServer::is_registered(const VehicleId& id) const {
  std::lock_guard lock(mutex_);
  return keys_.contains(id);
}

std::size_t CentralServer::registered_count() const {
  std::lock_guard lock(mutex_);
  return keys_.size();
}

void CentralServer::bind_region(const std::string& roi, const std::string& edge_handle) {
  std::lock_guard lock(mutex_);
  regions_[roi] = edge_handle;
}

const std::string& CentralServer::route_request(const std::string& roi) const {
  std::lock_guard lock(mutex_);
  auto it = regions_.find(roi);
  if (it == regions_.end()) throw std::out_of_range("route_request: unknown roi " + roi);
  return it->second;
}

Verdict CentralServer::aggregate_regions(
    const std::map<std::string, Verdict>& decisions) {
  if (decisions.empty())
    throw std::invalid_argument("aggregate_regions: no edge decisions");
  std::size_t congested = 0;
  std::size_t non_congested = 0;
  for (const auto& [edge, verdict] : decisions) {
    if (verdict == Verdict::Congested) ++congested;
    if (verdict == Verdict::NonCongested) ++non_congested;
  }
  if (congested > non_congested) return Verdict::Congested;
  if (non_congested > congested) return Verdict::NonCongested;
  return Verdict::Undetermined;
}

}  // namespace vanetmon
