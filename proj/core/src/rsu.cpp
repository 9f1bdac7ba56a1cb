#include "vanetmon/rsu.hpp"

#include <stdexcept>

namespace vanetmon {

RsuAgent::RsuAgent(RsuSite site, pos_e7_t range_e7, int threshold, millis_t sigma_ms)
    : site_(std::move(site)), range_e7_(range_e7), threshold_(threshold),
      sigma_ms_(sigma_ms) {
  if (threshold_ <= 0) throw std::invalid_argument("RsuAgent: threshold must be > 0");
}

std::optional<AggregatePacket> RsuAgent::collect_and_flush(
    const EncryptedDataPacket& packet, millis_t now) {
  if (buffer_.empty()) first_buffered_at_ = now;
  buffer_.push_back(packet);
  if (buffer_.size() >= static_cast<std::size_t>(threshold_)) return make_aggregate();
  return std::nullopt;
}

std::optional<millis_t> RsuAgent::flush_deadline() const {
  if (buffer_.empty()) return std::nullopt;
  return first_buffered_at_ + sigma_ms_;
}

std::optional<AggregatePacket> RsuAgent::flush_if_due(millis_t now) {
  if (buffer_.empty()) return std::nullopt;
  if (now < first_buffered_at_ + sigma_ms_) return std::nullopt;
  return make_aggregate();
}

AggregatePacket RsuAgent::make_aggregate() {
  AggregatePacket out;
  out.rsu_id = site_.id;
  out.location_mm = mm_from_e7(site_.location_e7);
  out.packets = std::move(buffer_);
  buffer_.clear();
  first_buffered_at_ = -1;
  return out;
}

void RsuAgent::add_assignment(RsuAssignment assignment) {
  assignments_.push_back(std::move(assignment));
}

Bytes RsuAgent::open_window(std::size_t index, millis_t now) {
  RsuAssignment& a = assignments_.at(index);
  a.window_start = now;
  return make_crypto_challenge(a.cv, a.testing_word, a.left_num);
}

void RsuAgent::on_response(const Bytes& response, millis_t now) {
  for (RsuAssignment& a : assignments_) {
    if (a.window_start < 0) continue;
    if (now < a.window_start || now > a.window_start + sigma_ms_) continue;
    if (match_response(response, a.testing_word, a.left_num)) a.matched = true;
  }
}

millis_t RsuAgent::window_close(std::size_t index) const {
  const RsuAssignment& a = assignments_.at(index);
  if (a.window_start < 0) throw std::logic_error("window_close: window not opened");
  return a.window_start + sigma_ms_;
}

VehicleSearch RsuAgent::search_result(std::size_t index) const {
  const RsuAssignment& a = assignments_.at(index);
  return VehicleSearch{site_.id, a.cv,
                       a.matched ? SearchResponse::Received
                                 : SearchResponse::NotReceived};
}

VehicleSearch run_challenge(const RsuSite& site, const RsuAssignment& assignment,
                            millis_t broadcast_at,
                            const std::vector<TimedResponse>& responses,
                            millis_t sigma_ms) {
  bool matched = false;
  for (const TimedResponse& r : responses) {
    if (r.at < broadcast_at || r.at > broadcast_at + sigma_ms) continue;
    if (match_response(r.response, assignment.testing_word, assignment.left_num))
      matched = true;
  }
  return VehicleSearch{site.id, assignment.cv,
                       matched ? SearchResponse::Received : SearchResponse::NotReceived};
}

}  // namespace vanetmon
