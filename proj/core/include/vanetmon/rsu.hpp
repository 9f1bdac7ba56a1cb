#pragma once

#include <optional>
#include <vector>

#include "vanetmon/crypto.hpp"
#include "vanetmon/messages.hpp"
#include "vanetmon/units.hpp"

namespace vanetmon {

struct RsuSite {
  std::string id;
  pos_e7_t location_e7 = 0;
};

/// One pending presence check: the cv this RSU challenges, the testing word
/// and rotation the challenge was built from, and the window start.
struct RsuAssignment {
  VehicleId cv;
  std::string testing_word;
  unsigned left_num = 0;
  std::int32_t time_s = 0;        // challenge broadcast offset from the anchor
  millis_t window_start = -1;     // broadcast instant, set when it goes out
  bool matched = false;
};

/// Roadside unit: buffers encrypted packets until `threshold` arrive or sigma
/// elapses since the first one, relays aggregates to the edge, and runs
/// challenge windows.
class RsuAgent {
 public:
  RsuAgent(RsuSite site, pos_e7_t range_e7, int threshold, millis_t sigma_ms);

  const RsuSite& site() const { return site_; }
  pos_e7_t range_e7() const { return range_e7_; }

  /// Returns an aggregate when this packet fills the buffer to `threshold`.
  /// The sender is assumed in range (the channel enforces that contract).
  std::optional<AggregatePacket> collect_and_flush(const EncryptedDataPacket& packet,
                                                   millis_t now);

  /// Instant at which the sigma timer for the current buffer expires, or
  /// nothing when the buffer is empty.
  std::optional<millis_t> flush_deadline() const;

  /// Flushes whatever is buffered if the sigma deadline has passed.
  std::optional<AggregatePacket> flush_if_due(millis_t now);

  // --- challenge phase ---
  void add_assignment(RsuAssignment assignment);
  bool has_assignments() const { return !assignments_.empty(); }
  std::vector<RsuAssignment>& assignments() { return assignments_; }

  /// Challenge bytes for one assignment; records the window start.
  Bytes open_window(std::size_t index, millis_t now);

  /// Feeds one received response to every open window; late responses
  /// (after window_start + sigma) are ignored.
  void on_response(const Bytes& response, millis_t now);

  /// Window close instant for an assignment.
  millis_t window_close(std::size_t index) const;

  /// Search verdict for an assignment once its window has closed.
  VehicleSearch search_result(std::size_t index) const;

 private:
  AggregatePacket make_aggregate();

  RsuSite site_;
  pos_e7_t range_e7_;
  int threshold_;
  millis_t sigma_ms_;
  std::vector<EncryptedDataPacket> buffer_;
  millis_t first_buffered_at_ = -1;
  std::vector<RsuAssignment> assignments_;
};

/// Batch form of the response evaluation, for direct tests: feeds timed
/// responses through one assignment window and reports the search verdict.
struct TimedResponse {
  Bytes response;
  millis_t at = 0;
};

VehicleSearch run_challenge(const RsuSite& site, const RsuAssignment& assignment,
                            millis_t broadcast_at,
                            const std::vector<TimedResponse>& responses,
                            millis_t sigma_ms);

}  // namespace vanetmon
