#include "vanetmon/engine.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "vanetmon/baselines.hpp"
#include "vanetmon/random.hpp"
#include "vanetmon/symcipher.hpp"

namespace vanetmon {

namespace {

constexpr int kPrioTick = 0;
constexpr int kPrioNormal = 1;

struct QueuedEvent {
  millis_t at;
  int prio;
  std::uint64_t seq;
  std::function<void()> fn;
};

struct EventOrder {
  bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
    if (a.at != b.at) return a.at > b.at;
    if (a.prio != b.prio) return a.prio > b.prio;
    return a.seq > b.seq;
  }
};

struct VehicleRt {
  VehicleState state;
  double reputation = 0.0;
  bool has_key = false;
  bool key_pending = false;
  bool enc_id_sent = false;
  bool packet_sent = false;
  bool vote_sent = false;
  std::vector<NeighborEncId> inbox;
  int responded_round = -1;
  bool will_send = false;  // baseline vote paths
};

struct Vote {
  VehicleId id;
  Event event = Event::Congested;
  double reputation = 0.0;
  VehicleId rated;  // peer_auth endorsement target
};

class Engine {
 public:
  explicit Engine(const Scenario& scenario)
      : scenario_(scenario),
        rng_(scenario.seed),
        edge_("EDGE1",
              scenario.model == RunModel::Proposed
                  ? ss_keygen(scenario.ss_key_bits, rng_)
                  : SsKeyPair{Nat(7), Nat(11), Nat(539), Nat(29)},
              scenario.scrutiny, scenario.range_e7, scenario.t_max_s) {}

  SimReport run();

 private:
  void schedule(millis_t at, int prio, std::function<void()> fn) {
    queue_.push(QueuedEvent{at, prio, seq_++, std::move(fn)});
  }

  /// Radio hop: one delivery instant per transmission. With queuing on,
  /// same-tick transmissions serialize, each adding a full latency.
  millis_t radio_delivery(millis_t now) {
    if (!scenario_.channel_queuing) return now + scenario_.latency_ms;
    const millis_t start = std::max(now, channel_free_at_);
    const millis_t at = start + scenario_.latency_ms;
    channel_free_at_ = at;
    return at;
  }

  bool lossy_drop() {
    if (scenario_.loss_rate <= 0) return false;
    return rng_.uniform(0, 999'999) <
           static_cast<std::uint64_t>(scenario_.loss_rate * 1'000'000.0);
  }

  void count_vehicle_tx(const VehicleId& id) {
    ++report_.broadcasts_by_entity[id];
    ++report_.vehicle_broadcast_total;
  }
  void count_rsu_tx(const std::string& id) {
    ++report_.broadcasts_by_entity[id];
    ++report_.rsu_broadcast_total;
  }
  void count_edge_tx() {
    ++report_.broadcasts_by_entity[edge_.id()];
    ++report_.edge_broadcast_total;
  }

  void note(millis_t at, const char* kind, std::string detail) {
    report_.timeline.push_back(TimelineEvent{at, kind, std::move(detail)});
  }

  bool in_range(pos_e7_t a, pos_e7_t b) const {
    return abs_distance(a, b) <= scenario_.range_e7;
  }

  int nearest_rsu_in_range(pos_e7_t pos) const {
    int best = -1;
    pos_e7_t best_dist = 0;
    for (std::size_t i = 0; i < rsus_.size(); ++i) {
      const pos_e7_t d = abs_distance(pos, rsus_[i].site().location_e7);
      if (d > scenario_.range_e7) continue;
      if (best < 0 || d < best_dist) {
        best = static_cast<int>(i);
        best_dist = d;
      }
    }
    return best;
  }

  /// Linear motion: does vehicle vi enter some RSU's range at an integer tick
  /// in [from_tick, t_max]?
  bool reaches_rsu_coverage(std::size_t vi, int from_tick) const {
    const VehicleRt& v = vehicles_[vi];
    const pos_e7_t step = velocity_step_e7(v.state.velocity_mph100);
    const pos_e7_t pos0 = start_position_[vi];
    for (const RsuAgent& rsu : rsus_) {
      const pos_e7_t loc = rsu.site().location_e7;
      if (step == 0) {
        if (in_range(pos0, loc)) return true;
        continue;
      }
      const pos_e7_t lo_num = loc - scenario_.range_e7 - pos0;
      const pos_e7_t hi_num = loc + scenario_.range_e7 - pos0;
      std::int64_t k_lo = lo_num <= 0 ? 0 : (lo_num + step - 1) / step;
      std::int64_t k_hi = hi_num < 0 ? -1 : hi_num / step;
      k_lo = std::max<std::int64_t>(k_lo, from_tick);
      k_hi = std::min<std::int64_t>(k_hi, scenario_.t_max_s);
      if (k_lo <= k_hi) return true;
    }
    return false;
  }

  std::vector<std::string> trajectory_ahead(pos_e7_t pos) const {
    std::vector<std::string> out;
    for (const RsuAgent& rsu : rsus_)
      if (rsu.site().location_e7 > pos) out.push_back(rsu.site().id);
    if (out.empty() && !rsus_.empty()) out.push_back(rsus_.back().site().id);
    return out;
  }

  void setup();
  void broadcast_edge_key();
  void beacon_new_arrivals();
  void tick(int k);
  void check_senders_final(int tick_no);
  void finalize_expected_packets();
  void determine_voters(int tick_no);
  void poll_enc_id(std::size_t vi);
  void poll_packet_send(std::size_t vi);
  void poll_vote_send(std::size_t vi);
  void deliver_packet_to_rsu(std::size_t rsu_idx, const EncryptedDataPacket& packet);
  void emit_aggregate(std::size_t rsu_idx, AggregatePacket aggregate);
  void deliver_vote(std::size_t rsu_idx, const Vote& vote);
  void flush_vote_buffer(std::size_t rsu_idx);
  void maybe_run_pipeline();
  void run_pipeline();
  void handle_step(EdgeServer::StepResult step);
  void start_challenge_round(EdgeServer::ChallengeRequest request);
  void broadcast_challenge(std::size_t rsu_idx, std::size_t assignment_idx);
  void close_window(std::size_t rsu_idx, std::size_t assignment_idx);
  void deliver_search(const VehicleSearch& search);
  void decide_baseline();
  void finish_proposed(const Decision& decision);
  void finish_report();

  const Scenario& scenario_;
  Rng rng_;
  CentralServer central_;
  EdgeServer edge_;
  std::vector<RsuAgent> rsus_;
  std::vector<VehicleRt> vehicles_;
  std::vector<pos_e7_t> start_position_;
  std::map<VehicleId, std::size_t> vehicle_index_;

  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, EventOrder> queue_;
  std::uint64_t seq_ = 0;
  millis_t current_time_ = 0;
  millis_t channel_free_at_ = 0;

  // proposed-model state
  std::vector<AggregatePacket> aggregates_;
  std::size_t packets_received_ = 0;
  std::size_t packets_expected_ = 0;
  std::size_t packets_lost_ = 0;
  bool senders_final_seen_ = false;
  bool senders_determined_ = false;
  bool pipeline_started_ = false;
  int challenge_round_ = 0;
  std::size_t searches_expected_ = 0;
  std::vector<VehicleSearch> searches_;
  VehicleId pending_cv1_, pending_cv2_;

  // baseline state
  struct VoteBuffer {
    std::vector<Vote> votes;
    millis_t first_at = -1;
  };
  std::vector<VoteBuffer> vote_buffers_;
  std::vector<Vote> votes_;
  std::size_t votes_expected_ = 0;

  bool finished_ = false;
  SimReport report_;
};

void Engine::setup() {
  const auto population = build_population(scenario_);
  vehicles_.reserve(population.size());
  for (const auto& spec : population) {
    VehicleRt v;
    v.state.id = spec.id;
    v.state.position_e7 = spec.position_e7;
    v.state.velocity_mph100 = spec.velocity_mph100;
    v.state.behavior = spec.behavior;
    v.reputation = spec.reputation;
    v.state.eg_keys = central_.register_vehicle(spec.id, rng_);
    if (spec.behavior.is_malicious()) report_.actual_malicious.insert(spec.id);
    vehicle_index_[spec.id] = vehicles_.size();
    vehicles_.push_back(std::move(v));
    start_position_.push_back(spec.position_e7);
  }
  for (const RsuSite& site : rsu_layout(scenario_))
    rsus_.emplace_back(site, scenario_.range_e7, scenario_.threshold,
                       scenario_.sigma_ms);
  vote_buffers_.resize(rsus_.size());
  central_.bind_region("ROI1", edge_.id());
}

void Engine::broadcast_edge_key() {
  // edge announces its public key to the rsus; rsus beacon it to whoever is
  // under coverage now, and keep beaconing to new arrivals each tick
  count_edge_tx();
  note(0, "key_broadcast", edge_.id());
  schedule(scenario_.latency_ms, kPrioNormal, [this] { beacon_new_arrivals(); });
}

void Engine::beacon_new_arrivals() {
  for (std::size_t r = 0; r < rsus_.size(); ++r) {
    bool beaconed = false;
    for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
      VehicleRt& v = vehicles_[vi];
      if (v.has_key || v.key_pending) continue;
      if (!in_range(v.state.position_e7, rsus_[r].site().location_e7)) continue;
      if (!beaconed) {
        beaconed = true;
        count_rsu_tx(rsus_[r].site().id);
      }
      v.key_pending = true;
      schedule(current_time_ + scenario_.latency_ms, kPrioNormal, [this, vi] {
        vehicles_[vi].has_key = true;
        vehicles_[vi].key_pending = false;
      });
    }
  }
}

void Engine::tick(int k) {
  if (finished_) return;
  for (VehicleRt& v : vehicles_)
    v.state.position_e7 += velocity_step_e7(v.state.velocity_mph100);

  if (scenario_.model == RunModel::Proposed) beacon_new_arrivals();
  if (scenario_.model != RunModel::Proposed && k >= 2 && !senders_determined_)
    determine_voters(k);

  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (scenario_.model == RunModel::Proposed) {
      if (k >= 1) poll_enc_id(i);
      if (k >= 2) poll_packet_send(i);
    } else if (k >= 2) {
      poll_vote_send(i);
    }
  }

  if (scenario_.model == RunModel::Proposed && !senders_final_seen_)
    check_senders_final(k);

  if (k < scenario_.t_max_s) {
    schedule(static_cast<millis_t>(k + 1) * 1000, kPrioTick,
             [this, k] { tick(k + 1); });
    return;
  }
  // hard stop at t_max: decide with whatever arrived
  if (scenario_.model == RunModel::Proposed) {
    if (!pipeline_started_) {
      run_pipeline();
    } else {
      Decision d;
      finish_proposed(d);
    }
  } else {
    decide_baseline();
  }
}

// The reporting population is settled once every vehicle has either sent its
// enc_id or can never be covered before t_max. Expected-count bookkeeping is
// deferred one latency so in-flight enc_id deliveries land first.
void Engine::check_senders_final(int tick_no) {
  for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
    const VehicleRt& v = vehicles_[vi];
    if (v.enc_id_sent) continue;
    if (!reaches_rsu_coverage(vi, tick_no)) continue;
    return;  // someone can still join
  }
  senders_final_seen_ = true;
  schedule(current_time_ + scenario_.latency_ms + 1, kPrioNormal,
           [this] { finalize_expected_packets(); });
}

void Engine::finalize_expected_packets() {
  senders_determined_ = true;
  std::size_t expected = 0;
  for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
    const VehicleRt& v = vehicles_[vi];
    const bool drops = v.state.behavior.kind == BehaviorProfile::Kind::DropPackets;
    if (!drops && v.enc_id_sent &&
        v.inbox.size() >= static_cast<std::size_t>(scenario_.threshold) &&
        reaches_rsu_coverage(vi, 2))
      ++expected;
  }
  packets_expected_ = expected;
  maybe_run_pipeline();
}

void Engine::determine_voters(int tick_no) {
  senders_determined_ = true;
  std::size_t expected = 0;
  for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
    VehicleRt& v = vehicles_[vi];
    const bool drops = v.state.behavior.kind == BehaviorProfile::Kind::DropPackets;
    v.will_send = !drops && reaches_rsu_coverage(vi, tick_no);
    if (v.will_send) ++expected;
  }
  votes_expected_ = scenario_.model == RunModel::PeerAuth
                        ? expected * static_cast<std::size_t>(scenario_.threshold)
                        : expected;
  if (votes_expected_ == 0)
    schedule(current_time_, kPrioNormal, [this] { decide_baseline(); });
}

void Engine::poll_enc_id(std::size_t vi) {
  VehicleRt& v = vehicles_[vi];
  if (!v.has_key || v.enc_id_sent) return;
  v.enc_id_sent = true;
  const Nat enc = make_enc_id(v.state, edge_.public_key());
  count_vehicle_tx(v.state.id);
  note(current_time_, "enc_id_broadcast", v.state.id);
  const bool sender_colluding =
      v.state.behavior.kind == BehaviorProfile::Kind::Colluding;
  const int sender_group = v.state.behavior.group_tag;
  const millis_t at = radio_delivery(current_time_);
  for (std::size_t j = 0; j < vehicles_.size(); ++j) {
    if (j == vi) continue;
    if (!in_range(v.state.position_e7, vehicles_[j].state.position_e7)) continue;
    if (lossy_drop()) continue;
    const bool same_group =
        sender_colluding &&
        vehicles_[j].state.behavior.kind == BehaviorProfile::Kind::Colluding &&
        vehicles_[j].state.behavior.group_tag == sender_group;
    schedule(at, kPrioNormal, [this, j, enc, same_group] {
      vehicles_[j].inbox.push_back(NeighborEncId{enc, same_group});
    });
  }
}

void Engine::poll_packet_send(std::size_t vi) {
  VehicleRt& v = vehicles_[vi];
  if (v.packet_sent || !v.enc_id_sent) return;
  if (v.state.behavior.kind == BehaviorProfile::Kind::DropPackets) return;
  if (v.inbox.size() < static_cast<std::size_t>(scenario_.threshold)) return;
  const int rsu_idx = nearest_rsu_in_range(v.state.position_e7);
  if (rsu_idx < 0) return;  // waits until it arrives near the next rsu
  v.packet_sent = true;
  v.state.trajectory = trajectory_ahead(v.state.position_e7);
  v.state.sym_key = make_symmetric_key(rng_);
  auto packet = build_packets(v.state, v.inbox, scenario_.threshold,
                              edge_.public_key(), scenario_.scrutiny.vel_congested,
                              scenario_.scrutiny.vel_ncongested, rng_);
  if (!packet) return;
  count_vehicle_tx(v.state.id);
  note(current_time_, "data_packet", v.state.id);
  if (lossy_drop()) {
    ++packets_lost_;  // lost on air; the edge will not see it
    maybe_run_pipeline();
    return;
  }
  schedule(radio_delivery(current_time_), kPrioNormal,
           [this, rsu_idx, p = std::move(*packet)] {
             deliver_packet_to_rsu(static_cast<std::size_t>(rsu_idx), p);
           });
}

void Engine::poll_vote_send(std::size_t vi) {
  VehicleRt& v = vehicles_[vi];
  if (!senders_determined_ || !v.will_send || v.vote_sent) return;
  const int rsu_idx = nearest_rsu_in_range(v.state.position_e7);
  if (rsu_idx < 0) return;
  v.vote_sent = true;
  const Event event = record_event(v.state, scenario_.scrutiny.vel_congested,
                                   scenario_.scrutiny.vel_ncongested);
  note(current_time_, "vote", v.state.id);
  if (scenario_.model != RunModel::PeerAuth) {
    count_vehicle_tx(v.state.id);
    const Vote vote{v.state.id, event, v.reputation, {}};
    schedule(radio_delivery(current_time_), kPrioNormal, [this, vote, rsu_idx] {
      deliver_vote(static_cast<std::size_t>(rsu_idx), vote);
    });
    return;
  }
  // peer authentication: threshold endorsements along the same-side ring
  std::vector<VehicleId> side;
  for (const VehicleRt& other : vehicles_) {
    if (!other.will_send) continue;
    if (record_event(other.state, scenario_.scrutiny.vel_congested,
                     scenario_.scrutiny.vel_ncongested) == event)
      side.push_back(other.state.id);
  }
  std::sort(side.begin(), side.end());
  const std::size_t self_idx = static_cast<std::size_t>(
      std::find(side.begin(), side.end(), v.state.id) - side.begin());
  for (int r = 0; r < scenario_.threshold; ++r) {
    VehicleId target = v.state.id;
    if (side.size() > 1) {
      const std::size_t hop = 1 + static_cast<std::size_t>(r) % (side.size() - 1);
      target = side[(self_idx + hop) % side.size()];
    }
    count_vehicle_tx(v.state.id);
    const Vote vote{v.state.id, event, v.reputation, target};
    schedule(radio_delivery(current_time_), kPrioNormal, [this, vote, rsu_idx] {
      deliver_vote(static_cast<std::size_t>(rsu_idx), vote);
    });
  }
}

void Engine::deliver_packet_to_rsu(std::size_t rsu_idx,
                                   const EncryptedDataPacket& packet) {
  auto aggregate = rsus_[rsu_idx].collect_and_flush(packet, current_time_);
  if (aggregate) {
    emit_aggregate(rsu_idx, std::move(*aggregate));
    return;
  }
  if (auto deadline = rsus_[rsu_idx].flush_deadline()) {
    schedule(*deadline, kPrioNormal, [this, rsu_idx] {
      if (auto agg = rsus_[rsu_idx].flush_if_due(current_time_))
        emit_aggregate(rsu_idx, std::move(*agg));
    });
  }
}

void Engine::emit_aggregate(std::size_t rsu_idx, AggregatePacket aggregate) {
  count_rsu_tx(rsus_[rsu_idx].site().id);
  note(current_time_, "aggregate", rsus_[rsu_idx].site().id);
  schedule(current_time_ + scenario_.latency_ms, kPrioNormal,
           [this, agg = std::move(aggregate)]() mutable {
             packets_received_ += agg.packets.size();
             aggregates_.push_back(std::move(agg));
             maybe_run_pipeline();
           });
}

void Engine::deliver_vote(std::size_t rsu_idx, const Vote& vote) {
  VoteBuffer& buf = vote_buffers_[rsu_idx];
  const bool was_empty = buf.votes.empty();
  if (was_empty) buf.first_at = current_time_;
  buf.votes.push_back(vote);
  if (buf.votes.size() >= static_cast<std::size_t>(scenario_.threshold)) {
    flush_vote_buffer(rsu_idx);
    return;
  }
  if (was_empty) {
    schedule(buf.first_at + scenario_.sigma_ms, kPrioNormal, [this, rsu_idx] {
      VoteBuffer& b = vote_buffers_[rsu_idx];
      if (!b.votes.empty() && current_time_ >= b.first_at + scenario_.sigma_ms)
        flush_vote_buffer(rsu_idx);
    });
  }
}

void Engine::flush_vote_buffer(std::size_t rsu_idx) {
  VoteBuffer& buf = vote_buffers_[rsu_idx];
  if (buf.votes.empty()) return;
  count_rsu_tx(rsus_[rsu_idx].site().id);
  note(current_time_, "vote_batch", rsus_[rsu_idx].site().id);
  schedule(current_time_ + scenario_.latency_ms, kPrioNormal,
           [this, batch = std::move(buf.votes)] {
             votes_.insert(votes_.end(), batch.begin(), batch.end());
             if (votes_.size() >= votes_expected_) decide_baseline();
           });
  buf.votes.clear();
  buf.first_at = -1;
}

void Engine::maybe_run_pipeline() {
  if (finished_ || pipeline_started_ || !senders_determined_) return;
  if (packets_received_ + packets_lost_ < packets_expected_) return;
  run_pipeline();
}

void Engine::run_pipeline() {
  if (pipeline_started_ || finished_) return;
  pipeline_started_ = true;
  note(current_time_, "pipeline", edge_.id());
  EdgeServer::StepResult step =
      edge_.process(aggregates_, central_, rsu_layout(scenario_));
  for (const RejectedPacket& r : edge_.last_ingest().rejected)
    note(current_time_, "reject",
         (r.claimed_id.empty() ? std::string("?") : r.claimed_id) + ":" +
             to_string(r.reason));
  handle_step(std::move(step));
}

void Engine::handle_step(EdgeServer::StepResult step) {
  if (step.decision) {
    finish_proposed(*step.decision);
    return;
  }
  start_challenge_round(std::move(*step.challenge));
}

void Engine::start_challenge_round(EdgeServer::ChallengeRequest request) {
  ++challenge_round_;
  report_.upper_path = true;
  searches_.clear();
  searches_expected_ = 0;
  pending_cv1_ = request.cv1.v_id;
  pending_cv2_ = request.cv2.v_id;

  // one transmission carries the challenge packet to every rsu
  count_edge_tx();
  note(current_time_, "challenge_packet", edge_.id());

  // a slow_to_prove cv that claimed congested drops to its claimed speed
  for (const DataPacket* cv : {&request.cv1, &request.cv2}) {
    auto it = vehicle_index_.find(cv->v_id);
    if (it == vehicle_index_.end()) continue;
    VehicleRt& v = vehicles_[it->second];
    if (v.state.behavior.slow_to_prove && cv->event == Event::Congested)
      v.state.velocity_mph100 = cv->vel_mph100;
  }

  const millis_t anchor = current_time_;
  const millis_t arrival = current_time_ + scenario_.latency_ms;
  for (std::size_t r = 0; r < rsus_.size(); ++r) {
    for (int e = 0; e < 2; ++e) {
      const ChallengeEntry& entry = *request.challenge.entries[e];
      if (std::find(entry.expected_rsus.begin(), entry.expected_rsus.end(),
                    rsus_[r].site().id) == entry.expected_rsus.end())
        continue;
      RsuAssignment assignment;
      assignment.cv = entry.cv;
      assignment.testing_word = rng_.uppercase_alnum(entry.cv.size());
      assignment.left_num = static_cast<unsigned>(
          rng_.uniform(1, static_cast<std::uint64_t>(entry.cv.size()) * 8 - 1));
      assignment.time_s = entry.time_s;
      const std::size_t idx = rsus_[r].assignments().size();
      rsus_[r].add_assignment(std::move(assignment));
      ++searches_expected_;
      const millis_t broadcast_at =
          std::max(arrival, anchor + static_cast<millis_t>(entry.time_s) * 1000);
      schedule(broadcast_at, kPrioNormal,
               [this, r, idx] { broadcast_challenge(r, idx); });
    }
  }
}

void Engine::broadcast_challenge(std::size_t rsu_idx, std::size_t assignment_idx) {
  if (finished_) return;
  const Bytes challenge = rsus_[rsu_idx].open_window(assignment_idx, current_time_);
  count_rsu_tx(rsus_[rsu_idx].site().id);
  note(current_time_, "crypto_challenge", rsus_[rsu_idx].site().id);
  schedule(rsus_[rsu_idx].window_close(assignment_idx), kPrioNormal,
           [this, rsu_idx, assignment_idx] { close_window(rsu_idx, assignment_idx); });
  const pos_e7_t rsu_pos = rsus_[rsu_idx].site().location_e7;
  const int round = challenge_round_;
  for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
    if (!in_range(vehicles_[vi].state.position_e7, rsu_pos)) continue;
    if (lossy_drop()) continue;
    schedule(radio_delivery(current_time_), kPrioNormal, [this, vi, challenge, round] {
      VehicleRt& v = vehicles_[vi];
      if (round != challenge_round_) return;  // a newer round superseded this one
      if (v.responded_round == round) return;  // one response per round
      auto response = answer_challenge(v.state, challenge);
      if (!response) return;
      v.responded_round = round;
      count_vehicle_tx(v.state.id);
      note(current_time_, "crypto_response", v.state.id);
      const millis_t at = radio_delivery(current_time_);
      for (std::size_t r = 0; r < rsus_.size(); ++r) {
        if (!in_range(v.state.position_e7, rsus_[r].site().location_e7)) continue;
        if (lossy_drop()) continue;
        schedule(at, kPrioNormal, [this, r, resp = *response] {
          rsus_[r].on_response(resp, current_time_);
        });
      }
    });
  }
}

void Engine::close_window(std::size_t rsu_idx, std::size_t assignment_idx) {
  if (finished_) return;
  const VehicleSearch search = rsus_[rsu_idx].search_result(assignment_idx);
  count_rsu_tx(rsus_[rsu_idx].site().id);
  note(current_time_, "vehicle_search", rsus_[rsu_idx].site().id);
  schedule(current_time_ + scenario_.latency_ms, kPrioNormal,
           [this, search] { deliver_search(search); });
}

void Engine::deliver_search(const VehicleSearch& search) {
  if (finished_) return;
  searches_.push_back(search);
  if (searches_.size() < searches_expected_) return;
  auto merged = [this](const VehicleId& cv) {
    VehicleSearch out{"", cv, SearchResponse::NotReceived};
    for (const VehicleSearch& s : searches_) {
      if (s.cv != cv) continue;
      if (out.rsu_id.empty()) out.rsu_id = s.rsu_id;
      if (s.response == SearchResponse::Received) {
        out.rsu_id = s.rsu_id;
        out.response = SearchResponse::Received;
      }
    }
    return out;
  };
  handle_step(edge_.resume(merged(pending_cv1_), merged(pending_cv2_)));
}

void Engine::decide_baseline() {
  if (finished_) return;
  if (votes_.empty()) {
    report_.verdict = Verdict::Undetermined;
    report_.basis = Basis::Inconclusive;
    finish_report();
    return;
  }
  BaselineVerdict verdict = BaselineVerdict::Conditional;
  bool conditional = false;
  std::set<VehicleId> losers;
  if (scenario_.model == RunModel::Majority) {
    std::vector<Event> events;
    std::map<VehicleId, Event> by_id;
    for (const Vote& v : votes_) {
      events.push_back(v.event);
      by_id[v.id] = v.event;
    }
    verdict = majority_vote(events);
    conditional = verdict == BaselineVerdict::Conditional;
    if (!conditional) {
      const Event winner = verdict == BaselineVerdict::Congested
                               ? Event::Congested
                               : Event::NonCongested;
      for (const auto& [id, event] : by_id)
        if (event != winner) losers.insert(id);
    }
  } else if (scenario_.model == RunModel::Reputation) {
    std::vector<RepVote> rep_votes;
    rep_votes.reserve(votes_.size());
    for (const Vote& v : votes_) rep_votes.push_back(RepVote{v.event, v.reputation});
    const ReputationOutcome outcome = reputation_decide(rep_votes);
    verdict = outcome.verdict;
    conditional = outcome.conditional;
  } else {  // PeerAuth
    std::map<VehicleId, Event> event_of;
    std::map<VehicleId, int> ratings;
    for (const Vote& v : votes_) {
      event_of[v.id] = v.event;
      ++ratings[v.rated];
    }
    std::vector<PeerMessage> messages;
    std::map<VehicleId, Event> counted;
    for (const auto& [id, event] : event_of) {
      messages.push_back(PeerMessage{event, ratings[id]});
      if (ratings[id] >= scenario_.threshold) counted[id] = event;
    }
    verdict = peer_auth_decide(messages, scenario_.threshold);
    conditional = verdict == BaselineVerdict::Conditional;
    if (!conditional) {
      const Event winner = verdict == BaselineVerdict::Congested
                               ? Event::Congested
                               : Event::NonCongested;
      for (const auto& [id, event] : counted)
        if (event != winner) losers.insert(id);
    }
  }

  switch (verdict) {
    case BaselineVerdict::Congested: report_.verdict = Verdict::Congested; break;
    case BaselineVerdict::NonCongested: report_.verdict = Verdict::NonCongested; break;
    case BaselineVerdict::Conditional: report_.verdict = Verdict::Undetermined; break;
  }
  report_.basis = Basis::BaselineVote;
  report_.conditional = conditional;
  report_.reported_malicious = std::move(losers);
  finish_report();
}

void Engine::finish_proposed(const Decision& decision) {
  report_.decision = decision;
  report_.verdict = decision.verdict;
  report_.basis = decision.basis;
  report_.conditional = false;
  report_.reported_malicious = decision.mal_list;
  finish_report();
}

void Engine::finish_report() {
  finished_ = true;
  report_.decision_time_ms = current_time_;
  report_.malicious_set_identified =
      report_.reported_malicious == report_.actual_malicious;
  report_.accuracy =
      detection_accuracy(report_.verdict, scenario_.ground_truth, report_.conditional,
                         report_.malicious_set_identified);
  note(current_time_, "decision", to_string(report_.verdict));
}

SimReport Engine::run() {
  setup();
  report_.run_model = scenario_.model;
  report_.n_vehicles = static_cast<int>(vehicles_.size());
  report_.threshold = scenario_.threshold;
  report_.n_rsu = scenario_.n_rsu;
  report_.malicious_pct = scenario_.malicious_pct;
  report_.ground_truth = scenario_.ground_truth;
  report_.seed = scenario_.seed;

  if (scenario_.model == RunModel::Proposed) broadcast_edge_key();
  schedule(1000, kPrioTick, [this] { tick(1); });

  while (!queue_.empty() && !finished_) {
    const QueuedEvent ev = queue_.top();
    queue_.pop();
    current_time_ = ev.at;
    ev.fn();
  }
  if (!finished_) {
    Decision d;
    finish_proposed(d);  // nothing left to happen; report the stalemate
  }

  switch (scenario_.model) {
    case RunModel::Majority: report_.cost_model = Model::Majority; break;
    case RunModel::Reputation: report_.cost_model = Model::Reputation; break;
    case RunModel::PeerAuth: report_.cost_model = Model::PeerAuth; break;
    case RunModel::Proposed:
      report_.cost_model =
          report_.upper_path ? Model::ProposedUpper : Model::ProposedLower;
      break;
  }
  return report_;
}

}  // namespace

SimReport run(const Scenario& scenario) {
  validate_scenario(scenario, /*allow_spacing_override=*/true);
  Engine engine(scenario);
  return engine.run();
}

std::string csv_header() {
  return "model,n,threshold,n_rsu,malicious_pct,verdict,accuracy,"
         "vehicle_broadcasts,total_transmissions,energy_units,decision_time_s,basis";
}

std::string csv_row(const SimReport& r) {
  std::ostringstream out;
  const CostModel cost{r.n_vehicles, r.threshold, r.n_rsu, 20};
  out << to_string(r.cost_model) << ',' << r.n_vehicles << ',' << r.threshold << ','
      << r.n_rsu << ',';
  if (r.malicious_pct == static_cast<double>(static_cast<long long>(r.malicious_pct)))
    out << static_cast<long long>(r.malicious_pct);
  else
    out << r.malicious_pct;
  out << ',' << to_string(r.verdict) << ',';
  if (r.accuracy == 1.0)
    out << '1';
  else if (r.accuracy == 0.5)
    out << "0.5";
  else
    out << '0';
  out << ',' << r.vehicle_broadcast_total << ','
      << total_transmissions(r.cost_model, cost).ceil_value() << ','
      << energy_units(r.cost_model, cost) << ',' << r.decision_time_ms / 1000 << '.';
  const millis_t frac = r.decision_time_ms % 1000;
  out << static_cast<char>('0' + frac / 100)
      << static_cast<char>('0' + frac / 10 % 10) << static_cast<char>('0' + frac % 10);
  out << ',' << to_string(r.basis);
  return out.str();
}

}  // namespace vanetmon
