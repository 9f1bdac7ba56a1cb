#include "vanetmon/edge.hpp"

#include <algorithm>
#include <stdexcept>

#include "vanetmon/symcipher.hpp"

namespace vanetmon {

const char* to_string(Basis b) {
  switch (b) {
    case Basis::Unanimous: return "unanimous";
    case Basis::InitialScrutiny: return "initial_scrutiny";
    case Basis::ChallengeResponse: return "challenge_response";
    case Basis::Inconclusive: return "inconclusive";
    case Basis::BaselineVote: return "baseline_vote";
  }
  return "?";
}

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::SignatureMismatch: return "signature_mismatch";
    case RejectReason::GpsOutOfRange: return "gps_out_of_range";
    case RejectReason::MalformedCrypto: return "malformed_crypto";
    case RejectReason::InvalidNeighborRef: return "invalid_neighbor_ref";
  }
  return "?";
}

IngestResult ingest(const std::vector<AggregatePacket>& aggregates,
                    const CentralServer& registry, const SsKeyPair& edge_keys,
                    pos_e7_t range_e7) {
  IngestResult out;
  for (const AggregatePacket& agg : aggregates) {
    for (const EncryptedDataPacket& enc : agg.packets) {
      DataPacket packet;
      try {
        const Nat key_num = ss_decrypt(enc.tau, edge_keys);
        const SymmetricKey key = decode_key(key_num);
        auto body = sym_decrypt(enc.body, key);
        if (!body) {
          out.rejected.push_back({"", RejectReason::MalformedCrypto, agg.rsu_id});
          continue;
        }
        packet = deserialize_data_packet(*body);
      } catch (const CorruptEncodingError&) {
        out.rejected.push_back({"", RejectReason::MalformedCrypto, agg.rsu_id});
        continue;
      } catch (const DecodeError&) {
        out.rejected.push_back({"", RejectReason::MalformedCrypto, agg.rsu_id});
        continue;
      }

      EgSignature sig;
      const EgPublicKey* pub = registry.find_public(packet.v_id);
      const bool sig_ok = pub != nullptr && signature_from_bytes(packet.ds, sig) &&
                          eg_verify(packet.v_id, sig, *pub, registry.params());
      if (!sig_ok) {
        out.rejected.push_back(
            {packet.v_id, RejectReason::SignatureMismatch, agg.rsu_id});
        continue;
      }

      const pos_e7_t gps = e7_from_mm(packet.gps_mm);
      const pos_e7_t rsu = e7_from_mm(agg.location_mm);
      if (abs_distance(gps, rsu) > range_e7) {
        out.rejected.push_back({packet.v_id, RejectReason::GpsOutOfRange, agg.rsu_id});
        continue;
      }

      out.accepted.push_back({std::move(packet), agg.rsu_id, agg.location_mm});
    }
  }
  return out;
}

void DecisionSimilarityGraph::add_vertex(const VehicleId& id, Event event,
                                         const DataPacket& packet,
                                         const std::string& rsu_id) {
  vertices_.emplace(id, VertexInfo{event, packet, rsu_id});
  adjacency_.try_emplace(id);
}

void DecisionSimilarityGraph::add_edge(const VehicleId& a, const VehicleId& b) {
  if (a == b) return;  // no self-loops
  if (!vertices_.contains(a) || !vertices_.contains(b))
    throw std::invalid_argument("add_edge: unknown vertex");
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

bool DecisionSimilarityGraph::has_vertex(const VehicleId& id) const {
  return vertices_.contains(id);
}

bool DecisionSimilarityGraph::has_edge(const VehicleId& a, const VehicleId& b) const {
  auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.contains(b);
}

Event DecisionSimilarityGraph::event_of(const VehicleId& id) const {
  return vertices_.at(id).event;
}

const DataPacket& DecisionSimilarityGraph::packet_of(const VehicleId& id) const {
  return vertices_.at(id).packet;
}

const std::string& DecisionSimilarityGraph::rsu_of(const VehicleId& id) const {
  return vertices_.at(id).rsu_id;
}

std::vector<VehicleId> DecisionSimilarityGraph::vertices() const {
  std::vector<VehicleId> out;
  out.reserve(vertices_.size());
  for (const auto& [id, info] : vertices_) out.push_back(id);
  return out;
}

std::vector<VehicleId> DecisionSimilarityGraph::neighbors(const VehicleId& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::size_t DecisionSimilarityGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [id, adj] : adjacency_) twice += adj.size();
  return twice / 2;
}

DecisionSimilarityGraph build_dsg(const std::vector<AcceptedPacket>& accepted,
                                  const SsKeyPair& edge_keys,
                                  const CentralServer& registry,
                                  std::vector<RejectedPacket>* anomalies) {
  DecisionSimilarityGraph dsg;
  for (const AcceptedPacket& a : accepted) {
    if (dsg.has_vertex(a.packet.v_id)) continue;
    dsg.add_vertex(a.packet.v_id, a.packet.event, a.packet, a.rsu_id);
  }
  for (const AcceptedPacket& a : accepted) {
    for (const Nat& enc : a.packet.enc_ids) {
      VehicleId neighbor;
      try {
        neighbor = decode_id(ss_decrypt(enc, edge_keys));
      } catch (const CorruptEncodingError&) {
        if (anomalies)
          anomalies->push_back(
              {a.packet.v_id, RejectReason::InvalidNeighborRef, a.rsu_id});
        continue;
      }
      if (!registry.is_registered(neighbor)) {
        if (anomalies)
          anomalies->push_back(
              {a.packet.v_id, RejectReason::InvalidNeighborRef, a.rsu_id});
        continue;
      }
      if (neighbor == a.packet.v_id) continue;
      if (dsg.has_vertex(neighbor)) dsg.add_edge(a.packet.v_id, neighbor);
      // a registered neighbor that did not report dangles: no vertex, no edge
    }
  }
  return dsg;
}

std::optional<std::pair<VehicleId, VehicleId>> detect_poc(
    const DecisionSimilarityGraph& dsg) {
  const std::vector<VehicleId> ids = dsg.vertices();
  // first pass: adjacent pairs
  for (const VehicleId& vi : ids) {
    for (const VehicleId& vj : dsg.neighbors(vi)) {
      if (dsg.event_of(vi) != dsg.event_of(vj)) return std::make_pair(vi, vj);
    }
  }
  // second pass: any two reporters under the same rsu
  std::map<std::string, std::vector<VehicleId>> by_rsu;
  for (const VehicleId& id : ids) by_rsu[dsg.rsu_of(id)].push_back(id);
  for (const auto& [rsu, members] : by_rsu) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (dsg.event_of(members[i]) != dsg.event_of(members[j]))
          return std::make_pair(members[i], members[j]);
      }
    }
  }
  return std::nullopt;
}

std::pair<std::set<VehicleId>, std::set<VehicleId>> filter_dsg(
    const DecisionSimilarityGraph& dsg, const VehicleId& malicious_cv) {
  if (!dsg.has_vertex(malicious_cv))
    throw std::invalid_argument("filter_dsg: malicious cv not in graph");
  const Event mal_event = dsg.event_of(malicious_cv);

  std::set<VehicleId> domain;
  std::vector<VehicleId> stack{malicious_cv};
  domain.insert(malicious_cv);
  while (!stack.empty()) {
    const VehicleId current = stack.back();
    stack.pop_back();
    for (const VehicleId& next : dsg.neighbors(current)) {
      if (domain.insert(next).second) stack.push_back(next);
    }
  }
  const std::string& mal_rsu = dsg.rsu_of(malicious_cv);
  for (const VehicleId& id : dsg.vertices())
    if (dsg.rsu_of(id) == mal_rsu) domain.insert(id);

  std::set<VehicleId> mal;
  std::set<VehicleId> nonmal;
  for (const VehicleId& id : domain)
    (dsg.event_of(id) == mal_event ? mal : nonmal).insert(id);
  return {std::move(mal), std::move(nonmal)};
}

namespace {

bool congested_rule_fires(const DataPacket& p, const ScrutinyParams& params) {
  return p.event == Event::Congested &&
         p.vel_mph100 > params.vel_congested + params.epsilon;
}

bool ncongested_rule_fires(const DataPacket& p, const ScrutinyParams& params) {
  return p.event == Event::NonCongested &&
         p.vel_mph100 < params.vel_ncongested - params.epsilon;
}

/// Labels every graph vertex: filter from the malicious cv, then the
/// remaining reporters by the same event rule.
Decision partitioned_decision(const DecisionSimilarityGraph& dsg,
                              const VehicleId& malicious_cv, Verdict verdict,
                              Basis basis) {
  Decision d;
  d.verdict = verdict;
  d.basis = basis;
  auto [mal, nonmal] = filter_dsg(dsg, malicious_cv);
  d.mal_list = std::move(mal);
  d.nonmal_list = std::move(nonmal);
  const Event mal_event = dsg.event_of(malicious_cv);
  for (const VehicleId& id : dsg.vertices()) {
    if (d.mal_list.contains(id) || d.nonmal_list.contains(id)) continue;
    (dsg.event_of(id) == mal_event ? d.mal_list : d.nonmal_list).insert(id);
  }
  return d;
}

}  // namespace

std::optional<Decision> initial_scrutiny(const DataPacket& cv1, const DataPacket& cv2,
                                         const ScrutinyParams& params,
                                         const DecisionSimilarityGraph& dsg) {
  const bool bad1 = congested_rule_fires(cv1, params) || ncongested_rule_fires(cv1, params);
  const bool bad2 = congested_rule_fires(cv2, params) || ncongested_rule_fires(cv2, params);
  if (!bad1 && !bad2) return std::nullopt;  // challenge phase decides
  if (bad1 && bad2) {
    Decision d;
    d.verdict = Verdict::Undetermined;
    d.basis = Basis::InitialScrutiny;
    d.mal_list = {cv1.v_id, cv2.v_id};
    return d;
  }
  const DataPacket& malicious = bad1 ? cv1 : cv2;
  const DataPacket& clean = bad1 ? cv2 : cv1;
  return partitioned_decision(dsg, malicious.v_id, verdict_of(clean.event),
                              Basis::InitialScrutiny);
}

ChallengePacket GeneratedChallenge::packet() const {
  if (!both_challengeable())
    throw std::logic_error("GeneratedChallenge: missing entry");
  return ChallengePacket{{*entries[0], *entries[1]}};
}

GeneratedChallenge generate_challenge(const DataPacket& cv1, const DataPacket& cv2,
                                      const std::vector<RsuSite>& layout,
                                      int t_max_s, pos_e7_t range_e7) {
  std::map<std::string, pos_e7_t> site_at;
  for (const RsuSite& site : layout) site_at[site.id] = site.location_e7;

  GeneratedChallenge out;
  const DataPacket* cvs[2] = {&cv1, &cv2};
  for (int i = 0; i < 2; ++i) {
    const DataPacket& cv = *cvs[i];
    const pos_e7_t gps = e7_from_mm(cv.gps_mm);
    const pos_e7_t step = velocity_step_e7(cv.vel_mph100);
    for (int t = 0; t <= t_max_s && !out.entries[i]; ++t) {
      const pos_e7_t expected = gps + step * t;
      for (std::size_t traj = 0; traj < cv.trajectory.size(); ++traj) {
        auto it = site_at.find(cv.trajectory[traj]);
        if (it == site_at.end()) continue;
        if (abs_distance(expected, it->second) > range_e7) continue;
        ChallengeEntry entry;
        entry.cv = cv.v_id;
        entry.time_s = t;
        entry.expected_rsus.push_back(cv.trajectory[traj]);
        if (cv.event == Event::NonCongested) {
          // an overspeeding cv may pass early; every later rsu challenges too
          for (std::size_t later = traj + 1; later < cv.trajectory.size(); ++later)
            if (site_at.contains(cv.trajectory[later]))
              entry.expected_rsus.push_back(cv.trajectory[later]);
        }
        out.entries[i] = std::move(entry);
        break;
      }
    }
  }
  return out;
}

Decision decide(const VehicleSearch& search1, const VehicleSearch& search2,
                const DataPacket& cv1, const DataPacket& cv2,
                const DecisionSimilarityGraph& dsg) {
  const bool r1 = search1.response == SearchResponse::Received;
  const bool r2 = search2.response == SearchResponse::Received;
  if (!r1 && !r2) {
    Decision d;
    d.verdict = Verdict::Undetermined;
    d.basis = Basis::Inconclusive;
    return d;
  }
  if (r1 != r2) {
    const DataPacket& responder = r1 ? cv1 : cv2;
    const DataPacket& silent = r1 ? cv2 : cv1;
    return partitioned_decision(dsg, silent.v_id, verdict_of(responder.event),
                                Basis::ChallengeResponse);
  }
  // both present: the congested reporter slowed down on purpose
  const DataPacket* malicious = nullptr;
  if (cv1.event != cv2.event) {
    malicious = cv1.event == Event::Congested ? &cv1 : &cv2;
  } else {
    malicious = cv1.vel_mph100 != cv2.vel_mph100
                    ? (cv1.vel_mph100 < cv2.vel_mph100 ? &cv1 : &cv2)
                    : (cv1.v_id < cv2.v_id ? &cv1 : &cv2);
  }
  return partitioned_decision(dsg, malicious->v_id, Verdict::NonCongested,
                              Basis::ChallengeResponse);
}

Decision unanimous_decision(const std::vector<AcceptedPacket>& accepted) {
  Decision d;
  if (accepted.empty()) {
    d.verdict = Verdict::Undetermined;
    d.basis = Basis::Inconclusive;
    return d;
  }
  const Event common = accepted.front().packet.event;
  for (const AcceptedPacket& a : accepted) {
    if (a.packet.event != common) {
      // disjoint conflicting groups with no shared rsu; the heuristic has no
      // pair to challenge
      d.verdict = Verdict::Undetermined;
      d.basis = Basis::Inconclusive;
      return d;
    }
  }
  d.verdict = verdict_of(common);
  d.basis = Basis::Unanimous;
  for (const AcceptedPacket& a : accepted) d.nonmal_list.insert(a.packet.v_id);
  return d;
}

// --- EdgeServer ---------------------------------------------------------------

EdgeServer::EdgeServer(std::string id, SsKeyPair keys, ScrutinyParams params,
                       pos_e7_t range_e7, int t_max_s)
    : id_(std::move(id)), keys_(std::move(keys)), params_(params),
      range_e7_(range_e7), t_max_s_(t_max_s) {}

namespace {

DecisionSimilarityGraph induced_without(const DecisionSimilarityGraph& dsg,
                                        const std::set<VehicleId>& excluded) {
  DecisionSimilarityGraph out;
  for (const VehicleId& id : dsg.vertices())
    if (!excluded.contains(id))
      out.add_vertex(id, dsg.event_of(id), dsg.packet_of(id), dsg.rsu_of(id));
  for (const VehicleId& id : dsg.vertices()) {
    if (excluded.contains(id)) continue;
    for (const VehicleId& other : dsg.neighbors(id))
      if (!excluded.contains(other)) out.add_edge(id, other);
  }
  return out;
}

}  // namespace

EdgeServer::StepResult EdgeServer::process(
    const std::vector<AggregatePacket>& aggregates, const CentralServer& registry,
    const std::vector<RsuSite>& layout) {
  ingest_result_ = ingest(aggregates, registry, keys_, range_e7_);
  dsg_ = build_dsg(ingest_result_.accepted, keys_, registry,
                   &ingest_result_.rejected);
  layout_ = layout;
  suspects_.clear();
  excluded_.clear();
  base_mal_.clear();
  for (const RejectedPacket& r : ingest_result_.rejected) {
    if (r.claimed_id.empty()) continue;
    if (r.reason == RejectReason::SignatureMismatch ||
        r.reason == RejectReason::GpsOutOfRange)
      base_mal_.insert(r.claimed_id);
  }
  pending_pair_.reset();
  return iterate();
}

EdgeServer::StepResult EdgeServer::iterate() {
  while (true) {
    const DecisionSimilarityGraph active = induced_without(dsg_, excluded_);
    if (active.vertices().empty()) {
      Decision d;
      d.verdict = Verdict::Undetermined;
      d.basis = Basis::Inconclusive;
      return StepResult{finalize(std::move(d)), std::nullopt};
    }

    const auto poc = detect_poc(active);
    if (!poc) {
      std::vector<AcceptedPacket> remaining;
      for (const AcceptedPacket& a : ingest_result_.accepted)
        if (!excluded_.contains(a.packet.v_id)) remaining.push_back(a);
      return StepResult{finalize(unanimous_decision(remaining)), std::nullopt};
    }

    const DataPacket& cv1 = active.packet_of(poc->first);
    const DataPacket& cv2 = active.packet_of(poc->second);

    if (auto scrutiny = initial_scrutiny(cv1, cv2, params_, active)) {
      if (scrutiny->verdict == Verdict::Undetermined) {
        // both rules fired; set the pair aside and retry on the rest
        suspects_.insert(cv1.v_id);
        suspects_.insert(cv2.v_id);
        excluded_.insert(cv1.v_id);
        excluded_.insert(cv2.v_id);
        continue;
      }
      return StepResult{finalize(std::move(*scrutiny)), std::nullopt};
    }

    GeneratedChallenge challenge =
        generate_challenge(cv1, cv2, layout_, t_max_s_, range_e7_);
    if (!challenge.both_challengeable()) {
      // an unchallengeable cv cannot prove presence; set the pair members we
      // cannot test aside and retry
      for (int i = 0; i < 2; ++i) {
        if (challenge.entries[i]) continue;
        const VehicleId& id = i == 0 ? cv1.v_id : cv2.v_id;
        suspects_.insert(id);
        excluded_.insert(id);
      }
      continue;
    }
    pending_pair_ = std::make_pair(cv1, cv2);
    return StepResult{std::nullopt,
                      ChallengeRequest{std::move(challenge), cv1, cv2}};
  }
}

EdgeServer::StepResult EdgeServer::resume(const VehicleSearch& search1,
                                          const VehicleSearch& search2) {
  if (!pending_pair_) throw std::logic_error("resume: no pending challenge");
  const DataPacket cv1 = pending_pair_->first;
  const DataPacket cv2 = pending_pair_->second;
  pending_pair_.reset();
  const DecisionSimilarityGraph active = induced_without(dsg_, excluded_);
  Decision d = decide(search1, search2, cv1, cv2, active);
  if (d.verdict == Verdict::Undetermined) {
    suspects_.insert(cv1.v_id);
    suspects_.insert(cv2.v_id);
    excluded_.insert(cv1.v_id);
    excluded_.insert(cv2.v_id);
    return iterate();
  }
  return StepResult{finalize(std::move(d)), std::nullopt};
}

Decision EdgeServer::finalize(Decision d) {
  // unresolved suspects count against the malicious side
  for (const VehicleId& id : suspects_) {
    d.nonmal_list.erase(id);
    d.mal_list.insert(id);
  }
  // ingest rejects, unless the id also produced an accepted clean packet
  for (const VehicleId& id : base_mal_) {
    if (d.nonmal_list.contains(id)) continue;
    d.mal_list.insert(id);
  }
  return d;
}

}  // namespace vanetmon
