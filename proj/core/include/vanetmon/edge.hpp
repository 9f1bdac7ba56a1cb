#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "vanetmon/central.hpp"
#include "vanetmon/crypto.hpp"
#include "vanetmon/messages.hpp"
#include "vanetmon/metrics.hpp"
#include "vanetmon/rsu.hpp"
#include "vanetmon/units.hpp"

namespace vanetmon {

struct ScrutinyParams {
  mph100_t vel_congested = 3500;
  mph100_t vel_ncongested = 4000;
  mph100_t epsilon = 500;
};

enum class Basis : std::uint8_t {
  Unanimous,
  InitialScrutiny,
  ChallengeResponse,
  Inconclusive,
  BaselineVote,
};

const char* to_string(Basis b);

struct Decision {
  Verdict verdict = Verdict::Undetermined;
  std::set<VehicleId> mal_list;
  std::set<VehicleId> nonmal_list;
  Basis basis = Basis::Inconclusive;
};

enum class RejectReason : std::uint8_t {
  SignatureMismatch,
  GpsOutOfRange,
  MalformedCrypto,
  InvalidNeighborRef,
};

const char* to_string(RejectReason r);

struct RejectedPacket {
  VehicleId claimed_id;  // empty when the identity never decrypted
  RejectReason reason = RejectReason::MalformedCrypto;
  std::string rsu_id;
};

struct AcceptedPacket {
  DataPacket packet;
  std::string rsu_id;
  std::int64_t rsu_location_mm = 0;
};

struct IngestResult {
  std::vector<AcceptedPacket> accepted;
  std::vector<RejectedPacket> rejected;
};

/// Decrypt, authenticate and range-check every packet in the aggregates.
/// Signature failures and out-of-range GPS claims are rejected; rejected ids
/// feed the malicious list downstream.
IngestResult ingest(const std::vector<AggregatePacket>& aggregates,
                    const CentralServer& registry, const SsKeyPair& edge_keys,
                    pos_e7_t range_e7);

/// Reporting vehicles as vertices; an undirected edge wherever one packet's
/// decrypted enc_id names another reporter.
class DecisionSimilarityGraph {
 public:
  void add_vertex(const VehicleId& id, Event event, const DataPacket& packet,
                  const std::string& rsu_id);
  void add_edge(const VehicleId& a, const VehicleId& b);

  bool has_vertex(const VehicleId& id) const;
  bool has_edge(const VehicleId& a, const VehicleId& b) const;
  Event event_of(const VehicleId& id) const;
  const DataPacket& packet_of(const VehicleId& id) const;
  const std::string& rsu_of(const VehicleId& id) const;

  /// Sorted vertex ids (deterministic iteration order).
  std::vector<VehicleId> vertices() const;
  std::vector<VehicleId> neighbors(const VehicleId& id) const;
  std::size_t edge_count() const;

 private:
  struct VertexInfo {
    Event event;
    DataPacket packet;
    std::string rsu_id;
  };
  std::map<VehicleId, VertexInfo> vertices_;
  std::map<VehicleId, std::set<VehicleId>> adjacency_;
};

/// Builds the graph from accepted packets. Claims naming registered but
/// non-reporting vehicles dangle (no vertex); claims decoding to no
/// registered id are recorded against the claimer in `anomalies`.
DecisionSimilarityGraph build_dsg(const std::vector<AcceptedPacket>& accepted,
                                  const SsKeyPair& edge_keys,
                                  const CentralServer& registry,
                                  std::vector<RejectedPacket>* anomalies = nullptr);

/// Point of conflict: first pass scans neighbor pairs for differing events,
/// second pass any two reporters under the same RSU. Ties break toward the
/// lexicographically lowest pair.
std::optional<std::pair<VehicleId, VehicleId>> detect_poc(
    const DecisionSimilarityGraph& dsg);

/// Velocity-consistency partition from the identified malicious vehicle:
/// every reporter reachable in the DSG or under the same RSU joins mal_list
/// when its event matches the malicious event, nonmal_list otherwise.
std::pair<std::set<VehicleId>, std::set<VehicleId>> filter_dsg(
    const DecisionSimilarityGraph& dsg, const VehicleId& malicious_cv);

/// Velocity consistency check on a conflicting pair. Returns nothing when
/// both reporters are self-consistent (the challenge phase takes over). When
/// both rules fire the decision is Undetermined with both in mal_list.
std::optional<Decision> initial_scrutiny(const DataPacket& cv1, const DataPacket& cv2,
                                         const ScrutinyParams& params,
                                         const DecisionSimilarityGraph& dsg);

struct GeneratedChallenge {
  std::optional<ChallengeEntry> entries[2];

  bool both_challengeable() const {
    return entries[0].has_value() && entries[1].has_value();
  }
  ChallengePacket packet() const;  // requires both entries
};

/// Walks expected positions forward in whole seconds from each CV's claimed
/// gps and velocity; the first trajectory RSU whose range contains the
/// expected position sets time_i. A non-congested CV is challenged by that
/// RSU and every later one on its trajectory (overspeed handling). A CV with
/// no reachable RSU within t_max stays unchallengeable.
GeneratedChallenge generate_challenge(const DataPacket& cv1, const DataPacket& cv2,
                                      const std::vector<RsuSite>& layout,
                                      int t_max_s, pos_e7_t range_e7);

/// Post-challenge decision: a lone responder wins the verdict, both
/// responding means the congested reporter slowed down on purpose, and
/// silence from both stays Undetermined for the pipeline to retry.
Decision decide(const VehicleSearch& search1, const VehicleSearch& search2,
                const DataPacket& cv1, const DataPacket& cv2,
                const DecisionSimilarityGraph& dsg);

/// All reporters agree (no POC): their shared event is the verdict.
Decision unanimous_decision(const std::vector<AcceptedPacket>& accepted);

// --- Pipeline state machine --------------------------------------------------

/// Drives one ROI round: ingest, then detect/scrutinize/challenge until a
/// decision lands. Challenge rounds are asynchronous; the engine runs them
/// and feeds the search results back through `resume`.
class EdgeServer {
 public:
  struct ChallengeRequest {
    GeneratedChallenge challenge;
    DataPacket cv1;
    DataPacket cv2;
  };

  struct StepResult {
    std::optional<Decision> decision;
    std::optional<ChallengeRequest> challenge;
  };

  EdgeServer(std::string id, SsKeyPair keys, ScrutinyParams params,
             pos_e7_t range_e7, int t_max_s);

  const std::string& id() const { return id_; }
  const SsKeyPair& keys() const { return keys_; }
  const Nat& public_key() const { return keys_.n_public; }

  StepResult process(const std::vector<AggregatePacket>& aggregates,
                     const CentralServer& registry,
                     const std::vector<RsuSite>& layout);

  StepResult resume(const VehicleSearch& search1, const VehicleSearch& search2);

  const IngestResult& last_ingest() const { return ingest_result_; }
  const DecisionSimilarityGraph& dsg() const { return dsg_; }

 private:
  StepResult iterate();
  Decision finalize(Decision d);

  std::string id_;
  SsKeyPair keys_;
  ScrutinyParams params_;
  pos_e7_t range_e7_;
  int t_max_s_;

  IngestResult ingest_result_;
  DecisionSimilarityGraph dsg_;
  std::vector<RsuSite> layout_;
  std::set<VehicleId> suspects_;        // unresolved CVs, excluded from retries
  std::set<VehicleId> base_mal_;        // rejected ids from ingest
  std::set<VehicleId> excluded_;        // vertices removed from retry rounds
  std::optional<std::pair<DataPacket, DataPacket>> pending_pair_;
};

}  // namespace vanetmon
