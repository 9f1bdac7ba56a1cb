#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vanetmon/scenario.hpp"

namespace vanetmon {

struct TimelineEvent {
  millis_t at_ms = 0;
  std::string kind;
  std::string detail;
};

/// Everything one run produces: the decision, per-entity broadcast counters,
/// the event timeline and the virtual time the decision landed at.
struct SimReport {
  // outcome
  Verdict verdict = Verdict::Undetermined;
  Basis basis = Basis::Inconclusive;
  bool conditional = false;
  bool upper_path = false;
  Decision decision;  // proposed-model detail (lists empty for baselines)
  std::set<VehicleId> reported_malicious;
  std::set<VehicleId> actual_malicious;
  bool malicious_set_identified = false;
  double accuracy = 0.0;

  // counters (every transmission increments its sender exactly once)
  std::map<std::string, std::int64_t> broadcasts_by_entity;
  std::int64_t vehicle_broadcast_total = 0;
  std::int64_t rsu_broadcast_total = 0;
  std::int64_t edge_broadcast_total = 0;

  millis_t decision_time_ms = 0;
  std::vector<TimelineEvent> timeline;

  // run metadata
  RunModel run_model = RunModel::Proposed;
  Model cost_model = Model::ProposedLower;
  int n_vehicles = 0;
  int threshold = 0;
  int n_rsu = 0;
  double malicious_pct = 0.0;
  Event ground_truth = Event::Congested;
  std::uint64_t seed = 0;
};

/// Executes one scenario end to end. Deterministic: equal scenario and seed
/// give bit-identical reports.
SimReport run(const Scenario& scenario);

std::string csv_header();
std::string csv_row(const SimReport& report);

}  // namespace vanetmon
