#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vanetmon/edge.hpp"
#include "vanetmon/rsu.hpp"
#include "vanetmon/vehicle.hpp"

namespace vanetmon {

/// Malformed scenario text (unknown key, bad number, bad line).
class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Structurally valid text whose values violate a scenario invariant.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunModel : std::uint8_t { Proposed, Majority, Reputation, PeerAuth };

const char* to_string(RunModel m);

struct ScenarioVehicleSpec {
  VehicleId id;
  pos_e7_t position_e7 = 0;
  mph100_t velocity_mph100 = 0;
  BehaviorProfile behavior;
  double reputation = 0.0;
};

/// One ROI run: corridor, RSU placement, vehicle population with behavior
/// profiles, protocol and channel parameters. Vehicles come either from the
/// bulk population fields or from explicit `vehicle` lines.
struct Scenario {
  // road and infrastructure
  pos_e7_t corridor_length_e7 = 8000 * kE7PerMeter;
  pos_e7_t rsu_first_e7 = 500 * kE7PerMeter;
  pos_e7_t rsu_spacing_e7 = 1000 * kE7PerMeter;
  int n_rsu = 5;

  // protocol parameters
  int threshold = 3;
  millis_t sigma_ms = 10'000;
  ScrutinyParams scrutiny;
  unsigned ss_key_bits = 128;
  int t_max_s = 600;

  // channel
  pos_e7_t range_e7 = 5'105'000'000;  // 510.5 m
  millis_t latency_ms = 100;
  bool channel_queuing = false;
  double loss_rate = 0.0;

  // run selection
  std::uint64_t seed = 1;
  RunModel model = RunModel::Proposed;
  Event ground_truth = Event::Congested;

  // bulk population
  int n_vehicles = 0;
  std::string id_prefix = "CAR";
  mph100_t honest_vel_mph100 = 2000;
  pos_e7_t spawn_start_e7 = 550 * kE7PerMeter;
  pos_e7_t spawn_gap_e7 = 2 * kE7PerMeter;
  double malicious_pct = 0.0;
  BehaviorProfile::Kind malicious_kind = BehaviorProfile::Kind::EventSpoof;
  mph100_t malicious_vel_mph100 = -1;  // -1: same as honest
  mph100_t velocity_delta_mph100 = 0;
  std::int64_t gps_delta_mm = 0;
  bool slow_to_prove = false;
  pos_e7_t poc_distance_e7 = 0;  // upstream displacement of malicious vehicles
  double honest_reputation = 0.0;
  double malicious_reputation = 10.0;

  std::vector<ScenarioVehicleSpec> explicit_vehicles;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_text(const Scenario& s);

/// Throws ScenarioError when an invariant is broken (rsu spacing outside
/// [1000, 2500] m unless overridden, positions outside the corridor, ...).
void validate_scenario(const Scenario& s, bool allow_spacing_override = false);

std::vector<RsuSite> rsu_layout(const Scenario& s);

/// Expands bulk fields plus explicit lines into the run population. The
/// malicious subset is drawn with the scenario seed.
std::vector<ScenarioVehicleSpec> build_population(const Scenario& s);

}  // namespace vanetmon
