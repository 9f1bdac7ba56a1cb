#pragma once

#include <string>
#include <vector>

#include "vanetmon/engine.hpp"

namespace vanetmon {

enum class SweepField : std::uint8_t {
  MaliciousPct,
  PocDistance,
  RsuSpacing,
  Threshold,
  NVehicles,
};

const char* to_string(SweepField f);

struct SweepAxis {
  SweepField field = SweepField::MaliciousPct;
  // raw values in file units: percent, metres, metres, count, count
  std::vector<std::int64_t> values;
};

/// "malicious_pct=0..90:10" or "poc_distance=10,20,40".
SweepAxis parse_sweep_axis(const std::string& text);

Scenario apply_axis(Scenario base, SweepField field, std::int64_t value);

/// Cross product of axis values, models and seed indices. Each run gets an
/// independent seed derived from the base scenario seed, runs on a worker
/// pool, and lands in deterministic (value, model, seed) order.
std::vector<SimReport> run_sweep(const Scenario& base, const SweepAxis& axis,
                                 const std::vector<RunModel>& models,
                                 int seed_count, unsigned workers = 0);

}  // namespace vanetmon
