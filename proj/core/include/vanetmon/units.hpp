#pragma once

#include <cstdint>

namespace vanetmon {

// Integer units keep the simulation and the wire bit-exact:
//   positions   int64 in 1e-7 m ("e7"), millimetres on the wire
//   velocities  int32 in mph*100
//   time        int64 milliseconds
// 1 mph = 0.44704 m/s exactly, so one mph*100 moves 44704 e7-units per second.

using pos_e7_t = std::int64_t;
using mph100_t = std::int32_t;
using millis_t = std::int64_t;

constexpr std::int64_t kE7PerMm = 10'000;
constexpr std::int64_t kE7PerMeter = 10'000'000;
constexpr std::int64_t kE7PerSecPerMph100 = 44'704;

constexpr std::int64_t mm_from_e7(pos_e7_t p) { return p / kE7PerMm; }
constexpr pos_e7_t e7_from_mm(std::int64_t mm) { return mm * kE7PerMm; }

constexpr pos_e7_t velocity_step_e7(mph100_t vel_mph100) {
  return static_cast<pos_e7_t>(vel_mph100) * kE7PerSecPerMph100;
}

constexpr pos_e7_t abs_distance(pos_e7_t a, pos_e7_t b) {
  return a > b ? a - b : b - a;
}

}  // namespace vanetmon
