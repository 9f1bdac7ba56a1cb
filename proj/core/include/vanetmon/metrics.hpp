#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vanetmon/messages.hpp"

namespace vanetmon {

enum class Verdict : std::uint8_t { Congested, NonCongested, Undetermined };

const char* to_string(Verdict v);
Verdict verdict_of(Event e);

enum class Model : std::uint8_t {
  Majority,
  Reputation,
  PeerAuth,
  ProposedLower,
  ProposedUpper,
};

const char* to_string(Model m);

struct CostModel {
  int n = 0;
  int threshold = 0;
  int n_rsu = 0;
  int energy_unit_mw = 20;  // per transmission
};

/// Exact rational so the fractional transmission counts stay exact; the
/// display rule is ceiling.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::int64_t ceil_value() const { return (num + den - 1) / den; }
  bool operator==(const Rational&) const = default;
};

/// Total transmissions across vehicles, RSUs and the edge:
///   majority / reputation: n + n/threshold
///   peer authentication:   n * (1 + threshold)
///   proposed lower:        2n + n/threshold
///   proposed upper:        2n + n/threshold + 2*n_rsu + n + 1
Rational total_transmissions(Model model, const CostModel& cost);

/// Vehicle-originated broadcasts only: n, n, n*threshold, 2n, 3n.
std::int64_t vehicle_broadcasts(Model model, int n, int threshold);

/// Energy in transmission-power units (x energy_unit_mw), ceiling display.
std::int64_t energy_units(Model model, const CostModel& cost);

/// 1 when the verdict matches ground truth and the malicious set was
/// identified, 0.5 for a conditional outcome, 0 otherwise.
double detection_accuracy(Verdict verdict, Event ground_truth, bool conditional_flag,
                          bool malicious_set_identified = true);

/// Fraction of observations at or under the limit. Throws on empty input.
double detection_probability(const std::vector<double>& times_s, double limit_s);

}  // namespace vanetmon
