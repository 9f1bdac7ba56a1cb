#include "vanetmon/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace vanetmon {

namespace {

Rational make_rational(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Congested: return "congested";
    case Verdict::NonCongested: return "non_congested";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

Verdict verdict_of(Event e) {
  return e == Event::Congested ? Verdict::Congested : Verdict::NonCongested;
}

const char* to_string(Model m) {
  switch (m) {
    case Model::Majority: return "majority";
    case Model::Reputation: return "reputation";
    case Model::PeerAuth: return "peer_auth";
    case Model::ProposedLower: return "proposed_lower";
    case Model::ProposedUpper: return "proposed_upper";
  }
  return "?";
}

Rational total_transmissions(Model model, const CostModel& cost) {
  if (cost.n <= 0 || cost.threshold <= 0 || cost.n_rsu <= 0)
    throw std::invalid_argument("total_transmissions: cost fields must be positive");
  const std::int64_t n = cost.n;
  const std::int64_t t = cost.threshold;
  const std::int64_t r = cost.n_rsu;
  switch (model) {
    case Model::Majority:
    case Model::Reputation:
      return make_rational(n * t + n, t);  // n + n/t
    case Model::PeerAuth:
      return Rational{n * (1 + t), 1};
    case Model::ProposedLower:
      return make_rational(2 * n * t + n, t);  // 2n + n/t
    case Model::ProposedUpper:
      return make_rational((2 * n + 2 * r + n + 1) * t + n, t);
  }
  throw std::logic_error("total_transmissions: bad model");
}

std::int64_t vehicle_broadcasts(Model model, int n, int threshold) {
  if (n <= 0 || threshold <= 0)
    throw std::invalid_argument("vehicle_broadcasts: n and threshold must be positive");
  switch (model) {
    case Model::Majority:
    case Model::Reputation:
      return n;
    case Model::PeerAuth:
      return static_cast<std::int64_t>(n) * threshold;
    case Model::ProposedLower:
      return 2LL * n;
    case Model::ProposedUpper:
      return 3LL * n;
  }
  throw std::logic_error("vehicle_broadcasts: bad model");
}

std::int64_t energy_units(Model model, const CostModel& cost) {
  return total_transmissions(model, cost).ceil_value();
}

double detection_accuracy(Verdict verdict, Event ground_truth, bool conditional_flag,
                          bool malicious_set_identified) {
  if (conditional_flag) return 0.5;
  if (verdict == verdict_of(ground_truth) && malicious_set_identified) return 1.0;
  return 0.0;
}

double detection_probability(const std::vector<double>& times_s, double limit_s) {
  if (times_s.empty())
    throw std::invalid_argument("detection_probability: no observations");
  std::size_t hit = 0;
  for (double t : times_s)
    if (t <= limit_s) ++hit;
  return static_cast<double>(hit) / static_cast<double>(times_s.size());
}

}  // namespace vanetmon
