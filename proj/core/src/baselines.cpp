#include "vanetmon/baselines.hpp"

#include <stdexcept>

namespace vanetmon {

const char* to_string(BaselineVerdict v) {
  switch (v) {
    case BaselineVerdict::Congested: return "congested";
    case BaselineVerdict::NonCongested: return "non_congested";
    case BaselineVerdict::Conditional: return "conditional";
  }
  return "?";
}

BaselineVerdict majority_vote(const std::vector<Event>& events) {
  if (events.empty()) throw std::invalid_argument("majority_vote: no events");
  std::size_t congested = 0;
  for (Event e : events)
    if (e == Event::Congested) ++congested;
  const std::size_t other = events.size() - congested;
  if (congested > other) return BaselineVerdict::Congested;
  if (other > congested) return BaselineVerdict::NonCongested;
  return BaselineVerdict::Conditional;
}

ReputationOutcome reputation_decide(const std::vector<RepVote>& votes) {
  if (votes.empty()) throw std::invalid_argument("reputation_decide: no votes");
  double congested_weight = 0.0;
  double other_weight = 0.0;
  std::vector<Event> plain;
  plain.reserve(votes.size());
  for (const RepVote& v : votes) {
    if (v.reputation < 0)
      throw std::invalid_argument("reputation_decide: negative reputation");
    (v.event == Event::Congested ? congested_weight : other_weight) += v.reputation;
    plain.push_back(v.event);
  }
  ReputationOutcome out;
  if (congested_weight > other_weight)
    out.verdict = BaselineVerdict::Congested;
  else if (other_weight > congested_weight)
    out.verdict = BaselineVerdict::NonCongested;
  else
    out.verdict = majority_vote(plain);  // zero or tied weights
  return out;
}

BaselineVerdict peer_auth_decide(const std::vector<PeerMessage>& messages,
                                 int threshold) {
  if (messages.empty()) throw std::invalid_argument("peer_auth_decide: no messages");
  std::vector<Event> counted;
  counted.reserve(messages.size());
  for (const PeerMessage& m : messages)
    if (m.positive_ratings >= threshold) counted.push_back(m.event);
  if (counted.empty()) return BaselineVerdict::Conditional;
  return majority_vote(counted);
}

}  // namespace vanetmon
