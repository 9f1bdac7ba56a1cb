#pragma once

#include <vector>

#include "vanetmon/messages.hpp"

namespace vanetmon {

enum class BaselineVerdict : std::uint8_t { Congested, NonCongested, Conditional };

const char* to_string(BaselineVerdict v);

/// Majority event wins; an exact tie is Conditional. Throws on empty input.
BaselineVerdict majority_vote(const std::vector<Event>& events);

struct RepVote {
  Event event = Event::Congested;
  double reputation = 0.0;  // prior score, >= 0
};

struct ReputationOutcome {
  BaselineVerdict verdict = BaselineVerdict::Conditional;
  // The reputation model decides through prior scores, so its outcome is
  // classified conditional regardless of which side wins the weighted vote.
  bool conditional = true;
};

/// Reputation-weighted vote. When every weight is zero the count majority
/// decides the verdict field.
ReputationOutcome reputation_decide(const std::vector<RepVote>& votes);

struct PeerMessage {
  Event event = Event::Congested;
  int positive_ratings = 0;
};

/// Only messages endorsed by >= threshold positive ratings are counted;
/// the majority of counted messages wins. Colluders endorsing each other
/// (ballot stuffing) therefore keep their messages in the count.
BaselineVerdict peer_auth_decide(const std::vector<PeerMessage>& messages,
                                 int threshold);

}  // namespace vanetmon
