#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vanetmon/edge.hpp"
#include "vanetmon/random.hpp"

namespace vanetmon {
namespace selftest {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Reference implementations, deliberately written along different paths than
// the library code they cross-check.

/// Square-and-multiply modular exponentiation (bit loop, no mpz_powm).
Nat modexp_reference(const Nat& base, const Nat& exp, const Nat& mod);

/// Exhaustive pair scan: lexicographically first adjacent conflicting pair,
/// then the first same-rsu conflicting pair.
std::optional<std::pair<VehicleId, VehicleId>> detect_poc_reference(
    const DecisionSimilarityGraph& dsg);

/// Event partition over {reachable from seed} union {same rsu as seed}.
std::pair<std::set<VehicleId>, std::set<VehicleId>> filter_reference(
    const DecisionSimilarityGraph& dsg, const VehicleId& seed);

/// Random graph over <= max_vertices reporters with random events, rsu
/// assignments and edges.
DecisionSimilarityGraph random_dsg(Rng& rng, int max_vertices = 12);

/// A generated collusion instance: colluders share one spoofed event and
/// prefer group members as neighbors; at least one honest reporter exists.
struct CollusionCase {
  DecisionSimilarityGraph dsg;
  std::set<VehicleId> colluders;
  std::set<VehicleId> honest;
  int threshold = 0;
  bool insular = false;  // colluder lists never name honest vehicles
};

CollusionCase generate_collusion_case(Rng& rng, bool force_insular);

/// The built-in oracle suite: crypto round trips, POC/filter oracle
/// equivalence, and the collusion generator checks.
std::vector<CheckResult> run_all(std::uint64_t seed = 7,
                                 const std::function<void(const CheckResult&)>&
                                     on_result = nullptr);

}  // namespace selftest
}  // namespace vanetmon
