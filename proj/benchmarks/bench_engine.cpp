#include <benchmark/benchmark.h>

#include "vanetmon/engine.hpp"

using namespace vanetmon;

namespace {

Scenario corridor(int n, RunModel model) {
  Scenario s;
  s.corridor_length_e7 = 8000 * kE7PerMeter;
  s.rsu_first_e7 = 500 * kE7PerMeter;
  s.rsu_spacing_e7 = 1000 * kE7PerMeter;
  s.n_rsu = 5;
  s.threshold = 3;
  s.seed = 3;
  s.model = model;
  s.ground_truth = Event::Congested;
  s.n_vehicles = n;
  s.honest_vel_mph100 = 2000;
  s.spawn_start_e7 = 550 * kE7PerMeter;
  s.spawn_gap_e7 = 2 * kE7PerMeter;
  s.malicious_pct = 40;
  s.malicious_kind = BehaviorProfile::Kind::Colluding;
  return s;
}

void BM_run_scrutiny_path(benchmark::State& state) {
  const Scenario s = corridor(static_cast<int>(state.range(0)), RunModel::Proposed);
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_run_scrutiny_path)->Arg(30)->Arg(100);

void BM_run_challenge_path(benchmark::State& state) {
  Scenario s = corridor(static_cast<int>(state.range(0)), RunModel::Proposed);
  s.ground_truth = Event::NonCongested;
  s.honest_vel_mph100 = 6000;
  s.malicious_pct = 100.0 / state.range(0);
  s.malicious_kind = BehaviorProfile::Kind::EventSpoof;
  s.malicious_vel_mph100 = 3700;
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_run_challenge_path)->Arg(30)->Arg(100);

void BM_run_majority(benchmark::State& state) {
  const Scenario s = corridor(100, RunModel::Majority);
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_run_majority);

}  // namespace

BENCHMARK_MAIN();
