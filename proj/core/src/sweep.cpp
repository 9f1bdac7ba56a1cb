#include "vanetmon/sweep.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "vanetmon/random.hpp"

namespace vanetmon {

const char* to_string(SweepField f) {
  switch (f) {
    case SweepField::MaliciousPct: return "malicious_pct";
    case SweepField::PocDistance: return "poc_distance";
    case SweepField::RsuSpacing: return "rsu_spacing";
    case SweepField::Threshold: return "threshold";
    case SweepField::NVehicles: return "n_vehicles";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("sweep axis needs field=values: " + text);
  const std::string field = text.substr(0, eq);
  const std::string values = text.substr(eq + 1);

  SweepAxis axis;
  if (field == "malicious_pct") axis.field = SweepField::MaliciousPct;
  else if (field == "poc_distance") axis.field = SweepField::PocDistance;
  else if (field == "rsu_spacing") axis.field = SweepField::RsuSpacing;
  else if (field == "threshold") axis.field = SweepField::Threshold;
  else if (field == "n_vehicles") axis.field = SweepField::NVehicles;
  else throw std::invalid_argument("unknown sweep field: " + field);

  const auto range_sep = values.find("..");
  if (range_sep != std::string::npos) {
    const std::int64_t lo = std::stoll(values.substr(0, range_sep));
    std::string rest = values.substr(range_sep + 2);
    std::int64_t step = 1;
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = std::stoll(rest.substr(colon + 1));
      rest.resize(colon);
    }
    const std::int64_t hi = std::stoll(rest);
    if (step <= 0 || hi < lo)
      throw std::invalid_argument("bad sweep range: " + values);
    for (std::int64_t v = lo; v <= hi; v += step) axis.values.push_back(v);
    return axis;
  }
  std::size_t pos = 0;
  while (pos < values.size()) {
    auto comma = values.find(',', pos);
    if (comma == std::string::npos) comma = values.size();
    axis.values.push_back(std::stoll(values.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (axis.values.empty()) throw std::invalid_argument("empty sweep axis");
  return axis;
}

Scenario apply_axis(Scenario base, SweepField field, std::int64_t value) {
  switch (field) {
    case SweepField::MaliciousPct:
      base.malicious_pct = static_cast<double>(value);
      break;
    case SweepField::PocDistance:
      base.poc_distance_e7 = value * kE7PerMeter;
      break;
    case SweepField::RsuSpacing:
      base.rsu_spacing_e7 = value * kE7PerMeter;
      break;
    case SweepField::Threshold:
      base.threshold = static_cast<int>(value);
      break;
    case SweepField::NVehicles:
      base.n_vehicles = static_cast<int>(value);
      break;
  }
  return base;
}

std::vector<SimReport> run_sweep(const Scenario& base, const SweepAxis& axis,
                                 const std::vector<RunModel>& models,
                                 int seed_count, unsigned workers) {
  if (axis.values.empty() || models.empty() || seed_count <= 0)
    throw std::invalid_argument("run_sweep: empty axis, models or seeds");

  struct Job {
    Scenario scenario;
  };
  std::vector<Job> jobs;
  jobs.reserve(axis.values.size() * models.size() *
               static_cast<std::size_t>(seed_count));
  std::uint64_t run_index = 0;
  for (std::int64_t value : axis.values) {
    for (RunModel model : models) {
      for (int s = 0; s < seed_count; ++s) {
        Scenario sc = apply_axis(base, axis.field, value);
        sc.model = model;
        sc.seed = Rng::derive_seed(base.seed, run_index++);
        jobs.push_back(Job{std::move(sc)});
      }
    }
  }

  std::vector<SimReport> results(jobs.size());
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      results[i] = run(jobs[i].scenario);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace vanetmon
