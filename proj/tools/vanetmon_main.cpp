#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vanetmon/engine.hpp"
#include "vanetmon/selftest.hpp"
#include "vanetmon/sweep.hpp"

namespace {

using namespace vanetmon;

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;

std::filesystem::path output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("VANETMON_OUT")) return env;
  return ".";
}

void write_events_log(const std::filesystem::path& path, const SimReport& report) {
  std::ofstream out(path);
  for (const TimelineEvent& ev : report.timeline) {
    nlohmann::ordered_json j;
    j["t_ms"] = ev.at_ms;
    j["kind"] = ev.kind;
    j["detail"] = ev.detail;
    out << j.dump() << "\n";
  }
}

void print_summary(const SimReport& r) {
  std::cout << "verdict: " << to_string(r.verdict) << " (basis " << to_string(r.basis)
            << ", model " << to_string(r.cost_model) << ")\n"
            << "accuracy: " << r.accuracy << "\n"
            << "decision_time_s: " << r.decision_time_ms / 1000.0 << "\n"
            << "vehicle_broadcasts: " << r.vehicle_broadcast_total
            << ", rsu: " << r.rsu_broadcast_total
            << ", edge: " << r.edge_broadcast_total << "\n"
            << "malicious reported/actual: " << r.reported_malicious.size() << "/"
            << r.actual_malicious.size()
            << (r.malicious_set_identified ? " (identified)" : "") << "\n";
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed_override,
            bool has_seed, const std::string& out_flag) {
  Scenario scenario = load_scenario(scenario_path);
  if (has_seed) scenario.seed = seed_override;
  validate_scenario(scenario, /*allow_spacing_override=*/true);

  const SimReport report = run(scenario);
  const auto dir = output_dir(out_flag);
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "report.csv");
    csv << csv_header() << "\n" << csv_row(report) << "\n";
  }
  write_events_log(dir / "events.log", report);
  print_summary(report);
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& vary,
              const std::string& models_flag, int seeds, unsigned workers,
              bool formula_mode, const std::string& out_flag) {
  Scenario base = load_scenario(scenario_path);
  validate_scenario(base, /*allow_spacing_override=*/true);
  const SweepAxis axis = parse_sweep_axis(vary);

  const auto dir = output_dir(out_flag);
  std::filesystem::create_directories(dir);

  if (formula_mode) {
    if (axis.field != SweepField::NVehicles && axis.field != SweepField::Threshold)
      throw std::invalid_argument("--formula expects n_vehicles or threshold axis");
    std::ofstream csv(dir / "formulas.csv");
    csv << "model,n,threshold,n_rsu,vehicle_broadcasts,total_transmissions,"
           "energy_units\n";
    for (const std::int64_t value : axis.values) {
      const int n = axis.field == SweepField::NVehicles ? static_cast<int>(value)
                                                        : base.n_vehicles;
      const int threshold = axis.field == SweepField::Threshold
                                ? static_cast<int>(value)
                                : base.threshold;
      const CostModel cost{n, threshold, base.n_rsu, 20};
      for (Model m : {Model::Majority, Model::Reputation, Model::PeerAuth,
                      Model::ProposedLower, Model::ProposedUpper}) {
        csv << to_string(m) << ',' << n << ',' << threshold << ',' << base.n_rsu
            << ',' << vehicle_broadcasts(m, n, threshold) << ','
            << total_transmissions(m, cost).ceil_value() << ','
            << energy_units(m, cost) << "\n";
      }
    }
    std::cout << "formulas written to " << (dir / "formulas.csv").string() << "\n";
    return 0;
  }

  std::vector<RunModel> models;
  if (models_flag == "all") {
    models = {RunModel::Proposed, RunModel::Majority, RunModel::Reputation,
              RunModel::PeerAuth};
  } else {
    std::size_t pos = 0;
    while (pos < models_flag.size()) {
      auto comma = models_flag.find(',', pos);
      if (comma == std::string::npos) comma = models_flag.size();
      const std::string name = models_flag.substr(pos, comma - pos);
      if (name == "proposed") models.push_back(RunModel::Proposed);
      else if (name == "majority") models.push_back(RunModel::Majority);
      else if (name == "reputation") models.push_back(RunModel::Reputation);
      else if (name == "peer_auth") models.push_back(RunModel::PeerAuth);
      else throw std::invalid_argument("unknown model: " + name);
      pos = comma + 1;
    }
  }

  const auto reports = run_sweep(base, axis, models, seeds, workers);
  std::ofstream csv(dir / "sweep.csv");
  csv << csv_header() << "\n";
  for (const SimReport& r : reports) csv << csv_row(r) << "\n";
  std::cout << reports.size() << " runs written to " << (dir / "sweep.csv").string()
            << "\n";
  return 0;
}

int cmd_verify() {
  bool all_pass = true;
  const auto results = selftest::run_all(7, [&](const selftest::CheckResult& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << (r.detail.empty() ? "" : " " + r.detail) << "\n";
    all_pass = all_pass && r.pass;
  });
  std::cout << (all_pass ? "verify: all checks passed" : "verify: FAILURES") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vanetmon: deterministic VANET traffic-monitoring simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_flag, vary, models_flag = "all";
  std::uint64_t seed = 0;
  int seeds = 1;
  unsigned workers = 0;
  bool formula_mode = false;

  auto* run_cmd = app.add_subcommand("run", "execute one scenario");
  run_cmd->add_option("scenario", scenario_path, "scenario file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the scenario seed");
  run_cmd->add_option("--out", out_flag, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("scenario", scenario_path, "base scenario file")->required();
  sweep_cmd->add_option("--vary", vary, "axis, e.g. malicious_pct=0..90:10")
      ->required();
  sweep_cmd->add_option("--models", models_flag, "all or comma list");
  sweep_cmd->add_option("--seeds", seeds, "seeds per grid point");
  sweep_cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
  sweep_cmd->add_flag("--formula", formula_mode, "emit cost formulas, no simulation");
  sweep_cmd->add_option("--out", out_flag, "output directory");

  app.add_subcommand("verify", "run the built-in oracle suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(scenario_path, seed, seed_opt->count() > 0, out_flag);
    if (sweep_cmd->parsed())
      return cmd_sweep(scenario_path, vary, models_flag, seeds, workers,
                       formula_mode, out_flag);
    return cmd_verify();
  } catch (const vanetmon::ScenarioParseError& e) {
    std::cerr << "scenario parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const vanetmon::ScenarioError& e) {
    std::cerr << "scenario invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
