#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const char* kScenario = R"(
corridor_length_m  8000
rsu_first_m        500
rsu_spacing_m      1000
n_rsu              5
threshold          3
sigma_s            10
range_m            510.5
latency_s          0.1
seed               7
model              proposed
ground_truth       congested
n_vehicles         12
honest_vel_mph     20
spawn_start_m      550
spawn_gap_m        2
malicious_pct      25
malicious_behavior colluding
)";

struct TempDir {
  fs::path path;
  TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VANETMON_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("run: valid scenario writes a report and exits 0") {
  TempDir dir("vanetmon_cli_run");
  const fs::path scenario = dir.path / "scenario.txt";
  std::ofstream(scenario) << kScenario;

  CHECK(run_cli("run " + scenario.string() + " --out " + (dir.path / "out").string()) ==
        0);
  const std::string csv = slurp(dir.path / "out" / "report.csv");
  CHECK(csv.find("model,n,threshold") == 0);
  CHECK(csv.find("congested") != std::string::npos);
  CHECK(fs::exists(dir.path / "out" / "events.log"));
}

TEST_CASE("run: malformed scenario exits 2 with diagnostics") {
  TempDir dir("vanetmon_cli_parse");
  const fs::path scenario = dir.path / "bad.txt";
  std::ofstream(scenario) << "n_vehicles 5\nbogus_key 1\n";
  CHECK(run_cli("run " + scenario.string()) == 2);
}

TEST_CASE("run: invariant violations exit 3") {
  TempDir dir("vanetmon_cli_invariant");
  const fs::path scenario = dir.path / "bad.txt";
  // structurally fine, but the rsu grid runs past the corridor
  std::ofstream(scenario) << "corridor_length_m 1000\nn_rsu 5\nrsu_spacing_m 1000\n"
                             "n_vehicles 5\nhonest_vel_mph 20\n";
  CHECK(run_cli("run " + scenario.string()) == 3);
}

TEST_CASE("run: the same seed reruns to byte-identical outputs") {
  TempDir dir("vanetmon_cli_det");
  const fs::path scenario = dir.path / "scenario.txt";
  std::ofstream(scenario) << kScenario;

  REQUIRE(run_cli("run " + scenario.string() + " --seed 123 --out " +
                  (dir.path / "a").string()) == 0);
  REQUIRE(run_cli("run " + scenario.string() + " --seed 123 --out " +
                  (dir.path / "b").string()) == 0);
  CHECK(slurp(dir.path / "a" / "report.csv") == slurp(dir.path / "b" / "report.csv"));
  CHECK(slurp(dir.path / "a" / "events.log") == slurp(dir.path / "b" / "events.log"));

  REQUIRE(run_cli("run " + scenario.string() + " --seed 124 --out " +
                  (dir.path / "c").string()) == 0);
  CHECK(fs::exists(dir.path / "c" / "report.csv"));
}

TEST_CASE("sweep: grid csv with one row per run") {
  TempDir dir("vanetmon_cli_sweep");
  const fs::path scenario = dir.path / "scenario.txt";
  std::ofstream(scenario) << kScenario;

  CHECK(run_cli("sweep " + scenario.string() +
                " --vary malicious_pct=0..40:20 --models majority,reputation "
                "--seeds 2 --out " +
                (dir.path / "out").string()) == 0);
  const std::string csv = slurp(dir.path / "out" / "sweep.csv");
  // header + 3 values x 2 models x 2 seeds
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 2 * 2);
}

TEST_CASE("sweep: formula mode needs no simulation") {
  TempDir dir("vanetmon_cli_formula");
  const fs::path scenario = dir.path / "scenario.txt";
  std::ofstream(scenario) << kScenario;

  CHECK(run_cli("sweep " + scenario.string() +
                " --vary n_vehicles=30..100:10 --formula --out " +
                (dir.path / "out").string()) == 0);
  const std::string csv = slurp(dir.path / "out" / "formulas.csv");
  CHECK(csv.find("proposed_upper,100,3,5,300,345,345") != std::string::npos);
  CHECK(csv.find("peer_auth,100,3,5,300,400,400") != std::string::npos);
}

TEST_CASE("verify runs the oracle suite") {
  CHECK(run_cli("verify") == 0);
}
