#include "vanetmon/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace vanetmon {

namespace {

// Exact decimal parsing into a scaled integer; `scale` is a power of ten.
// "510.5" with scale 1e7 becomes 5105000000.
std::int64_t parse_scaled(const std::string& text, std::int64_t scale, int line) {
  if (text.empty()) throw ScenarioParseError(line, "empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::int64_t integer = 0;
  bool any_digit = false;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    integer = integer * 10 + (text[pos] - '0');
    any_digit = true;
    ++pos;
  }
  std::int64_t frac = 0;
  std::int64_t frac_scale = scale;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_scale == 1)
        throw ScenarioParseError(line, "too many fractional digits: " + text);
      frac_scale /= 10;
      frac += (text[pos] - '0') * frac_scale;
      any_digit = true;
      ++pos;
    }
  }
  if (!any_digit || pos != text.size())
    throw ScenarioParseError(line, "bad number: " + text);
  const std::int64_t value = integer * scale + frac;
  return negative ? -value : value;
}

std::int64_t parse_int(const std::string& text, int line) {
  return parse_scaled(text, 1, line);
}

double parse_double(const std::string& text, int line) {
  double out = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ScenarioParseError(line, "bad number: " + text);
  return out;
}

bool parse_bool(const std::string& text, int line) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ScenarioParseError(line, "expected on/off: " + text);
}

Event parse_event(const std::string& text, int line) {
  if (text == "congested") return Event::Congested;
  if (text == "non_congested") return Event::NonCongested;
  throw ScenarioParseError(line, "expected congested/non_congested: " + text);
}

RunModel parse_model(const std::string& text, int line) {
  if (text == "proposed") return RunModel::Proposed;
  if (text == "majority") return RunModel::Majority;
  if (text == "reputation") return RunModel::Reputation;
  if (text == "peer_auth") return RunModel::PeerAuth;
  throw ScenarioParseError(line, "unknown model: " + text);
}

BehaviorProfile::Kind parse_kind(const std::string& text, int line) {
  if (text == "honest") return BehaviorProfile::Kind::Honest;
  if (text == "event_spoof") return BehaviorProfile::Kind::EventSpoof;
  if (text == "velocity_spoof") return BehaviorProfile::Kind::VelocitySpoof;
  if (text == "gps_spoof") return BehaviorProfile::Kind::GpsSpoof;
  if (text == "impersonate") return BehaviorProfile::Kind::Impersonate;
  if (text == "drop_packets") return BehaviorProfile::Kind::DropPackets;
  if (text == "colluding") return BehaviorProfile::Kind::Colluding;
  throw ScenarioParseError(line, "unknown behavior: " + text);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

ScenarioVehicleSpec parse_vehicle_line(const std::vector<std::string>& tokens,
                                       int line) {
  if (tokens.size() < 2) throw ScenarioParseError(line, "vehicle line needs an id");
  ScenarioVehicleSpec v;
  v.id = tokens[1];
  if (!is_valid_vehicle_id(v.id))
    throw ScenarioParseError(line, "vehicle id must be over [0-9A-Z]: " + v.id);
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw ScenarioParseError(line, "expected key=value: " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string value = tok.substr(eq + 1);
    if (key == "pos") {
      v.position_e7 = parse_scaled(value, kE7PerMeter, line);
    } else if (key == "vel") {
      v.velocity_mph100 = static_cast<mph100_t>(parse_scaled(value, 100, line));
    } else if (key == "rep") {
      v.reputation = parse_double(value, line);
    } else if (key == "slow") {
      v.behavior.slow_to_prove = parse_bool(value, line);
    } else if (key == "behavior") {
      const auto colon = value.find(':');
      const std::string kind = colon == std::string::npos ? value : value.substr(0, colon);
      const std::string arg = colon == std::string::npos ? "" : value.substr(colon + 1);
      v.behavior.kind = parse_kind(kind, line);
      switch (v.behavior.kind) {
        case BehaviorProfile::Kind::VelocitySpoof:
          v.behavior.vel_delta_mph100 =
              static_cast<mph100_t>(parse_scaled(arg, 100, line));
          break;
        case BehaviorProfile::Kind::GpsSpoof:
          v.behavior.gps_delta_mm = parse_scaled(arg, 1000, line);  // metres in file
          break;
        case BehaviorProfile::Kind::Impersonate:
          if (arg.empty()) throw ScenarioParseError(line, "impersonate needs a target");
          v.behavior.target = arg;
          break;
        case BehaviorProfile::Kind::Colluding:
          v.behavior.group_tag = arg.empty() ? 1 : static_cast<int>(parse_int(arg, line));
          break;
        default:
          if (!arg.empty())
            throw ScenarioParseError(line, "behavior takes no argument: " + value);
      }
    } else {
      throw ScenarioParseError(line, "unknown vehicle field: " + key);
    }
  }
  return v;
}

}  // namespace

const char* to_string(RunModel m) {
  switch (m) {
    case RunModel::Proposed: return "proposed";
    case RunModel::Majority: return "majority";
    case RunModel::Reputation: return "reputation";
    case RunModel::PeerAuth: return "peer_auth";
  }
  return "?";
}

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const auto tokens = split_ws(raw);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "vehicle") {
      s.explicit_vehicles.push_back(parse_vehicle_line(tokens, line_no));
      continue;
    }
    if (tokens.size() != 2)
      throw ScenarioParseError(line_no, "expected `key value`, got: " + raw);
    const std::string& value = tokens[1];
    if (key == "corridor_length_m") s.corridor_length_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "rsu_first_m") s.rsu_first_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "rsu_spacing_m") s.rsu_spacing_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "n_rsu") s.n_rsu = static_cast<int>(parse_int(value, line_no));
    else if (key == "threshold") s.threshold = static_cast<int>(parse_int(value, line_no));
    else if (key == "sigma_s") s.sigma_ms = parse_scaled(value, 1000, line_no);
    else if (key == "vel_congested_mph") s.scrutiny.vel_congested = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "vel_ncongested_mph") s.scrutiny.vel_ncongested = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "epsilon_mph") s.scrutiny.epsilon = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "ss_key_bits") s.ss_key_bits = static_cast<unsigned>(parse_int(value, line_no));
    else if (key == "t_max_s") s.t_max_s = static_cast<int>(parse_int(value, line_no));
    else if (key == "range_m") s.range_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "latency_s") s.latency_ms = parse_scaled(value, 1000, line_no);
    else if (key == "channel_queuing") s.channel_queuing = parse_bool(value, line_no);
    else if (key == "loss_rate") s.loss_rate = parse_double(value, line_no);
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(value, line_no));
    else if (key == "model") s.model = parse_model(value, line_no);
    else if (key == "ground_truth") s.ground_truth = parse_event(value, line_no);
    else if (key == "n_vehicles") s.n_vehicles = static_cast<int>(parse_int(value, line_no));
    else if (key == "id_prefix") s.id_prefix = value;
    else if (key == "honest_vel_mph") s.honest_vel_mph100 = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "spawn_start_m") s.spawn_start_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "spawn_gap_m") s.spawn_gap_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "malicious_pct") s.malicious_pct = parse_double(value, line_no);
    else if (key == "malicious_behavior") s.malicious_kind = parse_kind(value, line_no);
    else if (key == "malicious_vel_mph") s.malicious_vel_mph100 = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "velocity_delta_mph") s.velocity_delta_mph100 = static_cast<mph100_t>(parse_scaled(value, 100, line_no));
    else if (key == "gps_delta_m") s.gps_delta_mm = parse_scaled(value, 1000, line_no);
    else if (key == "slow_to_prove") s.slow_to_prove = parse_bool(value, line_no);
    else if (key == "poc_distance_m") s.poc_distance_e7 = parse_scaled(value, kE7PerMeter, line_no);
    else if (key == "honest_reputation") s.honest_reputation = parse_double(value, line_no);
    else if (key == "malicious_reputation") s.malicious_reputation = parse_double(value, line_no);
    else throw ScenarioParseError(line_no, "unknown key: " + key);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError(0, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string scaled_to_decimal(std::int64_t value, std::int64_t scale,
                              int frac_digits) {
  std::ostringstream o;
  o << value / scale;
  const std::int64_t frac = std::llabs(value % scale);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(frac_digits) - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    o << '.' << digits;
  }
  return o.str();
}

}  // namespace

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream out;
  auto meters = [](pos_e7_t v) { return scaled_to_decimal(v, kE7PerMeter, 7); };
  auto mph = [](mph100_t v) { return scaled_to_decimal(v, 100, 2); };
  out << "corridor_length_m " << meters(s.corridor_length_e7) << "\n";
  out << "rsu_first_m " << meters(s.rsu_first_e7) << "\n";
  out << "rsu_spacing_m " << meters(s.rsu_spacing_e7) << "\n";
  out << "n_rsu " << s.n_rsu << "\n";
  out << "threshold " << s.threshold << "\n";
  out << "sigma_s " << scaled_to_decimal(s.sigma_ms, 1000, 3) << "\n";
  out << "vel_congested_mph " << mph(s.scrutiny.vel_congested) << "\n";
  out << "vel_ncongested_mph " << mph(s.scrutiny.vel_ncongested) << "\n";
  out << "epsilon_mph " << mph(s.scrutiny.epsilon) << "\n";
  out << "ss_key_bits " << s.ss_key_bits << "\n";
  out << "t_max_s " << s.t_max_s << "\n";
  out << "range_m " << meters(s.range_e7) << "\n";
  out << "latency_s " << scaled_to_decimal(s.latency_ms, 1000, 3) << "\n";
  out << "channel_queuing " << (s.channel_queuing ? "on" : "off") << "\n";
  out << "seed " << s.seed << "\n";
  out << "model " << to_string(s.model) << "\n";
  out << "ground_truth " << to_string(s.ground_truth) << "\n";
  out << "n_vehicles " << s.n_vehicles << "\n";
  out << "id_prefix " << s.id_prefix << "\n";
  out << "honest_vel_mph " << mph(s.honest_vel_mph100) << "\n";
  out << "spawn_start_m " << meters(s.spawn_start_e7) << "\n";
  out << "spawn_gap_m " << meters(s.spawn_gap_e7) << "\n";
  out << "malicious_pct " << s.malicious_pct << "\n";
  out << "malicious_behavior " << to_string(s.malicious_kind) << "\n";
  if (s.malicious_vel_mph100 >= 0)
    out << "malicious_vel_mph " << mph(s.malicious_vel_mph100) << "\n";
  out << "slow_to_prove " << (s.slow_to_prove ? "on" : "off") << "\n";
  out << "poc_distance_m " << meters(s.poc_distance_e7) << "\n";
  return out.str();
}

void validate_scenario(const Scenario& s, bool allow_spacing_override) {
  if (s.n_rsu <= 0) throw ScenarioError("n_rsu must be positive");
  if (s.threshold <= 0) throw ScenarioError("threshold must be positive");
  if (s.sigma_ms < 0) throw ScenarioError("sigma must be non-negative");
  if (s.range_e7 <= 0) throw ScenarioError("range must be positive");
  if (s.latency_ms < 0) throw ScenarioError("latency must be non-negative");
  if (s.scrutiny.vel_congested > s.scrutiny.vel_ncongested)
    throw ScenarioError("vel_congested must be <= vel_ncongested");
  if (s.scrutiny.epsilon < 0) throw ScenarioError("epsilon must be >= 0");
  if (!allow_spacing_override && s.n_rsu > 1) {
    if (s.rsu_spacing_e7 < 1000 * kE7PerMeter || s.rsu_spacing_e7 > 2500 * kE7PerMeter)
      throw ScenarioError("rsu_spacing outside [1000, 2500] m");
  }
  if (s.n_vehicles < 0) throw ScenarioError("n_vehicles must be >= 0");
  if (s.n_vehicles == 0 && s.explicit_vehicles.empty())
    throw ScenarioError("scenario has no vehicles");
  if (s.malicious_pct < 0 || s.malicious_pct > 100)
    throw ScenarioError("malicious_pct outside [0, 100]");
  if (s.loss_rate < 0 || s.loss_rate > 1) throw ScenarioError("loss_rate outside [0, 1]");
  const auto sites = rsu_layout(s);
  for (const RsuSite& site : sites) {
    if (site.location_e7 < 0 || site.location_e7 > s.corridor_length_e7)
      throw ScenarioError("rsu " + site.id + " outside the corridor");
  }
  for (const auto& v : build_population(s)) {
    if (v.position_e7 < -s.range_e7 || v.position_e7 > s.corridor_length_e7)
      throw ScenarioError("vehicle " + v.id + " outside the corridor");
    if (v.velocity_mph100 < 0)
      throw ScenarioError("vehicle " + v.id + " has negative velocity");
    if (v.id.size() != 8) throw ScenarioError("vehicle id must be 8 chars: " + v.id);
  }
}

std::vector<RsuSite> rsu_layout(const Scenario& s) {
  std::vector<RsuSite> out;
  out.reserve(s.n_rsu);
  for (int i = 0; i < s.n_rsu; ++i) {
    out.push_back(RsuSite{"RSU" + std::to_string(i + 1),
                          s.rsu_first_e7 + static_cast<pos_e7_t>(i) * s.rsu_spacing_e7});
  }
  return out;
}

std::vector<ScenarioVehicleSpec> build_population(const Scenario& s) {
  std::vector<ScenarioVehicleSpec> out;
  out.reserve(static_cast<std::size_t>(s.n_vehicles) + s.explicit_vehicles.size());

  if (s.n_vehicles > 0) {
    // the malicious cohort is the tail of the spawn order, so displacement
    // sweeps move a well-defined rear group instead of a shuffled sample
    const int n_malicious =
        static_cast<int>(static_cast<double>(s.n_vehicles) * s.malicious_pct / 100.0);
    std::vector<bool> malicious(s.n_vehicles, false);
    for (int i = s.n_vehicles - n_malicious; i < s.n_vehicles; ++i)
      malicious[i] = true;

    for (int i = 0; i < s.n_vehicles; ++i) {
      ScenarioVehicleSpec v;
      std::string num = std::to_string(i + 1);
      num.insert(0, 5 - num.size(), '0');
      v.id = s.id_prefix + num;
      v.position_e7 = s.spawn_start_e7 + static_cast<pos_e7_t>(i) * s.spawn_gap_e7;
      v.velocity_mph100 = s.honest_vel_mph100;
      v.reputation = s.honest_reputation;
      if (malicious[i]) {
        v.behavior.kind = s.malicious_kind;
        v.behavior.vel_delta_mph100 = s.velocity_delta_mph100;
        v.behavior.gps_delta_mm = s.gps_delta_mm;
        v.behavior.group_tag = 1;
        v.behavior.group_event = opposite(s.ground_truth);
        v.behavior.slow_to_prove = s.slow_to_prove;
        v.reputation = s.malicious_reputation;
        if (s.malicious_vel_mph100 >= 0) v.velocity_mph100 = s.malicious_vel_mph100;
        v.position_e7 -= s.poc_distance_e7;
        if (s.malicious_kind == BehaviorProfile::Kind::Impersonate) {
          // impersonate the next vehicle around the ring
          std::string tnum = std::to_string((i + 1) % s.n_vehicles + 1);
          tnum.insert(0, 5 - tnum.size(), '0');
          v.behavior.target = s.id_prefix + tnum;
        }
      }
      out.push_back(std::move(v));
    }
  }

  for (const auto& v : s.explicit_vehicles) out.push_back(v);
  return out;
}

}  // namespace vanetmon
