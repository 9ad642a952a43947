#include "qbeat/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qbeat {

std::string to_string(RunKind k) {
  switch (k) {
    case RunKind::Stationary: return "stationary";
    case RunKind::Beats: return "beats";
    case RunKind::FieldSweep: return "field-sweep";
    case RunKind::ProjectionSweep: return "projection-sweep";
    case RunKind::HoppingSweep: return "hopping-sweep";
  }
  return "?";
}

RunKind run_kind_from_string(const std::string& s) {
  if (s == "stationary") return RunKind::Stationary;
  if (s == "beats") return RunKind::Beats;
  if (s == "field-sweep") return RunKind::FieldSweep;
  if (s == "projection-sweep") return RunKind::ProjectionSweep;
  if (s == "hopping-sweep") return RunKind::HoppingSweep;
  throw ValidationError("unknown run_kind '" + s +
                        "' (expected stationary, beats, field-sweep, projection-sweep or "
                        "hopping-sweep)");
}

std::string to_string(ConfigSelector c) {
  switch (c) {
    case ConfigSelector::AA: return "AA";
    case ConfigSelector::BB: return "BB";
    case ConfigSelector::AB: return "AB";
    case ConfigSelector::Averaged: return "averaged";
  }
  return "?";
}

ConfigSelector config_selector_from_string(const std::string& s) {
  if (s == "AA") return ConfigSelector::AA;
  if (s == "BB") return ConfigSelector::BB;
  if (s == "AB") return ConfigSelector::AB;
  if (s == "averaged") return ConfigSelector::Averaged;
  throw ValidationError("unknown config '" + s + "' (expected AA, BB, AB or averaged)");
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawMap = std::map<std::string, RawEntry>;

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "run_kind",   "preset",     "D_cm1",        "E_cm1",
      "theta_deg",  "g",          "config",       "B_T",
      "field_dir",  "sweep_B_T",  "sweep_tau_hop_ps", "tau_hop_ps",
      "n_traj",     "t_max_ns",   "dt_ns",        "master_seed",
      "out_dir"};
  return keys;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  std::ostringstream out;
  out << source;
  if (line > 0) out << ":" << line;
  out << ": " << msg;
  throw ValidationError(out.str());
}

std::vector<std::string> tokenize(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double to_double(const std::string& source, int line, const std::string& key,
                 const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(source, line, "value of " + key + " is not a number: '" + token + "'");
  }
  if (!std::isfinite(v)) fail(source, line, "value of " + key + " must be finite");
  return v;
}

double single_double(const std::string& source, const RawEntry& e, const std::string& key) {
  const auto tokens = tokenize(e.value);
  if (tokens.size() != 1) fail(source, e.line, key + " expects a single number");
  return to_double(source, e.line, key, tokens[0]);
}

std::vector<double> double_list(const std::string& source, const RawEntry& e,
                                const std::string& key) {
  const auto tokens = tokenize(e.value);
  if (tokens.empty()) fail(source, e.line, key + " expects a non-empty list of numbers");
  std::vector<double> out;
  for (const auto& t : tokens) out.push_back(to_double(source, e.line, key, t));
  return out;
}

std::optional<Vec3> axis_vector(const std::string& name) {
  if (name == "x") return Vec3::UnitX();
  if (name == "y") return Vec3::UnitY();
  if (name == "z") return Vec3::UnitZ();
  return std::nullopt;
}

Vec3 parse_field(const std::string& source, const RawEntry& e, const std::string& key) {
  const auto tokens = tokenize(e.value);
  if (tokens.size() == 2) {
    if (const auto axis = axis_vector(tokens[0])) {
      return *axis * to_double(source, e.line, key, tokens[1]);
    }
    fail(source, e.line, key + ": expected 'x|y|z magnitude' or three components");
  }
  if (tokens.size() == 3) {
    return Vec3(to_double(source, e.line, key, tokens[0]), to_double(source, e.line, key, tokens[1]),
                to_double(source, e.line, key, tokens[2]));
  }
  fail(source, e.line, key + ": expected 'x|y|z magnitude' or three components");
}

Vec3 parse_direction(const std::string& source, const RawEntry& e, const std::string& key) {
  const auto tokens = tokenize(e.value);
  if (tokens.size() == 1) {
    if (const auto axis = axis_vector(tokens[0])) return *axis;
    fail(source, e.line, key + ": expected x, y, z or three components");
  }
  if (tokens.size() == 3) {
    const Vec3 dir(to_double(source, e.line, key, tokens[0]),
                   to_double(source, e.line, key, tokens[1]),
                   to_double(source, e.line, key, tokens[2]));
    if (dir.norm() == 0.0) fail(source, e.line, key + " must be a nonzero direction");
    return dir;
  }
  fail(source, e.line, key + ": expected x, y, z or three components");
}

std::string suggest_key(const std::string& key) {
  for (const auto& known : known_keys()) {
    if (known.size() > key.size() && known.compare(0, key.size(), key) == 0 &&
        known[key.size()] == '_') {
      return known;
    }
  }
  return {};
}

Scenario assemble(RawMap raw, const std::string& source) {
  Scenario s;

  auto take = [&raw](const std::string& key) -> std::optional<RawEntry> {
    auto it = raw.find(key);
    if (it == raw.end()) return std::nullopt;
    RawEntry e = it->second;
    raw.erase(it);
    return e;
  };

  const auto kind = take("run_kind");
  bool have_crystal = false;
  if (const auto preset = take("preset")) {
    if (preset->value == "rubrene") {
      s.crystal = CrystalParams::rubrene();
      have_crystal = true;
    } else {
      fail(source, preset->line, "unknown preset '" + preset->value + "' (available: rubrene)");
    }
  }

  bool have_d = false, have_e = false, have_theta = false;
  if (const auto v = take("D_cm1")) {
    s.crystal.d_cm1 = single_double(source, *v, "D_cm1");
    have_d = true;
  }
  if (const auto v = take("E_cm1")) {
    s.crystal.e_cm1 = single_double(source, *v, "E_cm1");
    have_e = true;
  }
  if (const auto v = take("theta_deg")) {
    s.crystal.theta_deg = single_double(source, *v, "theta_deg");
    have_theta = true;
  }
  if (const auto v = take("g")) s.crystal.g = single_double(source, *v, "g");

  if (const auto v = take("config")) {
    try {
      s.config = config_selector_from_string(v->value);
    } catch (const ValidationError& err) {
      fail(source, v->line, err.what());
    }
  }
  if (const auto v = take("B_T")) s.field.b_tesla = parse_field(source, *v, "B_T");
  if (const auto v = take("field_dir")) s.sweep_direction = parse_direction(source, *v, "field_dir");
  if (const auto v = take("sweep_B_T")) s.sweep_b_tesla = double_list(source, *v, "sweep_B_T");
  if (const auto v = take("sweep_tau_hop_ps")) {
    s.sweep_tau_hop_ps = double_list(source, *v, "sweep_tau_hop_ps");
  }

  bool have_tau = false;
  if (const auto v = take("tau_hop_ps")) {
    s.tau_hop_ps = single_double(source, *v, "tau_hop_ps");
    have_tau = true;
  }
  if (const auto v = take("n_traj")) {
    const double n = single_double(source, *v, "n_traj");
    if (n != std::floor(n) || n < 1 || n > 2e9) fail(source, v->line, "n_traj must be a positive integer");
    s.n_traj = static_cast<int>(n);
  }
  if (const auto v = take("t_max_ns")) s.t_max_ns = single_double(source, *v, "t_max_ns");
  if (const auto v = take("dt_ns")) s.dt_ns = single_double(source, *v, "dt_ns");
  if (const auto v = take("master_seed")) {
    std::uint64_t seed = 0;
    const auto& tok = v->value;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), seed);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      fail(source, v->line, "master_seed must be an unsigned 64-bit integer");
    }
    s.master_seed = seed;
  }
  if (const auto v = take("out_dir")) s.out_dir = v->value;

  if (!raw.empty()) {
    const auto& [key, entry] = *raw.begin();
    const std::string suggestion = suggest_key(key);
    std::string msg = "unknown key '" + key + "'";
    if (!suggestion.empty()) msg += " (did you mean '" + suggestion + "'?)";
    fail(source, entry.line, msg);
  }

  // Presence checks before semantic validation so an empty file lists what a
  // minimal scenario needs.
  std::vector<std::string> missing;
  if (!kind) missing.push_back("run_kind");
  if (!have_crystal && !(have_d && have_e && have_theta)) {
    missing.push_back("preset (or D_cm1, E_cm1, theta_deg)");
  }
  if (!missing.empty()) {
    std::string msg = "missing required key(s): ";
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) msg += ", ";
      msg += missing[i];
    }
    fail(source, 0, msg);
  }

  try {
    s.run_kind = run_kind_from_string(kind->value);
  } catch (const ValidationError& err) {
    fail(source, kind->line, err.what());
  }

  switch (s.run_kind) {
    case RunKind::Stationary:
      if (!s.config) fail(source, 0, "stationary runs require 'config'");
      break;
    case RunKind::ProjectionSweep:
      if (!s.config) fail(source, 0, "projection-sweep runs require 'config'");
      if (s.sweep_b_tesla.empty()) fail(source, 0, "projection-sweep runs require 'sweep_B_T'");
      break;
    case RunKind::Beats:
      if (!have_tau) fail(source, 0, "beats runs require 'tau_hop_ps'");
      break;
    case RunKind::FieldSweep:
      if (!have_tau) fail(source, 0, "field-sweep runs require 'tau_hop_ps'");
      if (s.sweep_b_tesla.empty()) fail(source, 0, "field-sweep runs require 'sweep_B_T'");
      break;
    case RunKind::HoppingSweep:
      if (s.sweep_tau_hop_ps.empty()) {
        fail(source, 0, "hopping-sweep runs require 'sweep_tau_hop_ps'");
      }
      break;
  }

  try {
    s.finalize();
  } catch (const ValidationError& err) {
    fail(source, 0, err.what());
  }
  return s;
}

RawMap raw_from_json(const nlohmann::json& obj, const std::string& source) {
  RawMap raw;
  for (const auto& [key, value] : obj.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number_unsigned()) {
      text = std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      text = std::to_string(value.get<std::int64_t>());
    } else if (value.is_number()) {
      text = format_double(value.get<double>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += " ";
        if (item.is_string()) {
          joined += item.get<std::string>();
        } else if (item.is_number()) {
          joined += format_double(item.get<double>());
        } else {
          fail(source, 0, "key '" + key + "': array entries must be numbers or strings");
        }
      }
      text = joined;
    } else {
      fail(source, 0, "key '" + key + "': unsupported JSON value type");
    }
    raw[key] = RawEntry{text, 0};
  }
  return raw;
}

}  // namespace

MonteCarloParams Scenario::mc_params() const { return mc_params(tau_hop_ps); }

MonteCarloParams Scenario::mc_params(double tau_hop_ps_override) const {
  MonteCarloParams mc;
  mc.tau_hop_ns = tau_hop_ps_override / 1000.0;
  mc.n_traj = n_traj;
  mc.t_max_ns = t_max_ns;
  mc.dt_ns = dt_ns;
  mc.master_seed = master_seed;
  return mc;
}

void Scenario::finalize() {
  crystal.validate();
  field.validate();

  if (t_max_ns == 0.0) {
    const bool any_field =
        !field.is_zero() || std::any_of(sweep_b_tesla.begin(), sweep_b_tesla.end(),
                                        [](double b) { return b > 0.0; });
    t_max_ns = any_field ? 20.0 : 5.0;
  }

  const bool uses_mc = run_kind == RunKind::Beats || run_kind == RunKind::FieldSweep ||
                       run_kind == RunKind::HoppingSweep;
  if (uses_mc) {
    if (!(tau_hop_ps > 0.0) && run_kind != RunKind::HoppingSweep) {
      throw ValidationError("tau_hop must be positive");
    }
    mc_params().validate();
  }

  auto check_list = [](const std::vector<double>& list, const std::string& name, bool positive) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!std::isfinite(list[i])) throw ValidationError(name + " entries must be finite");
      if (positive && !(list[i] > 0.0)) throw ValidationError(name + " entries must be positive");
      if (!positive && list[i] < 0.0) throw ValidationError(name + " entries must be nonnegative");
      if (i > 0 && list[i] <= list[i - 1]) {
        throw ValidationError(name + " entries must be strictly ascending");
      }
    }
  };
  check_list(sweep_b_tesla, "sweep_B_T", false);
  check_list(sweep_tau_hop_ps, "sweep_tau_hop_ps", true);
  if (run_kind == RunKind::HoppingSweep) {
    for (const double tau_ps : sweep_tau_hop_ps) {
      mc_params(tau_ps).validate();
    }
  }
  if (!sweep_direction.allFinite() || sweep_direction.norm() == 0.0) {
    throw ValidationError("field_dir must be a finite nonzero direction");
  }
  if (out_dir.empty()) throw ValidationError("out_dir must not be empty");
}

bool Scenario::operator==(const Scenario& other) const {
  return run_kind == other.run_kind && crystal == other.crystal && config == other.config &&
         field == other.field && sweep_direction == other.sweep_direction &&
         sweep_b_tesla == other.sweep_b_tesla && sweep_tau_hop_ps == other.sweep_tau_hop_ps &&
         tau_hop_ps == other.tau_hop_ps && n_traj == other.n_traj &&
         t_max_ns == other.t_max_ns && dt_ns == other.dt_ns &&
         master_seed == other.master_seed && out_dir == other.out_dir;
}

Scenario parse_scenario_text(const std::string& text, const std::string& source_name) {
  RawMap raw;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source_name, line_no, "expected 'key = value'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source_name, line_no, "empty key");
    if (value.empty()) fail(source_name, line_no, "key '" + key + "' has no value");
    if (raw.count(key)) fail(source_name, line_no, "duplicate key '" + key + "'");
    raw[key] = RawEntry{value, line_no};
  }
  return assemble(std::move(raw), source_name);
}

Scenario parse_scenario_json(const std::string& text, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    fail(source_name, 0, std::string("JSON parse error: ") + err.what());
  }
  if (!doc.is_object()) fail(source_name, 0, "JSON scenario must be an object");
  // A manifest wraps the scenario it was produced from.
  if (doc.contains("scenario")) {
    if (!doc["scenario"].is_object()) fail(source_name, 0, "manifest 'scenario' must be an object");
    doc = doc["scenario"];
  }
  return assemble(raw_from_json(doc, source_name), source_name);
}

Scenario parse_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open scenario file: " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const auto first = text.find_first_not_of(" \t\r\n");
  const bool looks_json =
      file.extension() == ".json" || (first != std::string::npos && text[first] == '{');
  return looks_json ? parse_scenario_json(text, file.string())
                    : parse_scenario_text(text, file.string());
}

std::string emit_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "run_kind = " << to_string(s.run_kind) << "\n";
  out << "D_cm1 = " << format_double(s.crystal.d_cm1) << "\n";
  out << "E_cm1 = " << format_double(s.crystal.e_cm1) << "\n";
  out << "theta_deg = " << format_double(s.crystal.theta_deg) << "\n";
  out << "g = " << format_double(s.crystal.g) << "\n";
  if (s.config) out << "config = " << to_string(*s.config) << "\n";
  if (!s.field.is_zero()) {
    out << "B_T = " << format_double(s.field.b_tesla.x()) << " "
        << format_double(s.field.b_tesla.y()) << " " << format_double(s.field.b_tesla.z()) << "\n";
  }
  if (s.sweep_direction != Vec3::UnitX()) {
    out << "field_dir = " << format_double(s.sweep_direction.x()) << " "
        << format_double(s.sweep_direction.y()) << " " << format_double(s.sweep_direction.z())
        << "\n";
  }
  auto emit_list = [&out](const char* key, const std::vector<double>& list) {
    if (list.empty()) return;
    out << key << " =";
    for (const double v : list) out << " " << format_double(v);
    out << "\n";
  };
  emit_list("sweep_B_T", s.sweep_b_tesla);
  emit_list("sweep_tau_hop_ps", s.sweep_tau_hop_ps);
  out << "tau_hop_ps = " << format_double(s.tau_hop_ps) << "\n";
  out << "n_traj = " << s.n_traj << "\n";
  out << "t_max_ns = " << format_double(s.t_max_ns) << "\n";
  out << "dt_ns = " << format_double(s.dt_ns) << "\n";
  out << "master_seed = " << s.master_seed << "\n";
  out << "out_dir = " << s.out_dir << "\n";
  return out.str();
}

}  // namespace qbeat
