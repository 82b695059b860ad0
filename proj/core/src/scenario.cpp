#include "zeddet/scenario.hpp"

#include "zeddet/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace zeddet {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("scenario: " + key + ": invalid number '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("scenario: " + key + ": invalid integer '" + v + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(key, trim(tok)));
  if (out.empty()) throw ConfigError("scenario: " + key + ": empty list");
  return out;
}

struct RawSection {
  std::string name;
  std::map<std::string, std::string> kv;
  std::map<std::string, bool> used;

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string take(const std::string& k) {
    used[k] = true;
    return kv.at(k);
  }
  void check_all_used(const std::string& origin) const {
    for (const auto& [k, v] : kv) {
      if (!used.count(k))
        throw ConfigError("scenario " + origin + ": [" + name + "] unknown key '" + k + "'");
    }
  }
};

double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

} // namespace

TrialSpec parse_scenario_text(const std::string& text, const std::string& origin) {
  std::vector<RawSection> sections;
  {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    RawSection* cur = nullptr;
    while (std::getline(ss, line)) {
      ++lineno;
      // strip comments ('#' or ';' at start or after whitespace)
      for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') &&
            (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
          line = line.substr(0, i);
          break;
        }
      }
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("scenario " + origin + ":" + std::to_string(lineno) +
                            ": malformed section header");
        sections.push_back(RawSection{trim(line.substr(1, line.size() - 2)), {}, {}});
        cur = &sections.back();
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos || cur == nullptr)
        throw ConfigError("scenario " + origin + ":" + std::to_string(lineno) +
                          ": expected 'key = value' inside a section");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty() || val.empty())
        throw ConfigError("scenario " + origin + ":" + std::to_string(lineno) +
                          ": empty key or value");
      if (cur->kv.count(key))
        throw ConfigError("scenario " + origin + ": [" + cur->name + "] duplicate key '" +
                          key + "'");
      cur->kv[key] = val;
    }
  }

  TrialSpec spec;
  bool saw_grid = false, saw_fsk = false, saw_noise = false, saw_run = false;
  FskParams fsk;
  BitSequence detector_code;

  auto require = [&](RawSection& s, const char* key) -> std::string {
    if (!s.has(key))
      throw ConfigError("scenario " + origin + ": [" + s.name + "] missing required key '" +
                        key + "'");
    return s.take(key);
  };

  // [fsk] first: tags need it
  for (auto& s : sections) {
    if (s.name != "fsk") continue;
    if (saw_fsk) throw ConfigError("scenario " + origin + ": duplicate [fsk] section");
    saw_fsk = true;
    const double f0 = to_double("f0_hz", require(s, "f0_hz"));
    const double f1 = to_double("f1_hz", require(s, "f1_hz"));
    const double bit_ms = to_double("bit_ms", require(s, "bit_ms"));
    fsk = FskParams::make(f0, f1, bit_ms * 1e-3);
    s.check_all_used(origin);
  }
  if (!saw_fsk) throw ConfigError("scenario " + origin + ": missing [fsk] section");
  spec.rx_fsk = fsk;

  for (auto& s : sections) {
    if (s.name == "fsk") continue;
    if (s.name == "grid") {
      if (saw_grid) throw ConfigError("scenario " + origin + ": duplicate [grid] section");
      saw_grid = true;
      spec.grid.n_rb = static_cast<int>(to_long("n_rb", require(s, "n_rb")));
      spec.grid.t_ofdm_seconds =
          to_double("tti_ms", require(s, "tti_ms")) * 1e-3 / GridParams::symbols_per_tti;
      if (s.has("rs_symbols")) {
        const auto v = to_list("rs_symbols", s.take("rs_symbols"));
        if (v.size() != 2)
          throw ConfigError("scenario " + origin + ": [grid] rs_symbols needs two entries");
        spec.grid.rs_symbol_indices = {static_cast<int>(v[0]), static_cast<int>(v[1])};
      }
      if (s.has("pilot_power")) spec.grid.pilot_power = to_double("pilot_power", s.take("pilot_power"));
      spec.grid.validate();
    } else if (s.name == "noise") {
      if (saw_noise) throw ConfigError("scenario " + origin + ": duplicate [noise] section");
      saw_noise = true;
      spec.noise.sigma2 = to_double("sigma2", require(s, "sigma2"));
      if (spec.noise.sigma2 < 0.0)
        throw ConfigError("scenario " + origin + ": [noise] sigma2 must be >= 0");
      if (s.has("phase_jitter")) {
        const std::string j = s.take("phase_jitter");
        if (j == "none")
          spec.noise.jitter = PhaseJitter::none;
        else if (j == "per_tti_uniform")
          spec.noise.jitter = PhaseJitter::per_tti_uniform;
        else
          throw ConfigError("scenario " + origin +
                            ": [noise] phase_jitter must be 'none' or 'per_tti_uniform'");
      }
    } else if (s.name == "channel") {
      if (s.has("gamma_amp")) spec.gamma_amp = to_double("gamma_amp", s.take("gamma_amp"));
      if (s.has("gamma_phase_deg"))
        spec.gamma_phase_rad = deg_to_rad(to_double("gamma_phase_deg", s.take("gamma_phase_deg")));
      if (s.has("gamma_profile")) {
        const std::string p = s.take("gamma_profile");
        if (p == "flat")
          spec.gamma_random_phase = false;
        else if (p == "random_phase")
          spec.gamma_random_phase = true;
        else
          throw ConfigError("scenario " + origin +
                            ": [channel] gamma_profile must be 'flat' or 'random_phase'");
      }
    } else if (s.name == "detector") {
      if (s.has("code")) detector_code = BitSequence::from_string(s.take("code"));
      if (s.has("lowpass")) {
        const std::string v = s.take("lowpass");
        if (v == "on")
          spec.detector.lowpass_enabled = true;
        else if (v == "off")
          spec.detector.lowpass_enabled = false;
        else
          throw ConfigError("scenario " + origin + ": [detector] lowpass must be 'on' or 'off'");
      }
      if (s.has("lowpass_cutoff_hz"))
        spec.detector.lowpass_cutoff_hz = to_double("lowpass_cutoff_hz", s.take("lowpass_cutoff_hz"));
      if (s.has("lowpass_order"))
        spec.detector.lowpass_order = static_cast<int>(to_long("lowpass_order", s.take("lowpass_order")));
      if (s.has("exclusion_bits"))
        spec.detector.exclusion_bits = static_cast<int>(to_long("exclusion_bits", s.take("exclusion_bits")));
    } else if (s.name == "tag") {
      TagSpec t;
      t.fsk = fsk;
      if (s.has("code"))
        t.code = BitSequence::from_string(s.take("code"));
      else if (detector_code.size() > 0)
        t.code = detector_code;
      else
        throw ConfigError("scenario " + origin +
                          ": [tag] missing 'code' (and no [detector] code to inherit)");
      t.t_seq_seconds = to_double("t_seq_ms", require(s, "t_seq_ms")) * 1e-3;
      const double cycle = to_double("t_cycle_ms", require(s, "t_cycle_ms")) * 1e-3;
      if (cycle < t.t_seq_seconds)
        throw ConfigError("scenario " + origin + ": [tag] t_cycle_ms must be >= t_seq_ms");
      t.t_wait_seconds = cycle - t.t_seq_seconds;
      t.reflect_amp = to_double("reflect_amp", require(s, "reflect_amp"));
      if (s.has("reflect_phase_deg"))
        t.reflect_phase_rad = deg_to_rad(to_double("reflect_phase_deg", s.take("reflect_phase_deg")));
      if (s.has("reflect_profile")) {
        const std::string p = s.take("reflect_profile");
        if (p == "flat")
          t.reflect_random_phase = false;
        else if (p == "random_phase")
          t.reflect_random_phase = true;
        else
          throw ConfigError("scenario " + origin +
                            ": [tag] reflect_profile must be 'flat' or 'random_phase'");
      }
      if (s.has("start_offset_ms")) {
        t.randomize_offset = false;
        t.start_offset_seconds = to_double("start_offset_ms", s.take("start_offset_ms")) * 1e-3;
      }
      if (s.has("offset_quantum_ms"))
        t.offset_quantum_seconds = to_double("offset_quantum_ms", s.take("offset_quantum_ms")) * 1e-3;
      const double expected = static_cast<double>(t.code.size()) * fsk.bit_seconds;
      if (std::abs(t.t_seq_seconds - expected) > 1e-9)
        throw ConfigError("scenario " + origin +
                          ": [tag] t_seq_ms must equal code length * bit_ms");
      spec.tags.push_back(std::move(t));
    } else if (s.name == "run") {
      if (saw_run) throw ConfigError("scenario " + origin + ": duplicate [run] section");
      saw_run = true;
      spec.p_fa_targets = to_list("p_fa", require(s, "p_fa"));
      spec.n_trials = static_cast<int>(to_long("trials", require(s, "trials")));
      spec.seed_base = static_cast<std::uint64_t>(to_long("seed", require(s, "seed")));
      if (s.has("t_obs_ms")) spec.t_obs_seconds = to_double("t_obs_ms", s.take("t_obs_ms")) * 1e-3;
      if (s.has("capture_ms"))
        spec.capture_seconds = to_double("capture_ms", s.take("capture_ms")) * 1e-3;
      if (s.has("calibration_windows"))
        spec.calibration_windows = to_long("calibration_windows", s.take("calibration_windows"));
      if (s.has("g_psl_db")) spec.g_psl_db = to_double("g_psl_db", s.take("g_psl_db"));
      if (s.has("margin_db")) spec.margin_db = to_double("margin_db", s.take("margin_db"));
      if (s.has("margins_db")) spec.margins_db = to_list("margins_db", s.take("margins_db"));
      if (s.has("roc_eta2")) spec.roc_eta2 = to_list("roc_eta2", s.take("roc_eta2"));
    } else {
      throw ConfigError("scenario " + origin + ": unknown section [" + s.name + "]");
    }
  }
  for (auto& s : sections) s.check_all_used(origin);

  if (!saw_grid) throw ConfigError("scenario " + origin + ": missing [grid] section");
  if (!saw_noise) throw ConfigError("scenario " + origin + ": missing [noise] section");
  if (!saw_run) throw ConfigError("scenario " + origin + ": missing [run] section");
  if (detector_code.size() > 0) spec.rx_code = detector_code;
  if (spec.rx_code.size() == 0 && spec.tags.empty())
    throw ConfigError("scenario " + origin +
                      ": a [detector] code is required when no tags are configured");
  spec.validate();
  return spec;
}

TrialSpec parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

} // namespace zeddet
