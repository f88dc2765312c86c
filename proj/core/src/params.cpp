#include "twotier/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "twotier/errors.hpp"

namespace twotier {
namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  try {
    std::size_t pos = 0;
    out = std::stoi(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "off" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double SystemParams::cross_sigma_db() const {
  return shadow_mode == ShadowVarianceMode::ratio
             ? shadow_sigma_db * std::sqrt(2.0)
             : shadow_sigma_db;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "R_c",       "R_f",     "U_f",      "N_sec",
      "N_hop",     "G",       "gamma",    "epsilon",
      "P_r_c",     "P_r_f",   "sigma_dB", "alpha",
      "beta",      "d_0c",    "d_0f",     "f_carrier",
      "R_f_exc",   "hopping_mode",        "tier_selection",
      "shadow_variance_mode",
  };
  return keys;
}

ValidationResult validate(const RawConfig& raw) {
  ValidationResult r;
  auto& errs = r.errors;
  SystemParams& p = r.params;

  for (const auto& [key, value] : raw) {
    bool known = false;
    for (const auto& k : config_keys()) {
      if (k == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      errs.push_back({ConfigError::Kind::unknown_key, key,
                      "unknown config key '" + key + "'"});
    }
  }
  for (const auto& k : config_keys()) {
    if (!raw.count(k)) {
      errs.push_back(
          {ConfigError::Kind::missing_key, k, "missing config key '" + k + "'"});
    }
  }
  auto get_double = [&](const std::string& key, double& dst) {
    auto it = raw.find(key);
    if (it == raw.end()) return;
    double v;
    if (!parse_double(trim(it->second), v)) {
      errs.push_back({ConfigError::Kind::parse, key,
                      key + ": cannot parse '" + it->second + "' as a number"});
      return;
    }
    dst = v;
  };
  auto get_int = [&](const std::string& key, int& dst) {
    auto it = raw.find(key);
    if (it == raw.end()) return;
    int v;
    if (!parse_int(trim(it->second), v)) {
      errs.push_back({ConfigError::Kind::parse, key,
                      key + ": cannot parse '" + it->second + "' as an integer"});
      return;
    }
    dst = v;
  };

  get_double("R_c", p.macro_radius_m);
  get_double("R_f", p.femto_radius_m);
  get_double("U_f", p.mean_femto_users);
  get_int("N_sec", p.sectors);
  get_int("N_hop", p.hop_slots);
  get_double("G", p.processing_gain);
  get_double("gamma", p.target_sir);
  get_double("epsilon", p.target_outage);
  get_double("P_r_c", p.macro_rx_power);
  get_double("P_r_f", p.femto_rx_power);
  get_double("sigma_dB", p.shadow_sigma_db);
  get_double("alpha", p.outdoor_exponent);
  get_double("beta", p.indoor_exponent);
  get_double("d_0c", p.outdoor_ref_m);
  get_double("d_0f", p.indoor_ref_m);
  get_double("f_carrier", p.carrier_hz);
  get_double("R_f_exc", p.exclusion_radius_m);

  if (auto it = raw.find("hopping_mode"); it != raw.end()) {
    const std::string v = trim(it->second);
    if (v == "joint") {
      p.hopping = HoppingMode::joint;
    } else if (v == "independent") {
      p.hopping = HoppingMode::independent;
    } else {
      errs.push_back({ConfigError::Kind::parse, "hopping_mode",
                      "hopping_mode must be 'joint' or 'independent'"});
    }
  }
  if (auto it = raw.find("tier_selection"); it != raw.end()) {
    if (!parse_bool(trim(it->second), p.tier_selection)) {
      errs.push_back({ConfigError::Kind::parse, "tier_selection",
                      "tier_selection must be a boolean"});
    }
  }
  if (auto it = raw.find("shadow_variance_mode"); it != raw.end()) {
    const std::string v = trim(it->second);
    if (v == "ratio") {
      p.shadow_mode = ShadowVarianceMode::ratio;
    } else if (v == "single") {
      p.shadow_mode = ShadowVarianceMode::single;
    } else {
      errs.push_back({ConfigError::Kind::parse, "shadow_variance_mode",
                      "shadow_variance_mode must be 'ratio' or 'single'"});
    }
  }

  auto range = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) errs.push_back({ConfigError::Kind::out_of_range, key, msg});
  };
  range(p.macro_radius_m > 0, "R_c", "R_c must be > 0");
  range(p.femto_radius_m > 0, "R_f", "R_f must be > 0");
  range(p.mean_femto_users >= 0, "U_f", "U_f must be >= 0");
  range(p.sectors >= 1, "N_sec", "N_sec must be >= 1");
  range(p.hop_slots >= 1, "N_hop", "N_hop must be >= 1");
  range(p.processing_gain >= 1, "G", "G must be >= 1");
  range(p.target_sir > 0, "gamma", "gamma must be > 0");
  range(p.target_outage > 0 && p.target_outage <= 1, "epsilon",
        "epsilon must lie in (0, 1]");
  range(p.macro_rx_power > 0, "P_r_c", "P_r_c must be > 0");
  range(p.femto_rx_power > 0, "P_r_f", "P_r_f must be > 0");
  range(p.shadow_sigma_db >= 0, "sigma_dB", "sigma_dB must be >= 0");
  range(p.outdoor_exponent > 2, "alpha", "alpha must be > 2");
  range(p.indoor_exponent >= 2, "beta", "beta must be >= 2");
  range(p.outdoor_ref_m > 0, "d_0c", "d_0c must be > 0");
  range(p.indoor_ref_m > 0, "d_0f", "d_0f must be > 0");
  range(p.carrier_hz > 0, "f_carrier", "f_carrier must be > 0");
  range(p.exclusion_radius_m >= 0, "R_f_exc", "R_f_exc must be >= 0");

  auto pair = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) errs.push_back({ConfigError::Kind::inconsistent_pair, key, msg});
  };
  pair(p.femto_radius_m < p.macro_radius_m, "R_f",
       "R_f must be smaller than R_c");
  pair(static_cast<double>(p.hop_slots) <= p.processing_gain, "N_hop",
       "N_hop cannot exceed the processing gain G");
  pair(p.indoor_ref_m < p.outdoor_ref_m, "d_0f",
       "d_0f must be smaller than d_0c");
  pair(p.exclusion_radius_m < p.macro_radius_m, "R_f_exc",
       "R_f_exc must be smaller than R_c");

  return r;
}

ValidationResult validate_with_defaults(const RawConfig& overrides) {
  RawConfig merged = to_raw(SystemParams::defaults());
  for (const auto& [k, v] : overrides) merged[k] = v;
  // Unknown override keys would be silently dropped by the merge, so check
  // them against the accepted list first.
  ValidationResult pre;
  for (const auto& [key, value] : overrides) {
    bool known = false;
    for (const auto& k : config_keys()) {
      if (k == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      pre.errors.push_back({ConfigError::Kind::unknown_key, key,
                            "unknown config key '" + key + "'"});
    }
  }
  if (!pre.ok()) return pre;
  return validate(merged);
}

RawConfig to_raw(const SystemParams& p) {
  RawConfig raw;
  raw["R_c"] = format_double(p.macro_radius_m);
  raw["R_f"] = format_double(p.femto_radius_m);
  raw["U_f"] = format_double(p.mean_femto_users);
  raw["N_sec"] = std::to_string(p.sectors);
  raw["N_hop"] = std::to_string(p.hop_slots);
  raw["G"] = format_double(p.processing_gain);
  raw["gamma"] = format_double(p.target_sir);
  raw["epsilon"] = format_double(p.target_outage);
  raw["P_r_c"] = format_double(p.macro_rx_power);
  raw["P_r_f"] = format_double(p.femto_rx_power);
  raw["sigma_dB"] = format_double(p.shadow_sigma_db);
  raw["alpha"] = format_double(p.outdoor_exponent);
  raw["beta"] = format_double(p.indoor_exponent);
  raw["d_0c"] = format_double(p.outdoor_ref_m);
  raw["d_0f"] = format_double(p.indoor_ref_m);
  raw["f_carrier"] = format_double(p.carrier_hz);
  raw["R_f_exc"] = format_double(p.exclusion_radius_m);
  raw["hopping_mode"] =
      p.hopping == HoppingMode::joint ? "joint" : "independent";
  raw["tier_selection"] = p.tier_selection ? "true" : "false";
  raw["shadow_variance_mode"] =
      p.shadow_mode == ShadowVarianceMode::ratio ? "ratio" : "single";
  return raw;
}

double hexagon_area(double circumradius) {
  return 1.5 * std::sqrt(3.0) * circumradius * circumradius;
}

DerivedConstants derive(const SystemParams& p, double mean_macro_users,
                        double mean_femtos) {
  if (mean_macro_users < 0 || mean_femtos < 0) {
    throw DomainError("derive: per-cell loads must be >= 0");
  }
  DerivedConstants d;
  const double wavelength_term_c =
      kSpeedOfLight / (4.0 * M_PI * p.carrier_hz * p.outdoor_ref_m);
  const double wavelength_term_f =
      kSpeedOfLight / (4.0 * M_PI * p.carrier_hz * p.indoor_ref_m);
  d.macro_ref_gain = wavelength_term_c * wavelength_term_c;
  d.femto_ref_gain = wavelength_term_f * wavelength_term_f;
  d.femto_strength = p.femto_rx_power *
                     std::pow(p.femto_radius_m, p.indoor_exponent) *
                     (d.macro_ref_gain / d.femto_ref_gain) *
                     std::pow(p.outdoor_ref_m, p.outdoor_exponent) /
                     std::pow(p.indoor_ref_m, p.indoor_exponent);
  d.cell_area = hexagon_area(p.macro_radius_m);
  d.macro_intensity = mean_macro_users / d.cell_area;
  d.femto_intensity = mean_femtos / d.cell_area;
  d.macro_threshold = p.processing_gain * p.macro_rx_power /
                      (p.target_sir * static_cast<double>(p.hop_slots));
  d.femto_threshold = p.processing_gain * p.femto_rx_power /
                      (p.target_sir * static_cast<double>(p.hop_slots));
  return d;
}

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back({ConfigError::Kind::parse,
                            "line " + std::to_string(lineno),
                            "expected 'key = value' on line " +
                                std::to_string(lineno)});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      out.errors.push_back({ConfigError::Kind::parse,
                            "line " + std::to_string(lineno),
                            "empty key or value on line " +
                                std::to_string(lineno)});
      continue;
    }
    out.values[key] = value;
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParsedConfig out;
    out.errors.push_back({ConfigError::Kind::parse, path,
                          "cannot open config file '" + path + "'"});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::uint64_t hash_combine(std::uint64_t h, const std::string& more) {
  for (unsigned char c : more) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t params_hash(const SystemParams& p) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& [k, v] : to_raw(p)) {
    h = hash_combine(h, k);
    h = hash_combine(h, "=");
    h = hash_combine(h, v);
    h = hash_combine(h, ";");
  }
  return h;
}

}  // namespace twotier
