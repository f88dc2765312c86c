#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "twotier/channel.hpp"
#include "twotier/errors.hpp"

namespace twotier::cli {

namespace {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Split a `key=value` override; returns false on malformed input.
bool split_override(const std::string& text, std::string& key,
                    std::string& value) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) return false;
  key = text.substr(0, eq);
  value = text.substr(eq + 1);
  while (!key.empty() && key.back() == ' ') key.pop_back();
  while (!value.empty() && value.front() == ' ') value.erase(value.begin());
  return true;
}

}  // namespace

SystemParams load_params(const CommonOptions& opts) {
  RawConfig raw;
  std::vector<ConfigError> errors;

  if (!opts.config_path.empty()) {
    ParsedConfig parsed = parse_config_file(opts.config_path);
    errors.insert(errors.end(), parsed.errors.begin(), parsed.errors.end());
    raw = std::move(parsed.values);
  }
  for (const std::string& item : opts.overrides) {
    std::string key, value;
    if (!split_override(item, key, value)) {
      errors.push_back({ConfigError::Kind::parse, item,
                        "--set expects key=value, got '" + item + "'"});
      continue;
    }
    raw[key] = value;
  }

  // Feature flags write through the same keys as the config file so the
  // manifest hash reflects them.
  if (opts.exclusion >= 0.0) raw["R_f_exc"] = format_g17(opts.exclusion);
  if (opts.tier_selection) raw["tier_selection"] = "true";
  if (!opts.hopping.empty()) raw["hopping_mode"] = opts.hopping;
  if (opts.sectors >= 0) raw["N_sec"] = std::to_string(opts.sectors);

  if (!errors.empty()) throw ConfigFailure(std::move(errors));

  ValidationResult checked = validate_with_defaults(raw);
  if (!checked.ok()) throw ConfigFailure(std::move(checked.errors));
  return checked.params;
}

void print_config_errors(const std::vector<ConfigError>& errors) {
  for (const ConfigError& e : errors)
    std::cerr << "config error [" << e.key << "]: " << e.message << "\n";
}

std::string hex16(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)value);
  return buf;
}

RunContext::RunContext(std::string subcommand, CommonOptions opts)
    : opts_(std::move(opts)), started_(std::chrono::steady_clock::now()) {
  params_ = load_params(opts_);
  if (!opts_.moments_cache.empty())
    ShadowMoments::set_cache_dir(opts_.moments_cache);

  // The manifest hash pins everything that influences the outputs.
  std::uint64_t h = params_hash(params_);
  auto mix = [&h](const std::string& s) { h = hash_combine(h, s); };
  mix(subcommand);
  mix("seed=" + std::to_string(opts_.seed));
  mix("reps=" + std::to_string(opts_.reps));
  mix("observer=" + opts_.observer);
  mix("R0=" + format_g17(opts_.r0_fraction));
  mix("theta=" + format_g17(opts_.theta));
  mix(opts_.omni ? "omni=1" : "omni=0");
  mix("Nc=" + format_g17(opts_.mean_macro));
  mix("Nf=" + format_g17(opts_.mean_femtos));
  for (const std::string& m : opts_.methods) mix("method=" + m);
  for (double g : opts_.grid) mix("grid=" + format_g17(g));
  mix("cap=" + std::to_string(opts_.femto_cap));
  mix(opts_.split_baseline ? "split=1" : "split=0");
  mix("against=" + opts_.against);
  mix("moment_samples=" + std::to_string(opts_.moment_samples));
  mix("fit_samples=" + std::to_string(opts_.fit_samples));
  manifest_hash_ = h;

  run_dir_ = std::filesystem::path(opts_.out_dir) / hex16(manifest_hash_);
  std::filesystem::create_directories(run_dir_);

  manifest_["subcommand"] = subcommand;
  manifest_["version"] = TWOTIER_VERSION;
  manifest_["manifest_hash"] = hex16(manifest_hash_);
  manifest_["params_hash"] = hex16(params_hash(params_));
  nlohmann::json raw;
  for (const auto& [k, v] : to_raw(params_)) raw[k] = v;
  manifest_["params"] = raw;
  manifest_["seed"] = opts_.seed;
  manifest_["replications"] = opts_.reps;
  manifest_["workers"] = opts_.workers;
  manifest_["methods"] = opts_.methods;
  manifest_["observer"] = {{"kind", opts_.observer},
                           {"R0", opts_.r0_fraction},
                           {"theta", opts_.theta},
                           {"omni", opts_.omni}};
  manifest_["loads"] = {{"N_c", opts_.mean_macro}, {"N_f", opts_.mean_femtos}};
  manifest_["features"] = {
      {"exclusion_radius_m", params_.exclusion_radius_m},
      {"tier_selection", params_.tier_selection},
      {"hopping",
       params_.hopping == HoppingMode::joint ? "joint" : "independent"},
      {"split_baseline", opts_.split_baseline}};
  manifest_["outputs"] = nlohmann::json::array();
}

ScenarioConfig RunContext::scenario() const {
  ScenarioConfig sc;
  sc.params = params_;
  sc.mean_macro_users = opts_.mean_macro;
  sc.mean_femtos = opts_.mean_femtos;
  sc.sector_align = opts_.theta;
  sc.observer_omni = opts_.omni;
  sc.cross_tier = true;
  if (opts_.observer == "macro") {
    sc.observer = ObserverKind::macro_station;
  } else if (opts_.observer == "femto") {
    if (opts_.r0_fraction >= 1.0) {
      sc.observer = ObserverKind::femto_corner;
    } else {
      sc.observer = ObserverKind::femto_interior;
      sc.femto_offset_m = opts_.r0_fraction * params_.macro_radius_m;
    }
  } else {
    throw ConfigFailure({{ConfigError::Kind::parse, "observer",
                          "--observer must be macro or femto, got '" +
                              opts_.observer + "'"}});
  }
  return sc;
}

EvalOptions RunContext::eval_options(EvalMethod method) const {
  EvalOptions ev;
  ev.method = method;
  ev.seed = opts_.seed;
  ev.replications = opts_.reps;
  ev.fit_samples = opts_.fit_samples;
  ev.moment_samples = opts_.moment_samples;
  ev.workers = opts_.workers;
  return ev;
}

std::vector<EvalMethod> RunContext::methods(
    std::initializer_list<EvalMethod> fallback) const {
  if (opts_.methods.empty()) return fallback;
  std::vector<EvalMethod> out;
  for (const std::string& m : opts_.methods) {
    if (m == "analytic")
      out.push_back(EvalMethod::analytic);
    else if (m == "montecarlo")
      out.push_back(EvalMethod::montecarlo);
    else
      throw ConfigFailure({{ConfigError::Kind::parse, "method",
                            "--method must be analytic or montecarlo, got '" +
                                m + "'"}});
  }
  return out;
}

std::ofstream RunContext::open_output(const std::string& name) {
  const std::filesystem::path path = run_dir_ / name;
  manifest_["outputs"].push_back(path.string());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path.string());
  os.precision(17);
  return os;
}

void RunContext::annotate(const nlohmann::json& fields) {
  for (auto it = fields.begin(); it != fields.end(); ++it)
    manifest_[it.key()] = it.value();
}

void RunContext::finish() {
  const auto elapsed = std::chrono::steady_clock::now() - started_;
  manifest_["wall_clock_seconds"] =
      std::chrono::duration<double>(elapsed).count();
  std::ofstream os(run_dir_ / "manifest.json");
  os << manifest_.dump(2) << "\n";
}

const char* kContourCsvHeader =
    "scenario,N_c,N_f,p_out_c,p_out_f,binding,method\n";

namespace {

std::string binding_label(const OperatingPoint& pt) {
  if (!pt.feasible) return "infeasible";
  if (pt.capped) return "cap";
  if (pt.macro_binding && pt.femto_binding) return "both";
  if (pt.macro_binding) return "macro";
  if (pt.femto_binding) return "femto";
  return "none";
}

}  // namespace

void write_contour_rows(std::ostream& os, const OperatingContour& oc,
                        const std::string& scenario_name,
                        const std::string& method_name) {
  for (const OperatingPoint& pt : oc.points) {
    os << scenario_name << ',' << pt.mean_macro_users << ',' << pt.max_femtos
       << ',' << pt.macro_outage << ',' << pt.femto_outage << ','
       << binding_label(pt) << ',' << method_name << '\n';
  }
}

}  // namespace twotier::cli
