#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twotier/contour.hpp"
#include "twotier/params.hpp"
#include "twotier/scenario.hpp"

namespace twotier::cli {

/// Flags shared by every subcommand; a subcommand reads the subset it uses.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  ///< raw `key=value` pairs from --set

  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t reps = 20'000;
  std::string out_dir = "out";
  std::vector<std::string> methods;  ///< analytic / montecarlo

  // Observed-station placement.
  std::string observer = "macro";  ///< macro | femto
  double r0_fraction = 0.5;        ///< femto offset / R_c; 1.0 = cell corner
  double theta = 2.0943951023931953;  ///< sector alignment (rad)
  bool omni = false;
  int sectors = -1;  ///< >= 0 overrides the configured sector count

  // Feature switches (applied onto the configuration before hashing).
  double exclusion = -1.0;  ///< >= 0 overrides the exclusion radius
  bool tier_selection = false;
  std::string hopping;  ///< "", joint, independent
  bool split_baseline = false;

  std::string moments_cache;  ///< directory of cached mark-law tables
  std::string dump_samples;   ///< raw sample dump path (validate-dist, outage)

  double mean_macro = 24.0;  ///< --Nc
  double mean_femtos = 50.0; ///< --Nf
  std::vector<double> grid;  ///< contour grid; empty = default
  long femto_cap = 500;
  std::string against = "split";  ///< compare target: split | plain

  std::uint64_t moment_samples = 1'000'000;
  std::uint64_t fit_samples = 10'000;
};

/// Configuration could not be assembled; carries the per-key diagnostics.
struct ConfigFailure : std::runtime_error {
  explicit ConfigFailure(std::vector<ConfigError> errs)
      : std::runtime_error("invalid configuration"), errors(std::move(errs)) {}
  std::vector<ConfigError> errors;
};

/// Everything a subcommand needs: resolved parameters, the run directory
/// named by the manifest hash, and the manifest being assembled.
class RunContext {
 public:
  RunContext(std::string subcommand, CommonOptions opts);

  const CommonOptions& opts() const { return opts_; }
  const SystemParams& params() const { return params_; }
  const std::filesystem::path& run_dir() const { return run_dir_; }
  std::uint64_t manifest_hash() const { return manifest_hash_; }

  /// Observed-station scenario per the observer flags.
  ScenarioConfig scenario() const;
  /// Evaluation knobs for the given method.
  EvalOptions eval_options(EvalMethod method) const;
  /// Parse the --method list (with `fallback` when none given).
  std::vector<EvalMethod> methods(
      std::initializer_list<EvalMethod> fallback) const;

  /// Opens `<run_dir>/<name>` and records it in the manifest.
  std::ofstream open_output(const std::string& name);
  /// Merge extra fields into the manifest record.
  void annotate(const nlohmann::json& fields);
  /// Stamp the wall clock and write manifest.json.
  void finish();

 private:
  CommonOptions opts_;
  SystemParams params_;
  std::filesystem::path run_dir_;
  std::uint64_t manifest_hash_ = 0;
  nlohmann::json manifest_;
  std::chrono::steady_clock::time_point started_;
};

/// Resolve config file + --set overrides + feature flags into parameters.
SystemParams load_params(const CommonOptions& opts);

void print_config_errors(const std::vector<ConfigError>& errors);

/// Lower-cased hex digest used for directory names and manifests.
std::string hex16(std::uint64_t value);

/// `scenario,N_c,N_f,p_out_c,p_out_f,binding,method` rows for one contour.
void write_contour_rows(std::ostream& os, const OperatingContour& oc,
                        const std::string& scenario_name,
                        const std::string& method_name);
extern const char* kContourCsvHeader;

int run_validate_dist(RunContext& ctx);
int run_outage(RunContext& ctx);
int run_contour(RunContext& ctx);
int run_compare(RunContext& ctx);
int run_moments(RunContext& ctx);

}  // namespace twotier::cli
