#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace twotier {

/// How femtocell users pick their hopping slot.
///  joint:       all users of a femtocell share one slot.
///  independent: each user picks a slot on its own.
enum class HoppingMode { joint, independent };

/// Variance convention for the log-normal factor on every cross-station
/// link (interference paths).  `ratio` models it as the quotient of two
/// independent per-station factors (variance doubles); `single` keeps the
/// per-station variance.
enum class ShadowVarianceMode { ratio, single };

/// Static description of the network; per-run loads (mean user / femtocell
/// counts) are passed separately to the operations that need them.
struct SystemParams {
  double macro_radius_m = 500.0;    ///< cell circumradius R_c
  double femto_radius_m = 20.0;     ///< femtocell coverage radius R_f
  double mean_femto_users = 5.0;    ///< mean users per femtocell U_f
  int sectors = 3;                  ///< antenna sectors per station N_sec
  int hop_slots = 1;                ///< frequency-hopping slots N_hop
  double processing_gain = 128.0;   ///< spreading gain G
  double target_sir = 2.0;          ///< SIR threshold (linear)
  double target_outage = 0.1;       ///< per-tier outage ceiling epsilon
  double macro_rx_power = 1.0;      ///< power-control target at a macrocell
  double femto_rx_power = 1.0;      ///< power-control target at a femtocell
  double shadow_sigma_db = 4.0;     ///< per-link lognormal sigma (dB)
  double outdoor_exponent = 4.0;    ///< path-loss exponent, outdoor links
  double indoor_exponent = 2.0;     ///< path-loss exponent, indoor links
  double outdoor_ref_m = 100.0;     ///< outdoor reference distance
  double indoor_ref_m = 5.0;        ///< indoor reference distance
  double carrier_hz = 2.0e9;        ///< carrier frequency
  double exclusion_radius_m = 0.0;  ///< femtocell-free disc radius (0 = off)
  HoppingMode hopping = HoppingMode::joint;
  bool tier_selection = false;      ///< hand users near a femtocell over to it
  ShadowVarianceMode shadow_mode = ShadowVarianceMode::ratio;

  /// Effective sigma (dB) of the cross-station shadowing factor.
  double cross_sigma_db() const;

  /// Table defaults (the values above).
  static SystemParams defaults() { return SystemParams{}; }
};

/// Quantities derived from SystemParams plus the two per-run loads.
struct DerivedConstants {
  double macro_ref_gain = 0.0;   ///< free-space gain at the outdoor reference
  double femto_ref_gain = 0.0;   ///< free-space gain at the indoor reference
  double femto_strength = 0.0;   ///< per-femtocell interference scale Q_f
  double cell_area = 0.0;        ///< hexagon area |H|
  double macro_intensity = 0.0;  ///< lambda_c = N_c / |H|
  double femto_intensity = 0.0;  ///< lambda_f = N_f / |H|
  double macro_threshold = 0.0;  ///< outage interference threshold rho_c
  double femto_threshold = 0.0;  ///< outage interference threshold rho_f
};

struct ConfigError {
  enum class Kind {
    missing_key,
    unknown_key,
    parse,
    out_of_range,
    inconsistent_pair,
  };
  Kind kind;
  std::string key;
  std::string message;
};

/// Raw "key = value" pairs; ordered so diagnostics are deterministic.
using RawConfig = std::map<std::string, std::string>;

struct ValidationResult {
  SystemParams params;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};

/// All accepted config keys, in canonical order.
const std::vector<std::string>& config_keys();

/// Check a complete raw config and produce SystemParams.  Every violated
/// constraint is reported, not just the first.
ValidationResult validate(const RawConfig& raw);

/// Merge partial overrides onto defaults and validate.
ValidationResult validate_with_defaults(const RawConfig& overrides);

/// Serialize back to a raw config (used for hashing and manifests).
RawConfig to_raw(const SystemParams& p);

/// Exact hexagon area (3*sqrt(3)/2) r^2.
double hexagon_area(double circumradius);

/// Derive per-run constants; mean_macro_users/mean_femtos are the expected
/// counts per cell (N_c, N_f).
DerivedConstants derive(const SystemParams& p, double mean_macro_users,
                        double mean_femtos);

/// Parse a config file: one `key = value` per line, `#` comments, blank
/// lines ignored.  Parse problems are reported with line numbers.
struct ParsedConfig {
  RawConfig values;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

/// FNV-1a over the canonical serialization; stable across runs.
std::uint64_t params_hash(const SystemParams& p);
std::uint64_t hash_combine(std::uint64_t h, const std::string& more);

}  // namespace twotier
