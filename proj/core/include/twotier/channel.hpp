#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twotier/params.hpp"
#include "twotier/rng.hpp"

namespace twotier {

/// dB-to-natural-log conversion for lognormal shadowing: ln X = a * X_dB.
inline constexpr double kLn10Over10 = 0.23025850929940456840;

/// Distance-power law gain: ref_gain * (ref_dist / dist)^exponent.
double path_gain(double ref_gain, double ref_dist, double exponent,
                 double dist);

/// Transmit power of a macrocell user at `dist` from its base station,
/// chosen so the station receives exactly the controlled power.
double transmit_power_macro(const SystemParams& p,
                            const DerivedConstants& d, double dist);

/// Transmit power of a femtocell user under worst-case (cell-edge) control.
double transmit_power_femto(const SystemParams& p, const DerivedConstants& d);

/// Interference at an observing station from a power-controlled macro user:
/// controlled_power * shadow_ratio * (own_dist / observed_dist)^alpha.
double macro_interference_term(const SystemParams& p, double controlled_power,
                               double own_dist, double observed_dist,
                               double shadow_ratio);

/// Interference from one femtocell user observed outdoors at `dist`.
double femto_interference_term(const SystemParams& p,
                               const DerivedConstants& d, double dist,
                               double shadow_ratio);

/// Lognormal shadowing with 10*log10(X) ~ N(0, sigma_db^2).
struct ShadowLaw {
  double sigma_db = 0.0;

  double sigma_ln() const { return kLn10Over10 * sigma_db; }
  double sample(RngStream& rng) const { return rng.shadow_factor(sigma_db); }
  /// E[X^q] = exp(q^2 sigma_ln^2 / 2).
  double moment(double q) const;
  double cdf(double x) const;
  double ccdf(double x) const;
  /// E[X^q ; X <= u].
  double partial_moment(double q, double u) const;
};

/// Parameters pinning down the law of a transmitting femtocell's aggregate
/// mark: sum of `count` iid lognormal shadow ratios, where count is Poisson
/// (mean_users) conditioned on being at least 1.
struct CompoundMarkSpec {
  double sigma_db = 0.0;    ///< per-ratio lognormal spread
  double mean_users = 0.0;  ///< Poisson mean before conditioning
  double order = 0.5;       ///< moment order tracked alongside the law
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;

  friend bool operator==(const CompoundMarkSpec&,
                         const CompoundMarkSpec&) = default;
};

/// The per-slot aggregate mark law implied by the system parameters.
CompoundMarkSpec compound_mark_spec(const SystemParams& p,
                                    std::uint64_t seed,
                                    std::uint64_t samples = 1'000'000);

/// Monte Carlo estimate of the aggregate mark law: fractional moment,
/// distribution function, and partial moment on a log-spaced grid.
class ShadowMoments {
 public:
  static ShadowMoments estimate(const CompoundMarkSpec& spec);
  /// Process-wide memoized estimate (thread safe).
  static const ShadowMoments& cached(const CompoundMarkSpec& spec);
  /// Directory of per-spec CSV files consulted (and filled) by cached();
  /// empty disables the on-disk layer.
  static void set_cache_dir(const std::string& dir);

  const CompoundMarkSpec& spec() const { return spec_; }
  /// E[Psi^order].
  double moment() const { return moment_; }
  /// E[Psi].
  double mean() const { return mean_; }
  double cdf(double u) const;
  double ccdf(double u) const { return 1.0 - cdf(u); }
  /// E[Psi^order ; Psi <= u].
  double partial_moment(double u) const;

  void write_csv(std::ostream& os) const;
  static ShadowMoments read_csv(std::istream& is);
  /// Loads the law from `path` when present and matching `spec`;
  /// otherwise estimates it and stores it there for next time.
  static ShadowMoments load_or_estimate(const CompoundMarkSpec& spec,
                                        const std::string& path);

 private:
  ShadowMoments() = default;

  CompoundMarkSpec spec_;
  double moment_ = 1.0;
  double mean_ = 1.0;
  bool degenerate_ = false;  ///< all samples equal (sigma = 0, tiny mean)
  double atom_ = 1.0;
  std::vector<double> grid_;     ///< increasing mark values
  std::vector<double> cdf_;      ///< P(Psi <= grid)
  std::vector<double> partial_;  ///< E[Psi^order ; Psi <= grid]
};

}  // namespace twotier
