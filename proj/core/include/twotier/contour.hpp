#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "twotier/analytic.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/scenario.hpp"

namespace twotier {

enum class EvalMethod { analytic, montecarlo };

struct EvalOptions {
  EvalMethod method = EvalMethod::analytic;
  std::uint64_t seed = 1;
  std::uint64_t replications = 20'000;  ///< per simulated outage estimate
  std::uint64_t fit_samples = 10'000;   ///< out-of-cell law fitting draws
  std::uint64_t moment_samples = 1'000'000;
  int workers = 1;
};

struct TierOutage {
  std::optional<double> macro;  ///< empty when the tier carries no users
  std::optional<double> femto;
  bool strained = false;  ///< an analytic bound term left [0, 1]
};

/// Evaluates tier outage probabilities across load points, caching the
/// load-independent artifacts (mark moments, geometry tables, fitted
/// out-of-cell laws) between calls.
class OutageModel {
 public:
  OutageModel(const ScenarioConfig& base, const EvalOptions& opts);
  ~OutageModel();

  /// Outage of the observed macro uplink at the given load.
  double macro_outage(double mean_macro, double mean_femtos);
  /// Outage (analytic: lower bound) of the observed femto uplink.
  double femto_outage(double mean_macro, double mean_femtos);
  /// Both tiers; a tier with zero load reports no value.
  TierOutage evaluate(double mean_macro, double mean_femtos);

  bool strained() const { return strained_; }
  const ScenarioConfig& base() const { return base_; }

 private:
  struct Artifacts;
  const TruncGaussian& out_of_cell_fit(double mean_macro);
  ScenarioConfig macro_scenario(double mean_macro, double mean_femtos) const;
  ScenarioConfig femto_scenario(double mean_macro, double mean_femtos) const;

  ScenarioConfig base_;
  EvalOptions opts_;
  bool strained_ = false;
  std::unique_ptr<Artifacts> art_;
};

struct OperatingPoint {
  double mean_macro_users = 0.0;
  long max_femtos = -1;  ///< largest load meeting both targets; -1 = none
  bool feasible = false;
  bool capped = false;         ///< search cap reached, true maximum unknown
  bool macro_binding = false;  ///< macro target fails at max_femtos + 1
  bool femto_binding = false;
  double macro_outage = 0.0;  ///< at (mean_macro_users, max_femtos)
  double femto_outage = 0.0;
};

struct OperatingContour {
  std::vector<OperatingPoint> points;
};

struct ContourOptions {
  std::vector<double> macro_grid;  ///< empty = default_macro_grid()
  long femto_cap = 500;
  EvalOptions eval;
};

std::vector<double> default_macro_grid();

/// Largest supportable femtocell load per macrocell load, holding both
/// tiers at the configured outage target.
OperatingContour compute_contour(const ScenarioConfig& base,
                                 const ContourOptions& opts);

/// Feasible points not dominated by another point of the contour.
std::vector<OperatingPoint> pareto_prune(const std::vector<OperatingPoint>& pts);

/// The dedicated-spectrum reference system: each tier gets half the
/// processing gain, no cross-tier interference, no hopping, omni femtocells.
ScenarioConfig split_spectrum_scenario(const ScenarioConfig& shared);

struct ComparisonRow {
  double mean_macro_users = 0.0;
  long shared_femtos = -1;
  long baseline_femtos = -1;
  bool both_feasible = false;
  double femto_ratio = 0.0;  ///< shared / baseline femtocell load
};

struct ComparisonResult {
  OperatingContour shared;
  OperatingContour baseline;
  std::vector<ComparisonRow> rows;
};

ComparisonResult compare_with_baseline(const ScenarioConfig& shared,
                                       const ContourOptions& opts);

void write_contour_csv(std::ostream& os, const OperatingContour& oc);
void write_comparison_csv(std::ostream& os, const ComparisonResult& cmp);

}  // namespace twotier
