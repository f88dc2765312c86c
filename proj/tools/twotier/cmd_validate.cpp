#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "common.hpp"
#include "twotier/analytic.hpp"
#include "twotier/channel.hpp"
#include "twotier/geometry.hpp"
#include "twotier/montecarlo.hpp"
#include "twotier/stats.hpp"

namespace twotier::cli {

namespace {

constexpr double kKsThreshold = 0.02;
constexpr double kInversionThreshold = 1e-3;

/// Empirical-vs-analytic cdf curve on an evenly spaced quantile grid.
void write_cdf_curve(std::ostream& os, const std::vector<double>& sorted,
                     const std::function<double(double)>& cdf) {
  os << "value,empirical_cdf,analytic_cdf\n";
  const int points = 256;
  for (int i = 1; i < points; ++i) {
    const double y = sample_quantile(sorted, double(i) / points);
    os << y << ',' << (1.0 - empirical_ccdf(sorted, y)) << ',' << cdf(y)
       << '\n';
  }
}

nlohmann::json ks_check(const std::string& name, std::vector<double> samples,
                        const std::function<double(double)>& cdf) {
  const double ks = ks_statistic(samples, cdf);
  return {{"name", name},
          {"kind", "ks"},
          {"statistic", ks},
          {"threshold", kKsThreshold},
          {"samples", samples.size()},
          {"pass", ks < kKsThreshold}};
}

}  // namespace

int run_validate_dist(RunContext& ctx) {
  const CommonOptions& o = ctx.opts();
  const SystemParams& p = ctx.params();
  const DerivedConstants d = derive(p, o.mean_macro, o.mean_femtos);
  nlohmann::json checks = nlohmann::json::array();

  // Law checks exercise the bare interferer field: disable the thinning
  // features so the reference laws apply exactly.
  SystemParams bare = p;
  bare.exclusion_radius_m = 0.0;
  bare.tier_selection = false;
  const ShadowMoments& marks =
      ShadowMoments::cached(compound_mark_spec(bare, o.seed, o.moment_samples));
  const EffectiveIntensities eff =
      effective_intensities(bare, o.mean_macro, o.mean_femtos);

  if (o.mean_femtos > 0) {
    // Aggregate femtocell interference at the sectored macro station.
    ScenarioConfig mac;
    mac.params = bare;
    mac.mean_macro_users = o.mean_macro;
    mac.mean_femtos = o.mean_femtos;
    mac.observer = ObserverKind::macro_station;
    mac.sector_align = o.theta;
    std::vector<double> samples = sample_component(
        mac, InterferenceComponent::femto_to_macro, o.seed, o.reps, o.workers);
    if (!o.dump_samples.empty()) {
      std::ofstream dump(o.dump_samples);
      dump.precision(17);
      for (double v : samples) dump << v << '\n';
    }
    const LevyLaw law{
        femto_aggregate_scale(eff.femto, d.femto_strength, marks.moment())};
    auto cdf = [&law](double y) { return law.cdf(y); };
    std::sort(samples.begin(), samples.end());
    checks.push_back(ks_check("femto_aggregate_at_macro", samples, cdf));
    auto curve = ctx.open_output("femto_macro_cdf.csv");
    write_cdf_curve(curve, samples, cdf);

    // Characteristic-function inversion against the closed-form cdf.
    double gap = 0.0;
    for (int i = 0; i <= 24; ++i) {
      const double y =
          law.scale * std::pow(10.0, -1.0 + 3.0 * double(i) / 24.0);
      gap = std::max(
          gap, std::abs(law.cdf(y) - stable_cdf_by_inversion(law.scale, y)));
    }
    checks.push_back({{"name", "cf_inversion_gap"},
                      {"kind", "max_abs_gap"},
                      {"statistic", gap},
                      {"threshold", kInversionThreshold},
                      {"pass", gap < kInversionThreshold}});

    // Rival-femtocell aggregate at an omnidirectional interior femtocell.
    ScenarioConfig fem = mac;
    fem.observer = ObserverKind::femto_interior;
    fem.femto_offset_m =
        std::min(o.r0_fraction, 0.99) * bare.macro_radius_m;
    fem.observer_omni = true;
    std::vector<double> rivals = sample_component(
        fem, InterferenceComponent::femto_to_femto, o.seed, o.reps, o.workers);
    const LevyLaw rival_law{femto_aggregate_scale(
        eff.femto * bare.sectors, d.femto_strength, marks.moment())};
    auto rival_cdf = [&rival_law](double y) { return rival_law.cdf(y); };
    std::sort(rivals.begin(), rivals.end());
    checks.push_back(ks_check("femto_aggregate_at_femto", rivals, rival_cdf));
    auto rival_curve = ctx.open_output("femto_femto_cdf.csv");
    write_cdf_curve(rival_curve, rivals, rival_cdf);
  }

  if (o.mean_macro > 0) {
    // Macro-user aggregate at femtocell observers: the closed form is a
    // ccdf lower bound; empirical ccdf + 3 sigma must stay above it.
    struct Case {
      const char* name;
      ObserverKind kind;
      bool omni;
    } cases[] = {
        {"macro_bound_interior_sectored", ObserverKind::femto_interior, false},
        {"macro_bound_corner_omni", ObserverKind::femto_corner, true},
    };
    for (const Case& c : cases) {
      ScenarioConfig sc;
      sc.params = bare;
      sc.mean_macro_users = o.mean_macro;
      sc.mean_femtos = o.mean_femtos;
      sc.observer = c.kind;
      sc.femto_offset_m = c.kind == ObserverKind::femto_interior
                              ? std::min(o.r0_fraction, 0.99) *
                                    bare.macro_radius_m
                              : 0.0;
      sc.sector_align = o.theta;
      sc.observer_omni = c.omni;
      std::vector<double> samples =
          sample_component(sc, InterferenceComponent::macro_to_femto, o.seed,
                           o.reps, o.workers);
      std::sort(samples.begin(), samples.end());

      ObserverGeometry geo =
          c.kind == ObserverKind::femto_corner
              ? corner_observer_geometry(bare, sc.sector_align, c.omni)
              : interior_observer_geometry(bare, sc.femto_offset_m,
                                           sc.sector_align, c.omni);
      const MacroInterferenceBound bound(bare, geo);
      const double slot_intensity = d.macro_intensity / bare.hop_slots;

      bool valid = true;
      double worst_margin = std::numeric_limits<double>::infinity();
      auto curve = ctx.open_output(std::string(c.name) + "_ccdf.csv");
      curve << "value,empirical_ccdf,three_sigma,bound_ccdf\n";
      const double probs[] = {0.30, 0.50, 0.70, 0.80, 0.90, 0.95, 0.99};
      for (double q : probs) {
        const double y = sample_quantile(samples, q);
        if (y <= 0) continue;
        const double emp = empirical_ccdf(samples, y);
        const double sigma =
            std::sqrt(std::max(emp * (1.0 - emp), 0.0) / samples.size());
        const double bnd = bound.ccdf_lower(y, slot_intensity);
        curve << y << ',' << emp << ',' << 3.0 * sigma << ',' << bnd << '\n';
        const double margin = emp + 3.0 * sigma - bnd;
        worst_margin = std::min(worst_margin, margin);
        if (margin < 0) valid = false;
      }
      checks.push_back({{"name", c.name},
                        {"kind", "ccdf_lower_bound"},
                        {"statistic", worst_margin},
                        {"threshold", 0.0},
                        {"pass", valid}});
    }
  }

  if (p.exclusion_radius_m > 0 && o.mean_femtos > 0) {
    // Exclusion-thinned femtocell aggregate: closed form is a cdf upper
    // bound; empirical cdf must stay below it (3 sigma slack).
    ScenarioConfig mac;
    mac.params = p;  // keep the configured exclusion radius
    mac.params.tier_selection = false;
    mac.mean_macro_users = o.mean_macro;
    mac.mean_femtos = o.mean_femtos;
    mac.observer = ObserverKind::macro_station;
    mac.sector_align = o.theta;
    std::vector<double> samples = sample_component(
        mac, InterferenceComponent::femto_to_macro, o.seed, o.reps, o.workers);
    std::sort(samples.begin(), samples.end());
    const ExclusionLaw law(eff.femto, d.femto_strength, 0.5,
                           p.exclusion_radius_m, &marks);
    bool valid = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    auto curve = ctx.open_output("exclusion_cdf.csv");
    curve << "value,empirical_cdf,three_sigma,bound_cdf\n";
    const double probs[] = {0.05, 0.10, 0.30, 0.50, 0.70, 0.90, 0.95};
    for (double q : probs) {
      const double y = sample_quantile(samples, q);
      if (y <= 0) continue;
      const double emp = 1.0 - empirical_ccdf(samples, y);
      const double sigma =
          std::sqrt(std::max(emp * (1.0 - emp), 0.0) / samples.size());
      const double bnd = law.cdf(y);
      curve << y << ',' << emp << ',' << 3.0 * sigma << ',' << bnd << '\n';
      const double margin = bnd - (emp - 3.0 * sigma);
      worst_margin = std::min(worst_margin, margin);
      if (margin < 0) valid = false;
    }
    checks.push_back({{"name", "exclusion_cdf_upper_bound"},
                      {"kind", "cdf_upper_bound"},
                      {"statistic", worst_margin},
                      {"threshold", 0.0},
                      {"pass", valid}});
  }

  bool all_pass = true;
  for (const auto& c : checks) all_pass = all_pass && c["pass"].get<bool>();

  nlohmann::json report = {{"checks", checks}, {"pass", all_pass}};
  ctx.open_output("dist_report.json") << report.dump(2) << "\n";
  ctx.annotate({{"pass", all_pass}});
  ctx.finish();
  std::cout << report.dump() << "\n";
  return all_pass ? 0 : 2;
}

}  // namespace twotier::cli
