#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "twotier/contour.hpp"

using namespace twotier;

namespace {

ScenarioConfig corner_scenario() {
  ScenarioConfig sc;
  sc.observer = ObserverKind::femto_corner;
  sc.mean_macro_users = 24.0;
  sc.mean_femtos = 50.0;
  return sc;
}

EvalOptions fast_analytic() {
  EvalOptions e;
  e.method = EvalMethod::analytic;
  e.seed = 1;
  e.fit_samples = 4000;
  e.moment_samples = 200000;
  return e;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_SUITE_BEGIN("contour");

TEST_CASE("outage model: unloaded tiers report no value, loads are monotone") {
  OutageModel model(corner_scenario(), fast_analytic());

  const TierOutage empty_macro = model.evaluate(0.0, 30.0);
  CHECK_FALSE(empty_macro.macro.has_value());
  REQUIRE(empty_macro.femto.has_value());
  const TierOutage empty_femto = model.evaluate(24.0, 0.0);
  REQUIRE(empty_femto.macro.has_value());
  CHECK_FALSE(empty_femto.femto.has_value());

  const TierOutage both = model.evaluate(24.0, 30.0);
  REQUIRE(both.macro.has_value());
  REQUIRE(both.femto.has_value());
  CHECK(*both.macro >= 0.0);
  CHECK(*both.macro <= 1.0);
  CHECK(*both.femto >= 0.0);
  CHECK(*both.femto <= 1.0);

  // More femtocells cannot help either tier.
  double prev_m = -1.0, prev_f = -1.0;
  for (double n_f : {0.0, 15.0, 30.0, 60.0, 120.0}) {
    const double m = model.macro_outage(24.0, n_f);
    const double f = n_f > 0.0 ? model.femto_outage(24.0, n_f) : 0.0;
    CHECK(m >= prev_m - 1e-9);
    CHECK(f >= prev_f - 1e-9);
    prev_m = m;
    prev_f = f;
  }
}

TEST_CASE("evaluations are deterministic for a fixed seed") {
  OutageModel a(corner_scenario(), fast_analytic());
  OutageModel b(corner_scenario(), fast_analytic());
  CHECK(a.macro_outage(24.0, 40.0) == b.macro_outage(24.0, 40.0));
  CHECK(a.femto_outage(24.0, 40.0) == b.femto_outage(24.0, 40.0));

  EvalOptions mc = fast_analytic();
  mc.method = EvalMethod::montecarlo;
  mc.replications = 400;
  OutageModel c(corner_scenario(), mc);
  OutageModel d(corner_scenario(), mc);
  CHECK(c.macro_outage(24.0, 40.0) == d.macro_outage(24.0, 40.0));
  CHECK(c.femto_outage(24.0, 40.0) == d.femto_outage(24.0, 40.0));
}

TEST_CASE("contour search equals an exhaustive scan and is antitone") {
  ScenarioConfig sc = corner_scenario();
  sc.params.target_outage = 0.1;
  ContourOptions opts;
  opts.macro_grid = {0.0, 8.0, 16.0, 24.0, 32.0};
  opts.femto_cap = 400;
  opts.eval = fast_analytic();

  const OperatingContour oc = compute_contour(sc, opts);
  REQUIRE(oc.points.size() == opts.macro_grid.size());

  OutageModel model(sc, opts.eval);
  long prev = opts.femto_cap + 1;
  for (const OperatingPoint& pt : oc.points) {
    CAPTURE(pt.mean_macro_users);
    // Independent exhaustive scan over the same weave of feasibility.
    long best = -1;
    for (long n = 0; n <= opts.femto_cap; ++n) {
      const TierOutage t =
          model.evaluate(pt.mean_macro_users, static_cast<double>(n));
      const bool ok = (!t.macro || *t.macro <= sc.params.target_outage) &&
                      (!t.femto || *t.femto <= sc.params.target_outage);
      if (ok) {
        best = n;
      } else if (n > 0) {
        break;  // both outages are monotone in the femtocell load
      }
    }
    CHECK(pt.max_femtos == best);
    CHECK(pt.feasible == (best >= 0));
    if (pt.feasible) {
      CHECK(pt.macro_outage <= sc.params.target_outage + 1e-12);
      CHECK(pt.femto_outage <= sc.params.target_outage + 1e-12);
    }
    CHECK(pt.max_femtos <= prev);  // antitone in the macro load
    prev = pt.max_femtos;
  }
}

TEST_CASE("binding flags identify the constraint that stops growth") {
  ScenarioConfig sc = corner_scenario();
  sc.params.target_outage = 0.1;
  ContourOptions opts;
  opts.macro_grid = {24.0};
  opts.femto_cap = 400;
  opts.eval = fast_analytic();
  const OperatingPoint pt = compute_contour(sc, opts).points.at(0);
  REQUIRE(pt.feasible);
  REQUIRE_FALSE(pt.capped);
  CHECK((pt.macro_binding || pt.femto_binding));
  // Whichever constraint is flagged must indeed fail one femtocell later.
  OutageModel model(sc, opts.eval);
  const TierOutage next =
      model.evaluate(24.0, static_cast<double>(pt.max_femtos + 1));
  if (pt.macro_binding) CHECK(*next.macro > sc.params.target_outage);
  if (pt.femto_binding) CHECK(*next.femto > sc.params.target_outage);
}

TEST_CASE("extreme targets produce infeasible and capped points") {
  ScenarioConfig sc = corner_scenario();
  ContourOptions opts;
  opts.macro_grid = {24.0};
  opts.femto_cap = 40;
  opts.eval = fast_analytic();

  // A macro load far above the despreading headroom fails even at zero
  // femtocells; a tight target alone is not enough because the unloaded
  // macro tier is essentially outage-free under power control.
  sc.params.target_outage = 1e-9;
  opts.macro_grid = {90.0};
  const OperatingPoint dead = compute_contour(sc, opts).points.at(0);
  CHECK_FALSE(dead.feasible);
  CHECK(dead.max_femtos == -1);
  CHECK(dead.macro_binding);

  sc.params.target_outage = 0.999999;
  opts.macro_grid = {24.0};
  const OperatingPoint open = compute_contour(sc, opts).points.at(0);
  CHECK(open.feasible);
  CHECK(open.capped);
  CHECK(open.max_femtos == 40);
}

TEST_CASE("zero load rows are vacuously feasible") {
  ScenarioConfig sc = corner_scenario();
  sc.params.target_outage = 0.1;
  ContourOptions opts;
  opts.macro_grid = {0.0};
  opts.femto_cap = 300;
  opts.eval = fast_analytic();
  const OperatingPoint pt = compute_contour(sc, opts).points.at(0);
  // With no macro users only the femto constraint can bind.
  CHECK(pt.feasible);
  CHECK(pt.femto_binding);
  CHECK_FALSE(pt.macro_binding);
  CHECK(pt.max_femtos > 0);
}

TEST_CASE("pareto pruning drops dominated and infeasible points") {
  std::vector<OperatingPoint> pts(4);
  pts[0].mean_macro_users = 0.0;
  pts[0].max_femtos = 50;
  pts[0].feasible = true;
  pts[1].mean_macro_users = 8.0;
  pts[1].max_femtos = 60;  // dominates pts[0]: more of both loads
  pts[1].feasible = true;
  pts[2].mean_macro_users = 16.0;
  pts[2].max_femtos = 20;
  pts[2].feasible = true;
  pts[3].mean_macro_users = 24.0;
  pts[3].max_femtos = -1;
  pts[3].feasible = false;

  const std::vector<OperatingPoint> kept = pareto_prune(pts);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].mean_macro_users == 8.0);
  CHECK(kept[1].mean_macro_users == 16.0);
  long prev = kept[0].max_femtos;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    CHECK(kept[i].max_femtos < prev);
    prev = kept[i].max_femtos;
  }
}

TEST_CASE("the dedicated-spectrum baseline halves the gain and decouples tiers") {
  const ScenarioConfig shared = corner_scenario();
  const ScenarioConfig split = split_spectrum_scenario(shared);
  CHECK(split.params.processing_gain ==
        doctest::Approx(shared.params.processing_gain / 2.0));
  CHECK_FALSE(split.cross_tier);
  CHECK(split.params.hop_slots == 1);
  CHECK(split.observer_omni);
  CHECK(split.observer == shared.observer);
  // The shared scenario is left untouched.
  CHECK(shared.cross_tier);
  CHECK(shared.params.processing_gain == doctest::Approx(128.0));
}

TEST_CASE("baseline comparison aligns rows and reports the load ratio") {
  ScenarioConfig sc = corner_scenario();
  sc.params.target_outage = 0.1;
  ContourOptions opts;
  opts.macro_grid = {0.0, 4.0};
  opts.femto_cap = 400;
  opts.eval = fast_analytic();
  const ComparisonResult cmp = compare_with_baseline(sc, opts);
  REQUIRE(cmp.rows.size() == 2);
  REQUIRE(cmp.shared.points.size() == 2);
  REQUIRE(cmp.baseline.points.size() == 2);
  for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
    const ComparisonRow& row = cmp.rows[i];
    CHECK(row.mean_macro_users == opts.macro_grid[i]);
    CHECK(row.shared_femtos == cmp.shared.points[i].max_femtos);
    CHECK(row.baseline_femtos == cmp.baseline.points[i].max_femtos);
    if (row.both_feasible && row.baseline_femtos > 0) {
      CHECK(row.femto_ratio ==
            doctest::Approx(static_cast<double>(row.shared_femtos) /
                            static_cast<double>(row.baseline_femtos)));
    }
  }
}

TEST_CASE("csv writers emit the pinned headers") {
  OperatingContour oc;
  OperatingPoint pt;
  pt.mean_macro_users = 8.0;
  pt.max_femtos = 33;
  pt.feasible = true;
  pt.macro_binding = true;
  pt.macro_outage = 0.099;
  pt.femto_outage = 0.06;
  oc.points.push_back(pt);

  std::ostringstream os;
  write_contour_csv(os, oc);
  const std::string text = os.str();
  CHECK(first_line(text) ==
        "mean_macro_users,max_femtos,feasible,capped,macro_binding,"
        "femto_binding,macro_outage,femto_outage");
  CHECK(text.find("8") != std::string::npos);
  CHECK(text.find("33") != std::string::npos);

  ComparisonResult cmp;
  ComparisonRow row;
  row.mean_macro_users = 8.0;
  row.shared_femtos = 40;
  row.baseline_femtos = 10;
  row.both_feasible = true;
  row.femto_ratio = 4.0;
  cmp.rows.push_back(row);
  std::ostringstream os2;
  write_comparison_csv(os2, cmp);
  CHECK(first_line(os2.str()) ==
        "mean_macro_users,shared_max_femtos,baseline_max_femtos,both_feasible,"
        "femto_ratio");
}

TEST_SUITE_END();
