#include <iostream>

#include "common.hpp"
#include "twotier/errors.hpp"

namespace twotier::cli {

namespace {

const char* kBaselineConvention =
    "split spectrum: per-tier processing gain G/2, no cross-tier "
    "interference, omnidirectional femtocell antennas, no hopping";

const char* method_name(EvalMethod m) {
  return m == EvalMethod::analytic ? "analytic" : "montecarlo";
}

ContourOptions contour_options(const RunContext& ctx, EvalMethod m) {
  ContourOptions copt;
  copt.macro_grid = ctx.opts().grid;
  copt.femto_cap = ctx.opts().femto_cap;
  copt.eval = ctx.eval_options(m);
  return copt;
}

nlohmann::json meta_record(const RunContext& ctx) {
  const SystemParams& p = ctx.params();
  return {{"params_hash", hex16(params_hash(p))},
          {"seed", ctx.opts().seed},
          {"epsilon", p.target_outage},
          {"baseline_convention", kBaselineConvention},
          {"shadow_variance_mode",
           p.shadow_mode == ShadowVarianceMode::ratio ? "ratio" : "single"},
          {"grid", ctx.opts().grid.empty() ? default_macro_grid()
                                           : ctx.opts().grid}};
}

void write_contour_stub(RunContext& ctx) {
  auto gp = ctx.open_output("contour.gp");
  gp << "# Operating-contour plot stub; run `gnuplot -p contour.gp` here.\n"
        "set datafile separator \",\"\n"
        "set xlabel \"mean femtocells per cell N_f\"\n"
        "set ylabel \"mean macro users per cell N_c\"\n"
        "set grid\n"
        "plot \"contour.csv\" every ::1 using 3:2 with points pt 7 "
        "title \"operating points\"\n";
}

}  // namespace

int run_contour(RunContext& ctx) {
  const CommonOptions& o = ctx.opts();
  const ScenarioConfig shared = ctx.scenario();

  auto csv = ctx.open_output("contour.csv");
  csv << kContourCsvHeader;
  nlohmann::json summary = nlohmann::json::array();

  for (EvalMethod m : ctx.methods({EvalMethod::analytic})) {
    const ContourOptions copt = contour_options(ctx, m);
    OperatingContour oc = compute_contour(shared, copt);
    write_contour_rows(csv, oc, "shared", method_name(m));
    long feasible = 0;
    for (const auto& pt : oc.points) feasible += pt.feasible ? 1 : 0;
    summary.push_back({{"scenario", "shared"},
                       {"method", method_name(m)},
                       {"points", oc.points.size()},
                       {"feasible", feasible}});
    if (o.split_baseline) {
      OperatingContour base =
          compute_contour(split_spectrum_scenario(shared), copt);
      write_contour_rows(csv, base, "baseline", method_name(m));
      summary.push_back({{"scenario", "baseline"},
                         {"method", method_name(m)},
                         {"points", base.points.size()}});
    }
  }

  nlohmann::json meta = meta_record(ctx);
  meta["blocks"] = summary;
  ctx.open_output("contour_meta.json") << meta.dump(2) << "\n";
  write_contour_stub(ctx);
  ctx.annotate({{"blocks", summary}});
  ctx.finish();
  std::cout << nlohmann::json({{"subcommand", "contour"},
                               {"run_dir", ctx.run_dir().string()},
                               {"blocks", summary}})
                   .dump()
            << "\n";
  return 0;
}

int run_compare(RunContext& ctx) {
  const CommonOptions& o = ctx.opts();
  const ScenarioConfig featured = ctx.scenario();
  const EvalMethod method = ctx.methods({EvalMethod::analytic}).front();
  const ContourOptions copt = contour_options(ctx, method);

  auto csv = ctx.open_output("contour.csv");
  csv << kContourCsvHeader;
  nlohmann::json meta = meta_record(ctx);
  nlohmann::json summary;

  if (o.against == "split") {
    ComparisonResult cmp = compare_with_baseline(featured, copt);
    write_contour_rows(csv, cmp.shared, "shared", method_name(method));
    write_contour_rows(csv, cmp.baseline, "baseline", method_name(method));
    auto table = ctx.open_output("comparison.csv");
    write_comparison_csv(table, cmp);
    double best_ratio = 0.0;
    for (const auto& row : cmp.rows)
      if (row.both_feasible) best_ratio = std::max(best_ratio, row.femto_ratio);
    summary = {{"against", "split"}, {"best_femto_ratio", best_ratio}};
  } else if (o.against == "plain") {
    // Same network with the avoidance features (exclusion region, tier
    // selection) switched off.
    ScenarioConfig plain = featured;
    plain.params.exclusion_radius_m = 0.0;
    plain.params.tier_selection = false;
    OperatingContour with = compute_contour(featured, copt);
    OperatingContour without = compute_contour(plain, copt);
    if (with.points.size() != without.points.size())
      throw GridMismatch("compare: contour grids differ in size");
    write_contour_rows(csv, with, "featured", method_name(method));
    write_contour_rows(csv, without, "plain", method_name(method));
    auto table = ctx.open_output("comparison.csv");
    table << "mean_macro_users,featured_max_femtos,plain_max_femtos,"
             "delta,both_feasible\n";
    long best_delta = 0;
    for (std::size_t i = 0; i < with.points.size(); ++i) {
      const OperatingPoint& a = with.points[i];
      const OperatingPoint& b = without.points[i];
      const bool both = a.feasible && b.feasible;
      const long delta = both ? a.max_femtos - b.max_femtos : 0;
      table << a.mean_macro_users << ',' << a.max_femtos << ','
            << b.max_femtos << ',' << delta << ',' << both << '\n';
      if (both) best_delta = std::max(best_delta, delta);
    }
    summary = {{"against", "plain"}, {"best_femto_delta", best_delta}};
  } else {
    throw ConfigFailure({{ConfigError::Kind::parse, "against",
                          "--against must be split or plain, got '" +
                              o.against + "'"}});
  }

  meta["comparison"] = summary;
  ctx.open_output("contour_meta.json") << meta.dump(2) << "\n";
  write_contour_stub(ctx);
  ctx.annotate({{"comparison", summary}});
  ctx.finish();
  std::cout << nlohmann::json({{"subcommand", "compare"},
                               {"run_dir", ctx.run_dir().string()},
                               {"comparison", summary}})
                   .dump()
            << "\n";
  return 0;
}

}  // namespace twotier::cli
