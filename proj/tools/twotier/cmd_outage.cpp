#include <fstream>
#include <iostream>

#include "common.hpp"
#include "twotier/montecarlo.hpp"

namespace twotier::cli {

int run_outage(RunContext& ctx) {
  const CommonOptions& o = ctx.opts();
  const ScenarioConfig sc = ctx.scenario();
  const bool macro_side = sc.observer == ObserverKind::macro_station;

  auto csv = ctx.open_output("outage.csv");
  csv << "observer,N_c,N_f,method,p_out,ci_low,ci_high,strained\n";
  nlohmann::json records = nlohmann::json::array();

  for (EvalMethod m :
       ctx.methods({EvalMethod::analytic, EvalMethod::montecarlo})) {
    nlohmann::json rec = {{"subcommand", "outage"},
                          {"observer", o.observer},
                          {"N_c", o.mean_macro},
                          {"N_f", o.mean_femtos}};
    double p_out = 0.0;
    double ci_low = 0.0, ci_high = 1.0;
    bool strained = false;
    if (m == EvalMethod::analytic) {
      OutageModel model(sc, ctx.eval_options(m));
      p_out = macro_side ? model.macro_outage(o.mean_macro, o.mean_femtos)
                         : model.femto_outage(o.mean_macro, o.mean_femtos);
      strained = model.strained();
      rec["method"] = "analytic";
      rec["p_out"] = p_out;
      rec["strained"] = strained;
      ci_low = ci_high = p_out;
    } else {
      OutageEstimate est = simulate_outage(sc, o.seed, o.reps, o.workers);
      p_out = est.probability;
      ci_low = est.ci_low;
      ci_high = est.ci_high;
      rec["method"] = "montecarlo";
      rec["p_out"] = p_out;
      rec["ci_low"] = ci_low;
      rec["ci_high"] = ci_high;
      rec["trials"] = est.trials;
      rec["threshold"] = est.threshold;
      nlohmann::json comps;
      for (int c = 0; c < kComponentCount; ++c)
        comps[component_name(InterferenceComponent(c))] =
            est.mean_components[c];
      rec["mean_components"] = comps;
      if (sc.params.tier_selection)
        rec["handoff_survival"] = est.handoff_survival;
      if (!o.dump_samples.empty()) {
        std::vector<double> totals =
            sample_total(sc, o.seed, o.reps, o.workers);
        std::ofstream dump(o.dump_samples);
        dump.precision(17);
        for (double v : totals) dump << v << '\n';
      }
    }
    csv << o.observer << ',' << o.mean_macro << ',' << o.mean_femtos << ','
        << rec["method"].get<std::string>() << ',' << p_out << ',' << ci_low
        << ',' << ci_high << ',' << strained << '\n';
    std::cout << rec.dump() << "\n";
    records.push_back(rec);
  }

  ctx.annotate({{"records", records}});
  ctx.finish();
  return 0;
}

}  // namespace twotier::cli
