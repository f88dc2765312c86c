#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "twotier/errors.hpp"

namespace {

using twotier::cli::CommonOptions;

void add_io_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path,
                  "configuration file, one `key = value` per line");
  cmd->add_option("--set", o.overrides,
                  "override a single key, as key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "root seed for all random streams");
  cmd->add_option("--workers", o.workers, "worker threads (results identical)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--reps", o.reps, "simulation replications per estimate");
  cmd->add_option("--out", o.out_dir, "output root; runs land in <out>/<hash>");
  cmd->add_option("--moments-cache", o.moments_cache,
                  "directory of cached mark-law tables, keyed by spec hash");
}

void add_observer_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--observer", o.observer,
                  "observed station tier: macro or femto");
  cmd->add_option("--R0", o.r0_fraction,
                  "femtocell offset from the cell center, as a fraction of "
                  "the cell radius; 1.0 places it on the corner");
  cmd->add_option("--theta", o.theta, "sector alignment angle (radians)");
  cmd->add_flag("--omni", o.omni, "observed station uses no sectorization");
  cmd->add_option("--sectors", o.sectors, "override the sector count N_sec");
}

void add_feature_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--exclusion", o.exclusion,
                  "femtocell exclusion radius around the macro station (m)");
  cmd->add_flag("--tier-selection", o.tier_selection,
                "hand macro users within R_f of a femtocell over to it");
  cmd->add_option("--hopping", o.hopping,
                  "femtocell slot-hopping mode: joint or independent");
}

void add_method_flag(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--method", o.methods,
                  "evaluation method: analytic or montecarlo (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Uplink outage and operating contours for a two-tier "
      "(macrocell + femtocell) shared-spectrum CDMA network"};
  app.set_version_flag("--version", TWOTIER_VERSION);
  app.require_subcommand(1);

  CommonOptions o;

  CLI::App* validate = app.add_subcommand(
      "validate-dist",
      "Check simulated interference laws against the closed forms");
  add_io_flags(validate, o);
  add_observer_flags(validate, o);
  add_feature_flags(validate, o);
  validate->add_option("--Nc", o.mean_macro, "mean macro users per cell");
  validate->add_option("--Nf", o.mean_femtos, "mean femtocells per cell");
  validate->add_option("--dump-samples", o.dump_samples,
                       "write raw aggregate samples, one per line");

  CLI::App* outage = app.add_subcommand(
      "outage", "Single-point uplink outage (analytic and simulated)");
  add_io_flags(outage, o);
  add_observer_flags(outage, o);
  add_feature_flags(outage, o);
  add_method_flag(outage, o);
  outage->add_option("--Nc", o.mean_macro, "mean macro users per cell")
      ->required();
  outage->add_option("--Nf", o.mean_femtos, "mean femtocells per cell")
      ->required();
  outage->add_option("--dump-samples", o.dump_samples,
                     "write raw total-interference samples, one per line");

  CLI::App* contour = app.add_subcommand(
      "contour", "Operating contour: largest femtocell load per macro load");
  add_io_flags(contour, o);
  add_observer_flags(contour, o);
  add_feature_flags(contour, o);
  add_method_flag(contour, o);
  contour->add_option("--grid", o.grid, "macro-load grid (comma separated)")
      ->delimiter(',');
  contour->add_option("--cap", o.femto_cap, "femtocell search ceiling");
  contour->add_flag("--split-baseline", o.split_baseline,
                    "also compute the split-spectrum baseline contour");
  contour->add_option("--fit-samples", o.fit_samples,
                      "draws for the out-of-cell interference fit");
  contour->add_option("--moment-samples", o.moment_samples,
                      "draws for the aggregate mark-law estimate");

  CLI::App* moments =
      app.add_subcommand("moments", "Build the aggregate mark-law cache");
  add_io_flags(moments, o);
  moments->add_option("--samples", o.moment_samples,
                      "draws for the mark-law estimate");

  CLI::App* compare = app.add_subcommand(
      "compare", "Contour comparison against a baseline network");
  add_io_flags(compare, o);
  add_observer_flags(compare, o);
  add_feature_flags(compare, o);
  add_method_flag(compare, o);
  compare->add_option("--grid", o.grid, "macro-load grid (comma separated)")
      ->delimiter(',');
  compare->add_option("--cap", o.femto_cap, "femtocell search ceiling");
  compare->add_option("--against", o.against,
                      "baseline: split (split-spectrum network) or plain "
                      "(same network without exclusion / tier selection)");
  compare->add_option("--fit-samples", o.fit_samples,
                      "draws for the out-of-cell interference fit");
  compare->add_option("--moment-samples", o.moment_samples,
                      "draws for the aggregate mark-law estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version exit cleanly, errors are config
  }

  try {
    using namespace twotier::cli;
    if (validate->parsed()) {
      RunContext ctx("validate-dist", o);
      return run_validate_dist(ctx);
    }
    if (outage->parsed()) {
      RunContext ctx("outage", o);
      return run_outage(ctx);
    }
    if (contour->parsed()) {
      RunContext ctx("contour", o);
      return run_contour(ctx);
    }
    if (moments->parsed()) {
      RunContext ctx("moments", o);
      return run_moments(ctx);
    }
    if (compare->parsed()) {
      RunContext ctx("compare", o);
      return run_compare(ctx);
    }
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const twotier::cli::ConfigFailure& e) {
    twotier::cli::print_config_errors(e.errors);
    return 1;
  } catch (const twotier::DegenerateScenario& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    // DomainError, UnsupportedExponent, InsufficientSamples, GridMismatch:
    // the request cannot be honored as configured.
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const twotier::QuadratureFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const twotier::NonMonotoneOutage& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
