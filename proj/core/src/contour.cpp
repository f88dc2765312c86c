#include "twotier/contour.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "twotier/channel.hpp"
#include "twotier/errors.hpp"

namespace twotier {

namespace {

std::uint64_t mix_bits(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, double a, double b, int salt) {
  std::uint64_t h = mix_bits(seed, std::bit_cast<std::uint64_t>(a));
  h = mix_bits(h, std::bit_cast<std::uint64_t>(b));
  return mix_bits(h, static_cast<std::uint64_t>(salt));
}

/// Density of femtocells transmitting on the observed slot, before any
/// sector division: joint hopping occupies one of the N_hop slots per cell;
/// independent hopping puts a cell on the slot when any user landed there.
double transmitting_femto_intensity(const SystemParams& p, double lambda_f) {
  return p.hopping == HoppingMode::joint
             ? lambda_f * (-std::expm1(-p.mean_femto_users)) / p.hop_slots
             : lambda_f * (-std::expm1(-p.mean_femto_users / p.hop_slots));
}

}  // namespace

struct OutageModel::Artifacts {
  const ShadowMoments* marks = nullptr;
  std::unique_ptr<MacroInterferenceBound> femto_view;
  std::map<double, TruncGaussian> fits;  ///< keyed by macro load
};

OutageModel::OutageModel(const ScenarioConfig& base, const EvalOptions& opts)
    : base_(base), opts_(opts), art_(std::make_unique<Artifacts>()) {
  if (opts_.method == EvalMethod::analytic &&
      base_.params.outdoor_exponent != 4.0) {
    throw UnsupportedExponent(
        "OutageModel: closed forms require an outdoor path-loss exponent of 4");
  }
}

OutageModel::~OutageModel() = default;

ScenarioConfig OutageModel::macro_scenario(double mean_macro,
                                           double mean_femtos) const {
  ScenarioConfig sc = base_;
  sc.observer = ObserverKind::macro_station;
  sc.observer_omni = false;
  sc.mean_macro_users = mean_macro;
  sc.mean_femtos = mean_femtos;
  return sc;
}

ScenarioConfig OutageModel::femto_scenario(double mean_macro,
                                           double mean_femtos) const {
  ScenarioConfig sc = base_;
  if (sc.observer == ObserverKind::macro_station) {
    sc.observer = ObserverKind::femto_interior;
    if (sc.femto_offset_m <= 0.0) {
      sc.femto_offset_m = 0.5 * sc.params.macro_radius_m;
    }
  }
  sc.mean_macro_users = mean_macro;
  sc.mean_femtos = mean_femtos;
  return sc;
}

const TruncGaussian& OutageModel::out_of_cell_fit(double mean_macro) {
  auto it = art_->fits.find(mean_macro);
  if (it != art_->fits.end()) return it->second;
  ScenarioConfig sc = macro_scenario(mean_macro, 0.0);
  sc.cross_tier = false;           // isolate the out-of-cell component
  sc.params.tier_selection = false;  // thinning is applied analytically
  const std::vector<double> samples = sample_component(
      sc, InterferenceComponent::macro_out_of_cell,
      mix_seed(opts_.seed, mean_macro, 0.0, 1), opts_.fit_samples,
      opts_.workers);
  return art_->fits.emplace(mean_macro, TruncGaussian::fit(samples))
      .first->second;
}

double OutageModel::macro_outage(double mean_macro, double mean_femtos) {
  const SystemParams& p = base_.params;
  if (opts_.method == EvalMethod::montecarlo) {
    const ScenarioConfig sc = macro_scenario(mean_macro, mean_femtos);
    return simulate_outage(sc, mix_seed(opts_.seed, mean_macro, mean_femtos, 2),
                           opts_.replications, opts_.workers)
        .probability;
  }

  const DerivedConstants d = derive(p, mean_macro, mean_femtos);
  const double survival =
      p.tier_selection
          ? tier_selection_survival(d.femto_intensity, p.femto_radius_m)
          : 1.0;

  MacroOutageTerms terms;
  terms.in_cell_mean =
      survival * mean_macro / (p.sectors * p.hop_slots);
  terms.controlled_power = p.macro_rx_power;
  terms.threshold = d.macro_threshold;
  terms.out_of_cell = out_of_cell_fit(mean_macro).thinned(survival);

  if (base_.cross_tier && mean_femtos > 0.0 && p.mean_femto_users > 0.0) {
    const ShadowMoments& marks = ShadowMoments::cached(
        compound_mark_spec(p, opts_.seed, opts_.moment_samples));
    const double intensity =
        transmitting_femto_intensity(p, d.femto_intensity) / p.sectors;
    if (p.exclusion_radius_m > 0.0) {
      const ExclusionLaw law(intensity, d.femto_strength,
                             2.0 / p.outdoor_exponent, p.exclusion_radius_m,
                             &marks);
      terms.cross_tier_cdf = [law](double y) { return law.cdf(y); };
    } else {
      const LevyLaw law{
          femto_aggregate_scale(intensity, d.femto_strength, marks.moment())};
      terms.cross_tier_cdf = [law](double y) { return law.cdf(y); };
    }
  }
  const OutageEval eval = twotier::macro_outage(terms);
  strained_ = strained_ || eval.strained;
  return eval.outage;
}

double OutageModel::femto_outage(double mean_macro, double mean_femtos) {
  const ScenarioConfig sc = femto_scenario(mean_macro, mean_femtos);
  const SystemParams& p = sc.params;
  if (opts_.method == EvalMethod::montecarlo) {
    return simulate_outage(sc, mix_seed(opts_.seed, mean_macro, mean_femtos, 3),
                           opts_.replications, opts_.workers)
        .probability;
  }

  const DerivedConstants d = derive(p, mean_macro, mean_femtos);
  const ShadowMoments& marks = ShadowMoments::cached(
      compound_mark_spec(p, opts_.seed, opts_.moment_samples));

  FemtoOutageTerms terms;
  terms.occupancy_mean = p.mean_femto_users / sc.observer_sectors();
  if (p.hopping == HoppingMode::independent) {
    terms.occupancy_mean /= p.hop_slots;
  }
  terms.controlled_power = p.femto_rx_power;
  terms.threshold = d.femto_threshold;
  const double intensity = transmitting_femto_intensity(p, d.femto_intensity) /
                           sc.observer_sectors();
  terms.cross_femto_scale =
      femto_aggregate_scale(intensity, d.femto_strength, marks.moment());

  if (sc.cross_tier && mean_macro > 0.0) {
    if (art_->femto_view == nullptr) {
      const ObserverGeometry geom =
          sc.observer == ObserverKind::femto_corner
              ? corner_observer_geometry(p, sc.sector_align, sc.observer_omni)
              : interior_observer_geometry(p, sc.femto_offset_m,
                                           sc.sector_align, sc.observer_omni);
      art_->femto_view =
          std::make_unique<MacroInterferenceBound>(p, geom);
    }
    const double survival =
        p.tier_selection
            ? tier_selection_survival(d.femto_intensity, p.femto_radius_m)
            : 1.0;
    terms.macro_intensity = survival * d.macro_intensity / p.hop_slots;
    terms.macro_bound = art_->femto_view.get();
  }
  const OutageEval eval = femto_outage_lower_bound(terms);
  strained_ = strained_ || eval.strained;
  return eval.outage;
}

TierOutage OutageModel::evaluate(double mean_macro, double mean_femtos) {
  TierOutage out;
  const bool was = strained_;
  strained_ = false;
  if (mean_macro > 0.0) out.macro = macro_outage(mean_macro, mean_femtos);
  if (mean_femtos > 0.0) out.femto = femto_outage(mean_macro, mean_femtos);
  out.strained = strained_;
  strained_ = was || strained_;
  return out;
}

std::vector<double> default_macro_grid() {
  std::vector<double> grid;
  for (int n = 0; n <= 60; n += 3) grid.push_back(n);
  return grid;
}

OperatingContour compute_contour(const ScenarioConfig& base,
                                 const ContourOptions& opts) {
  OutageModel model(base, opts.eval);
  const double target = base.params.target_outage;
  const std::vector<double> grid =
      opts.macro_grid.empty() ? default_macro_grid() : opts.macro_grid;
  if (opts.femto_cap < 0) throw DomainError("compute_contour: negative cap");

  OperatingContour oc;
  for (double nc : grid) {
    OperatingPoint pt;
    pt.mean_macro_users = nc;
    std::map<long, TierOutage> seen;
    const auto eval_at = [&](long nf) -> const TierOutage& {
      auto it = seen.find(nf);
      if (it == seen.end()) {
        it = seen.emplace(nf, model.evaluate(nc, static_cast<double>(nf)))
                 .first;
      }
      return it->second;
    };
    const auto ok = [&](long nf) {
      const TierOutage& t = eval_at(nf);
      return (!t.macro || *t.macro <= target) &&
             (!t.femto || *t.femto <= target);
    };

    if (!ok(0)) {
      pt.feasible = false;
      pt.max_femtos = -1;
      const TierOutage& t = eval_at(0);
      pt.macro_binding = t.macro && *t.macro > target;
      pt.femto_binding = t.femto && *t.femto > target;
      pt.macro_outage = t.macro.value_or(0.0);
      pt.femto_outage = t.femto.value_or(0.0);
      oc.points.push_back(pt);
      continue;
    }
    pt.feasible = true;
    long lo = 0;  // feasible
    if (ok(opts.femto_cap)) {
      pt.max_femtos = opts.femto_cap;
      pt.capped = true;
    } else {
      long hi = opts.femto_cap;  // infeasible
      while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        (ok(mid) ? lo : hi) = mid;
      }
      pt.max_femtos = lo;
      const TierOutage& above = eval_at(lo + 1);
      pt.macro_binding = above.macro && *above.macro > target;
      pt.femto_binding = above.femto && *above.femto > target;
    }
    const TierOutage& at = eval_at(pt.max_femtos);
    pt.macro_outage = at.macro.value_or(0.0);
    pt.femto_outage = at.femto.value_or(0.0);
    oc.points.push_back(pt);
  }
  return oc;
}

std::vector<OperatingPoint> pareto_prune(
    const std::vector<OperatingPoint>& pts) {
  std::vector<OperatingPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(),
            [](const OperatingPoint& a, const OperatingPoint& b) {
              return a.mean_macro_users < b.mean_macro_users;
            });
  std::vector<OperatingPoint> kept;
  long best = -1;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (!it->feasible) continue;
    if (it->max_femtos > best) {
      kept.push_back(*it);
      best = it->max_femtos;
    }
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

ScenarioConfig split_spectrum_scenario(const ScenarioConfig& shared) {
  ScenarioConfig sc = shared;
  sc.params.processing_gain /= 2.0;
  sc.params.hop_slots = 1;
  sc.cross_tier = false;
  sc.observer_omni = true;  // femtocells lose sectoring with their own band
  return sc;
}

ComparisonResult compare_with_baseline(const ScenarioConfig& shared,
                                       const ContourOptions& opts) {
  ComparisonResult cmp;
  cmp.shared = compute_contour(shared, opts);
  cmp.baseline = compute_contour(split_spectrum_scenario(shared), opts);
  for (std::size_t i = 0;
       i < cmp.shared.points.size() && i < cmp.baseline.points.size(); ++i) {
    const OperatingPoint& s = cmp.shared.points[i];
    const OperatingPoint& b = cmp.baseline.points[i];
    ComparisonRow row;
    row.mean_macro_users = s.mean_macro_users;
    row.shared_femtos = s.max_femtos;
    row.baseline_femtos = b.max_femtos;
    row.both_feasible = s.feasible && b.feasible;
    row.femto_ratio = (row.both_feasible && b.max_femtos > 0)
                          ? static_cast<double>(s.max_femtos) / b.max_femtos
                          : 0.0;
    cmp.rows.push_back(row);
  }
  return cmp;
}

void write_contour_csv(std::ostream& os, const OperatingContour& oc) {
  os.precision(17);
  os << "mean_macro_users,max_femtos,feasible,capped,macro_binding,"
        "femto_binding,macro_outage,femto_outage\n";
  for (const OperatingPoint& p : oc.points) {
    os << p.mean_macro_users << ',' << p.max_femtos << ',' << p.feasible << ','
       << p.capped << ',' << p.macro_binding << ',' << p.femto_binding << ','
       << p.macro_outage << ',' << p.femto_outage << '\n';
  }
}

void write_comparison_csv(std::ostream& os, const ComparisonResult& cmp) {
  os.precision(17);
  os << "mean_macro_users,shared_max_femtos,baseline_max_femtos,"
        "both_feasible,femto_ratio\n";
  for (const ComparisonRow& r : cmp.rows) {
    os << r.mean_macro_users << ',' << r.shared_femtos << ','
       << r.baseline_femtos << ',' << r.both_feasible << ',' << r.femto_ratio
       << '\n';
  }
}

}  // namespace twotier
