#include "twotier/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "twotier/channel.hpp"
#include "twotier/errors.hpp"
#include "twotier/stats.hpp"

namespace twotier {

namespace {

constexpr std::uint64_t kBlockSize = 2048;

/// Occupancy grid over femtocell positions answering "is this point within
/// the coverage radius of any femtocell?" in O(1).
class CoverageGrid {
 public:
  explicit CoverageGrid(double radius) : radius_(radius), inv_(1.0 / radius) {}

  void insert(Vec2 p) {
    buckets_[key(cell(p.x), cell(p.y))].push_back(p);
  }

  bool covers(Vec2 p) const {
    const long long cx = cell(p.x), cy = cell(p.y);
    const double r2 = radius_ * radius_;
    for (long long ix = cx - 1; ix <= cx + 1; ++ix) {
      for (long long iy = cy - 1; iy <= cy + 1; ++iy) {
        const auto it = buckets_.find(key(ix, iy));
        if (it == buckets_.end()) continue;
        for (const Vec2& q : it->second) {
          if ((p - q).norm2() <= r2) return true;
        }
      }
    }
    return false;
  }

 private:
  long long cell(double x) const {
    return static_cast<long long>(std::floor(x * inv_));
  }
  static std::uint64_t key(long long ix, long long iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
  }

  double radius_;
  double inv_;
  std::unordered_map<std::uint64_t, std::vector<Vec2>> buckets_;
};

}  // namespace

const char* component_name(InterferenceComponent c) {
  switch (c) {
    case InterferenceComponent::macro_in_cell: return "macro_in_cell";
    case InterferenceComponent::macro_out_of_cell: return "macro_out_of_cell";
    case InterferenceComponent::femto_to_macro: return "femto_to_macro";
    case InterferenceComponent::macro_to_femto: return "macro_to_femto";
    case InterferenceComponent::femto_to_femto: return "femto_to_femto";
    case InterferenceComponent::femto_in_cell: return "femto_in_cell";
  }
  return "unknown";
}

struct Simulator::FemtoField {
  std::vector<Vec2> positions;      ///< after exclusion
  std::vector<char> transmitting;   ///< on the observed hopping slot
  CoverageGrid coverage;

  explicit FemtoField(double radius) : coverage(radius) {}
};

Simulator::Simulator(const ScenarioConfig& sc)
    : scenario_(sc),
      derived_(derive(sc.params, sc.mean_macro_users, sc.mean_femtos)) {
  const SystemParams& p = sc.params;
  const std::vector<Vec2> centers = hex_layout_centers(p.macro_radius_m, 2);
  cells_.reserve(centers.size());
  for (Vec2 c : centers) cells_.emplace_back(c, p.macro_radius_m);

  switch (sc.observer) {
    case ObserverKind::macro_station:
      observer_pos_ = {0.0, 0.0};
      threshold_ = derived_.macro_threshold;
      break;
    case ObserverKind::femto_interior:
      if (sc.femto_offset_m <= 0.0 ||
          sc.femto_offset_m >= sc.params.macro_radius_m) {
        throw DomainError("Simulator: interior observer offset outside cell");
      }
      observer_pos_ = {sc.femto_offset_m, 0.0};
      threshold_ = derived_.femto_threshold;
      break;
    case ObserverKind::femto_corner:
      observer_pos_ = {p.macro_radius_m, 0.0};
      threshold_ = derived_.femto_threshold;
      break;
  }
  if (sc.femto_observer() && observer_pos_.norm() < p.exclusion_radius_m) {
    throw DegenerateScenario(
        "Simulator: femtocell observer inside the exclusion radius");
  }
  anchor_cells_ = sc.observer == ObserverKind::femto_corner
                      ? cells_sharing_corner_vertex(p.macro_radius_m, centers)
                      : std::vector<int>{0};

  wedge_ = sc.observer_omni
               ? SectorSpec::omni(observer_pos_)
               : SectorSpec::of(observer_pos_, sc.sector_align, p.sectors);

  const double per_slot = p.hopping == HoppingMode::joint
                              ? p.mean_femto_users
                              : p.mean_femto_users / p.hop_slots;
  activity_ = -std::expm1(-per_slot);
  // Joint hopping: an occupied femtocell rides one slot, chosen uniformly,
  // so it hits the observed slot 1/N_hop of the time.
  if (p.hopping == HoppingMode::joint) activity_ /= p.hop_slots;
  mark_mean_ = per_slot;
}

void Simulator::simulate_femto_field(RngStream& field, FemtoField& out) const {
  const SystemParams& p = scenario_.params;
  const double r_exc2 = p.exclusion_radius_m * p.exclusion_radius_m;
  for (const HexRegion& cell : cells_) {
    const unsigned n = field.poisson(derived_.femto_intensity * cell.area());
    for (unsigned i = 0; i < n; ++i) {
      const Vec2 pos = sample_uniform(cell, field);
      const bool active = field.uniform01() < activity_;
      if (pos.norm2() < r_exc2) continue;  // keep-out around the station
      out.positions.push_back(pos);
      out.transmitting.push_back(active ? 1 : 0);
      out.coverage.insert(pos);
    }
  }
}

void Simulator::macro_station_view(std::uint64_t seed, std::uint64_t index,
                                   ReplicationResult& out) const {
  const SystemParams& p = scenario_.params;
  const bool tier_sel = p.tier_selection;
  const bool want_femtos = scenario_.cross_tier || tier_sel;

  FemtoField femtos(p.femto_radius_m);
  if (want_femtos) {
    RngStream field(seed, index, StreamRole::femto_field);
    simulate_femto_field(field, femtos);
  }

  RngStream own(seed, index, StreamRole::observer_cell);
  const double in_cell_mean =
      scenario_.mean_macro_users /
      (scenario_.observer_sectors() * p.hop_slots);
  const unsigned occupancy =
      scenario_.mean_macro_users <= 0.0
          ? 1
          : own.poisson_at_least_one(in_cell_mean);
  if (!tier_sel) {
    out.components[0] = (occupancy - 1) * p.macro_rx_power;
  } else {
    // Interferer positions only matter for the coverage test.
    unsigned kept = 0;
    for (unsigned i = 1; i < occupancy; ++i) {
      Vec2 pos;
      do {
        pos = sample_uniform(cells_[0], own);
      } while (!wedge_.contains(pos));
      ++out.handoff_candidates;
      if (!femtos.coverage.covers(pos)) {
        ++kept;
        ++out.handoff_survivors;
      }
    }
    out.components[0] = kept * p.macro_rx_power;
  }

  RngStream field(seed, index, StreamRole::macro_field);
  RngStream marks(seed, index, StreamRole::macro_marks);
  const double sigma = p.cross_sigma_db();
  const double slot_intensity = derived_.macro_intensity / p.hop_slots;
  double out_of_cell = 0.0;
  for (std::size_t c = 1; c < cells_.size(); ++c) {
    const HexRegion& cell = cells_[c];
    const unsigned n = field.poisson(slot_intensity * cell.area());
    for (unsigned i = 0; i < n; ++i) {
      const Vec2 pos = sample_uniform(cell, field);
      if (!wedge_.contains(pos)) continue;
      if (tier_sel && femtos.coverage.covers(pos)) continue;
      const double own_d = (pos - cell.center()).norm();
      const double obs_d = pos.norm();
      out_of_cell += macro_interference_term(p, p.macro_rx_power, own_d, obs_d,
                                             marks.shadow_factor(sigma));
    }
  }
  out.components[1] = out_of_cell;

  if (scenario_.cross_tier) {
    RngStream fmarks(seed, index, StreamRole::femto_marks);
    double cross = 0.0;
    for (std::size_t i = 0; i < femtos.positions.size(); ++i) {
      if (!femtos.transmitting[i]) continue;
      if (!wedge_.contains(femtos.positions[i])) continue;
      const unsigned users = fmarks.poisson_at_least_one(mark_mean_);
      double psi_sum = 0.0;
      for (unsigned u = 0; u < users; ++u) {
        psi_sum += fmarks.shadow_factor(sigma);
      }
      cross += femto_interference_term(p, derived_,
                                       femtos.positions[i].norm(), psi_sum);
    }
    out.components[2] = cross;
  }
}

void Simulator::femto_station_view(std::uint64_t seed, std::uint64_t index,
                                   ReplicationResult& out) const {
  const SystemParams& p = scenario_.params;
  const bool tier_sel = p.tier_selection;
  const bool want_macros = scenario_.cross_tier && scenario_.mean_macro_users > 0.0;

  FemtoField femtos(p.femto_radius_m);
  {
    RngStream field(seed, index, StreamRole::femto_field);
    simulate_femto_field(field, femtos);
  }

  RngStream own(seed, index, StreamRole::observer_cell);
  const double own_mean = p.mean_femto_users / scenario_.observer_sectors();
  const unsigned occupancy = own.poisson_at_least_one(own_mean);
  unsigned co_slot = occupancy - 1;
  if (p.hopping == HoppingMode::independent) {
    co_slot = own.binomial(occupancy - 1, 1.0 / p.hop_slots);
  }
  out.components[5] = co_slot * p.femto_rx_power;

  const double sigma = p.cross_sigma_db();

  {
    RngStream fmarks(seed, index, StreamRole::femto_marks);
    double rivals = 0.0;
    for (std::size_t i = 0; i < femtos.positions.size(); ++i) {
      if (!femtos.transmitting[i]) continue;
      if (!wedge_.contains(femtos.positions[i])) continue;
      const unsigned users = fmarks.poisson_at_least_one(mark_mean_);
      double psi_sum = 0.0;
      for (unsigned u = 0; u < users; ++u) {
        psi_sum += fmarks.shadow_factor(sigma);
      }
      rivals += femto_interference_term(
          p, derived_, (femtos.positions[i] - observer_pos_).norm(), psi_sum);
    }
    out.components[4] = rivals;
  }

  if (want_macros) {
    RngStream field(seed, index, StreamRole::macro_field);
    RngStream marks(seed, index, StreamRole::macro_marks);
    const double slot_intensity = derived_.macro_intensity / p.hop_slots;
    double cross = 0.0;
    for (int c : anchor_cells_) {
      const HexRegion& cell = cells_[c];
      const unsigned n = field.poisson(slot_intensity * cell.area());
      for (unsigned i = 0; i < n; ++i) {
        const Vec2 pos = sample_uniform(cell, field);
        if (!wedge_.contains(pos)) continue;
        ++out.handoff_candidates;
        const bool kept = !tier_sel || !femtos.coverage.covers(pos);
        if (kept) ++out.handoff_survivors;
        if (!kept) continue;
        const double own_d = (pos - cell.center()).norm();
        const double obs_d = (pos - observer_pos_).norm();
        cross += macro_interference_term(p, p.macro_rx_power, own_d, obs_d,
                                         marks.shadow_factor(sigma));
      }
    }
    out.components[3] = cross;
  }
}

ReplicationResult Simulator::replicate(std::uint64_t seed,
                                       std::uint64_t index) const {
  ReplicationResult out;
  if (scenario_.observer == ObserverKind::macro_station) {
    macro_station_view(seed, index, out);
  } else {
    femto_station_view(seed, index, out);
  }
  return out;
}

namespace {

/// Runs replications [0, n) in fixed blocks; blocks are claimed dynamically
/// by workers but consumed strictly by index at reduction time, so the
/// outcome is independent of the worker count.
template <class PerBlock>
void run_blocks(std::uint64_t n, int workers, const PerBlock& per_block) {
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::atomic<std::uint64_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::uint64_t lo = b * kBlockSize;
      const std::uint64_t hi = std::min(n, lo + kBlockSize);
      per_block(b, lo, hi);
    }
  };
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

struct BlockTally {
  std::uint64_t outages = 0;
  std::array<double, kComponentCount> sums{};
  std::uint64_t candidates = 0;
  std::uint64_t survivors = 0;
};

}  // namespace

OutageEstimate simulate_outage(const ScenarioConfig& sc, std::uint64_t seed,
                               std::uint64_t replications, int workers) {
  if (replications == 0) {
    throw InsufficientSamples("simulate_outage: need replications > 0");
  }
  const Simulator sim(sc);
  const double threshold = sim.threshold();
  const std::uint64_t blocks = (replications + kBlockSize - 1) / kBlockSize;
  std::vector<BlockTally> tally(blocks);
  run_blocks(replications, workers,
             [&](std::uint64_t b, std::uint64_t lo, std::uint64_t hi) {
               BlockTally t;
               for (std::uint64_t r = lo; r < hi; ++r) {
                 const ReplicationResult rep = sim.replicate(seed, r);
                 if (rep.total() >= threshold) ++t.outages;
                 for (int c = 0; c < kComponentCount; ++c) {
                   t.sums[c] += rep.components[c];
                 }
                 t.candidates += rep.handoff_candidates;
                 t.survivors += rep.handoff_survivors;
               }
               tally[b] = t;
             });

  OutageEstimate est;
  est.trials = replications;
  est.threshold = threshold;
  std::uint64_t candidates = 0, survivors = 0;
  for (const BlockTally& t : tally) {  // fixed order: bit-identical reduce
    est.outages += t.outages;
    for (int c = 0; c < kComponentCount; ++c) {
      est.mean_components[c] += t.sums[c];
    }
    candidates += t.candidates;
    survivors += t.survivors;
  }
  for (int c = 0; c < kComponentCount; ++c) {
    est.mean_components[c] /= static_cast<double>(replications);
  }
  est.probability =
      static_cast<double>(est.outages) / static_cast<double>(replications);
  const WilsonInterval wi = wilson_interval(est.outages, replications);
  est.ci_low = wi.low;
  est.ci_high = wi.high;
  est.handoff_survival =
      candidates == 0
          ? 1.0
          : static_cast<double>(survivors) / static_cast<double>(candidates);
  return est;
}

std::vector<double> sample_component(const ScenarioConfig& sc,
                                     InterferenceComponent component,
                                     std::uint64_t seed,
                                     std::uint64_t replications, int workers) {
  const Simulator sim(sc);
  std::vector<double> out(replications);
  run_blocks(replications, workers,
             [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
               for (std::uint64_t r = lo; r < hi; ++r) {
                 out[r] = sim.replicate(seed, r)
                              .components[static_cast<int>(component)];
               }
             });
  return out;
}

std::vector<double> sample_total(const ScenarioConfig& sc, std::uint64_t seed,
                                 std::uint64_t replications, int workers) {
  const Simulator sim(sc);
  std::vector<double> out(replications);
  run_blocks(replications, workers,
             [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
               for (std::uint64_t r = lo; r < hi; ++r) {
                 out[r] = sim.replicate(seed, r).total();
               }
             });
  return out;
}

}  // namespace twotier
