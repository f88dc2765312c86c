#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "twotier/geometry.hpp"
#include "twotier/scenario.hpp"

namespace twotier {

enum class InterferenceComponent : int {
  macro_in_cell = 0,      ///< same-cell macro users, power-equalized
  macro_out_of_cell = 1,  ///< macro users controlled to other stations
  femto_to_macro = 2,     ///< femtocell users heard at the macro station
  macro_to_femto = 3,     ///< macro users heard at the femtocell station
  femto_to_femto = 4,     ///< rival femtocells heard at the femtocell station
  femto_in_cell = 5,      ///< the observed femtocell's own users
};
inline constexpr int kComponentCount = 6;
const char* component_name(InterferenceComponent c);

struct ReplicationResult {
  std::array<double, kComponentCount> components{};
  /// Tier-selection bookkeeping over reference-cell macro users.
  std::uint64_t handoff_candidates = 0;
  std::uint64_t handoff_survivors = 0;

  double total() const {
    double t = 0.0;
    for (double c : components) t += c;
    return t;
  }
};

struct OutageEstimate {
  double probability = 0.0;
  double ci_low = 0.0;   ///< Wilson 95% interval
  double ci_high = 1.0;
  std::uint64_t outages = 0;
  std::uint64_t trials = 0;
  double threshold = 0.0;
  std::array<double, kComponentCount> mean_components{};
  /// Observed fraction of reference-cell macro users that kept the macro
  /// tier under tier selection (1 when tier selection is off).
  double handoff_survival = 1.0;
};

/// Spatial simulation of one scenario.  Replications are addressed by
/// (seed, index) through counter-based streams, so results are bit-identical
/// for any worker count or evaluation order.
class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& sc);

  ReplicationResult replicate(std::uint64_t seed, std::uint64_t index) const;

  const ScenarioConfig& scenario() const { return scenario_; }
  const DerivedConstants& derived() const { return derived_; }
  /// Interference budget of the observed link.
  double threshold() const { return threshold_; }

 private:
  struct FemtoField;
  void simulate_femto_field(RngStream& field, FemtoField& out) const;
  void macro_station_view(std::uint64_t seed, std::uint64_t index,
                          ReplicationResult& out) const;
  void femto_station_view(std::uint64_t seed, std::uint64_t index,
                          ReplicationResult& out) const;

  ScenarioConfig scenario_;
  DerivedConstants derived_;
  std::vector<HexRegion> cells_;      ///< two-ring layout, reference first
  std::vector<int> anchor_cells_;     ///< cells whose users a femto observer hears
  Vec2 observer_pos_{0.0, 0.0};
  SectorSpec wedge_;
  double threshold_ = 0.0;
  double activity_ = 0.0;   ///< P(femtocell transmits on the observed slot)
  double mark_mean_ = 0.0;  ///< Poisson mean of an active femtocell's users
};

OutageEstimate simulate_outage(const ScenarioConfig& sc, std::uint64_t seed,
                               std::uint64_t replications, int workers = 1);

/// Per-replication values of one interference component (index = replication).
std::vector<double> sample_component(const ScenarioConfig& sc,
                                     InterferenceComponent component,
                                     std::uint64_t seed,
                                     std::uint64_t replications,
                                     int workers = 1);

/// Per-replication total interference at the observed station.
std::vector<double> sample_total(const ScenarioConfig& sc, std::uint64_t seed,
                                 std::uint64_t replications, int workers = 1);

}  // namespace twotier
