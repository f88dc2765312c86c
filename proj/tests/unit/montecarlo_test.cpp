#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "twotier/montecarlo.hpp"
#include "twotier/params.hpp"
#include "twotier/scenario.hpp"

using namespace twotier;

namespace {

ScenarioConfig macro_scenario(double n_c, double n_f) {
  ScenarioConfig sc;
  sc.mean_macro_users = n_c;
  sc.mean_femtos = n_f;
  sc.observer = ObserverKind::macro_station;
  return sc;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double zero_fraction(const std::vector<double>& v) {
  std::size_t z = 0;
  for (double x : v) z += (x == 0.0);
  return static_cast<double>(z) / static_cast<double>(v.size());
}

}  // namespace

TEST_SUITE_BEGIN("montecarlo");

TEST_CASE("replications are bit-identical across workers and reruns") {
  ScenarioConfig sc = macro_scenario(16.0, 20.0);
  sc.params.tier_selection = true;
  sc.params.exclusion_radius_m = 20.0;
  const OutageEstimate one = simulate_outage(sc, 11, 400, 1);
  const OutageEstimate three = simulate_outage(sc, 11, 400, 3);
  CHECK(one.outages == three.outages);
  CHECK(one.probability == three.probability);
  CHECK(one.handoff_survival == three.handoff_survival);
  for (int c = 0; c < kComponentCount; ++c) {
    CHECK(one.mean_components[c] == three.mean_components[c]);
  }

  const Simulator sim(sc);
  const ReplicationResult a = sim.replicate(11, 123);
  const ReplicationResult b = sim.replicate(11, 123);
  for (int c = 0; c < kComponentCount; ++c) {
    CHECK(a.components[c] == b.components[c]);
  }
  // A different replication index yields a different draw.
  const ReplicationResult other = sim.replicate(11, 124);
  CHECK(a.total() != other.total());
}

TEST_CASE("estimate bookkeeping is coherent") {
  const ScenarioConfig sc = macro_scenario(24.0, 10.0);
  const OutageEstimate est = simulate_outage(sc, 3, 500);
  CHECK(est.trials == 500);
  CHECK(est.probability ==
        doctest::Approx(static_cast<double>(est.outages) / 500.0).epsilon(1e-15));
  CHECK(est.ci_low <= est.probability);
  CHECK(est.ci_high >= est.probability);
  CHECK(est.handoff_survival == 1.0);  // selection disabled
  for (int c = 0; c < kComponentCount; ++c) {
    CHECK(est.mean_components[c] >= 0.0);
  }
  // A macro observer never sees the femtocell-side components.
  CHECK(est.mean_components[static_cast<int>(
            InterferenceComponent::macro_to_femto)] == 0.0);
  CHECK(est.mean_components[static_cast<int>(
            InterferenceComponent::femto_to_femto)] == 0.0);
  CHECK(est.mean_components[static_cast<int>(
            InterferenceComponent::femto_in_cell)] == 0.0);

  CHECK(Simulator(sc).threshold() ==
        doctest::Approx(derive(sc.params, 24.0, 10.0).macro_threshold));
}

TEST_CASE("same-cell macrocell interference matches the conditioned mean") {
  // Per sector and slot the cell holds Poisson(8) users conditioned on the
  // observed one; the others each contribute the controlled power.
  const ScenarioConfig sc = macro_scenario(24.0, 0.0);
  const std::vector<double> xs =
      sample_component(sc, InterferenceComponent::macro_in_cell, 5, 20000);
  const double a = 24.0 / 3.0;
  const double expect = (a / (-std::expm1(-a)) - 1.0) * sc.params.macro_rx_power;
  const double se = std::sqrt(a / 20000.0);
  CHECK(std::abs(mean_of(xs) - expect) < 4.0 * se);
}

TEST_CASE("transmitting-femtocell field has the thinned void probability") {
  // The chance that no transmitting femtocell lands in the observed wedge
  // pins the post-thinning intensity end to end.  The layout is symmetric
  // under one-third turns, so the wedge sees exactly a third of its area.
  ScenarioConfig sc = macro_scenario(0.0, 1.0);
  sc.params.hop_slots = 4;
  const double layout_cells = 19.0;

  sc.params.hopping = HoppingMode::joint;
  const std::vector<double> joint =
      sample_component(sc, InterferenceComponent::femto_to_macro, 6, 20000);
  const double mean_joint = layout_cells * (-std::expm1(-5.0)) / (3.0 * 4.0);
  const double p_joint = std::exp(-mean_joint);
  CHECK(std::abs(zero_fraction(joint) - p_joint) <
        4.0 * std::sqrt(p_joint * (1.0 - p_joint) / 20000.0));

  sc.params.hopping = HoppingMode::independent;
  const std::vector<double> ind =
      sample_component(sc, InterferenceComponent::femto_to_macro, 6, 20000);
  const double mean_ind = layout_cells * (-std::expm1(-5.0 / 4.0)) / 3.0;
  const double p_ind = std::exp(-mean_ind);
  CHECK(std::abs(zero_fraction(ind) - p_ind) <
        4.0 * std::sqrt(p_ind * (1.0 - p_ind) / 20000.0));
}

TEST_CASE("own-cell femtocell load follows the hopping mode") {
  ScenarioConfig sc;
  sc.mean_macro_users = 0.0;
  sc.mean_femtos = 0.0;
  sc.observer = ObserverKind::femto_interior;
  sc.femto_offset_m = 250.0;

  // Joint slot choice: every other user of the cell shares the slot.
  sc.params.hop_slots = 4;
  sc.params.hopping = HoppingMode::joint;
  const std::vector<double> joint =
      sample_component(sc, InterferenceComponent::femto_in_cell, 7, 8000);
  const double a = 5.0 / 3.0;  // per observed sector
  const double expect_joint = a / (-std::expm1(-a)) - 1.0;
  CHECK(mean_of(joint) == doctest::Approx(expect_joint).epsilon(0.06));

  // Independent choices: each co-user lands on the slot with chance 1/4.
  sc.params.hopping = HoppingMode::independent;
  const std::vector<double> ind =
      sample_component(sc, InterferenceComponent::femto_in_cell, 7, 8000);
  CHECK(mean_of(ind) == doctest::Approx(expect_joint / 4.0).epsilon(0.12));
}

TEST_CASE("tier selection thins reference-cell macro users as predicted") {
  ScenarioConfig sc = macro_scenario(24.0, 50.0);
  sc.params.tier_selection = true;
  const OutageEstimate est = simulate_outage(sc, 8, 2000);
  const double lam_f = 50.0 / hexagon_area(sc.params.macro_radius_m);
  const double survive = std::exp(-lam_f * M_PI * 400.0);
  CHECK(est.handoff_survival == doctest::Approx(survive).epsilon(0.01));
  CHECK(est.handoff_survival < 1.0);
}

TEST_CASE("an exclusion region strips the strongest cross-tier interferers") {
  ScenarioConfig near = macro_scenario(0.0, 40.0);
  ScenarioConfig far = near;
  far.params.exclusion_radius_m = 200.0;
  const std::vector<double> with_near =
      sample_component(near, InterferenceComponent::femto_to_macro, 9, 3000);
  const std::vector<double> without_near =
      sample_component(far, InterferenceComponent::femto_to_macro, 9, 3000);
  CHECK(mean_of(without_near) < mean_of(with_near));
}

TEST_CASE("a dedicated-spectrum baseline carries no cross-tier terms") {
  ScenarioConfig sc = macro_scenario(24.0, 40.0);
  sc.cross_tier = false;
  const std::vector<double> xs =
      sample_component(sc, InterferenceComponent::femto_to_macro, 10, 300);
  for (double x : xs) CHECK(x == 0.0);

  ScenarioConfig fc;
  fc.mean_macro_users = 24.0;
  fc.mean_femtos = 10.0;
  fc.observer = ObserverKind::femto_corner;
  fc.cross_tier = false;
  const std::vector<double> ys =
      sample_component(fc, InterferenceComponent::macro_to_femto, 10, 300);
  for (double y : ys) CHECK(y == 0.0);
}

TEST_SUITE_END();
