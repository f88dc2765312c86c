#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "twotier/analytic.hpp"
#include "twotier/channel.hpp"
#include "twotier/errors.hpp"
#include "twotier/geometry.hpp"
#include "twotier/params.hpp"
#include "twotier/quadrature.hpp"
#include "twotier/rng.hpp"

using namespace twotier;

namespace {

// Aggregate mark law degenerating to a unit point mass: no shadowing and a
// user count pinned to the conditioning atom.
const ShadowMoments& unit_marks() {
  static const ShadowMoments m = [] {
    CompoundMarkSpec spec;
    spec.sigma_db = 0.0;
    spec.mean_users = 1e-13;
    spec.order = 0.5;
    spec.samples = 1000;
    spec.seed = 1;
    return ShadowMoments::estimate(spec);
  }();
  return m;
}

double trunc_poisson_cdf(double mean, int upto) {
  double pmf = std::exp(-mean);
  double acc = 0.0;
  for (int m = 1; m <= upto; ++m) {
    pmf *= mean / m;
    acc += pmf;
  }
  return acc / (-std::expm1(-mean));
}

// Monte Carlo estimate of J(level): area-weighted mean of the single-user
// exceedance probability over the observer's visible in-cell regions.
double brute_force_geometry_integral(const SystemParams& p,
                                     const ObserverGeometry& g, double level,
                                     std::size_t draws, std::uint64_t seed) {
  const ShadowLaw shadow{p.cross_sigma_db()};
  const double alpha = p.outdoor_exponent;
  const double power = p.macro_rx_power;
  RngStream rng(seed, 0, StreamRole::scratch);
  const SectorSpec wedge{{0.0, 0.0}, g.wedge_align, g.wedge_width};
  double total = 0.0;
  for (const CellPatch& patch : g.patches) {
    double acc = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const Vec2 pos = sample_uniform(patch.hex, rng);
      if (!wedge.contains(pos)) continue;
      const double own = (pos - patch.own_station).norm();
      if (own <= 0.0) continue;
      const double arg = (level / power) * std::pow(pos.norm() / own, alpha);
      acc += shadow.ccdf(arg);
    }
    total += patch.hex.area() * acc / static_cast<double>(draws);
  }
  return total;
}

}  // namespace

TEST_SUITE_BEGIN("analytic");

TEST_CASE("one-sided stable law: closed form, normalization, inverse") {
  const LevyLaw law{2.0};
  // At y == scale the cdf is erfc(1).
  CHECK(law.cdf(2.0) == doctest::Approx(0.15729920705028513).epsilon(1e-12));
  for (double y : {0.1, 0.7, 2.0, 9.0, 150.0}) {
    CAPTURE(y);
    CHECK(law.cdf(y) ==
          doctest::Approx(std::erfc(std::sqrt(2.0 / y))).epsilon(1e-13));
    CHECK(law.cdf(y) + law.ccdf(y) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Monotone, with the right limits.
  double prev = 0.0;
  for (double y = 0.05; y < 400.0; y *= 1.7) {
    const double c = law.cdf(y);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(law.cdf(1e12) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(law.cdf(1e-12) == doctest::Approx(0.0));

  // The density integrates to the cdf.
  const double mass = integrate([&](double y) { return law.pdf(y); }, 0.0,
                                10.0, 1e-10);
  CHECK(mass == doctest::Approx(law.cdf(10.0)).epsilon(1e-8));

  for (double prob : {0.1, 0.5, 0.9}) {
    CAPTURE(prob);
    CHECK(law.cdf(law.quantile(prob)) == doctest::Approx(prob).epsilon(1e-9));
  }

  // Zero scale is a point mass at the origin.
  const LevyLaw zero{0.0};
  CHECK(zero.cdf(1e-9) == doctest::Approx(1.0));
  CHECK(zero.cdf(5.0) == doctest::Approx(1.0));
}

TEST_CASE("stable scale of the femtocell field follows the closed form") {
  const double eta = 2e-5, strength = 4e6, root_moment = 1.2;
  const double kappa = femto_aggregate_scale(eta, strength, root_moment);
  const double expect = eta * eta * std::pow(M_PI, 3.0) * strength *
                        root_moment * root_moment / 4.0;
  CHECK(kappa == doctest::Approx(expect).epsilon(1e-14));
  CHECK(femto_aggregate_scale(0.0, strength, root_moment) == 0.0);
}

TEST_CASE("characteristic-function inversion agrees with the closed form") {
  for (double scale : {0.5, 40.0}) {
    const LevyLaw law{scale};
    for (double f : {0.3, 1.0, 3.0, 10.0, 60.0}) {
      const double y = scale * f;
      CAPTURE(scale);
      CAPTURE(y);
      CHECK(std::abs(stable_cdf_by_inversion(scale, y) - law.cdf(y)) < 1e-5);
    }
  }
}

TEST_CASE("truncated gaussian: fit, law, thinning, degeneracy") {
  const TruncGaussian fit = TruncGaussian::fit({1.0, 2.0, 3.0, 4.0});
  CHECK(fit.location == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(fit.spread == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(TruncGaussian::fit({1.0}), InsufficientSamples);

  const TruncGaussian g{3.0, 2.0};
  const auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  CHECK(g.cdf(-1.0) == 0.0);
  CHECK(g.cdf(1e9) == doctest::Approx(1.0));
  for (double y : {0.5, 3.0, 6.5}) {
    CAPTURE(y);
    const double expect =
        (phi((y - 3.0) / 2.0) - phi(-1.5)) / phi(1.5);
    CHECK(g.cdf(y) == doctest::Approx(expect).epsilon(1e-12));
  }
  // Density mass matches the cdf and the quantile inverts it.
  CHECK(integrate([&](double y) { return g.pdf(y); }, 0.0, 6.0, 1e-10) ==
        doctest::Approx(g.cdf(6.0)).epsilon(1e-8));
  for (double prob : {0.05, 0.5, 0.95}) {
    CHECK(g.cdf(g.quantile(prob)) == doctest::Approx(prob).epsilon(1e-8));
  }

  const TruncGaussian kept = g.thinned(0.25);
  CHECK(kept.location == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(kept.spread == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(g.thinned(-0.5), DomainError);

  const TruncGaussian atom = TruncGaussian::fit({2.0, 2.0, 2.0});
  CHECK(atom.degenerate());
  CHECK(atom.cdf(1.999) == 0.0);
  CHECK(atom.cdf(2.0) == 1.0);
  CHECK(atom.quantile(0.3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(atom.pdf(2.0), DegenerateScenario);
}

TEST_CASE("occupancy-conditioned success sum against hand oracles") {
  const auto linear = [](double t) { return std::min(1.0, std::max(0.0, t / 10.0)); };

  // A vanishing cell load leaves just the observed user.
  CHECK(conditioned_occupancy_sum(0.0, 1.0, 3.2, linear) ==
        doctest::Approx(linear(3.2)).epsilon(1e-14));
  // One interferer already busts the budget.
  CHECK(conditioned_occupancy_sum(2.0, 4.0, 3.0, linear) == 0.0);
  CHECK_THROWS_AS(conditioned_occupancy_sum(2.0, 0.0, 3.0, linear), DomainError);

  // Three admissible occupancies, summed by hand.
  const double mean = 2.0;
  double expect = 0.0;
  double pmf = std::exp(-mean);
  for (int m = 1; m <= 3; ++m) {
    pmf *= mean / m;
    expect += pmf * linear(3.2 - (m - 1));
  }
  expect /= -std::expm1(-mean);
  CHECK(conditioned_occupancy_sum(2.0, 1.0, 3.2, linear) ==
        doctest::Approx(expect).epsilon(1e-13));

  // A certain success channel reduces to the truncated-count cdf.
  const auto one = [](double) { return 1.0; };
  CHECK(conditioned_occupancy_sum(2.0, 1.0, 3.2, one) ==
        doctest::Approx(trunc_poisson_cdf(2.0, 3)).epsilon(1e-13));
}

TEST_CASE("macrocell outage against direct series oracles") {
  // Only in-cell interference: outage is the truncated-count tail.
  MacroOutageTerms terms;
  terms.in_cell_mean = 2.0;
  terms.controlled_power = 1.0;
  terms.threshold = 3.0;
  terms.out_of_cell = TruncGaussian{0.0, 0.0};  // atom at zero
  const OutageEval pure = macro_outage(terms);
  CHECK(pure.outage ==
        doctest::Approx(1.0 - trunc_poisson_cdf(2.0, 3)).epsilon(1e-12));
  CHECK_FALSE(pure.strained);

  // Cross-tier interference enters through its cdf at the residual budget.
  const LevyLaw cross{0.8};
  terms.cross_tier_cdf = [&](double t) { return cross.cdf(t); };
  terms.threshold = 4.7;
  terms.in_cell_mean = 1.5;
  double expect = 0.0;
  double pmf = std::exp(-1.5);
  for (int m = 1; m <= 4; ++m) {
    pmf *= 1.5 / m;
    expect += pmf * cross.cdf(4.7 - (m - 1));
  }
  expect /= -std::expm1(-1.5);
  const OutageEval with_cross = macro_outage(terms);
  CHECK(with_cross.outage == doctest::Approx(1.0 - expect).epsilon(1e-10));

  // A degenerate out-of-cell shifts the residual budget by its location.
  terms.out_of_cell = TruncGaussian{1.25, 0.0};
  double shifted = 0.0;
  pmf = std::exp(-1.5);
  for (int m = 1; m <= 4; ++m) {
    pmf *= 1.5 / m;
    shifted += pmf * cross.cdf(4.7 - (m - 1) - 1.25);
  }
  shifted /= -std::expm1(-1.5);
  const OutageEval with_shift = macro_outage(terms);
  CHECK(with_shift.outage == doctest::Approx(1.0 - shifted).epsilon(1e-10));
  CHECK(with_shift.outage > with_cross.outage);

  // More in-cell load cannot reduce the outage.
  double prev = 0.0;
  for (double load : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    terms.in_cell_mean = load;
    const double out = macro_outage(terms).outage;
    CHECK(out >= prev - 1e-12);
    prev = out;
  }
}

TEST_CASE("exclusion-aware bound: closed form at zero radius, ordering") {
  const ShadowMoments& marks = unit_marks();
  REQUIRE(marks.moment() == doctest::Approx(1.0).epsilon(1e-12));

  const double eta = 3e-5, strength = 4e6;
  const ExclusionLaw flat(eta, strength, 0.5, 0.0, &marks);
  const LevyLaw exact{femto_aggregate_scale(eta, strength, marks.moment())};
  for (double y : {5.0, 50.0, 500.0, 5000.0, 5e4, 5e5}) {
    CAPTURE(y);
    // Void-probability form with unit marks.
    const double closed = std::exp(-M_PI * eta * std::sqrt(strength / y));
    CHECK(flat.cdf(y) == doctest::Approx(closed).epsilon(1e-10));
    // The bound can only sit above the exact stable cdf.
    CHECK(flat.cdf(y) >= exact.cdf(y) - 1e-12);
  }

  // Growing the forbidden disk only raises the bound, continuously.
  const ExclusionLaw r20(eta, strength, 0.5, 20.0, &marks);
  const ExclusionLaw r80(eta, strength, 0.5, 80.0, &marks);
  for (double y : {5.0, 500.0, 5e4}) {
    CAPTURE(y);
    CHECK(r20.cdf(y) >= flat.cdf(y) - 1e-12);
    CHECK(r80.cdf(y) >= r20.cdf(y) - 1e-12);
  }
  // Beyond the exclusion radius even the nearest admissible point is too
  // weak: the bound saturates at one.  With unit marks that happens at
  // y >= strength / R^4.
  CHECK(r80.cdf(strength / std::pow(80.0, 4.0) * 1.0001) == doctest::Approx(1.0));

  CHECK(ExclusionLaw(0.0, strength, 0.5, 0.0, &marks).cdf(3.0) == 1.0);
  CHECK(flat.cdf(0.0) == 0.0);
  CHECK_THROWS_AS(ExclusionLaw(eta, strength, 0.5, 0.0, nullptr), DomainError);
  CHECK_THROWS_AS(ExclusionLaw(eta, strength, 1.5, 0.0, &marks), DomainError);
}

TEST_CASE("observer geometry: visible areas at the exact anchor points") {
  const SystemParams p{};
  const double hex_area = hexagon_area(p.macro_radius_m);

  const MacroInterferenceBound interior_omni(
      p, interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, true));
  CHECK(interior_omni.visible_area() == doctest::Approx(hex_area).epsilon(1e-9));

  const MacroInterferenceBound corner_omni(
      p, corner_observer_geometry(p, 2.0 * M_PI / 3.0, true));
  CHECK(corner_omni.visible_area() ==
        doctest::Approx(3.0 * hex_area).epsilon(1e-9));

  // Sectored observers keep the wedge share of each patch; cross-check the
  // clipped area against direct spatial sampling.
  const ObserverGeometry wedge_geom =
      interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, false);
  const MacroInterferenceBound interior_sec(p, wedge_geom);
  const double sampled =
      brute_force_geometry_integral(p, wedge_geom, 0.0, 400000, 77);
  CHECK(interior_sec.visible_area() ==
        doctest::Approx(sampled).epsilon(0.005));
  CHECK(interior_sec.visible_area() < hex_area);

  // The zero-interference limit of the geometry integral is the visible area.
  CHECK(interior_sec.geometry_integral_exact(0.0) ==
        doctest::Approx(interior_sec.visible_area()).epsilon(1e-12));
}

TEST_CASE("geometry integral at the station reduces to a pure shadow tail") {
  const SystemParams p{};
  const ShadowLaw shadow{p.cross_sigma_db()};
  const double hex_area = hexagon_area(p.macro_radius_m);
  const MacroInterferenceBound at_station(
      p, interior_observer_geometry(p, 0.0, 0.0, true));
  for (double f : {0.25, 1.0, 4.0}) {
    const double level = f * p.macro_rx_power;
    CAPTURE(level);
    CHECK(at_station.geometry_integral_exact(level) ==
          doctest::Approx(shadow.ccdf(f) * hex_area).epsilon(1e-6));
    // The log-log lookup table adds interpolation error on top of the
    // quadrature, so the tabulated variant gets a looser budget.
    CHECK(at_station.geometry_integral(level) ==
          doctest::Approx(shadow.ccdf(f) * hex_area).epsilon(5e-3));
  }
}

TEST_CASE("geometry integral: interpolation accuracy and monotonicity") {
  const SystemParams p{};
  const MacroInterferenceBound bound(
      p, interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, false));
  double prev = bound.geometry_integral(1e-6);
  for (double y = 1e-4; y < 1e6; y *= 10.0) {
    const double table = bound.geometry_integral(y);
    const double exact = bound.geometry_integral_exact(y);
    CAPTURE(y);
    if (exact > 1e-8) {
      CHECK(std::abs(table - exact) / exact < 1e-3);
    }
    CHECK(table <= prev + 1e-9);
    prev = table;
  }
  // Distribution-bound identities.
  const double eta = 24.0 / hexagon_area(p.macro_radius_m);
  for (double y : {0.5, 8.0, 300.0}) {
    CHECK(bound.cdf_upper(y, eta) + bound.ccdf_lower(y, eta) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bound.cdf_upper(y, 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("sharp-threshold radial branches agree with spatial sampling") {
  // No shadowing turns the exceedance into a geometric indicator, which the
  // closed-form radial integral must reproduce across all three regimes of
  // the threshold radius.
  SystemParams p{};
  p.shadow_sigma_db = 0.0;

  const ObserverGeometry interior =
      interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, false);
  const MacroInterferenceBound interior_bound(p, interior);
  const ObserverGeometry corner = corner_observer_geometry(p, 0.0, true);
  const MacroInterferenceBound corner_bound(p, corner);

  for (double f : {0.3, 2.0, 20.0}) {
    const double level = f * p.macro_rx_power;
    CAPTURE(level);
    const double exact_i = interior_bound.geometry_integral_exact(level);
    const double mc_i =
        brute_force_geometry_integral(p, interior, level, 400000, 101);
    // Binomial error on an area fraction, four sigma.
    const double tol_i =
        4.0 * std::sqrt(std::max(mc_i, 1e3) * hexagon_area(500.0)) / 632.0;
    CHECK(std::abs(exact_i - mc_i) < tol_i);

    const double exact_c = corner_bound.geometry_integral_exact(level);
    const double mc_c =
        brute_force_geometry_integral(p, corner, level, 400000, 102);
    const double tol_c =
        4.0 * std::sqrt(std::max(mc_c, 1e3) * 3.0 * hexagon_area(500.0)) / 632.0;
    CHECK(std::abs(exact_c - mc_c) < tol_c);
  }
}

TEST_CASE("shadowed geometry integral agrees with spatial sampling") {
  const SystemParams p{};
  const ObserverGeometry geom =
      interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, false);
  const MacroInterferenceBound bound(p, geom);
  for (double f : {1.0, 10.0}) {
    const double level = f * p.macro_rx_power;
    CAPTURE(level);
    const double exact = bound.geometry_integral_exact(level);
    const double mc = brute_force_geometry_integral(p, geom, level, 400000, 103);
    CHECK(exact == doctest::Approx(mc).epsilon(0.01));
  }
}

TEST_CASE("femtocell outage lower bound: reductions and straining") {
  const SystemParams p{};
  const DerivedConstants d = derive(p, 24.0, 50.0);
  const MacroInterferenceBound bound(
      p, interior_observer_geometry(p, 250.0, 2.0 * M_PI / 3.0, false));

  FemtoOutageTerms terms;
  terms.occupancy_mean = 0.0;  // observed user alone in its cell
  terms.controlled_power = p.femto_rx_power;
  terms.threshold = d.femto_threshold;
  terms.cross_femto_scale = 0.0;
  terms.macro_intensity = d.macro_intensity;
  terms.macro_bound = &bound;

  // Without rival femtocells the bound is exactly the dominant-interferer
  // tail of the macro field.
  const OutageEval lone = femto_outage_lower_bound(terms);
  CHECK(lone.outage ==
        doctest::Approx(d.macro_intensity *
                        bound.geometry_integral(d.femto_threshold))
            .epsilon(1e-9));
  CHECK_FALSE(lone.strained);

  // Without any outside interference only the own-cell occupancy matters.
  FemtoOutageTerms own_only;
  own_only.occupancy_mean = 5.0 / 3.0;
  own_only.controlled_power = 1.0;
  own_only.threshold = 2.5;
  own_only.cross_femto_scale = 0.0;
  own_only.macro_intensity = 0.0;
  own_only.macro_bound = nullptr;
  const OutageEval occupancy = femto_outage_lower_bound(own_only);
  CHECK(occupancy.outage ==
        doctest::Approx(1.0 - trunc_poisson_cdf(5.0 / 3.0, 2)).epsilon(1e-10));

  // An absurd macro density drives the bound past one; it must clamp and
  // flag rather than return garbage.
  FemtoOutageTerms hot = terms;
  hot.macro_intensity = 1.0;  // one user per square meter
  const OutageEval strained = femto_outage_lower_bound(hot);
  CHECK(strained.strained);
  CHECK(strained.outage >= 0.0);
  CHECK(strained.outage <= 1.0);

  // With rival femtocells the outage can only grow.
  FemtoOutageTerms rivals = terms;
  rivals.cross_femto_scale = 5.0;
  CHECK(femto_outage_lower_bound(rivals).outage >= lone.outage - 1e-12);
}

TEST_CASE("tier-selection survival factor") {
  const SystemParams p{};
  const double area = hexagon_area(p.macro_radius_m);
  const double lam50 = 50.0 / area;
  CHECK(tier_selection_survival(lam50, p.femto_radius_m) ==
        doctest::Approx(std::exp(-lam50 * M_PI * 400.0)).epsilon(1e-14));
  CHECK(tier_selection_survival(lam50, p.femto_radius_m) ==
        doctest::Approx(0.9077965).epsilon(1e-6));
  CHECK(tier_selection_survival(0.0, p.femto_radius_m) == doctest::Approx(1.0));
  CHECK(tier_selection_survival(2.0 * lam50, p.femto_radius_m) <
        tier_selection_survival(lam50, p.femto_radius_m));
}

TEST_SUITE_END();
