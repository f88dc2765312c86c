#pragma once

#include <functional>
#include <vector>

#include "twotier/channel.hpp"
#include "twotier/geometry.hpp"
#include "twotier/params.hpp"

namespace twotier {

/// One-sided stable law (index 1/2) with density
///   f(y) = sqrt(scale/pi) * y^(-3/2) * exp(-scale/y),   y > 0.
/// scale == 0 degenerates to a point mass at the origin.
struct LevyLaw {
  double scale = 0.0;

  double pdf(double y) const;
  double cdf(double y) const;
  double ccdf(double y) const { return 1.0 - cdf(y); }
  double quantile(double prob) const;
};

/// Stable scale of the aggregate interference produced by a plane of
/// transmitting femtocells with post-thinning intensity
/// `femto_intensity`, field strength Q and aggregate-mark fractional
/// moment E[Psi^(1/2)] = `mark_root_moment` (inverse-fourth-power decay).
double femto_aggregate_scale(double femto_intensity, double femto_strength,
                             double mark_root_moment);

/// Distribution function of the same aggregate recovered by numeric
/// inversion of its characteristic function (an independent route used
/// for cross-validation; the closed form is LevyLaw::cdf).
double stable_cdf_by_inversion(double scale, double y);

/// Gaussian restricted to [0, inf): the moment-matched model of the
/// out-of-cell macrocell interference.
struct TruncGaussian {
  double location = 0.0;
  double spread = 0.0;  ///< spread == 0 degenerates to an atom at `location`

  bool degenerate() const;
  double pdf(double y) const;
  double cdf(double y) const;
  double quantile(double prob) const;
  /// Thinning the generating point process by `factor` scales the first
  /// two moments linearly; the matched parameters follow suit.
  TruncGaussian thinned(double factor) const;
  static TruncGaussian fit(const std::vector<double>& samples);
};

/// Success-probability accumulator shared by both tiers: occupancy of the
/// observed cell is Poisson(`mean`) conditioned on at least one user (the
/// observed one), each same-cell interferer adds `controlled_power`, and
/// `other_cdf(t)` is the probability that all remaining interference stays
/// below t.  Returns sum_m P(occupancy = m) * other_cdf(threshold - (m-1)*power).
double conditioned_occupancy_sum(double mean, double controlled_power,
                                 double threshold,
                                 const std::function<double(double)>& other_cdf);

struct OutageEval {
  double outage = 1.0;  ///< clamped to [0, 1]
  double raw = 1.0;     ///< before clamping
  bool strained = false;  ///< a bound term left [0, 1] on the way
};

/// Outage probability of a macrocell uplink.
struct MacroOutageTerms {
  double in_cell_mean = 0.0;      ///< same-slot, same-sector users per cell
  double controlled_power = 1.0;  ///< received power per macro user
  double threshold = 0.0;         ///< interference budget of the link
  TruncGaussian out_of_cell;      ///< fitted out-of-cell interference law
  /// cdf of the cross-tier (femtocell) interference; empty means none.
  std::function<double(double)> cross_tier_cdf;
};
OutageEval macro_outage(const MacroOutageTerms& terms);

/// Exclusion-aware distribution bound for the aggregate femtocell
/// interference at a station that keeps femtocells at least
/// `exclusion_radius` away.  cdf(y) = exp(-pi * intensity * H(y)) with the
/// partial-moment correction accounting for the forbidden disk.
class ExclusionLaw {
 public:
  ExclusionLaw(double femto_intensity, double femto_strength, double order,
               double exclusion_radius, const ShadowMoments* marks);

  double cdf(double y) const;
  double ccdf(double y) const { return 1.0 - cdf(y); }

 private:
  double intensity_;
  double strength_;
  double order_;
  double radius_;
  const ShadowMoments* marks_;
};

/// Observing station geometry for the macro-to-femto interference bound:
/// the in-cell regions whose power-controlled users it hears, expressed in
/// coordinates centered on the observer.
struct CellPatch {
  HexRegion hex;
  Vec2 own_station;  ///< base station the patch's users are controlled to
};
struct ObserverGeometry {
  std::vector<CellPatch> patches;
  double wedge_align = 0.0;
  double wedge_width = 2.0 * M_PI;
};

/// Observer inside the reference cell, `offset` meters from its station.
ObserverGeometry interior_observer_geometry(const SystemParams& p,
                                            double offset, double align,
                                            bool omni);
/// Observer on the corner shared by three cells.
ObserverGeometry corner_observer_geometry(const SystemParams& p, double align,
                                          bool omni);

/// Distribution bound for the interference a femtocell-tier station
/// receives from power-controlled macrocell users:
///   cdf(y) <= exp(-intensity * J(y)),
/// where J integrates the single-term exceedance probability over the
/// observer's visible in-cell regions.  J depends on the system parameters
/// only through the normalized level y / controlled_power, so one table
/// serves every load point.
class MacroInterferenceBound {
 public:
  struct Options {
    int grid_points = 256;
    int angular_nodes = 20;
    int radial_nodes = 16;
    double min_normalized = 1e-8;
    double max_normalized = 1e10;
  };

  MacroInterferenceBound(const SystemParams& p, ObserverGeometry geometry);
  MacroInterferenceBound(const SystemParams& p, ObserverGeometry geometry,
                         Options options);

  /// Table-interpolated J(y).
  double geometry_integral(double y) const;
  /// Direct quadrature of J(y), bypassing the table (for verification).
  double geometry_integral_exact(double y) const;
  /// intensity = per-slot density of interfering macro users.
  double cdf_upper(double y, double intensity) const;
  double ccdf_lower(double y, double intensity) const;
  /// Area of the visible region (the y -> 0 limit of J).
  double visible_area() const;

 private:
  SystemParams params_;
  ObserverGeometry geometry_;
  Options options_;
  double visible_area_ = 0.0;
  std::vector<double> log_level_;  ///< ln of the interference level
  std::vector<double> log_value_;  ///< ln J at those levels
};

/// Outage lower bound for a femtocell uplink.
struct FemtoOutageTerms {
  double occupancy_mean = 0.0;    ///< same-slot sector users, before conditioning
  double controlled_power = 1.0;  ///< received power per femto user
  double threshold = 0.0;
  double cross_femto_scale = 0.0;          ///< stable scale of rival femtocells
  double macro_intensity = 0.0;            ///< per-slot macro user density
  const MacroInterferenceBound* macro_bound = nullptr;
};
OutageEval femto_outage_lower_bound(const FemtoOutageTerms& terms);

/// Survival probability of a macrocell user under tier selection: the
/// chance no femtocell covers it, for femtocell density `femto_intensity`.
double tier_selection_survival(double femto_intensity, double coverage_radius);

}  // namespace twotier
