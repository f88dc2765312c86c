#include "twotier/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "twotier/errors.hpp"
#include "twotier/quadrature.hpp"

namespace twotier {

namespace {

constexpr double kTiny = 1e-12;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double LevyLaw::pdf(double y) const {
  if (y <= 0.0 || scale <= 0.0) return 0.0;
  // Evaluated in log space so the y -> 0 tail underflows to zero cleanly.
  const double log_pdf =
      0.5 * std::log(scale / M_PI) - 1.5 * std::log(y) - scale / y;
  return log_pdf < -700.0 ? 0.0 : std::exp(log_pdf);
}

double LevyLaw::cdf(double y) const {
  if (y < 0.0) return 0.0;
  if (scale <= 0.0) return 1.0;
  if (y == 0.0) return 0.0;
  return std::erfc(std::sqrt(scale / y));
}

double LevyLaw::quantile(double prob) const {
  if (prob < 0.0 || prob > 1.0) {
    throw DomainError("LevyLaw::quantile: probability outside [0, 1]");
  }
  if (scale <= 0.0) return 0.0;
  if (prob == 0.0) return 0.0;
  if (prob == 1.0) return std::numeric_limits<double>::infinity();
  // Invert erfc(sqrt(scale / y)) = prob by bisection on z = sqrt(scale/y).
  double lo = 0.0, hi = 1.0;
  while (std::erfc(hi) > prob) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > prob ? lo : hi) = mid;
  }
  const double z = 0.5 * (lo + hi);
  return scale / (z * z);
}

double femto_aggregate_scale(double femto_intensity, double femto_strength,
                             double mark_root_moment) {
  if (femto_intensity < 0.0 || femto_strength < 0.0 || mark_root_moment < 0.0) {
    throw DomainError("femto_aggregate_scale: negative input");
  }
  const double pi3 = M_PI * M_PI * M_PI;
  return femto_intensity * femto_intensity * pi3 * femto_strength *
         mark_root_moment * mark_root_moment / 4.0;
}

double stable_cdf_by_inversion(double scale, double y) {
  if (y <= 0.0) return 0.0;
  if (scale <= 0.0) return 1.0;
  // Characteristic function exp(-c sqrt(-it)) with c = 2 sqrt(scale); the
  // distribution function follows from the sign-inversion integral
  //   F(y) = 1/2 - (1/pi) Int_0^inf Im[e^{-ity} phi(t)] / t dt.
  // Substituting t = w^2 removes the endpoint singularity and leaves the
  // integrand exp(-c w / sqrt2) * sin(c w / sqrt2 - x w^2) * 2 / w with
  // x = y / c^2, which decays geometrically in w.
  const double c = 2.0 * std::sqrt(scale);
  const double x = y / (c * c);
  const double s = 1.0 / std::sqrt(2.0);
  const auto integrand = [&](double w) {
    return std::exp(-w * s) * std::sin(w * s - x * w * w) * 2.0 / w;
  };
  // Fixed panels sized to the local oscillation rate (phase' ~ 2 x w), so
  // each panel sees only a few radians and the embedded rule stays sharp.
  const double w_max = 34.0;
  double total = 0.0, total_err = 0.0;
  double w = 0.0;
  while (w < w_max) {
    const double h = std::min(0.5, 4.0 / (1.0 + 2.0 * x * (w + 0.25)));
    const double next = std::min(w_max, w + h);
    double err = 0.0;
    total += gauss_kronrod_15(integrand, w, next, &err);
    total_err += err;
    w = next;
  }
  if (total_err > 1e-6) {
    throw QuadratureFailure("stable_cdf_by_inversion: poor error estimate");
  }
  return clamp01(0.5 - total / M_PI);
}

bool TruncGaussian::degenerate() const {
  return spread <= kTiny * std::max(1.0, std::abs(location));
}

double TruncGaussian::pdf(double y) const {
  if (degenerate()) {
    throw DegenerateScenario("TruncGaussian::pdf: degenerate law has no density");
  }
  if (y < 0.0) return 0.0;
  const double z = (y - location) / spread;
  const double mass = normal_cdf(location / spread);
  return std::exp(-0.5 * z * z) / (spread * std::sqrt(2.0 * M_PI) * mass);
}

double TruncGaussian::cdf(double y) const {
  if (y < 0.0) return 0.0;
  if (degenerate()) return y >= location ? 1.0 : 0.0;
  const double mass = normal_cdf(location / spread);
  const double below = normal_cdf(-location / spread);
  return clamp01((normal_cdf((y - location) / spread) - below) / mass);
}

double TruncGaussian::quantile(double prob) const {
  if (prob < 0.0 || prob > 1.0) {
    throw DomainError("TruncGaussian::quantile: probability outside [0, 1]");
  }
  if (degenerate()) return location;
  if (prob == 0.0) return 0.0;
  double lo = 0.0;
  double hi = std::max(location, 0.0) + 40.0 * spread;
  if (prob == 1.0) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TruncGaussian TruncGaussian::thinned(double factor) const {
  if (factor < 0.0) throw DomainError("TruncGaussian::thinned: bad factor");
  // First and second cumulants of a shot-noise sum scale linearly with the
  // driving intensity, so the matched parameters transform directly.
  return {location * factor, spread * std::sqrt(factor)};
}

TruncGaussian TruncGaussian::fit(const std::vector<double>& samples) {
  if (samples.size() < 2) {
    throw InsufficientSamples("TruncGaussian::fit: need at least two samples");
  }
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= samples.size();
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (samples.size() - 1));
  return {mean, sd};
}

double conditioned_occupancy_sum(double mean, double controlled_power,
                                 double threshold,
                                 const std::function<double(double)>& other_cdf) {
  if (controlled_power <= 0.0) {
    throw DomainError("conditioned_occupancy_sum: power must be positive");
  }
  const double max_users = std::floor(threshold / controlled_power);
  if (max_users < 1.0) return 0.0;  // even a lone user busts the budget
  if (mean < kTiny) return other_cdf(threshold);
  const double norm = -std::expm1(-mean);
  // Poisson tail beyond mean + 40 sqrt(mean) + 60 is below double precision.
  const double cap = std::min(max_users, mean + 40.0 * std::sqrt(mean) + 60.0);
  double pmf = std::exp(-mean);  // value at m = 0, advanced in the loop
  double success = 0.0;
  for (double m = 1.0; m <= cap; m += 1.0) {
    pmf *= mean / m;
    success += pmf * other_cdf(threshold - (m - 1.0) * controlled_power);
  }
  return success / norm;
}

namespace {

// Integrates pdf(x) * other(t - x) over [0, t].  `anchors` are quantiles of
// the pdf's law: panel boundaries pinned to them keep a bump that is narrow
// relative to [0, t] visible to the adaptive rule.
template <class Pdf, class Other>
double convolve_at(const Pdf& pdf, const std::vector<double>& anchors,
                   const Other& other, double t, double panel_tol) {
  std::vector<double> cuts{0.0, t};
  for (double a : anchors) {
    if (a > 0.0 && a < t) cuts.push_back(a);
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += integrate([&](double x) { return pdf(x) * other(t - x); }, cuts[i],
                     cuts[i + 1], panel_tol);
  }
  return acc;
}

std::vector<double> law_anchors(const std::function<double(double)>& quantile) {
  static const double probs[] = {1e-6, 1e-3, 0.01, 0.05, 0.25, 0.5,
                                 0.75, 0.95, 0.99, 0.999, 1.0 - 1e-6};
  std::vector<double> out;
  out.reserve(std::size(probs));
  for (double p : probs) out.push_back(quantile(p));
  return out;
}

}  // namespace

OutageEval macro_outage(const MacroOutageTerms& terms) {
  const auto& cross = terms.cross_tier_cdf;
  const TruncGaussian& out = terms.out_of_cell;
  std::vector<double> anchors;
  if (cross && !out.degenerate()) {
    anchors = law_anchors([&](double p) { return out.quantile(p); });
  }
  // P(out_of_cell + cross_tier <= t), assembled per case.
  const auto joint_cdf = [&](double t) -> double {
    if (t < 0.0) return 0.0;
    if (!cross) return out.cdf(t);
    if (out.degenerate()) return t >= out.location ? cross(t - out.location) : 0.0;
    const double value = convolve_at([&](double x) { return out.pdf(x); },
                                     anchors, cross, t, 1e-10);
    return clamp01(value);
  };
  const double success =
      conditioned_occupancy_sum(terms.in_cell_mean, terms.controlled_power,
                                terms.threshold, joint_cdf);
  OutageEval eval;
  eval.raw = 1.0 - success;
  eval.outage = clamp01(eval.raw);
  eval.strained = eval.raw != eval.outage;
  return eval;
}

ExclusionLaw::ExclusionLaw(double femto_intensity, double femto_strength,
                           double order, double exclusion_radius,
                           const ShadowMoments* marks)
    : intensity_(femto_intensity),
      strength_(femto_strength),
      order_(order),
      radius_(exclusion_radius),
      marks_(marks) {
  if (intensity_ < 0.0 || strength_ <= 0.0 || order_ <= 0.0 || order_ >= 1.0 ||
      radius_ < 0.0) {
    throw DomainError("ExclusionLaw: invalid parameter");
  }
  if (marks_ == nullptr) throw DomainError("ExclusionLaw: marks required");
}

double ExclusionLaw::cdf(double y) const {
  if (y <= 0.0) return 0.0;
  if (intensity_ == 0.0) return 1.0;
  const double base = std::pow(strength_ / y, order_);
  double h;
  if (radius_ == 0.0) {
    h = base * marks_->moment();
  } else {
    // Forbidden disk: marks too weak to matter past the exclusion radius
    // stop contributing, which caps the exponent.
    const double u = (y / strength_) * std::pow(radius_, 2.0 / order_);
    h = base * (marks_->moment() - marks_->partial_moment(u)) -
        marks_->ccdf(u) * radius_ * radius_;
  }
  return std::exp(-M_PI * intensity_ * std::max(h, 0.0));
}

ObserverGeometry interior_observer_geometry(const SystemParams& p,
                                            double offset, double align,
                                            bool omni) {
  if (offset < 0.0 || offset >= p.macro_radius_m) {
    throw DomainError("interior_observer_geometry: offset outside the cell");
  }
  ObserverGeometry g;
  const Vec2 station{-offset, 0.0};  // observer-centered coordinates
  g.patches.push_back({HexRegion(station, p.macro_radius_m), station});
  g.wedge_align = align;
  g.wedge_width = omni ? 2.0 * M_PI : 2.0 * M_PI / p.sectors;
  return g;
}

ObserverGeometry corner_observer_geometry(const SystemParams& p, double align,
                                          bool omni) {
  ObserverGeometry g;
  const double r = p.macro_radius_m;
  // The three stations whose cells meet at the observer's corner, in
  // observer-centered coordinates.
  const Vec2 stations[3] = {
      {-r, 0.0},
      {0.5 * r, 0.5 * std::sqrt(3.0) * r},
      {0.5 * r, -0.5 * std::sqrt(3.0) * r},
  };
  for (const Vec2& s : stations) {
    g.patches.push_back({HexRegion(s, r), s});
  }
  g.wedge_align = align;
  g.wedge_width = omni ? 2.0 * M_PI : 2.0 * M_PI / p.sectors;
  return g;
}

namespace {

// Probability that one power-controlled user at polar position (r, phi)
// from the observer pushes more than `level` through the observer's
// antenna: its own station sits at `station`, so the received term is
// power * Psi * (own_dist / r)^alpha.
double exceedance(double level, double power, double alpha,
                  const ShadowLaw& shadow, double r, double own_dist) {
  if (own_dist <= 0.0) return 0.0;  // a user at its station transmits nothing
  const double arg = (level / power) * std::pow(r / own_dist, alpha);
  return shadow.ccdf(arg);
}

// Closed-form radial integral of S(r) * r over [0, r_exit] when there is
// no shadowing: S is then the indicator of r < rho * own_dist(r), whose
// boundary solves a quadratic in r.
double radial_integral_sharp(double level, double power, double alpha,
                             double r_exit, double station_dist,
                             double cos_angle) {
  const double rho = std::pow(power / level, 1.0 / alpha);
  const double v = station_dist;
  const double half_sq = [&]() -> double {
    if (v == 0.0) {
      // own_dist == r: the indicator is constant in r.
      return rho >= 1.0 ? r_exit * r_exit : 0.0;
    }
    if (rho == 1.0) {
      if (cos_angle >= 0.0) return r_exit * r_exit;
      const double r_star = v / (-2.0 * cos_angle);
      const double r = std::min(r_star, r_exit);
      return r * r;
    }
    const double disc = rho * rho * cos_angle * cos_angle + 1.0 - rho * rho;
    if (rho < 1.0) {
      const double r_star =
          (rho * rho * v * cos_angle + rho * v * std::sqrt(disc)) /
          (1.0 - rho * rho);
      const double r = std::min(std::max(r_star, 0.0), r_exit);
      return r * r;
    }
    // rho > 1: the indicator only fails on a window straddling the point
    // where the ray passes the user's own station.
    if (cos_angle >= 0.0 || disc <= 0.0) return r_exit * r_exit;
    const double num_lo = rho * rho * v * cos_angle + rho * v * std::sqrt(disc);
    const double num_hi = rho * rho * v * cos_angle - rho * v * std::sqrt(disc);
    const double r_lo = std::min(num_lo / (1.0 - rho * rho), r_exit);
    const double r_hi = std::min(num_hi / (1.0 - rho * rho), r_exit);
    return r_exit * r_exit - (r_hi * r_hi - r_lo * r_lo);
  }();
  return 0.5 * half_sq;
}

}  // namespace

MacroInterferenceBound::MacroInterferenceBound(const SystemParams& p,
                                               ObserverGeometry geometry)
    : MacroInterferenceBound(p, std::move(geometry), Options{}) {}

MacroInterferenceBound::MacroInterferenceBound(const SystemParams& p,
                                               ObserverGeometry geometry,
                                               Options options)
    : params_(p), geometry_(std::move(geometry)), options_(options) {
  if (geometry_.patches.empty()) {
    throw DomainError("MacroInterferenceBound: no visible region");
  }
  const GaussLegendre angular(options_.angular_nodes);
  // Visible area = J in the zero-level limit; reuse the same angular rule
  // with the exact radial integral of r dr.
  visible_area_ = 0.0;
  log_level_.resize(options_.grid_points);
  log_value_.resize(options_.grid_points);

  const double lo = std::log(options_.min_normalized * p.macro_rx_power);
  const double hi = std::log(options_.max_normalized * p.macro_rx_power);
  for (int k = 0; k < options_.grid_points; ++k) {
    log_level_[k] = lo + (hi - lo) * k / (options_.grid_points - 1);
    const double j = geometry_integral_exact(std::exp(log_level_[k]));
    log_value_[k] = std::log(std::max(j, 1e-300));
  }
  for (const CellPatch& patch : geometry_.patches) {
    // area = Int 0.5 * r_exit(phi)^2 dphi over the wedge directions that
    // actually enter the patch.
    std::vector<double> cuts{0.0, geometry_.wedge_width};
    for (int k = 0; k < 6; ++k) {
      const Vec2 vert = patch.hex.vertex(k);
      double rel = std::fmod(vert.angle() - geometry_.wedge_align, 2.0 * M_PI);
      if (rel < 0.0) rel += 2.0 * M_PI;
      if (rel > 0.0 && rel < geometry_.wedge_width) cuts.push_back(rel);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      visible_area_ += angular.apply(
          [&](double rel) {
            const double a = geometry_.wedge_align + rel;
            const double e = patch.hex.ray_exit({0.0, 0.0}, a);
            return 0.5 * e * e;
          },
          cuts[i], cuts[i + 1]);
    }
  }
}

double MacroInterferenceBound::geometry_integral_exact(double level) const {
  if (level <= 0.0) return visible_area_;
  const ShadowLaw shadow{params_.cross_sigma_db()};
  const double alpha = params_.outdoor_exponent;
  const double power = params_.macro_rx_power;
  const GaussLegendre angular(options_.angular_nodes);
  const GaussLegendre radial(options_.radial_nodes);
  const double rho = std::pow(power / level, 1.0 / alpha);

  double total = 0.0;
  for (const CellPatch& patch : geometry_.patches) {
    std::vector<double> cuts{0.0, geometry_.wedge_width};
    for (int k = 0; k < 6; ++k) {
      const Vec2 vert = patch.hex.vertex(k);
      double rel = std::fmod(vert.angle() - geometry_.wedge_align, 2.0 * M_PI);
      if (rel < 0.0) rel += 2.0 * M_PI;
      if (rel > 0.0 && rel < geometry_.wedge_width) cuts.push_back(rel);
    }
    std::sort(cuts.begin(), cuts.end());
    const double station_dist = patch.own_station.norm();
    const double station_angle = patch.own_station.angle();

    const auto ray_value = [&](double rel) -> double {
      const double a = geometry_.wedge_align + rel;
      const double r_exit = patch.hex.ray_exit({0.0, 0.0}, a);
      if (r_exit <= 0.0) return 0.0;
      const double cos_angle =
          station_dist == 0.0 ? 1.0 : -std::cos(a - station_angle);
      // cos_angle is the cosine between the ray direction and the vector
      // from the station to the observer, giving
      // own_dist^2 = r^2 + 2 r station_dist cos_angle + station_dist^2.
      if (shadow.sigma_db == 0.0) {
        return radial_integral_sharp(level, power, alpha, r_exit, station_dist,
                                     cos_angle);
      }
      // Split the radial panel at the sharp-shadowing transition radii so
      // small spreads stay resolved.
      std::vector<double> r_cuts{0.0, r_exit};
      const double disc = rho * rho * cos_angle * cos_angle + 1.0 - rho * rho;
      if (station_dist > 0.0 && rho != 1.0 && disc > 0.0) {
        const double den = 1.0 - rho * rho;
        for (double sgn : {1.0, -1.0}) {
          const double r = (rho * rho * station_dist * cos_angle +
                            sgn * rho * station_dist * std::sqrt(disc)) /
                           den;
          if (r > 0.0 && r < r_exit) r_cuts.push_back(r);
        }
      }
      std::sort(r_cuts.begin(), r_cuts.end());
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < r_cuts.size(); ++i) {
        acc += radial.apply(
            [&](double r) {
              const double own = std::sqrt(std::max(
                  r * r + 2.0 * r * station_dist * cos_angle +
                      station_dist * station_dist,
                  0.0));
              return exceedance(level, power, alpha, shadow, r, own) * r;
            },
            r_cuts[i], r_cuts[i + 1]);
      }
      return acc;
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      total += angular.apply(ray_value, cuts[i], cuts[i + 1]);
    }
  }
  return total;
}

double MacroInterferenceBound::geometry_integral(double level) const {
  if (level <= 0.0) return visible_area_;
  const double ll = std::log(level);
  if (ll <= log_level_.front()) return std::exp(log_value_.front());
  const std::size_t n = log_level_.size();
  std::size_t k;
  if (ll >= log_level_.back()) {
    k = n - 1;  // extrapolate with the final (power-law) slope
  } else {
    k = static_cast<std::size_t>(
        std::upper_bound(log_level_.begin(), log_level_.end(), ll) -
        log_level_.begin());
  }
  const double x0 = log_level_[k - 1], x1 = log_level_[k];
  const double t = (ll - x0) / (x1 - x0);
  return std::exp(log_value_[k - 1] + t * (log_value_[k] - log_value_[k - 1]));
}

double MacroInterferenceBound::cdf_upper(double level, double intensity) const {
  if (level < 0.0) return 0.0;
  if (intensity < 0.0) throw DomainError("cdf_upper: negative intensity");
  return std::exp(-intensity * geometry_integral(level));
}

double MacroInterferenceBound::ccdf_lower(double level,
                                          double intensity) const {
  return 1.0 - cdf_upper(level, intensity);
}

double MacroInterferenceBound::visible_area() const { return visible_area_; }

OutageEval femto_outage_lower_bound(const FemtoOutageTerms& terms) {
  const LevyLaw rivals{terms.cross_femto_scale};
  bool strained = false;
  std::vector<double> anchors;
  double correction_tol = 1e-10;
  if (terms.macro_bound != nullptr && terms.cross_femto_scale > 0.0) {
    anchors = law_anchors([&](double p) { return rivals.quantile(p); });
    correction_tol = 1e-9 * std::max(1.0, terms.macro_bound->visible_area());
  }
  // Success bound per occupancy: the rival-femtocell distribution minus the
  // expected-count correction for macro users heard above the residual
  // budget: G(t) = F(t) - intensity * Int_0^t f(t - y) J(y) dy.
  const auto bound_cdf = [&](double t) -> double {
    if (t < 0.0) return 0.0;
    double value;
    if (terms.macro_bound == nullptr || terms.macro_intensity == 0.0) {
      value = rivals.cdf(t);
    } else if (terms.cross_femto_scale <= 0.0) {
      value = 1.0 - terms.macro_intensity *
                        terms.macro_bound->geometry_integral(t);
    } else {
      const double correction = convolve_at(
          [&](double x) { return rivals.pdf(x); }, anchors,
          [&](double y) { return terms.macro_bound->geometry_integral(y); }, t,
          correction_tol);
      value = rivals.cdf(t) - terms.macro_intensity * correction;
    }
    if (value < 0.0) strained = true;
    return value;
  };
  const double success =
      conditioned_occupancy_sum(terms.occupancy_mean, terms.controlled_power,
                                terms.threshold, bound_cdf);
  OutageEval eval;
  eval.raw = 1.0 - success;
  eval.outage = clamp01(eval.raw);
  eval.strained = strained || eval.raw != eval.outage;
  return eval;
}

double tier_selection_survival(double femto_intensity, double coverage_radius) {
  if (femto_intensity < 0.0 || coverage_radius < 0.0) {
    throw DomainError("tier_selection_survival: negative input");
  }
  return std::exp(-femto_intensity * M_PI * coverage_radius * coverage_radius);
}

}  // namespace twotier
