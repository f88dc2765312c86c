#pragma once

#include <cmath>
#include <vector>

#include "twotier/params.hpp"
#include "twotier/rng.hpp"

namespace twotier {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  double angle() const { return std::atan2(y, x); }
};

/// Regular hexagon with a vertex on the +x axis of its local frame
/// (vertices at 0, 60, ..., 300 degrees).
class HexRegion {
 public:
  HexRegion(Vec2 center, double circumradius)
      : center_(center), radius_(circumradius) {}

  Vec2 center() const { return center_; }
  double circumradius() const { return radius_; }
  double apothem() const { return 0.5 * std::sqrt(3.0) * radius_; }
  double area() const { return 1.5 * std::sqrt(3.0) * radius_ * radius_; }
  Vec2 vertex(int k) const;

  bool contains(Vec2 p) const;

  /// Length of the part of the ray {origin + t*(cos a, sin a) : t >= 0}
  /// inside the hexagon.  origin must not be strictly outside.
  double ray_exit(Vec2 origin, double angle) const;

  /// Axis-aligned bounding box, for rejection sampling.
  void bbox(Vec2& lo, Vec2& hi) const;

 private:
  Vec2 center_;
  double radius_;
};

struct Disk {
  Vec2 center;
  double radius = 0.0;
  double area() const { return M_PI * radius * radius; }
  bool contains(Vec2 p) const { return (p - center).norm2() <= radius * radius; }
  void bbox(Vec2& lo, Vec2& hi) const {
    lo = {center.x - radius, center.y - radius};
    hi = {center.x + radius, center.y + radius};
  }
};

struct Annulus {
  Vec2 center;
  double inner = 0.0;
  double outer = 0.0;
  double area() const { return M_PI * (outer * outer - inner * inner); }
  bool contains(Vec2 p) const {
    const double d2 = (p - center).norm2();
    return d2 >= inner * inner && d2 <= outer * outer;
  }
  void bbox(Vec2& lo, Vec2& hi) const {
    lo = {center.x - outer, center.y - outer};
    hi = {center.x + outer, center.y + outer};
  }
};

/// Union of equal-radius hexagonal cells (e.g. a two-ring layout).
class MultiHex {
 public:
  explicit MultiHex(std::vector<HexRegion> cells) : cells_(std::move(cells)) {}
  const std::vector<HexRegion>& cells() const { return cells_; }
  double area() const {
    return cells_.empty() ? 0.0 : cells_.size() * cells_[0].area();
  }
  bool contains(Vec2 p) const {
    for (const auto& h : cells_) {
      if (h.contains(p)) return true;
    }
    return false;
  }

 private:
  std::vector<HexRegion> cells_;
};

/// Angular wedge [align, align + width) anchored at `apex`.  Angles are
/// reduced modulo 2*pi; width = 2*pi accepts everything.
struct SectorSpec {
  Vec2 apex;
  double align = 0.0;
  double width = 2.0 * M_PI;

  static SectorSpec omni(Vec2 apex) { return {apex, 0.0, 2.0 * M_PI}; }
  static SectorSpec of(Vec2 apex, double align, int sectors) {
    return {apex, align, 2.0 * M_PI / sectors};
  }

  bool contains(Vec2 p) const {
    if (width >= 2.0 * M_PI) return true;
    const Vec2 d = p - apex;
    if (d.x == 0.0 && d.y == 0.0) return true;
    double rel = std::fmod(d.angle() - align, 2.0 * M_PI);
    if (rel < 0.0) rel += 2.0 * M_PI;
    return rel < width;
  }
};

/// Positions of one realization of a point process, with optional
/// per-point femtocell marks.
struct FemtoMark {
  unsigned users = 0;              ///< active users in the femtocell
  std::vector<Vec2> user_offsets;  ///< positions relative to the femtocell
};

struct PointSample {
  std::vector<Vec2> positions;
  std::vector<FemtoMark> marks;  ///< empty, or one entry per position
};

/// Homogeneous Poisson sample on a window providing area()/bbox()/contains().
template <class Window>
PointSample sample_ppp(const Window& window, double intensity,
                       RngStream& rng) {
  if (intensity < 0.0) throw DomainError("sample_ppp: intensity must be >= 0");
  PointSample out;
  const double mean = intensity * window.area();
  const unsigned n = rng.poisson(mean);
  out.positions.reserve(n);
  Vec2 lo, hi;
  window.bbox(lo, hi);
  const double w = hi.x - lo.x, h = hi.y - lo.y;
  for (unsigned i = 0; i < n; ++i) {
    for (;;) {
      const Vec2 p{lo.x + w * rng.uniform01(), lo.y + h * rng.uniform01()};
      if (window.contains(p)) {
        out.positions.push_back(p);
        break;
      }
    }
  }
  return out;
}

/// Multi-cell sampling picks the cell first, avoiding a huge bounding box.
PointSample sample_ppp(const MultiHex& window, double intensity,
                       RngStream& rng);

/// Uniform point inside one window (rejection from the bounding box).
template <class Window>
Vec2 sample_uniform(const Window& window, RngStream& rng) {
  Vec2 lo, hi;
  window.bbox(lo, hi);
  const double w = hi.x - lo.x, h = hi.y - lo.y;
  for (;;) {
    const Vec2 p{lo.x + w * rng.uniform01(), lo.y + h * rng.uniform01()};
    if (window.contains(p)) return p;
  }
}

/// Independent Bernoulli thinning.
PointSample thin(const PointSample& sample, double keep_prob, RngStream& rng);

/// Keep the points inside an antenna sector.
PointSample sector_filter(const PointSample& sample, const SectorSpec& sector);

/// Attach user counts (Poisson with the given mean) and uniform in-disk
/// user offsets to every point.
void mark_femtocells(PointSample& sample, double mean_users,
                     double coverage_radius, RngStream& rng);

/// Post-thinning intensities of the interfering point processes on one
/// hopping slot and antenna sector.
struct EffectiveIntensities {
  double macro = 0.0;  ///< active macrocell users per unit area
  double femto = 0.0;  ///< transmitting femtocells per unit area
  double mean_users_per_active_femto = 0.0;
};
EffectiveIntensities effective_intensities(const SystemParams& p,
                                           double mean_macro_users,
                                           double mean_femtos);

/// Centers of a hexagonal layout: the reference cell plus `rings` rings
/// (rings = 2 gives the 19-cell layout).
std::vector<Vec2> hex_layout_centers(double circumradius, int rings);

/// Indices (into hex_layout_centers(..., >=1)) of the three cells meeting at
/// the reference cell's vertex on the +x axis; index 0 is the reference.
std::vector<int> cells_sharing_corner_vertex(double circumradius,
                                             const std::vector<Vec2>& centers);

}  // namespace twotier
