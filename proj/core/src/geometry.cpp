#include "twotier/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "twotier/errors.hpp"

namespace twotier {

namespace {

// Outward edge normals of a vertex-on-+x hexagon.  Each edge satisfies
// dot(p - center, n_k) <= apothem; the six edges come in three +/- pairs.
constexpr double kSqrt3Over2 = 0.86602540378443864676;
const Vec2 kEdgeNormals[3] = {
    {kSqrt3Over2, 0.5},
    {0.0, 1.0},
    {-kSqrt3Over2, 0.5},
};

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

}  // namespace

Vec2 HexRegion::vertex(int k) const {
  const double a = k * (M_PI / 3.0);
  return {center_.x + radius_ * std::cos(a), center_.y + radius_ * std::sin(a)};
}

bool HexRegion::contains(Vec2 p) const {
  const Vec2 d = p - center_;
  const double limit = apothem();
  for (const Vec2& n : kEdgeNormals) {
    if (std::abs(dot(d, n)) > limit) return false;
  }
  return true;
}

double HexRegion::ray_exit(Vec2 origin, double angle) const {
  const Vec2 d = origin - center_;
  const Vec2 u{std::cos(angle), std::sin(angle)};
  const double limit = apothem();
  double t_exit = std::numeric_limits<double>::infinity();
  for (const Vec2& n : kEdgeNormals) {
    const double speed = dot(u, n);
    const double offset = dot(d, n);
    // Each pair of parallel edges clips the ray to dot <= limit on both
    // signs; only the half-plane the ray is moving towards matters.
    if (speed > 0.0) {
      t_exit = std::min(t_exit, (limit - offset) / speed);
    } else if (speed < 0.0) {
      t_exit = std::min(t_exit, (-limit - offset) / speed);
    } else if (std::abs(offset) > limit) {
      return 0.0;  // moving parallel to an edge pair, already outside it
    }
  }
  return std::max(t_exit, 0.0);
}

void HexRegion::bbox(Vec2& lo, Vec2& hi) const {
  lo = {center_.x - radius_, center_.y - apothem()};
  hi = {center_.x + radius_, center_.y + apothem()};
}

PointSample sample_ppp(const MultiHex& window, double intensity,
                       RngStream& rng) {
  if (intensity < 0.0) throw DomainError("sample_ppp: intensity must be >= 0");
  PointSample out;
  const auto& cells = window.cells();
  if (cells.empty()) return out;
  const unsigned n = rng.poisson(intensity * window.area());
  out.positions.reserve(n);
  for (unsigned i = 0; i < n; ++i) {
    const auto& cell = cells[rng.uniform_index(cells.size())];
    out.positions.push_back(sample_uniform(cell, rng));
  }
  return out;
}

PointSample thin(const PointSample& sample, double keep_prob, RngStream& rng) {
  if (keep_prob < 0.0 || keep_prob > 1.0) {
    throw DomainError("thin: keep probability must lie in [0, 1]");
  }
  PointSample out;
  const bool marked = !sample.marks.empty();
  for (std::size_t i = 0; i < sample.positions.size(); ++i) {
    if (rng.uniform01() < keep_prob) {
      out.positions.push_back(sample.positions[i]);
      if (marked) out.marks.push_back(sample.marks[i]);
    }
  }
  return out;
}

PointSample sector_filter(const PointSample& sample, const SectorSpec& sector) {
  PointSample out;
  const bool marked = !sample.marks.empty();
  for (std::size_t i = 0; i < sample.positions.size(); ++i) {
    if (sector.contains(sample.positions[i])) {
      out.positions.push_back(sample.positions[i]);
      if (marked) out.marks.push_back(sample.marks[i]);
    }
  }
  return out;
}

void mark_femtocells(PointSample& sample, double mean_users,
                     double coverage_radius, RngStream& rng) {
  sample.marks.clear();
  sample.marks.reserve(sample.positions.size());
  for (std::size_t i = 0; i < sample.positions.size(); ++i) {
    FemtoMark mark;
    mark.users = rng.poisson(mean_users);
    mark.user_offsets.reserve(mark.users);
    for (unsigned u = 0; u < mark.users; ++u) {
      // Uniform in a disk: sqrt-radius times a uniform angle.
      const double r = coverage_radius * std::sqrt(rng.uniform01());
      const double a = 2.0 * M_PI * rng.uniform01();
      mark.user_offsets.push_back({r * std::cos(a), r * std::sin(a)});
    }
    sample.marks.push_back(std::move(mark));
  }
}

EffectiveIntensities effective_intensities(const SystemParams& p,
                                           double mean_macro_users,
                                           double mean_femtos) {
  const double area = hexagon_area(p.macro_radius_m);
  const double lambda_c = mean_macro_users / area;
  const double lambda_f = mean_femtos / area;
  EffectiveIntensities out;
  out.macro = lambda_c / (p.hop_slots * p.sectors);
  if (p.hopping == HoppingMode::joint) {
    // Every occupied femtocell transmits; all its users ride one slot.
    out.femto = lambda_f * (-std::expm1(-p.mean_femto_users)) /
                (p.hop_slots * p.sectors);
    out.mean_users_per_active_femto =
        p.mean_femto_users <= 0.0
            ? 0.0
            : p.mean_femto_users / (-std::expm1(-p.mean_femto_users));
  } else {
    // Users pick slots independently; a femtocell transmits on the
    // observed slot when at least one of its users landed there.
    const double per_slot = p.mean_femto_users / p.hop_slots;
    out.femto = (lambda_f / p.sectors) * (-std::expm1(-per_slot));
    out.mean_users_per_active_femto =
        per_slot <= 0.0 ? 0.0 : per_slot / (-std::expm1(-per_slot));
  }
  return out;
}

std::vector<Vec2> hex_layout_centers(double circumradius, int rings) {
  if (rings < 0) throw DomainError("hex_layout_centers: rings must be >= 0");
  const Vec2 a{1.5 * circumradius, kSqrt3Over2 * circumradius};
  const Vec2 b{1.5 * circumradius, -kSqrt3Over2 * circumradius};
  std::vector<Vec2> centers;
  for (int i = -rings; i <= rings; ++i) {
    for (int j = -rings; j <= rings; ++j) {
      const int dist = (std::abs(i) + std::abs(j) + std::abs(i + j)) / 2;
      if (dist > rings) continue;
      centers.push_back({i * a.x + j * b.x, i * a.y + j * b.y});
    }
  }
  // Reference cell first, then by distance, for reproducible ordering.
  std::sort(centers.begin(), centers.end(), [](Vec2 l, Vec2 r) {
    const double dl = l.norm2(), dr = r.norm2();
    if (dl != dr) return dl < dr;
    const double al = std::atan2(l.y, l.x), ar = std::atan2(r.y, r.x);
    return al < ar;
  });
  return centers;
}

std::vector<int> cells_sharing_corner_vertex(double circumradius,
                                             const std::vector<Vec2>& centers) {
  const Vec2 corner{circumradius, 0.0};
  std::vector<int> out;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const HexRegion hex(centers[i], circumradius);
    for (int k = 0; k < 6; ++k) {
      const Vec2 v = hex.vertex(k);
      if ((v - corner).norm() < 1e-9 * circumradius) {
        out.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return out;
}

}  // namespace twotier
