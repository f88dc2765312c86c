#include "twotier/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

#include "twotier/errors.hpp"

namespace twotier {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double path_gain(double ref_gain, double ref_dist, double exponent,
                 double dist) {
  if (ref_gain <= 0.0 || ref_dist <= 0.0 || dist <= 0.0) {
    throw DomainError("path_gain: gains and distances must be positive");
  }
  return ref_gain * std::pow(ref_dist / dist, exponent);
}

double transmit_power_macro(const SystemParams& p, const DerivedConstants& d,
                            double dist) {
  return p.macro_rx_power /
         path_gain(d.macro_ref_gain, p.outdoor_ref_m, p.outdoor_exponent, dist);
}

double transmit_power_femto(const SystemParams& p, const DerivedConstants& d) {
  // Cell-edge control: sized for a user at the femtocell coverage radius.
  return p.femto_rx_power / path_gain(d.femto_ref_gain, p.indoor_ref_m,
                                      p.indoor_exponent, p.femto_radius_m);
}

double macro_interference_term(const SystemParams& p, double controlled_power,
                               double own_dist, double observed_dist,
                               double shadow_ratio) {
  return controlled_power * shadow_ratio *
         std::pow(own_dist / observed_dist, p.outdoor_exponent);
}

double femto_interference_term(const SystemParams& p,
                               const DerivedConstants& d, double dist,
                               double shadow_ratio) {
  return d.femto_strength * shadow_ratio *
         std::pow(dist, -p.outdoor_exponent);
}

double ShadowLaw::moment(double q) const {
  const double s = sigma_ln();
  return std::exp(0.5 * q * q * s * s);
}

double ShadowLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (sigma_db == 0.0) return x >= 1.0 ? 1.0 : 0.0;
  return normal_cdf(std::log(x) / sigma_ln());
}

double ShadowLaw::ccdf(double x) const {
  if (x <= 0.0) return 1.0;
  if (sigma_db == 0.0) return x >= 1.0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(std::log(x) / (sigma_ln() * std::sqrt(2.0)));
}

double ShadowLaw::partial_moment(double q, double u) const {
  if (u <= 0.0) return 0.0;
  if (sigma_db == 0.0) return u >= 1.0 ? 1.0 : 0.0;
  const double s = sigma_ln();
  return moment(q) * normal_cdf((std::log(u) - q * s * s) / s);
}

CompoundMarkSpec compound_mark_spec(const SystemParams& p, std::uint64_t seed,
                                    std::uint64_t samples) {
  CompoundMarkSpec spec;
  spec.sigma_db = p.cross_sigma_db();
  spec.mean_users = p.hopping == HoppingMode::joint
                        ? p.mean_femto_users
                        : p.mean_femto_users / p.hop_slots;
  spec.order = 2.0 / p.outdoor_exponent;
  spec.samples = samples;
  spec.seed = seed;
  return spec;
}

ShadowMoments ShadowMoments::estimate(const CompoundMarkSpec& spec) {
  if (spec.samples < 1000) {
    throw InsufficientSamples("ShadowMoments: need at least 1000 samples");
  }
  RngStream rng(spec.seed, 0, StreamRole::shadow_moments);
  std::vector<double> draws(spec.samples);
  for (double& v : draws) {
    const unsigned users = rng.poisson_at_least_one(spec.mean_users);
    double sum = 0.0;
    for (unsigned u = 0; u < users; ++u) sum += rng.shadow_factor(spec.sigma_db);
    v = sum;
  }
  std::sort(draws.begin(), draws.end());

  ShadowMoments out;
  out.spec_ = spec;
  // Prefix sums of the tracked fractional power, for partial moments.
  std::vector<double> prefix(draws.size());
  double acc_q = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    acc_q += std::pow(draws[i], spec.order);
    acc += draws[i];
    prefix[i] = acc_q;
  }
  const double n = static_cast<double>(draws.size());
  out.moment_ = acc_q / n;
  out.mean_ = acc / n;

  const double lo = draws[static_cast<std::size_t>(1e-6 * n)];
  const double hi = draws.back();
  if (!(hi > lo)) {
    out.degenerate_ = true;
    out.atom_ = hi;
    return out;
  }
  constexpr std::size_t kGrid = 512;
  out.grid_.resize(kGrid);
  out.cdf_.resize(kGrid);
  out.partial_.resize(kGrid);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t k = 0; k < kGrid; ++k) {
    const double u =
        std::exp(llo + (lhi - llo) * static_cast<double>(k) / (kGrid - 1));
    const auto it = std::upper_bound(draws.begin(), draws.end(), u);
    const std::size_t count = static_cast<std::size_t>(it - draws.begin());
    out.grid_[k] = u;
    out.cdf_[k] = count / n;
    out.partial_[k] = count == 0 ? 0.0 : prefix[count - 1] / n;
  }
  out.cdf_.back() = 1.0;
  out.partial_.back() = out.moment_;
  return out;
}

namespace {

double interp_loglinear(const std::vector<double>& grid,
                        const std::vector<double>& values, double u,
                        double below, double above) {
  if (u <= grid.front()) return below;
  if (u >= grid.back()) return above;
  const auto it = std::upper_bound(grid.begin(), grid.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());
  const double x0 = std::log(grid[k - 1]), x1 = std::log(grid[k]);
  const double t = (std::log(u) - x0) / (x1 - x0);
  return values[k - 1] + t * (values[k] - values[k - 1]);
}

}  // namespace

double ShadowMoments::cdf(double u) const {
  if (u <= 0.0) return 0.0;
  if (degenerate_) return u >= atom_ ? 1.0 : 0.0;
  return interp_loglinear(grid_, cdf_, u, 0.0, 1.0);
}

double ShadowMoments::partial_moment(double u) const {
  if (u <= 0.0) return 0.0;
  if (degenerate_) return u >= atom_ ? moment_ : 0.0;
  return interp_loglinear(grid_, partial_, u, 0.0, moment_);
}

namespace {

std::mutex& moments_cache_mutex() {
  static std::mutex mutex;
  return mutex;
}

std::string& moments_cache_dir() {
  static std::string dir;
  return dir;
}

std::string spec_cache_name(const CompoundMarkSpec& spec) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g|%.17g|%.17g|%llu|%llu", spec.sigma_db,
                spec.mean_users, spec.order,
                (unsigned long long)spec.samples, (unsigned long long)spec.seed);
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (const char* p = buf; *p; ++p) {
    h ^= (unsigned char)*p;
    h *= 1099511628211ULL;
  }
  std::snprintf(buf, sizeof buf, "moments-%016llx.csv", (unsigned long long)h);
  return buf;
}

}  // namespace

void ShadowMoments::set_cache_dir(const std::string& dir) {
  std::lock_guard<std::mutex> lock(moments_cache_mutex());
  moments_cache_dir() = dir;
}

const ShadowMoments& ShadowMoments::cached(const CompoundMarkSpec& spec) {
  using Key = std::tuple<double, double, double, std::uint64_t, std::uint64_t>;
  static std::map<Key, ShadowMoments> cache;
  const Key key{spec.sigma_db, spec.mean_users, spec.order, spec.samples,
                spec.seed};
  std::lock_guard<std::mutex> lock(moments_cache_mutex());
  auto it = cache.find(key);
  if (it == cache.end()) {
    const std::string& dir = moments_cache_dir();
    if (!dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const std::string path =
          (std::filesystem::path(dir) / spec_cache_name(spec)).string();
      it = cache.emplace(key, load_or_estimate(spec, path)).first;
    } else {
      it = cache.emplace(key, estimate(spec)).first;
    }
  }
  return it->second;
}

void ShadowMoments::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "# aggregate femtocell mark law\n";
  os << "sigma_db," << spec_.sigma_db << "\n";
  os << "mean_users," << spec_.mean_users << "\n";
  os << "order," << spec_.order << "\n";
  os << "samples," << spec_.samples << "\n";
  os << "seed," << spec_.seed << "\n";
  os << "moment," << moment_ << "\n";
  os << "mean," << mean_ << "\n";
  os << "degenerate," << (degenerate_ ? 1 : 0) << "\n";
  os << "atom," << atom_ << "\n";
  os << "value,cdf,partial_moment\n";
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    os << grid_[k] << "," << cdf_[k] << "," << partial_[k] << "\n";
  }
}

ShadowMoments ShadowMoments::read_csv(std::istream& is) {
  ShadowMoments out;
  std::string line;
  auto fail = [](const std::string& why) -> double {
    throw GridMismatch("ShadowMoments::read_csv: " + why);
  };
  auto next_field = [&](const std::string& key) {
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) fail("missing ',' in: " + line);
      if (line.substr(0, comma) != key) fail("expected key " + key);
      return std::stod(line.substr(comma + 1));
    }
    return fail("unexpected end of file before " + key);
  };
  out.spec_.sigma_db = next_field("sigma_db");
  out.spec_.mean_users = next_field("mean_users");
  out.spec_.order = next_field("order");
  out.spec_.samples = static_cast<std::uint64_t>(next_field("samples"));
  out.spec_.seed = static_cast<std::uint64_t>(next_field("seed"));
  out.moment_ = next_field("moment");
  out.mean_ = next_field("mean");
  out.degenerate_ = next_field("degenerate") != 0.0;
  out.atom_ = next_field("atom");
  if (!std::getline(is, line) || line != "value,cdf,partial_moment") {
    fail("missing grid header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
        !std::getline(row, c)) {
      fail("bad grid row: " + line);
    }
    out.grid_.push_back(std::stod(a));
    out.cdf_.push_back(std::stod(b));
    out.partial_.push_back(std::stod(c));
  }
  if (!out.degenerate_ && out.grid_.size() < 2) fail("grid too small");
  return out;
}

ShadowMoments ShadowMoments::load_or_estimate(const CompoundMarkSpec& spec,
                                              const std::string& path) {
  {
    std::ifstream in(path);
    if (in) {
      try {
        ShadowMoments loaded = read_csv(in);
        if (loaded.spec_ == spec) return loaded;
      } catch (const GridMismatch&) {
        // fall through to re-estimation
      }
    }
  }
  ShadowMoments fresh = estimate(spec);
  std::ofstream out(path);
  if (out) fresh.write_csv(out);
  return fresh;
}

}  // namespace twotier
