#pragma once

#include <cmath>

#include "twotier/params.hpp"

namespace twotier {

/// Which station's uplink is observed.
enum class ObserverKind {
  macro_station,   ///< the reference macrocell base station
  femto_interior,  ///< a femtocell inside the reference cell
  femto_corner,    ///< a femtocell on the corner shared by three cells
};

/// One load point of the network plus the observed link.
struct ScenarioConfig {
  SystemParams params;
  double mean_macro_users = 0.0;  ///< per macrocell
  double mean_femtos = 0.0;       ///< per macrocell
  ObserverKind observer = ObserverKind::macro_station;
  /// Distance of an interior femtocell observer from its macro station.
  double femto_offset_m = 0.0;
  /// Antenna alignment of the observed sector (radians).
  double sector_align = 2.0 * M_PI / 3.0;
  /// Observe with an omnidirectional antenna regardless of `params.sectors`.
  bool observer_omni = false;
  /// Include interference crossing tier boundaries (off for a dedicated-
  /// spectrum baseline).
  bool cross_tier = true;

  int observer_sectors() const { return observer_omni ? 1 : params.sectors; }
  bool femto_observer() const {
    return observer != ObserverKind::macro_station;
  }
};

}  // namespace twotier
