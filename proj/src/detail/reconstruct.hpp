#pragma once

// Piecewise-linear reconstruction of mass * T#s0 from a map sampled on the
// reference grid, used by the SCDT inverse and the overlap test.
//
// Each image cell [y_i, y_i+1] receives exactly the reference mass of its
// cell, so the cumulative mass at every node matches F0 and transforming the
// reconstruction returns the same node values. Cells that bridge a gap of
// the support (a jump of the map, or a stretch where the other part is far
// denser) keep their mass in two small hats at their ends, limited so they
// stay clear of the other part's nodes.

#include <optional>
#include <span>
#include <vector>

#include "scdt/signal.hpp"
#include "scdt/transform.hpp"

namespace scdt::detail {

struct Profile {
  std::vector<double> x;  ///< strictly increasing
  std::vector<double> v;  ///< nonnegative, already scaled by the part mass
};

/// Nodes must be sorted and not all equal. `foreign` holds the sorted nodes
/// and mass of the other part, if any.
struct PartNodes {
  std::vector<double> y;
  double mass = 0.0;
};

Profile reconstruct(const PartNodes& part, const PartNodes* foreign, const Reference& ref);

/// Triangle of the given mass on [center - half_width, center + half_width].
Profile bump(double center, double half_width, double mass);

/// plus - minus on the union of both breakpoint sets. At least one part must
/// be present.
Signal combine(const std::optional<Profile>& plus, const std::optional<Profile>& minus);

/// Integral of min(plus, minus).
double overlap(const Profile& plus, const Profile& minus);

}  // namespace scdt::detail
