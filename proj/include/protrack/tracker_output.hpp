#pragma once

#include "protrack/geometry.hpp"

namespace protrack {

/// Per-frame tracker verdict. When reported is false the box is the last
/// known box carried forward; confidence is always finite.
struct TrackerOutput {
  BBox box;
  double confidence = 0.0;
  bool reported = false;

  bool operator==(const TrackerOutput&) const = default;
};

}  // namespace protrack
