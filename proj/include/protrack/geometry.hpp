#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace protrack {

/// Axis-aligned box, top-left origin, half-open extent [x, x+w) x [y, y+h).
struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double area() const { return w * h; }
  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }

  bool operator==(const BBox&) const = default;
};

inline BBox intersect(const BBox& a, const BBox& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.w, b.x + b.w);
  const double y1 = std::min(a.y + a.h, b.y + b.h);
  if (x1 <= x0 || y1 <= y0) return {};
  return {x0, y0, x1 - x0, y1 - y0};
}

/// Per-frame ground truth; absent frames carry no box.
struct Annotation {
  std::optional<BBox> box;

  bool present() const { return box.has_value(); }

  static Annotation absent() { return {}; }
  static Annotation of(const BBox& b) { return {b}; }

  bool operator==(const Annotation&) const = default;
};

}  // namespace protrack
