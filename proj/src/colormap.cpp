#include "protrack/colormap.hpp"

#include "protrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace protrack {

const char* to_string(ModalityKind kind) {
  switch (kind) {
    case ModalityKind::Visible: return "visible";
    case ModalityKind::Depth: return "depth";
    case ModalityKind::Thermal: return "thermal";
    case ModalityKind::Event: return "event";
  }
  return "?";
}

ModalityKind modality_from_string(const std::string& name) {
  if (name == "visible") return ModalityKind::Visible;
  if (name == "depth") return ModalityKind::Depth;
  if (name == "thermal") return ModalityKind::Thermal;
  if (name == "event") return ModalityKind::Event;
  throw ConfigError("unknown modality tag: " + name);
}

const char* to_string(ColormapKind kind) {
  switch (kind) {
    case ColormapKind::Jet: return "jet";
    case ColormapKind::Red: return "red";
    case ColormapKind::Gray: return "gray";
    case ColormapKind::EventPolarity: return "event";
    case ColormapKind::Passthrough: return "passthrough";
  }
  return "?";
}

ColormapKind colormap_from_string(const std::string& name) {
  if (name == "jet") return ColormapKind::Jet;
  if (name == "red") return ColormapKind::Red;
  if (name == "gray") return ColormapKind::Gray;
  if (name == "event") return ColormapKind::EventPolarity;
  if (name == "passthrough") return ColormapKind::Passthrough;
  throw ConfigError("unknown colormap: " + name);
}

NormPolicy NormPolicy::fixed_range(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("fixed range requires lo < hi");
  return {Mode::FixedRange, lo, hi};
}

NormPolicy NormPolicy::percentile(double p_lo, double p_hi) {
  if (!(0.0 <= p_lo && p_lo < p_hi && p_hi <= 100.0))
    throw std::invalid_argument("percentiles require 0 <= p_lo < p_hi <= 100");
  return {Mode::Percentile, p_lo, p_hi};
}

namespace {

// Linear-interpolated quantile of the sorted sample, p in [0,100].
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  if (n == 1) return sorted[0];
  const double rank = p / 100.0 * static_cast<double>(n - 1);
  const auto i = static_cast<size_t>(std::floor(rank));
  if (i + 1 >= n) return sorted[n - 1];
  const double frac = rank - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

void check_unit(double v, const char* fn) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(fn) + ": value outside [0,1]");
}

}  // namespace

Image normalize(const Image& img, const NormPolicy& policy) {
  if (img.channels() != 1) throw std::invalid_argument("normalize expects a single-channel image");
  const Plane& src = img.plane(0);

  double lo = 0.0, hi = 1.0;
  switch (policy.mode) {
    case NormPolicy::Mode::FixedRange:
      lo = policy.lo;
      hi = policy.hi;
      break;
    case NormPolicy::Mode::MinMax:
      lo = src.minCoeff();
      hi = src.maxCoeff();
      break;
    case NormPolicy::Mode::Percentile: {
      std::vector<double> values(src.data(), src.data() + src.size());
      std::sort(values.begin(), values.end());
      lo = quantile_sorted(values, policy.lo);
      hi = quantile_sorted(values, policy.hi);
      break;
    }
  }

  Image out(img.height(), img.width(), 1);
  if (hi == lo) {
    out.plane(0).setConstant(0.5);
    return out;
  }
  out.plane(0) = ((src - lo) / (hi - lo)).cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

Rgb jet(double v) {
  check_unit(v, "jet");
  return {clamp_unit(1.5 - std::abs(4.0 * v - 3.0)),
          clamp_unit(1.5 - std::abs(4.0 * v - 2.0)),
          clamp_unit(1.5 - std::abs(4.0 * v - 1.0))};
}

Rgb red(double v) {
  check_unit(v, "red");
  return {v, 0.0, 0.0};
}

Rgb gray(double v) {
  check_unit(v, "gray");
  return {v, v, v};
}

namespace {

Image map_plane(const Plane& p, Rgb (*fn)(double)) {
  Image out(p.rows(), p.cols(), 3);
  for (Index y = 0; y < p.rows(); ++y)
    for (Index x = 0; x < p.cols(); ++x) {
      const Rgb c = fn(p(y, x));
      out.at(y, x, 0) = c.r;
      out.at(y, x, 1) = c.g;
      out.at(y, x, 2) = c.b;
    }
  return out;
}

// Polarity encoded as intensity: 0 -> negative, 0.5 -> none, 1 -> positive.
Rgb event_polarity_rgb(double v) {
  if (v > 0.5) return {1.0, 0.0, 0.0};
  if (v < 0.5) return {0.0, 0.0, 1.0};
  return {0.5, 0.5, 0.5};
}

}  // namespace

Image color(const Image& frame, ModalityKind kind, ColormapKind map, const NormPolicy& policy) {
  if (map == ColormapKind::EventPolarity && kind != ModalityKind::Event)
    throw std::invalid_argument("event polarity colormap applied to non-event modality");

  if (frame.channels() == 3) return frame;  // Color(V) does nothing on RGB input

  if (map == ColormapKind::EventPolarity) return map_plane(frame.plane(0), &event_polarity_rgb);

  const Image norm = normalize(frame, policy);
  switch (map) {
    case ColormapKind::Jet: return map_plane(norm.plane(0), &jet);
    case ColormapKind::Red: return map_plane(norm.plane(0), &red);
    case ColormapKind::Gray:
    case ColormapKind::Passthrough: return replicate3(norm.plane(0));
    case ColormapKind::EventPolarity: break;  // handled above
  }
  throw std::invalid_argument("unsupported colormap");
}

}  // namespace protrack
