#pragma once

#include "protrack/image.hpp"

#include <string>

namespace protrack {

enum class ModalityKind { Visible, Depth, Thermal, Event };

const char* to_string(ModalityKind kind);
ModalityKind modality_from_string(const std::string& name);

enum class ColormapKind { Jet, Red, Gray, EventPolarity, Passthrough };

const char* to_string(ColormapKind kind);
ColormapKind colormap_from_string(const std::string& name);

/// How raw single-channel values are mapped into [0,1] before colormapping.
/// FixedRange uses absolute bounds; Percentile and MinMax are per frame.
struct NormPolicy {
  enum class Mode { FixedRange, Percentile, MinMax };

  Mode mode = Mode::Percentile;
  double lo = 2.0;   // range low, or low percentile
  double hi = 98.0;  // range high, or high percentile

  static NormPolicy fixed_range(double lo, double hi);
  static NormPolicy percentile(double p_lo, double p_hi);
  static NormPolicy minmax() { return {Mode::MinMax, 0.0, 0.0}; }

  bool operator==(const NormPolicy&) const = default;
};

/// Affine map of a single-channel frame into [0,1], clamped. A degenerate
/// range (hi == lo) maps to 0.5 everywhere.
Image normalize(const Image& img, const NormPolicy& policy);

struct Rgb {
  double r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Piecewise-linear JET: blue -> cyan -> green -> yellow -> red.
/// jet(0) = (0, 0, 0.5), jet(0.5) = (0.5, 1, 0.5), jet(1) = (0.5, 0, 0).
Rgb jet(double v);

/// Single-color ramp from black to pure red.
Rgb red(double v);

Rgb gray(double v);

/// Dyeing function: maps any modality to a 3-channel color image.
/// 3-channel visible input is returned unchanged; 1-channel input is
/// normalized, then mapped per pixel through the colormap.
Image color(const Image& frame, ModalityKind kind, ColormapKind map, const NormPolicy& policy);

}  // namespace protrack
