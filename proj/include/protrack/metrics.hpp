#pragma once

#include "protrack/geometry.hpp"
#include "protrack/tracker_output.hpp"

#include <span>
#include <vector>

namespace protrack {

/// Threshold-indexed metric curve with a scalar summary (AUC or a
/// representative threshold value).
struct EvalCurves {
  std::vector<double> thresholds;
  std::vector<double> values;
  double summary = 0.0;
};

/// Long-term tracking score at the F-maximizing confidence threshold.
struct LtScore {
  double pr = 0.0;
  double re = 0.0;
  double f = 0.0;
  double tau_star = 0.0;
};

/// Pr/Re/F evaluated at every candidate confidence threshold.
struct LtCurves {
  std::vector<double> thresholds;
  std::vector<double> pr;
  std::vector<double> re;
  std::vector<double> f;
};

struct LtResult {
  LtScore score;
  LtCurves curves;
};

/// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

/// Euclidean distance between box centers, in pixels.
double center_error(const BBox& a, const BBox& b);

/// Fraction of frames with IoU >= s for s on the 101-point grid {0, 0.01, ..., 1};
/// summary is the AUC (mean over the grid). Frames with absent ground truth are
/// excluded.
EvalCurves success_curve(std::span<const TrackerOutput> preds, std::span<const Annotation> gts);

/// Fraction of frames with center error <= t for t in {0, 1, ..., 50} px;
/// summary is the value at t = 20. Frames with absent ground truth are excluded.
EvalCurves precision_curve(std::span<const TrackerOutput> preds, std::span<const Annotation> gts);

/// Harmonic mean 2*pr*re/(pr+re); 0 when pr + re = 0.
double f_score(double pr, double re);

/// Long-term protocol: overlap-weighted Pr/Re over the rank-based set of
/// observed confidence thresholds (plus +inf), F maximized over thresholds.
/// A frame counts as reported at tau when it was reported with confidence >= tau.
/// Pr(tau) = 1 when nothing is reported. Throws ProtocolError when no frame
/// has present ground truth.
LtResult lt_pr_re_f(std::span<const TrackerOutput> preds, std::span<const Annotation> gts);

}  // namespace protrack
