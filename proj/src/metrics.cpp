#include "protrack/metrics.hpp"

#include "protrack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace protrack {

double iou(const BBox& a, const BBox& b) {
  const double inter = intersect(a, b).area();
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double center_error(const BBox& a, const BBox& b) {
  return std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
}

namespace {

void require_equal_lengths(size_t preds, size_t gts) {
  if (preds != gts)
    throw std::invalid_argument("predictions (" + std::to_string(preds) + ") and ground truth (" +
                                std::to_string(gts) + ") differ in length");
}

}  // namespace

EvalCurves success_curve(std::span<const TrackerOutput> preds, std::span<const Annotation> gts) {
  require_equal_lengths(preds.size(), gts.size());
  std::vector<double> overlaps;
  for (size_t i = 0; i < preds.size(); ++i)
    if (gts[i].present()) overlaps.push_back(iou(preds[i].box, *gts[i].box));

  EvalCurves out;
  out.thresholds.reserve(101);
  out.values.reserve(101);
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double s = k / 100.0;
    size_t hits = 0;
    for (double ov : overlaps) hits += ov >= s;
    const double frac = overlaps.empty() ? 0.0 : static_cast<double>(hits) / overlaps.size();
    out.thresholds.push_back(s);
    out.values.push_back(frac);
    sum += frac;
  }
  out.summary = sum / 101.0;
  return out;
}

EvalCurves precision_curve(std::span<const TrackerOutput> preds, std::span<const Annotation> gts) {
  require_equal_lengths(preds.size(), gts.size());
  std::vector<double> errors;
  for (size_t i = 0; i < preds.size(); ++i)
    if (gts[i].present()) errors.push_back(center_error(preds[i].box, *gts[i].box));

  EvalCurves out;
  out.thresholds.reserve(51);
  out.values.reserve(51);
  for (int t = 0; t <= 50; ++t) {
    size_t hits = 0;
    for (double e : errors) hits += e <= static_cast<double>(t);
    const double frac = errors.empty() ? 0.0 : static_cast<double>(hits) / errors.size();
    out.thresholds.push_back(static_cast<double>(t));
    out.values.push_back(frac);
    if (t == 20) out.summary = frac;
  }
  return out;
}

double f_score(double pr, double re) {
  if (!(pr >= 0.0 && pr <= 1.0) || !(re >= 0.0 && re <= 1.0))
    throw std::invalid_argument("f_score expects pr, re in [0,1]");
  const double denom = pr + re;
  return denom > 0.0 ? 2.0 * pr * re / denom : 0.0;
}

LtResult lt_pr_re_f(std::span<const TrackerOutput> preds, std::span<const Annotation> gts) {
  require_equal_lengths(preds.size(), gts.size());

  size_t n_present = 0;
  for (const Annotation& a : gts) n_present += a.present();
  if (n_present == 0) throw ProtocolError("long-term protocol needs at least one target-present frame");

  // Rank-based threshold set: every observed confidence plus +inf.
  std::set<double> taus;
  for (const TrackerOutput& p : preds) taus.insert(p.confidence);
  taus.insert(std::numeric_limits<double>::infinity());

  LtResult result;
  result.score.f = -1.0;
  for (double tau : taus) {
    double reported_overlap = 0.0;
    size_t n_reported = 0;
    double present_overlap = 0.0;
    for (size_t i = 0; i < preds.size(); ++i) {
      const bool rep = preds[i].reported && preds[i].confidence >= tau;
      const double ov = gts[i].present() ? iou(preds[i].box, *gts[i].box) : 0.0;
      if (rep) {
        ++n_reported;
        reported_overlap += ov;
      }
      if (gts[i].present() && rep) present_overlap += ov;
    }
    const double pr = n_reported > 0 ? reported_overlap / static_cast<double>(n_reported) : 1.0;
    const double re = present_overlap / static_cast<double>(n_present);
    const double f = f_score(pr, re);

    result.curves.thresholds.push_back(tau);
    result.curves.pr.push_back(pr);
    result.curves.re.push_back(re);
    result.curves.f.push_back(f);
    if (f > result.score.f) result.score = {pr, re, f, tau};
  }
  return result;
}

}  // namespace protrack
