#pragma once

#include "protrack/fft2.hpp"
#include "protrack/image.hpp"
#include "protrack/tracker.hpp"

#include <cstdint>
#include <vector>

namespace protrack {

struct MosseParams {
  double learn_rate = 0.125;
  double reg_eps = 1e-5;          // spectrum regularization, keeps denominators bounded away from 0
  double response_sigma = 0.0;    // 0 = default sqrt(target_w * target_h) / 16
  double psr_threshold = 5.0;     // report gate
  int psr_exclusion = 11;         // side of the square masked out around the peak
  int n_init_warps = 8;           // training windows at init (identity + random affine)
  bool per_channel = true;        // one filter per color channel, responses summed
  std::uint64_t seed = 1;
};

/// Adaptive frequency-domain correlation filter over the tracked window.
struct CorrelationFilterState {
  std::vector<Spectrum> numerator;    // per feature channel
  std::vector<RealArray> denominator; // real, every entry >= reg_eps
  Index window_w = 0;
  Index window_h = 0;
  double learn_rate = 0.0;
  double reg_eps = 0.0;
  double response_sigma = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double target_w = 0.0;
  double target_h = 0.0;

  bool operator==(const CorrelationFilterState& o) const;
};

/// Reference tracker: MOSSE-style correlation filter with peak-to-sidelobe
/// confidence. Fixed scale; target-absent handling is PSR gating only.
class MosseTracker final : public Tracker {
 public:
  explicit MosseTracker(const MosseParams& params = {}) : params_(params) {}

  void init(const Image& frame, const BBox& b1) override;
  TrackerOutput step(const Image& frame) override;

  const CorrelationFilterState& state() const { return state_; }
  const MosseParams& params() const { return params_; }

 private:
  std::vector<RealArray> extract_features(const Image& frame, double cx, double cy) const;

  MosseParams params_;
  CorrelationFilterState state_;
  Spectrum response_spectrum_;  // DFT of the desired Gaussian response
  RealArray hann_;
  BBox last_box_;
  mutable Fft2 fft_;
  bool initialized_ = false;
};

}  // namespace protrack
