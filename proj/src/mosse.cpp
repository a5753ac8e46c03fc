#include "protrack/mosse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace protrack {

bool CorrelationFilterState::operator==(const CorrelationFilterState& o) const {
  if (numerator.size() != o.numerator.size() || denominator.size() != o.denominator.size()) return false;
  for (size_t c = 0; c < numerator.size(); ++c)
    if (!(numerator[c] == o.numerator[c]).all()) return false;
  for (size_t c = 0; c < denominator.size(); ++c)
    if (!(denominator[c] == o.denominator[c]).all()) return false;
  return window_w == o.window_w && window_h == o.window_h && learn_rate == o.learn_rate &&
         reg_eps == o.reg_eps && response_sigma == o.response_sigma && center_x == o.center_x &&
         center_y == o.center_y && target_w == o.target_w && target_h == o.target_h;
}

namespace {

Index even_window(double target_extent) {
  auto w = static_cast<Index>(std::lround(2.0 * target_extent));
  if (w % 2 != 0) ++w;
  return std::max<Index>(8, w);
}

RealArray hann_window(Index h, Index w) {
  const auto taper = [](Index n, Index i) {
    return 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1)));
  };
  RealArray out(h, w);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x) out(y, x) = taper(h, y) * taper(w, x);
  return out;
}

RealArray gaussian_response(Index h, Index w, double sigma) {
  const double cy = static_cast<double>(h / 2), cx = static_cast<double>(w / 2);
  RealArray out(h, w);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x) {
      const double dy = static_cast<double>(y) - cy, dx = static_cast<double>(x) - cx;
      out(y, x) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  return out;
}

// Raw window crop of one plane, centered on an integer pixel, edges replicated.
RealArray crop_plane(const Plane& src, Index left, Index top, Index w, Index h) {
  RealArray out(h, w);
  const Index sw = src.cols(), sh = src.rows();
  for (Index y = 0; y < h; ++y) {
    const Index sy = std::clamp<Index>(top + y, 0, sh - 1);
    for (Index x = 0; x < w; ++x) {
      const Index sx = std::clamp<Index>(left + x, 0, sw - 1);
      out(y, x) = src(sy, sx);
    }
  }
  return out;
}

// Min-max to [0,1], log(1+v), zero mean, unit L2 norm, Hann taper. The
// leading min-max step makes the whole chain invariant to affine intensity
// rescaling of the input; a constant window maps to all zeros.
RealArray preprocess(const RealArray& raw, const RealArray& hann) {
  const double lo = raw.minCoeff(), hi = raw.maxCoeff();
  if (hi - lo < 1e-15) return RealArray::Zero(raw.rows(), raw.cols());
  RealArray v = ((raw - lo) / (hi - lo) + 1.0).log();
  v -= v.mean();
  const double norm = std::sqrt((v * v).sum());
  if (norm < 1e-15) return RealArray::Zero(raw.rows(), raw.cols());
  return (v / norm) * hann;
}

// Inverse-mapped affine warp about the window center, bilinear, edge clamp.
RealArray warp_affine(const RealArray& src, double angle, double scale_x, double scale_y,
                      double shift_x, double shift_y) {
  const Index h = src.rows(), w = src.cols();
  const double cy = static_cast<double>(h) / 2.0, cx = static_cast<double>(w) / 2.0;
  const double ca = std::cos(angle), sa = std::sin(angle);
  RealArray out(h, w);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x) {
      const double dx = (static_cast<double>(x) - cx - shift_x) / scale_x;
      const double dy = (static_cast<double>(y) - cy - shift_y) / scale_y;
      const double sx = ca * dx + sa * dy + cx;
      const double sy = -sa * dx + ca * dy + cy;
      const Index x0 = std::clamp<Index>(static_cast<Index>(std::floor(sx)), 0, w - 1);
      const Index y0 = std::clamp<Index>(static_cast<Index>(std::floor(sy)), 0, h - 1);
      const Index x1 = std::min<Index>(x0 + 1, w - 1);
      const Index y1 = std::min<Index>(y0 + 1, h - 1);
      const double fx = std::clamp(sx - static_cast<double>(x0), 0.0, 1.0);
      const double fy = std::clamp(sy - static_cast<double>(y0), 0.0, 1.0);
      out(y, x) = (src(y0, x0) * (1.0 - fx) + src(y0, x1) * fx) * (1.0 - fy) +
                  (src(y1, x0) * (1.0 - fx) + src(y1, x1) * fx) * fy;
    }
  return out;
}

// One-dimensional three-point parabolic refinement around the peak.
double parabolic_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (std::abs(denom) < 1e-12) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

std::vector<RealArray> MosseTracker::extract_features(const Image& frame, double cx, double cy) const {
  const Index left = static_cast<Index>(std::lround(cx)) - state_.window_w / 2;
  const Index top = static_cast<Index>(std::lround(cy)) - state_.window_h / 2;

  std::vector<RealArray> raw;
  if (params_.per_channel && frame.channels() == 3) {
    raw.reserve(3);
    for (int c = 0; c < 3; ++c)
      raw.push_back(crop_plane(frame.plane(c), left, top, state_.window_w, state_.window_h));
  } else {
    raw.push_back(crop_plane(luminance(frame), left, top, state_.window_w, state_.window_h));
  }
  for (RealArray& r : raw) r = preprocess(r, hann_);
  return raw;
}

void MosseTracker::init(const Image& frame, const BBox& b1) {
  if (!(b1.w > 0.0 && b1.h > 0.0)) throw std::invalid_argument("tracker init box has zero area");
  if (b1.x < 0.0 || b1.y < 0.0 || b1.x + b1.w > static_cast<double>(frame.width()) ||
      b1.y + b1.h > static_cast<double>(frame.height()))
    throw std::invalid_argument("tracker init box lies outside the frame");

  state_ = {};
  state_.window_w = even_window(b1.w);
  state_.window_h = even_window(b1.h);
  state_.learn_rate = params_.learn_rate;
  state_.reg_eps = params_.reg_eps;
  state_.response_sigma =
      params_.response_sigma > 0.0 ? params_.response_sigma : std::sqrt(b1.w * b1.h) / 16.0;
  state_.center_x = b1.cx();
  state_.center_y = b1.cy();
  state_.target_w = b1.w;
  state_.target_h = b1.h;
  last_box_ = b1;

  hann_ = hann_window(state_.window_h, state_.window_w);
  response_spectrum_ = fft_.fwd(gaussian_response(state_.window_h, state_.window_w, state_.response_sigma));

  const Index left = static_cast<Index>(std::lround(state_.center_x)) - state_.window_w / 2;
  const Index top = static_cast<Index>(std::lround(state_.center_y)) - state_.window_h / 2;
  std::vector<RealArray> raw_channels;
  if (params_.per_channel && frame.channels() == 3) {
    for (int c = 0; c < 3; ++c)
      raw_channels.push_back(crop_plane(frame.plane(c), left, top, state_.window_w, state_.window_h));
  } else {
    raw_channels.push_back(crop_plane(luminance(frame), left, top, state_.window_w, state_.window_h));
  }

  const size_t n_channels = raw_channels.size();
  state_.numerator.assign(n_channels, Spectrum::Zero(state_.window_h, state_.window_w));
  state_.denominator.assign(n_channels, RealArray::Zero(state_.window_h, state_.window_w));

  std::mt19937_64 rng(params_.seed);
  std::uniform_real_distribution<double> angle(-0.1, 0.1);
  std::uniform_real_distribution<double> scale(0.96, 1.04);
  std::uniform_real_distribution<double> shift(-1.5, 1.5);

  const int n_warps = std::max(1, params_.n_init_warps);
  for (int j = 0; j < n_warps; ++j) {
    // One shared transform per warp so channels stay registered.
    const double a = j == 0 ? 0.0 : angle(rng);
    const double sx = j == 0 ? 1.0 : scale(rng);
    const double sy = j == 0 ? 1.0 : scale(rng);
    const double tx = j == 0 ? 0.0 : shift(rng);
    const double ty = j == 0 ? 0.0 : shift(rng);
    for (size_t c = 0; c < n_channels; ++c) {
      const RealArray warped = j == 0 ? raw_channels[c] : warp_affine(raw_channels[c], a, sx, sy, tx, ty);
      const Spectrum f = fft_.fwd(preprocess(warped, hann_));
      state_.numerator[c] += response_spectrum_ * f.conjugate();
      state_.denominator[c] += f.abs2() + params_.reg_eps;
    }
  }
  for (size_t c = 0; c < n_channels; ++c) {
    state_.numerator[c] /= static_cast<double>(n_warps);
    state_.denominator[c] /= static_cast<double>(n_warps);
  }
  initialized_ = true;
}

TrackerOutput MosseTracker::step(const Image& frame) {
  if (!initialized_) throw std::logic_error("tracker_step before tracker_init");

  const std::vector<RealArray> features = extract_features(frame, state_.center_x, state_.center_y);
  Spectrum resp_spec = Spectrum::Zero(state_.window_h, state_.window_w);
  std::vector<Spectrum> feature_spectra(features.size());
  for (size_t c = 0; c < features.size(); ++c) {
    feature_spectra[c] = fft_.fwd(features[c]);
    resp_spec += (state_.numerator[c] / state_.denominator[c]) * feature_spectra[c];
  }
  const RealArray response = fft_.inv_real(resp_spec);

  Index peak_y = 0, peak_x = 0;
  const double peak = response.maxCoeff(&peak_y, &peak_x);

  // Peak-to-sidelobe ratio, excluding a square around the peak.
  const Index half = params_.psr_exclusion / 2;
  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  for (Index y = 0; y < response.rows(); ++y)
    for (Index x = 0; x < response.cols(); ++x) {
      if (std::abs(y - peak_y) <= half && std::abs(x - peak_x) <= half) continue;
      sum += response(y, x);
      sum_sq += response(y, x) * response(y, x);
      ++count;
    }
  double psr = 0.0;
  if (count > 0) {
    const double mean = sum / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
    const double stddev = std::sqrt(var);
    psr = stddev > 1e-12 ? (peak - mean) / stddev : 0.0;
  }

  const bool reported = psr >= params_.psr_threshold;
  if (reported) {
    const Index w = response.cols(), h = response.rows();
    const double off_x = parabolic_offset(response(peak_y, (peak_x + w - 1) % w), peak,
                                          response(peak_y, (peak_x + 1) % w));
    const double off_y = parabolic_offset(response((peak_y + h - 1) % h, peak_x), peak,
                                          response((peak_y + 1) % h, peak_x));

    // The desired response peaks at the window center; anything else is motion.
    const double base_x = std::lround(state_.center_x);
    const double base_y = std::lround(state_.center_y);
    double cx = base_x + (static_cast<double>(peak_x) + off_x - static_cast<double>(w / 2));
    double cy = base_y + (static_cast<double>(peak_y) + off_y - static_cast<double>(h / 2));
    cx = std::clamp(cx, 0.0, static_cast<double>(frame.width() - 1));
    cy = std::clamp(cy, 0.0, static_cast<double>(frame.height() - 1));
    state_.center_x = cx;
    state_.center_y = cy;
    last_box_ = {cx - state_.target_w / 2.0, cy - state_.target_h / 2.0, state_.target_w, state_.target_h};

    // Adapt on the window at the new location.
    const std::vector<RealArray> updated = extract_features(frame, cx, cy);
    for (size_t c = 0; c < updated.size(); ++c) {
      const Spectrum f = fft_.fwd(updated[c]);
      state_.numerator[c] = (1.0 - state_.learn_rate) * state_.numerator[c] +
                            state_.learn_rate * (response_spectrum_ * f.conjugate());
      state_.denominator[c] = (1.0 - state_.learn_rate) * state_.denominator[c] +
                              state_.learn_rate * (f.abs2() + state_.reg_eps);
    }
  }

  return {last_box_, std::max(0.0, psr), reported};
}

}  // namespace protrack
