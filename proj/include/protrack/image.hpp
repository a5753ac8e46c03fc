#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace protrack {

using Index = Eigen::Index;

/// One channel, row-major so plane(y, x) addresses pixel (x, y).
template <class Scalar>
using PlaneT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
Scalar clamp_unit(Scalar v) {
  return v < Scalar(0) ? Scalar(0) : (v > Scalar(1) ? Scalar(1) : v);
}

/// Raster of normalized intensities in [0,1], planar storage, 1 or 3 channels.
template <class Scalar>
class ImageT {
 public:
  ImageT() = default;

  ImageT(Index height, Index width, int channels) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    if (channels != 1 && channels != 3) throw std::invalid_argument("image must have 1 or 3 channels");
    planes_.assign(static_cast<size_t>(channels), PlaneT<Scalar>::Zero(height, width));
  }

  static ImageT constant(Index height, Index width, int channels, Scalar v) {
    ImageT img(height, width, channels);
    for (auto& p : img.planes_) p.setConstant(v);
    return img;
  }

  static ImageT from_planes(std::vector<PlaneT<Scalar>> planes) {
    if (planes.size() != 1 && planes.size() != 3) throw std::invalid_argument("image must have 1 or 3 channels");
    for (const auto& p : planes) {
      if (p.rows() != planes[0].rows() || p.cols() != planes[0].cols())
        throw std::invalid_argument("image planes must share dimensions");
      if (p.rows() <= 0 || p.cols() <= 0) throw std::invalid_argument("image dimensions must be positive");
    }
    ImageT img;
    img.planes_ = std::move(planes);
    return img;
  }

  Index width() const { return planes_.empty() ? 0 : planes_[0].cols(); }
  Index height() const { return planes_.empty() ? 0 : planes_[0].rows(); }
  int channels() const { return static_cast<int>(planes_.size()); }
  bool empty() const { return planes_.empty(); }

  PlaneT<Scalar>& plane(int c) { return planes_.at(static_cast<size_t>(c)); }
  const PlaneT<Scalar>& plane(int c) const { return planes_.at(static_cast<size_t>(c)); }

  Scalar& at(Index y, Index x, int c) { return plane(c)(y, x); }
  Scalar at(Index y, Index x, int c) const { return plane(c)(y, x); }

  bool same_shape(const ImageT& o) const {
    return width() == o.width() && height() == o.height() && channels() == o.channels();
  }

  bool in_unit_range() const {
    for (const auto& p : planes_)
      if (p.minCoeff() < Scalar(0) || p.maxCoeff() > Scalar(1)) return false;
    return true;
  }

  bool operator==(const ImageT& o) const {
    if (!same_shape(o)) return false;
    for (int c = 0; c < channels(); ++c)
      if (!(plane(c) == o.plane(c)).all()) return false;
    return true;
  }

 private:
  std::vector<PlaneT<Scalar>> planes_;
};

using Plane = PlaneT<double>;
using Image = ImageT<double>;

/// Bilinear resampling with pixel centers at (i + 0.5)/n (align-corners-false);
/// samples outside the source clamp to the edge. Same-size resampling is the identity.
template <class Scalar>
ImageT<Scalar> resample_bilinear(const ImageT<Scalar>& img, Index target_w, Index target_h) {
  if (target_w <= 0 || target_h <= 0) throw std::invalid_argument("resample target dimensions must be positive");
  if (target_w == img.width() && target_h == img.height()) return img;

  const Index sw = img.width(), sh = img.height();
  const double sx = static_cast<double>(sw) / static_cast<double>(target_w);
  const double sy = static_cast<double>(sh) / static_cast<double>(target_h);

  ImageT<Scalar> out(target_h, target_w, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const auto& src = img.plane(c);
    auto& dst = out.plane(c);
    for (Index y = 0; y < target_h; ++y) {
      const double fy = (static_cast<double>(y) + 0.5) * sy - 0.5;
      const Index y0 = std::max<Index>(0, std::min<Index>(sh - 1, static_cast<Index>(std::floor(fy))));
      const Index y1 = std::min<Index>(sh - 1, y0 + 1);
      const double wy = std::min(1.0, std::max(0.0, fy - static_cast<double>(y0)));
      for (Index x = 0; x < target_w; ++x) {
        const double fx = (static_cast<double>(x) + 0.5) * sx - 0.5;
        const Index x0 = std::max<Index>(0, std::min<Index>(sw - 1, static_cast<Index>(std::floor(fx))));
        const Index x1 = std::min<Index>(sw - 1, x0 + 1);
        const double wx = std::min(1.0, std::max(0.0, fx - static_cast<double>(x0)));
        const double top = static_cast<double>(src(y0, x0)) * (1.0 - wx) + static_cast<double>(src(y0, x1)) * wx;
        const double bot = static_cast<double>(src(y1, x0)) * (1.0 - wx) + static_cast<double>(src(y1, x1)) * wx;
        dst(y, x) = static_cast<Scalar>(top * (1.0 - wy) + bot * wy);
      }
    }
  }
  return out;
}

/// Rec.601 luminance of a 3-channel image; 1-channel input passes through.
Plane luminance(const Image& img);

/// Replicates a single plane into a 3-channel image.
Image replicate3(const Plane& p);

}  // namespace protrack
