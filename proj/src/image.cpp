#include "protrack/image.hpp"

namespace protrack {

Plane luminance(const Image& img) {
  if (img.channels() == 1) return img.plane(0);
  return 0.299 * img.plane(0) + 0.587 * img.plane(1) + 0.114 * img.plane(2);
}

Image replicate3(const Plane& p) {
  return Image::from_planes({p, p, p});
}

}  // namespace protrack
