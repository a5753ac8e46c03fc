#include "protrack/image.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace protrack;

TEST_CASE("clamp_unit") {
  CHECK(clamp_unit(0.5) == 0.5);
  CHECK(clamp_unit(-0.2) == 0.0);
  CHECK(clamp_unit(1.7) == 1.0);
  CHECK(clamp_unit(0.0) == 0.0);
  CHECK(clamp_unit(1.0) == 1.0);
}

TEST_CASE("image construction enforces shape invariants") {
  CHECK_THROWS_AS(Image(0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(Image(4, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Image(4, 4, 2), std::invalid_argument);
  const Image img(4, 6, 3);
  CHECK(img.width() == 6);
  CHECK(img.height() == 4);
  CHECK(img.channels() == 3);
  CHECK(img.in_unit_range());
}

TEST_CASE("resample to the same size is the identity, exactly") {
  const Image img = oracle::random_image(7, 13, 9, 3);
  const Image out = resample_bilinear(img, 9, 13);
  CHECK(out == img);
}

TEST_CASE("resampling a constant image preserves the constant") {
  const Image img = Image::constant(5, 8, 1, 0.3);
  for (auto [w, h] : {std::pair<Index, Index>{16, 10}, {3, 2}, {8, 5}, {31, 17}}) {
    const Image out = resample_bilinear(img, w, h);
    CHECK(out.width() == w);
    CHECK(out.height() == h);
    CHECK(out.plane(0).minCoeff() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(out.plane(0).maxCoeff() == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("2x1 ramp upsampled to 4x1 under the half-pixel-center convention") {
  Image img(1, 2, 1);
  img.at(0, 0, 0) = 0.0;
  img.at(0, 1, 0) = 1.0;

  const Image out = resample_bilinear(img, 4, 1);
  // Hand evaluation: source coords -0.25, 0.25, 0.75, 1.25, edge-clamped.
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(out.at(0, 1, 0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(out.at(0, 2, 0) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(out.at(0, 3, 0) == doctest::Approx(1.0).epsilon(1e-9));
  // The image midpoint lands between the two central samples.
  CHECK((out.at(0, 1, 0) + out.at(0, 2, 0)) / 2.0 == doctest::Approx(0.5).epsilon(1e-9));

  // Odd width puts a sample exactly on the midpoint.
  const Image odd = resample_bilinear(img, 3, 1);
  CHECK(odd.at(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("resample rejects zero target dimensions") {
  const Image img(4, 4, 1);
  CHECK_THROWS_AS(resample_bilinear(img, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(resample_bilinear(img, 4, 0), std::invalid_argument);
}

TEST_CASE("resample preserves the unit range for random inputs") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> dim(1, 24);
  for (int it = 0; it < 50; ++it) {
    const Image img = oracle::random_image(rng(), dim(rng), dim(rng), it % 2 == 0 ? 1 : 3);
    const Image out = resample_bilinear(img, dim(rng), dim(rng));
    CHECK(out.in_unit_range());
  }
}

TEST_CASE("luminance and channel replication") {
  Image img(1, 1, 3);
  img.at(0, 0, 0) = 1.0;
  img.at(0, 0, 1) = 0.5;
  img.at(0, 0, 2) = 0.25;
  CHECK(luminance(img)(0, 0) == doctest::Approx(0.299 + 0.587 * 0.5 + 0.114 * 0.25));

  const Image rep = replicate3(img.plane(1));
  CHECK(rep.channels() == 3);
  CHECK(rep.at(0, 0, 0) == 0.5);
  CHECK(rep.at(0, 0, 2) == 0.5);
}

TEST_CASE("degenerate boxes have zero area") {
  CHECK(BBox{1, 2, 0, 5}.area() == 0.0);
  CHECK(BBox{1, 2, 5, 0}.area() == 0.0);
  CHECK(intersect(BBox{0, 0, 2, 2}, BBox{5, 5, 2, 2}).area() == 0.0);
}
