#include "protrack/prompt.hpp"

#include "protrack/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace protrack;

namespace {

ModalSequence tiny_sequence(int n_frames, double aux_value) {
  ModalSequence seq;
  seq.name = "tiny";
  for (int i = 0; i < n_frames; ++i) {
    seq.streams[ModalityKind::Visible].push_back(oracle::random_image(100 + i, 6, 8, 3));
    seq.streams[ModalityKind::Depth].push_back(Image::constant(6, 8, 1, aux_value));
    seq.annotations.push_back(Annotation::of({1, 1, 2, 2}));
  }
  seq.aux_norm[ModalityKind::Depth] = NormPolicy::fixed_range(0.0, 1.0);
  return seq;
}

}  // namespace

TEST_CASE("lambda endpoints are exact identities") {
  const Image v = oracle::random_image(1, 12, 10, 3);
  const Image a = oracle::random_image(2, 12, 10, 3);
  CHECK(compose_dual(v, a, 0.0) == v);
  CHECK(compose_dual(v, a, 1.0) == a);
}

TEST_CASE("dual composition follows the blend arithmetic") {
  const Image v = Image::constant(1, 1, 3, 0.4);
  Image a(1, 1, 3);
  a.at(0, 0, 2) = 1.0;
  const Image out = compose_dual(v, a, 0.05);
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.38).epsilon(1e-12));
  CHECK(out.at(0, 0, 1) == doctest::Approx(0.38).epsilon(1e-12));
  CHECK(out.at(0, 0, 2) == doctest::Approx(0.43).epsilon(1e-12));
}

TEST_CASE("dual composition rejects bad input") {
  const Image v(4, 4, 3), a(4, 5, 3);
  CHECK_THROWS_AS(compose_dual(v, a, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(compose_dual(v, v, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(compose_dual(v, v, 1.1), std::invalid_argument);
  const Image g(4, 4, 1);
  CHECK_THROWS_AS(compose_dual(g, g, 0.5), std::invalid_argument);
}

TEST_CASE("composition matches the scalar-loop oracle") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 25; ++it) {
    const Image v = oracle::random_image(rng(), 16, 16, 3);
    const Image a = oracle::random_image(rng(), 16, 16, 3);
    const Image fast = compose_dual(v, a, 0.37);
    const Image slow = oracle::compose(v, a, 0.37);
    for (int c = 0; c < 3; ++c)
      CHECK((fast.plane(c) - slow.plane(c)).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("convexity: blended pixels stay between the inputs") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 50; ++it) {
    const Image v = oracle::random_image(rng(), 8, 8, 3);
    const Image a = oracle::random_image(rng(), 8, 8, 3);
    const double lambda = unit(rng);
    const Image f = compose_dual(v, a, lambda);
    for (int c = 0; c < 3; ++c) {
      const auto lo = v.plane(c).min(a.plane(c));
      const auto hi = v.plane(c).max(a.plane(c));
      CHECK((f.plane(c) >= lo - 1e-12).all());
      CHECK((f.plane(c) <= hi + 1e-12).all());
    }
  }
}

TEST_CASE("linearity in lambda") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < 25; ++it) {
    const Image v = oracle::random_image(rng(), 8, 8, 3);
    const Image a = oracle::random_image(rng(), 8, 8, 3);
    const double l1 = unit(rng), l2 = unit(rng);
    const Image f1 = compose_dual(v, a, l1);
    const Image f2 = compose_dual(v, a, l2);
    const Image fm = compose_dual(v, a, (l1 + l2) / 2.0);
    for (int c = 0; c < 3; ++c)
      CHECK((f1.plane(c) + f2.plane(c) - 2.0 * fm.plane(c)).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("monotonicity: raising lambda moves pixels toward the auxiliary") {
  const Image v = oracle::random_image(31, 8, 8, 3);
  const Image a = oracle::random_image(32, 8, 8, 3);
  Image prev = compose_dual(v, a, 0.0);
  for (double lambda : {0.1, 0.3, 0.6, 0.9, 1.0}) {
    const Image cur = compose_dual(v, a, lambda);
    for (int c = 0; c < 3; ++c) {
      // |f - a| shrinks in every pixel as lambda grows
      const auto d_prev = (prev.plane(c) - a.plane(c)).abs();
      const auto d_cur = (cur.plane(c) - a.plane(c)).abs();
      CHECK((d_cur <= d_prev + 1e-12).all());
    }
    prev = cur;
  }
}

TEST_CASE("triple composition reduces exactly to dual when beta is zero") {
  const Image v = oracle::random_image(41, 9, 9, 3);
  const Image a1 = oracle::random_image(42, 9, 9, 3);
  const Image a2 = oracle::random_image(43, 9, 9, 3);
  for (double lambda : {0.0, 0.05, 0.3, 1.0}) {
    const Image triple = compose_triple(v, a1, a2, lambda, 0.0, 1.0 - lambda);
    const Image dual = compose_dual(v, a1, lambda);
    CHECK(triple == dual);
  }
}

TEST_CASE("triple composition examples") {
  const Image v = oracle::random_image(44, 4, 4, 3);
  const Image a1 = oracle::random_image(45, 4, 4, 3);
  const Image a2 = oracle::random_image(46, 4, 4, 3);
  CHECK(compose_triple(v, a1, a2, 0.0, 0.0, 1.0) == v);

  Image vr = Image::constant(1, 1, 3, 0.0), g1 = vr, g2 = vr;
  vr.at(0, 0, 0) = 0.9;
  g1.at(0, 0, 1) = 0.9;
  g2.at(0, 0, 2) = 0.9;
  const Image mixed = compose_triple(vr, g1, g2, 1.0 / 3, 1.0 / 3, 1.0 / 3);
  for (int c = 0; c < 3; ++c) CHECK(mixed.at(0, 0, c) == doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(compose_triple(v, a1, a2, 0.5, 0.2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compose_triple(v, a1, a2, -0.1, 0.4, 0.7), std::invalid_argument);
}

TEST_CASE("prompt config validation") {
  PromptConfig cfg;
  cfg.weights = DualWeights{1.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.weights = TripleWeights{0.2, 0.2, 0.2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.weights = TripleWeights{0.2, 0.3, 0.5};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("prompt_sequence with lambda 0 equals the dyed visible stream") {
  const ModalSequence seq = tiny_sequence(4, 0.3);
  PromptConfig cfg;
  cfg.weights = DualWeights{0.0};
  const auto out = prompt_sequence(seq, cfg);
  REQUIRE(out.size() == 4);
  for (size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == seq.stream(ModalityKind::Visible)[i]);
}

TEST_CASE("prompt_sequence on a single-frame sequence") {
  const ModalSequence seq = tiny_sequence(1, 0.5);
  PromptConfig cfg;
  const auto out = prompt_sequence(seq, cfg);
  CHECK(out.size() == 1);
}

TEST_CASE("constant mid-gray auxiliary shifts every pixel by the blend rule") {
  // Gray-dyed constant 0.5 auxiliary: f = 0.95 v + 0.025 per channel.
  ModalSequence seq = tiny_sequence(3, 0.5);
  PromptConfig cfg;
  cfg.weights = DualWeights{0.05};
  cfg.aux_colormap[ModalityKind::Depth] = ColormapKind::Gray;
  const auto out = prompt_sequence(seq, cfg);
  for (size_t i = 0; i < out.size(); ++i) {
    const Image& v = seq.stream(ModalityKind::Visible)[i];
    for (int c = 0; c < 3; ++c)
      CHECK((out[i].plane(c) - (0.95 * v.plane(c) + 0.025)).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("missing auxiliary modality is a configuration error naming it") {
  ModalSequence seq = tiny_sequence(2, 0.5);
  seq.streams.erase(ModalityKind::Depth);
  PromptConfig cfg;
  cfg.weights = DualWeights{0.05};
  CHECK_THROWS_AS(prompt_sequence(seq, cfg), ConfigError);

  cfg.aux_modality = ModalityKind::Thermal;
  try {
    prompt_sequence(tiny_sequence(2, 0.5), cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("thermal") != std::string::npos);
  }
}

TEST_CASE("triple prompting needs exactly two auxiliary streams") {
  ModalSequence seq = tiny_sequence(2, 0.5);
  PromptConfig cfg;
  cfg.weights = TripleWeights{0.05, 0.05, 0.9};
  CHECK_THROWS_AS(prompt_sequence(seq, cfg), ConfigError);

  for (int i = 0; i < 2; ++i)
    seq.streams[ModalityKind::Thermal].push_back(Image::constant(6, 8, 1, 0.2));
  const auto out = prompt_sequence(seq, cfg);
  CHECK(out.size() == 2);
}

TEST_CASE("composition never changes shape") {
  const Image v = oracle::random_image(51, 7, 5, 3);
  const Image a = oracle::random_image(52, 7, 5, 3);
  const Image f = compose_dual(v, a, 0.4);
  CHECK(f.width() == v.width());
  CHECK(f.height() == v.height());
  CHECK(f.channels() == 3);
}
