#include "protrack/synth.hpp"

#include "protrack/errors.hpp"
#include "protrack/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace protrack {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Camouflage: return "camouflage";
    case Scenario::RgbEasy: return "rgbeasy";
    case Scenario::Occlusion: return "occlusion";
  }
  return "?";
}

std::string SynthConfig::sequence_name() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-s%03llu", to_string(scenario),
                static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

// splitmix64, for deriving independent per-concern seeds from one seed.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Low-frequency value noise: a coarse random grid, bilinearly interpolated.
Plane value_noise(Index h, Index w, Index cell, double lo, double hi, std::mt19937_64& rng) {
  const Index gw = w / cell + 2, gh = h / cell + 2;
  Plane grid(gh, gw);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (Index y = 0; y < gh; ++y)
    for (Index x = 0; x < gw; ++x) grid(y, x) = dist(rng);

  Plane out(h, w);
  for (Index y = 0; y < h; ++y) {
    const double fy = static_cast<double>(y) / static_cast<double>(cell);
    const Index y0 = static_cast<Index>(fy);
    const double wy = fy - static_cast<double>(y0);
    for (Index x = 0; x < w; ++x) {
      const double fx = static_cast<double>(x) / static_cast<double>(cell);
      const Index x0 = static_cast<Index>(fx);
      const double wx = fx - static_cast<double>(x0);
      out(y, x) = (grid(y0, x0) * (1.0 - wx) + grid(y0, x0 + 1) * wx) * (1.0 - wy) +
                  (grid(y0 + 1, x0) * (1.0 - wx) + grid(y0 + 1, x0 + 1) * wx) * wy;
    }
  }
  return out;
}

struct PathState {
  double x = 0, y = 0;    // top-left, real-valued
  double vx = 0, vy = 0;  // px/frame (bounce only)
};

PathState spawn_path(const SynthConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, static_cast<double>(cfg.width - cfg.target_w));
  std::uniform_real_distribution<double> uy(0.0, static_cast<double>(cfg.height - cfg.target_h));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  PathState p;
  p.x = ux(rng);
  p.y = uy(rng);
  const double a = angle(rng);
  p.vx = std::cos(a);
  p.vy = std::sin(a);
  return p;
}

void advance_path(PathState& p, const SynthConfig& cfg, std::mt19937_64& rng) {
  const double max_x = static_cast<double>(cfg.width - cfg.target_w);
  const double max_y = static_cast<double>(cfg.height - cfg.target_h);
  if (cfg.motion.kind == MotionModel::Kind::LinearBounce) {
    p.x += p.vx * cfg.motion.param;
    p.y += p.vy * cfg.motion.param;
    if (p.x < 0.0) { p.x = -p.x; p.vx = -p.vx; }
    if (p.x > max_x) { p.x = 2.0 * max_x - p.x; p.vx = -p.vx; }
    if (p.y < 0.0) { p.y = -p.y; p.vy = -p.vy; }
    if (p.y > max_y) { p.y = 2.0 * max_y - p.y; p.vy = -p.vy; }
  } else {
    std::normal_distribution<double> step(0.0, cfg.motion.param);
    p.x += step(rng);
    p.y += step(rng);
  }
  p.x = std::clamp(p.x, 0.0, max_x);
  p.y = std::clamp(p.y, 0.0, max_y);
}

BBox snap_box(const PathState& p, const SynthConfig& cfg) {
  return {std::floor(p.x + 0.5), std::floor(p.y + 0.5), static_cast<double>(cfg.target_w),
          static_cast<double>(cfg.target_h)};
}

// Checkerboard texture that travels with the rectangle; per-channel tints so
// the painted object is chromatic, not just brighter.
void paint_visible_rect(Image& vis, const BBox& box, double contrast) {
  static constexpr double kTint[3] = {1.0, 0.7, 0.45};
  const Index x0 = static_cast<Index>(box.x), y0 = static_cast<Index>(box.y);
  const Index x1 = std::min<Index>(vis.width(), x0 + static_cast<Index>(box.w));
  const Index y1 = std::min<Index>(vis.height(), y0 + static_cast<Index>(box.h));
  for (Index y = std::max<Index>(0, y0); y < y1; ++y)
    for (Index x = std::max<Index>(0, x0); x < x1; ++x) {
      const bool checker = (((x - x0) / 4 + (y - y0) / 4) % 2) == 0;
      const double shape = checker ? 1.0 : 0.62;
      for (int c = 0; c < 3; ++c)
        vis.at(y, x, c) = clamp_unit(vis.at(y, x, c) + contrast * shape * kTint[c]);
    }
}

void paint_aux_rect(Image& aux, const BBox& box, double value) {
  const Index x0 = static_cast<Index>(box.x), y0 = static_cast<Index>(box.y);
  const Index x1 = std::min<Index>(aux.width(), x0 + static_cast<Index>(box.w));
  const Index y1 = std::min<Index>(aux.height(), y0 + static_cast<Index>(box.h));
  for (Index y = std::max<Index>(0, y0); y < y1; ++y)
    for (Index x = std::max<Index>(0, x0); x < x1; ++x) aux.at(y, x, 0) = value;
}

}  // namespace

ModalSequence generate(const SynthConfig& cfg) {
  if (cfg.width <= 0 || cfg.height <= 0 || cfg.n_frames < 1)
    throw std::invalid_argument("synth: dimensions and frame count must be positive");
  if (cfg.target_w > cfg.width || cfg.target_h > cfg.height)
    throw std::invalid_argument("synth: target larger than frame");
  for (const auto& [start, end] : cfg.absent_spans)
    if (start < 0 || end > cfg.n_frames || start >= end)
      throw std::invalid_argument("synth: absent span outside [0, n_frames)");

  // Independent streams per concern, so the visible pixels do not depend on
  // where the target moves.
  std::mt19937_64 rng_texture(mix(cfg.seed ^ 0x7465787475726531ULL));
  std::mt19937_64 rng_motion(mix(cfg.seed ^ 0x6d6f74696f6e0031ULL));
  std::mt19937_64 rng_distract(mix(cfg.seed ^ 0x6469737472616374ULL));
  std::mt19937_64 rng_noise(mix(cfg.seed ^ 0x6e6f697365000031ULL));
  std::mt19937_64 rng_speckle(mix(cfg.seed ^ 0x737065636b6c6531ULL));

  const Plane background = value_noise(cfg.height, cfg.width, 32, 0.35, 0.65, rng_texture);

  PathState target = spawn_path(cfg, rng_motion);
  std::vector<PathState> distractors;
  for (int d = 0; d < cfg.n_distractors; ++d) distractors.push_back(spawn_path(cfg, rng_distract));

  std::vector<bool> absent(static_cast<size_t>(cfg.n_frames), false);
  for (const auto& [start, end] : cfg.absent_spans)
    for (int i = start; i < end; ++i) absent[static_cast<size_t>(i)] = true;

  // Auxiliary sensor degradation scales with the configured noise level:
  // Gaussian noise plus hot-pixel speckle at the target's value range, sized
  // to stay inside the salience property's 2-sigma budget.
  const double speckle_density = cfg.noise_sigma;

  ModalSequence seq;
  seq.name = cfg.sequence_name();
  seq.aux_norm[ModalityKind::Depth] = NormPolicy::fixed_range(0.0, 1.0);
  auto& vis_stream = seq.streams[ModalityKind::Visible];
  auto& aux_stream = seq.streams[ModalityKind::Depth];
  vis_stream.reserve(cfg.n_frames);
  aux_stream.reserve(cfg.n_frames);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int i = 0; i < cfg.n_frames; ++i) {
    if (i > 0) {
      advance_path(target, cfg, rng_motion);
      for (PathState& d : distractors) advance_path(d, cfg, rng_distract);
    }

    Image vis = Image::from_planes({background, background, background});
    Image aux(cfg.height, cfg.width, 1);

    for (const PathState& d : distractors) paint_visible_rect(vis, snap_box(d, cfg), cfg.rgb_contrast);

    const BBox box = snap_box(target, cfg);
    if (!absent[static_cast<size_t>(i)]) {
      paint_visible_rect(vis, box, cfg.rgb_contrast);
      paint_aux_rect(aux, box, cfg.aux_contrast);
      seq.annotations.push_back(Annotation::of(box));
    } else {
      seq.annotations.push_back(Annotation::absent());
    }

    if (speckle_density > 0.0) {
      for (Index y = 0; y < cfg.height; ++y)
        for (Index x = 0; x < cfg.width; ++x)
          if (unit(rng_speckle) < speckle_density) aux.at(y, x, 0) = 1.0;
    }

    if (cfg.noise_sigma > 0.0) {
      for (int c = 0; c < 3; ++c) {
        Plane& p = vis.plane(c);
        for (Index y = 0; y < cfg.height; ++y)
          for (Index x = 0; x < cfg.width; ++x)
            p(y, x) = clamp_unit(p(y, x) + cfg.noise_sigma * gauss(rng_noise));
      }
      Plane& a = aux.plane(0);
      for (Index y = 0; y < cfg.height; ++y)
        for (Index x = 0; x < cfg.width; ++x)
          a(y, x) = clamp_unit(a(y, x) + cfg.noise_sigma * gauss(rng_noise));
    }

    vis_stream.push_back(std::move(vis));
    aux_stream.push_back(std::move(aux));
  }
  seq.validate();
  return seq;
}

namespace {

SynthConfig scenario_config(Scenario scenario, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.scenario = scenario;
  cfg.seed = seed;
  switch (scenario) {
    case Scenario::Camouflage:
      cfg.rgb_contrast = 0.02;
      cfg.aux_contrast = 0.9;
      cfg.noise_sigma = 0.02;
      cfg.n_distractors = 2;
      cfg.motion = MotionModel::linear_bounce(2.5);
      break;
    case Scenario::RgbEasy:
      // Easy in RGB, barely visible to the auxiliary sensor: the modality is
      // complementary, not a second ground truth.
      cfg.rgb_contrast = 0.9;
      cfg.aux_contrast = 0.1;
      cfg.noise_sigma = 0.05;
      cfg.n_distractors = 0;
      cfg.motion = MotionModel::linear_bounce(2.5);
      break;
    case Scenario::Occlusion:
      cfg.rgb_contrast = 0.9;
      cfg.aux_contrast = 0.9;
      cfg.noise_sigma = 0.02;
      cfg.n_distractors = 0;
      cfg.motion = MotionModel::linear_bounce(2.0);
      // Five short spans, 49 of 200 frames absent.
      cfg.absent_spans = {{30, 40}, {65, 75}, {100, 110}, {135, 145}, {170, 179}};
      break;
  }
  return cfg;
}

}  // namespace

std::vector<SynthConfig> suite_configs(const std::string& name, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("suite needs n_seeds >= 1");
  std::vector<SynthConfig> configs;
  if (name == "camouflage") {
    for (int i = 0; i < n_seeds; ++i)
      configs.push_back(scenario_config(Scenario::Camouflage, static_cast<std::uint64_t>(i + 1)));
  } else if (name == "mixed") {
    const int n_easy = (n_seeds + 1) / 2;
    for (int i = 0; i < n_easy; ++i)
      configs.push_back(scenario_config(Scenario::RgbEasy, static_cast<std::uint64_t>(i + 1)));
    for (int i = n_easy; i < n_seeds; ++i)
      configs.push_back(scenario_config(Scenario::Camouflage, static_cast<std::uint64_t>(i + 1)));
  } else if (name == "longterm") {
    for (int i = 0; i < n_seeds; ++i)
      configs.push_back(scenario_config(Scenario::Occlusion, static_cast<std::uint64_t>(i + 1)));
  } else {
    throw ConfigError("unknown suite: " + name + " (expected camouflage, mixed or longterm)");
  }
  return configs;
}

std::vector<std::pair<SynthConfig, ModalSequence>> make_suite(const std::string& name, int n_seeds) {
  std::vector<std::pair<SynthConfig, ModalSequence>> out;
  for (const SynthConfig& cfg : suite_configs(name, n_seeds)) out.emplace_back(cfg, generate(cfg));
  return out;
}

std::filesystem::path write_sequence(const std::filesystem::path& dir, const ModalSequence& seq) {
  const auto seq_dir = dir / seq.name;
  std::filesystem::create_directories(seq_dir / "color");
  std::filesystem::create_directories(seq_dir / "depth");

  const auto& vis = seq.stream(ModalityKind::Visible);
  const auto& aux = seq.stream(ModalityKind::Depth);
  char name[32];
  for (size_t i = 0; i < vis.size(); ++i) {
    std::snprintf(name, sizeof name, "%06zu.png", i);
    write_png8(seq_dir / "color" / name, vis[i]);
    write_png16(seq_dir / "depth" / name, aux[i]);
  }

  {
    std::ofstream gt(seq_dir / "groundtruth.txt");
    if (!gt) throw IoError("cannot write ground truth: " + (seq_dir / "groundtruth.txt").string());
    gt << serialize_groundtruth(seq.annotations);
  }

  Manifest m;
  m.name = seq.name;
  m.groundtruth_path = "groundtruth.txt";
  m.base_dir = seq_dir;
  m.streams.push_back({ModalityKind::Visible, "color/*.png", 8, std::nullopt});
  m.streams.push_back({ModalityKind::Depth, "depth/*.png", 16, NormPolicy::fixed_range(0.0, 65535.0)});
  save_manifest(seq_dir / "manifest.json", m);
  return seq_dir / "manifest.json";
}

}  // namespace protrack
