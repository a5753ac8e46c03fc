#pragma once

#include "protrack/manifest.hpp"
#include "protrack/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace protrack {

enum class Scenario { Camouflage, RgbEasy, Occlusion };

const char* to_string(Scenario s);

struct MotionModel {
  enum class Kind { LinearBounce, RandomWalk };
  Kind kind = Kind::LinearBounce;
  double param = 2.5;  // speed px/frame, or step sigma

  static MotionModel linear_bounce(double speed) { return {Kind::LinearBounce, speed}; }
  static MotionModel random_walk(double sigma) { return {Kind::RandomWalk, sigma}; }
};

/// Fully seeded description of a synthetic multi-modal sequence. The visible
/// stream carries the target at rgb_contrast over a low-frequency textured
/// background; the auxiliary stream carries it at aux_contrast, degraded by
/// sensor-style speckle so that pure auxiliary tracking stays imperfect.
struct SynthConfig {
  Index width = 128;
  Index height = 128;
  int n_frames = 200;
  Index target_w = 24;
  Index target_h = 24;
  MotionModel motion;
  double rgb_contrast = 0.02;  // 0 = perfect camouflage
  double aux_contrast = 0.9;
  double noise_sigma = 0.02;
  int n_distractors = 2;
  std::vector<std::pair<int, int>> absent_spans;  // [start, end) frame ranges
  Scenario scenario = Scenario::Camouflage;
  std::uint64_t seed = 1;

  std::string sequence_name() const;
};

/// Deterministic generation; identical configs yield bit-identical sequences.
/// The auxiliary stream is produced as a depth-like single-channel map with a
/// fixed [0,1] range recorded in the sequence's normalization policy.
ModalSequence generate(const SynthConfig& cfg);

/// Named suites: `camouflage` (all camouflage), `mixed` (half RgbEasy, half
/// camouflage), `longterm` (occlusion configs with absent spans covering at
/// least 20% of frames). Seeds are distinct per sequence.
std::vector<std::pair<SynthConfig, ModalSequence>> make_suite(const std::string& name, int n_seeds);

/// Config list only, for callers that stream sequence generation.
std::vector<SynthConfig> suite_configs(const std::string& name, int n_seeds);

/// Writes a generated sequence in the ingest layout (PNG frames, ground-truth
/// text, manifest JSON) and returns the manifest path.
std::filesystem::path write_sequence(const std::filesystem::path& dir, const ModalSequence& seq);

}  // namespace protrack
