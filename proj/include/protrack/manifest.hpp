#pragma once

#include "protrack/colormap.hpp"
#include "protrack/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace protrack {

/// One modality stream on disk: a glob pattern (relative to the manifest),
/// bit depth of the image files, and an optional normalization policy given
/// in raw units.
struct StreamSpec {
  ModalityKind kind = ModalityKind::Visible;
  std::string pattern;
  int bit_depth = 8;  // 8 or 16
  std::optional<NormPolicy> norm;
};

/// On-disk description of a multi-modal sequence.
struct Manifest {
  std::string name;
  std::vector<StreamSpec> streams;
  std::string groundtruth_path;
  std::optional<std::int64_t> event_window_us;
  std::filesystem::path base_dir;  // directory the manifest was loaded from

  const StreamSpec* find(ModalityKind kind) const;
};

/// Reads and validates a manifest JSON file. Distinct errors for a missing
/// visible stream, an unknown modality tag and a pattern with zero matches.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes a manifest in the same schema (used by the synthetic generator).
void save_manifest(const std::filesystem::path& path, const Manifest& m);

/// Lexicographically sorted expansion of a `*` glob pattern relative to base.
std::vector<std::filesystem::path> expand_pattern(const std::filesystem::path& base,
                                                  const std::string& pattern);

/// One line per frame: `x,y,w,h` or `nan,nan,nan,nan` (or an empty line) for
/// target-absent frames. Negative extents are a parse error.
std::vector<Annotation> parse_groundtruth(const std::string& text);
std::string serialize_groundtruth(std::span<const Annotation> annotations);

/// Loads every stream, resamples auxiliary frames to the visible resolution,
/// accumulates event CSV streams into per-frame polarity images and attaches
/// ground truth.
ModalSequence load_sequence(const Manifest& m);

}  // namespace protrack
