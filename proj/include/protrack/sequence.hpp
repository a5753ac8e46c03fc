#pragma once

#include "protrack/colormap.hpp"
#include "protrack/errors.hpp"
#include "protrack/geometry.hpp"
#include "protrack/image.hpp"

#include <map>
#include <string>
#include <vector>

namespace protrack {

/// Index-aligned per-modality frame streams plus ground-truth annotations.
/// Auxiliary streams are stored single-channel (pre-dye); the visible stream
/// is 3-channel. All streams share the visible resolution and frame count.
struct ModalSequence {
  std::string name;
  std::map<ModalityKind, std::vector<Image>> streams;
  std::vector<Annotation> annotations;
  std::map<ModalityKind, NormPolicy> aux_norm;  // per-stream normalization, when known

  size_t frame_count() const {
    auto it = streams.find(ModalityKind::Visible);
    return it == streams.end() ? 0 : it->second.size();
  }

  const std::vector<Image>& stream(ModalityKind kind) const {
    auto it = streams.find(kind);
    if (it == streams.end())
      throw ConfigError(std::string("sequence '") + name + "' has no " + to_string(kind) + " stream");
    return it->second;
  }

  NormPolicy norm_for(ModalityKind kind, const NormPolicy& fallback) const {
    auto it = aux_norm.find(kind);
    return it == aux_norm.end() ? fallback : it->second;
  }

  /// Enforces the structural invariants: a visible 3-channel stream exists,
  /// every stream has the same nonzero frame count, annotations align.
  void validate() const {
    auto it = streams.find(ModalityKind::Visible);
    if (it == streams.end()) throw ConfigError("sequence '" + name + "' has no visible stream");
    const size_t n = it->second.size();
    if (n == 0) throw ConfigError("sequence '" + name + "' is empty");
    for (const auto& [kind, frames] : streams) {
      if (frames.size() != n)
        throw ConfigError("sequence '" + name + "': " + to_string(kind) + " stream has " +
                          std::to_string(frames.size()) + " frames, expected " + std::to_string(n));
    }
    for (const Image& f : it->second)
      if (f.channels() != 3) throw ConfigError("sequence '" + name + "': visible stream must be 3-channel");
    if (annotations.size() != n)
      throw ConfigError("sequence '" + name + "': " + std::to_string(annotations.size()) +
                        " annotations for " + std::to_string(n) + " frames");
  }
};

}  // namespace protrack
