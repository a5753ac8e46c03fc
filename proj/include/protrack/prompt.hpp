#pragma once

#include "protrack/colormap.hpp"
#include "protrack/sequence.hpp"

#include <map>
#include <optional>
#include <variant>
#include <vector>

namespace protrack {

/// Dual-modal blend weight: out = lambda * aux + (1 - lambda) * visible.
struct DualWeights {
  double lambda = 0.05;
};

/// Triple-modal weights, alpha + beta + gamma = 1.
struct TripleWeights {
  double alpha = 0;
  double beta = 0;
  double gamma = 1;
};

constexpr double kDefaultLambda = 0.05;

/// Blend weights plus per-modality colormap choice for the prompt compositor.
struct PromptConfig {
  std::variant<DualWeights, TripleWeights> weights = DualWeights{kDefaultLambda};
  std::map<ModalityKind, ColormapKind> aux_colormap;  // overrides of the per-modality defaults
  NormPolicy norm = NormPolicy::percentile(2.0, 98.0);  // fallback when the sequence carries none
  std::optional<ModalityKind> aux_modality;  // dual: which auxiliary stream; default = the only one

  static ColormapKind default_colormap(ModalityKind kind);
  ColormapKind colormap_for(ModalityKind kind) const;

  /// Throws std::invalid_argument on weight-range or weight-sum violations.
  void validate() const;
};

/// Eq-style dual prompt: per-pixel convex combination of two dyed frames.
Image compose_dual(const Image& v, const Image& a, double lambda);

/// Triple prompt: alpha * a1 + beta * a2 + gamma * v with weights summing to 1.
Image compose_triple(const Image& v, const Image& a1, const Image& a2, double alpha, double beta,
                     double gamma);

/// Dyes frame i of every needed stream and composes the prompted frame.
Image prompt_frame(const ModalSequence& seq, size_t i, const PromptConfig& cfg);

/// Prompts every frame; output length equals the sequence length.
std::vector<Image> prompt_sequence(const ModalSequence& seq, const PromptConfig& cfg);

}  // namespace protrack
