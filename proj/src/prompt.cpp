#include "protrack/prompt.hpp"

#include "protrack/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace protrack {

ColormapKind PromptConfig::default_colormap(ModalityKind kind) {
  switch (kind) {
    case ModalityKind::Visible: return ColormapKind::Passthrough;
    case ModalityKind::Depth: return ColormapKind::Jet;
    case ModalityKind::Thermal: return ColormapKind::Jet;
    case ModalityKind::Event: return ColormapKind::EventPolarity;
  }
  return ColormapKind::Gray;
}

ColormapKind PromptConfig::colormap_for(ModalityKind kind) const {
  auto it = aux_colormap.find(kind);
  return it == aux_colormap.end() ? default_colormap(kind) : it->second;
}

void PromptConfig::validate() const {
  if (const auto* dual = std::get_if<DualWeights>(&weights)) {
    if (!(dual->lambda >= 0.0 && dual->lambda <= 1.0))
      throw std::invalid_argument("lambda must lie in [0,1]");
  } else {
    const auto& t = std::get<TripleWeights>(weights);
    if (t.alpha < 0.0 || t.beta < 0.0 || t.gamma < 0.0)
      throw std::invalid_argument("triple weights must be non-negative");
    if (std::abs(t.alpha + t.beta + t.gamma - 1.0) > 1e-9)
      throw std::invalid_argument("triple weights must sum to 1");
  }
}

namespace {

void require_same_shape(const Image& a, const Image& b, const char* fn) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(fn) + ": image dimensions differ");
}

}  // namespace

Image compose_dual(const Image& v, const Image& a, double lambda) {
  require_same_shape(v, a, "compose_dual");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("compose_dual: lambda outside [0,1]");
  if (v.channels() != 3) throw std::invalid_argument("compose_dual expects dyed 3-channel inputs");
  if (lambda == 0.0) return v;
  if (lambda == 1.0) return a;

  Image out(v.height(), v.width(), 3);
  for (int c = 0; c < 3; ++c) out.plane(c) = lambda * a.plane(c) + (1.0 - lambda) * v.plane(c);
  return out;
}

Image compose_triple(const Image& v, const Image& a1, const Image& a2, double alpha, double beta,
                     double gamma) {
  require_same_shape(v, a1, "compose_triple");
  require_same_shape(v, a2, "compose_triple");
  if (v.channels() != 3) throw std::invalid_argument("compose_triple expects dyed 3-channel inputs");
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
    throw std::invalid_argument("compose_triple: weights must be non-negative");
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
    throw std::invalid_argument("compose_triple: weights must sum to 1");

  Image out(v.height(), v.width(), 3);
  // Term order matches compose_dual so (lambda, 0, 1-lambda) reduces exactly.
  for (int c = 0; c < 3; ++c)
    out.plane(c) = alpha * a1.plane(c) + beta * a2.plane(c) + gamma * v.plane(c);
  return out;
}

namespace {

Image dyed_frame(const ModalSequence& seq, ModalityKind kind, size_t i, const PromptConfig& cfg) {
  const auto& frames = seq.stream(kind);
  if (i >= frames.size()) throw std::out_of_range("frame index out of range");
  return color(frames[i], kind, cfg.colormap_for(kind), seq.norm_for(kind, cfg.norm));
}

std::vector<ModalityKind> auxiliary_kinds(const ModalSequence& seq) {
  std::vector<ModalityKind> kinds;
  for (const auto& [kind, frames] : seq.streams)
    if (kind != ModalityKind::Visible) kinds.push_back(kind);
  return kinds;
}

ModalityKind pick_dual_aux(const ModalSequence& seq, const PromptConfig& cfg) {
  if (cfg.aux_modality) {
    if (seq.streams.find(*cfg.aux_modality) == seq.streams.end())
      throw ConfigError(std::string("sequence '") + seq.name + "' is missing the " +
                        to_string(*cfg.aux_modality) + " modality");
    return *cfg.aux_modality;
  }
  const auto kinds = auxiliary_kinds(seq);
  if (kinds.empty())
    throw ConfigError("sequence '" + seq.name + "' is missing an auxiliary modality");
  if (kinds.size() > 1)
    throw ConfigError("sequence '" + seq.name + "' has several auxiliary modalities; pick one");
  return kinds[0];
}

}  // namespace

Image prompt_frame(const ModalSequence& seq, size_t i, const PromptConfig& cfg) {
  cfg.validate();
  const Image v = dyed_frame(seq, ModalityKind::Visible, i, cfg);

  if (const auto* dual = std::get_if<DualWeights>(&cfg.weights)) {
    if (dual->lambda == 0.0) return v;  // no prompt, no auxiliary stream required
    const ModalityKind aux = pick_dual_aux(seq, cfg);
    return compose_dual(v, dyed_frame(seq, aux, i, cfg), dual->lambda);
  }

  const auto& t = std::get<TripleWeights>(cfg.weights);
  auto kinds = auxiliary_kinds(seq);
  if (kinds.size() != 2)
    throw ConfigError("triple prompting needs exactly two auxiliary modalities, sequence '" +
                      seq.name + "' has " + std::to_string(kinds.size()));
  return compose_triple(v, dyed_frame(seq, kinds[0], i, cfg), dyed_frame(seq, kinds[1], i, cfg),
                        t.alpha, t.beta, t.gamma);
}

std::vector<Image> prompt_sequence(const ModalSequence& seq, const PromptConfig& cfg) {
  seq.validate();
  std::vector<Image> out;
  out.reserve(seq.frame_count());
  for (size_t i = 0; i < seq.frame_count(); ++i) out.push_back(prompt_frame(seq, i, cfg));
  return out;
}

}  // namespace protrack
