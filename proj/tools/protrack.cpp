// protrack: multi-modal visual-prompt tracking toolkit.
//
// Subcommands: synth, dye, prompt, track, eval, ablate. Exit codes: 0 on
// success, 1 when every requested sequence failed, 2 on configuration
// errors, 3 on I/O errors.

#include "protrack/errors.hpp"
#include "protrack/eval.hpp"
#include "protrack/manifest.hpp"
#include "protrack/png_io.hpp"
#include "protrack/prompt.hpp"
#include "protrack/synth.hpp"
#include "protrack/tracker.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace protrack;

struct GlobalOpts {
  double lambda = kDefaultLambda;
  std::optional<double> alpha, beta, gamma;
  std::string colormap;
  std::string tracker = "mosse";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;
};

std::string default_out_dir() {
  const char* env = std::getenv("PROTRACK_OUT");
  return env && *env ? env : "out";
}

// --config <file.json> supplies defaults with the same keys as the flags;
// flags given on the command line take precedence.
void apply_config_file(int argc, char** argv, GlobalOpts& opts) {
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string_view(argv[i]) == "--config") config_path = argv[i + 1];
  if (config_path.empty()) return;

  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file: " + config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + config_path + ": " + e.what());
  }
  if (j.contains("lambda")) opts.lambda = j["lambda"].get<double>();
  if (j.contains("alpha")) opts.alpha = j["alpha"].get<double>();
  if (j.contains("beta")) opts.beta = j["beta"].get<double>();
  if (j.contains("gamma")) opts.gamma = j["gamma"].get<double>();
  if (j.contains("colormap")) opts.colormap = j["colormap"].get<std::string>();
  if (j.contains("tracker")) opts.tracker = j["tracker"].get<std::string>();
  if (j.contains("seed")) opts.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("jobs")) opts.jobs = j["jobs"].get<int>();
  if (j.contains("out")) opts.out = j["out"].get<std::string>();
}

PromptConfig prompt_config_from(const GlobalOpts& opts) {
  PromptConfig cfg;
  if (opts.alpha || opts.beta || opts.gamma) {
    if (!(opts.alpha && opts.beta && opts.gamma))
      throw ConfigError("triple prompting needs all of --alpha, --beta, --gamma");
    cfg.weights = TripleWeights{*opts.alpha, *opts.beta, *opts.gamma};
  } else {
    cfg.weights = DualWeights{opts.lambda};
  }
  if (!opts.colormap.empty()) {
    const ColormapKind map = colormap_from_string(opts.colormap);
    if (map == ColormapKind::EventPolarity) {
      cfg.aux_colormap[ModalityKind::Event] = map;
    } else {
      cfg.aux_colormap[ModalityKind::Depth] = map;
      cfg.aux_colormap[ModalityKind::Thermal] = map;
    }
  }
  cfg.validate();
  return cfg;
}

TrackerSpec tracker_spec_from(const GlobalOpts& opts) {
  TrackerSpec spec;
  spec.name = opts.tracker;
  spec.mosse.seed = opts.seed;
  return spec;
}

std::vector<ModalSequence> gather_sequences(const std::vector<std::string>& manifests,
                                            const std::string& suite, int seeds) {
  std::vector<ModalSequence> sequences;
  if (!suite.empty()) {
    for (const SynthConfig& cfg : suite_configs(suite, seeds)) sequences.push_back(generate(cfg));
  }
  for (const std::string& path : manifests) sequences.push_back(load_sequence(load_manifest(path)));
  if (sequences.empty()) throw ConfigError("no sequences: pass --manifest and/or --suite");
  return sequences;
}

ModalityKind first_aux(const ModalSequence& seq) {
  for (const auto& [kind, frames] : seq.streams)
    if (kind != ModalityKind::Visible) return kind;
  throw ConfigError("sequence '" + seq.name + "' is missing an auxiliary modality");
}

int cmd_synth(const GlobalOpts& opts, const std::string& suite, int seeds) {
  const std::filesystem::path dir = opts.out;
  std::ofstream list_tmp;
  std::vector<std::string> manifest_paths;
  for (const SynthConfig& cfg : suite_configs(suite, seeds)) {
    const ModalSequence seq = generate(cfg);
    manifest_paths.push_back(write_sequence(dir / suite, seq).string());
    std::fprintf(stdout, "wrote %s\n", manifest_paths.back().c_str());
  }
  std::ofstream list(dir / suite / "suite.txt");
  if (!list) throw IoError("cannot write suite list: " + (dir / suite / "suite.txt").string());
  for (const std::string& p : manifest_paths) list << p << "\n";
  return 0;
}

int cmd_dye(const GlobalOpts& opts, const std::string& manifest) {
  const ModalSequence seq = load_sequence(load_manifest(manifest));
  const PromptConfig cfg = prompt_config_from(opts);
  const ModalityKind aux = cfg.aux_modality.value_or(first_aux(seq));
  const auto& frames = seq.stream(aux);

  const std::filesystem::path dir = std::filesystem::path(opts.out) / (seq.name + "-dyed");
  char name[32];
  for (size_t i = 0; i < frames.size(); ++i) {
    const Image dyed = color(frames[i], aux, cfg.colormap_for(aux), seq.norm_for(aux, cfg.norm));
    std::snprintf(name, sizeof name, "%06zu.png", i);
    write_png8(dir / name, dyed);
  }
  std::fprintf(stdout, "dyed %zu %s frames -> %s\n", frames.size(), to_string(aux), dir.string().c_str());
  return 0;
}

int cmd_prompt(const GlobalOpts& opts, const std::string& manifest) {
  const ModalSequence seq = load_sequence(load_manifest(manifest));
  const PromptConfig cfg = prompt_config_from(opts);

  const std::filesystem::path dir = std::filesystem::path(opts.out) / (seq.name + "-prompted");
  std::filesystem::create_directories(dir / "color");
  char name[32];
  for (size_t i = 0; i < seq.frame_count(); ++i) {
    const Image prompted = prompt_frame(seq, i, cfg);
    std::snprintf(name, sizeof name, "%06zu.png", i);
    write_png8(dir / "color" / name, prompted);
  }
  {
    std::ofstream gt(dir / "groundtruth.txt");
    if (!gt) throw IoError("cannot write ground truth: " + (dir / "groundtruth.txt").string());
    gt << serialize_groundtruth(seq.annotations);
  }
  Manifest derived;
  derived.name = seq.name + "-prompted";
  derived.groundtruth_path = "groundtruth.txt";
  derived.streams.push_back({ModalityKind::Visible, "color/*.png", 8, std::nullopt});
  save_manifest(dir / "manifest.json", derived);
  std::fprintf(stdout, "prompted %zu frames -> %s\n", seq.frame_count(), dir.string().c_str());
  return 0;
}

int cmd_track(const GlobalOpts& opts, const std::string& manifest) {
  const ModalSequence seq = load_sequence(load_manifest(manifest));
  const PromptConfig cfg = prompt_config_from(opts);
  const TrackerSpec spec = tracker_spec_from(opts);

  const std::vector<TrackerOutput> outputs = track_sequence(seq, cfg, spec);
  const SequenceResult result = score_outputs(seq.name, outputs, seq.annotations);

  const std::filesystem::path dir = opts.out;
  std::filesystem::create_directories(dir);
  const auto box_path = dir / (seq.name + "-boxes.txt");
  std::ofstream out(box_path);
  if (!out) throw IoError("cannot write boxes: " + box_path.string());
  out << serialize_tracker_output(outputs);
  std::fprintf(stdout, "%s: f=%.4f success_auc=%.4f boxes -> %s\n", seq.name.c_str(), result.f,
               result.success_auc, box_path.string().c_str());
  return 0;
}

int cmd_eval(const GlobalOpts& opts, const std::vector<std::string>& manifests,
             const std::string& suite, int seeds) {
  const PromptConfig cfg = prompt_config_from(opts);
  const TrackerSpec spec = tracker_spec_from(opts);

  std::vector<ModalSequence> suite_sequences;
  if (!suite.empty())
    for (const SynthConfig& sc : suite_configs(suite, seeds)) suite_sequences.push_back(generate(sc));
  const std::vector<std::filesystem::path> paths(manifests.begin(), manifests.end());
  if (paths.empty() && suite_sequences.empty())
    throw ConfigError("no sequences: pass --manifest and/or --suite");
  RunRecord record = run_eval_manifests(paths, cfg, spec, opts.jobs, std::move(suite_sequences));

  write_run_outputs(opts.out, record);
  for (const SequenceResult& r : record.per_sequence) {
    if (r.ok())
      std::fprintf(stdout, "%-24s f=%.4f pr=%.4f re=%.4f success_auc=%.4f precision@20=%.4f\n",
                   r.name.c_str(), r.f, r.pr, r.re, r.success_auc, r.precision_at_20);
    else
      std::fprintf(stdout, "%-24s FAILED: %s\n", r.name.c_str(), r.status.c_str());
  }
  std::fprintf(stdout, "aggregate (%d seq, %d failed) f=%.4f success_auc=%.4f precision@20=%.4f\n",
               record.aggregate.n_sequences, record.aggregate.n_failed, record.aggregate.f,
               record.aggregate.success_auc, record.aggregate.precision_at_20);
  std::fprintf(stdout, "outputs -> %s\n", opts.out.c_str());

  if (record.aggregate.n_sequences > 0 && record.aggregate.n_failed == record.aggregate.n_sequences)
    return 1;
  return 0;
}

int cmd_ablate(const GlobalOpts& opts, const std::vector<std::string>& manifests,
               const std::string& suite, int seeds, const std::string& axis,
               std::vector<double> grid) {
  const PromptConfig cfg = prompt_config_from(opts);
  const TrackerSpec spec = tracker_spec_from(opts);
  const std::vector<ModalSequence> sequences = gather_sequences(manifests, suite, seeds);

  const AblateTable table = run_ablate(sequences, cfg, spec, axis, grid, opts.jobs);
  const std::string text = format_table(table);
  std::fputs(text.c_str(), stdout);

  std::filesystem::create_directories(opts.out);
  std::ofstream out(std::filesystem::path(opts.out) / ("ablate_" + axis + ".txt"));
  if (!out) throw IoError("cannot write ablation table");
  out << text;
  std::ofstream csv(std::filesystem::path(opts.out) / ("ablate_" + axis + ".csv"));
  if (!csv) throw IoError("cannot write ablation table");
  csv << table_to_csv(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts opts;
  opts.out = default_out_dir();

  try {
    apply_config_file(argc, argv, opts);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  CLI::App app{"multi-modal visual prompt tracking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with the same keys as the flags");

  double alpha = 0, beta = 0, gamma = 0;
  auto* alpha_opt = app.add_option("--alpha", alpha, "triple prompt weight for the first auxiliary");
  auto* beta_opt = app.add_option("--beta", beta, "triple prompt weight for the second auxiliary");
  auto* gamma_opt = app.add_option("--gamma", gamma, "triple prompt weight for the visible stream");
  app.add_option("--lambda", opts.lambda, "auxiliary blend weight (dual prompt)");
  app.add_option("--colormap", opts.colormap, "jet|red|gray|event");
  app.add_option("--tracker", opts.tracker, "mosse|oracle|oracle-always|external:<cmd>");
  app.add_option("--seed", opts.seed, "tracker / generator seed");
  app.add_option("--jobs", opts.jobs, "sequence-level parallelism");
  app.add_option("--out", opts.out, "output directory (default $PROTRACK_OUT or ./out)");

  std::vector<std::string> manifests;
  std::string suite;
  int seeds = 5;
  std::string axis = "lambda";
  std::vector<double> grid;

  auto* synth = app.add_subcommand("synth", "generate a synthetic suite on disk");
  synth->add_option("--suite", suite, "camouflage|mixed|longterm")->required();
  synth->add_option("--seeds", seeds, "number of sequences");

  auto* dye = app.add_subcommand("dye", "dye a sequence's auxiliary stream to color images");
  dye->add_option("--manifest", manifests, "sequence manifest")->required();

  auto* prompt = app.add_subcommand("prompt", "write prompted frames and a derived manifest");
  prompt->add_option("--manifest", manifests, "sequence manifest")->required();

  auto* track = app.add_subcommand("track", "run the tracker on a prompted sequence");
  track->add_option("--manifest", manifests, "sequence manifest")->required();

  auto* eval = app.add_subcommand("eval", "prompt, track and score sequences");
  eval->add_option("--manifest", manifests, "sequence manifests");
  eval->add_option("--suite", suite, "generate this suite in memory");
  eval->add_option("--seeds", seeds, "suite size");

  auto* ablate = app.add_subcommand("ablate", "sweep one prompt axis over a suite");
  ablate->add_option("--manifest", manifests, "sequence manifests");
  ablate->add_option("--suite", suite, "generate this suite in memory");
  ablate->add_option("--seeds", seeds, "suite size");
  ablate->add_option("--axis", axis, "lambda|colormap|modality");
  ablate->add_option("--grid", grid, "lambda grid values");

  CLI11_PARSE(app, argc, argv);

  if (*alpha_opt) opts.alpha = alpha;
  if (*beta_opt) opts.beta = beta;
  if (*gamma_opt) opts.gamma = gamma;

  try {
    if (*synth) return cmd_synth(opts, suite, seeds);
    if (*dye) return cmd_dye(opts, manifests.front());
    if (*prompt) return cmd_prompt(opts, manifests.front());
    if (*track) return cmd_track(opts, manifests.front());
    if (*eval) return cmd_eval(opts, manifests, suite, seeds);
    if (*ablate) return cmd_ablate(opts, manifests, suite, seeds, axis, grid);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
