#include "protrack/eval.hpp"

#include "protrack/errors.hpp"
#include "protrack/manifest.hpp"
#include "protrack/svg.hpp"
#include "protrack/tracker.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

namespace protrack {

using nlohmann::json;

namespace {

std::unique_ptr<Tracker> make_tracker(const TrackerSpec& spec, const ModalSequence& seq) {
  if (spec.name == "mosse") return std::make_unique<MosseTracker>(spec.mosse);
  if (spec.name == "oracle") return std::make_unique<OracleTracker>(seq.annotations, false);
  if (spec.name == "oracle-always") return std::make_unique<OracleTracker>(seq.annotations, true);
  if (spec.name.starts_with("external:"))
    return std::make_unique<ExternalTracker>(spec.name.substr(9));
  throw ConfigError("unknown tracker: " + spec.name);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fresh_run_id() {
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  return "run-" + std::to_string(us);
}

}  // namespace

std::vector<TrackerOutput> track_sequence(const ModalSequence& seq, const PromptConfig& cfg,
                                          const TrackerSpec& tracker_spec) {
  seq.validate();
  if (seq.annotations.empty() || !seq.annotations.front().present())
    throw ConfigError("sequence '" + seq.name + "': first frame has no ground-truth box");
  const std::vector<Image> prompted = prompt_sequence(seq, cfg);
  auto tracker = make_tracker(tracker_spec, seq);
  return run_tracker(*tracker, prompted, *seq.annotations.front().box);
}

SequenceResult score_outputs(const std::string& name, std::span<const TrackerOutput> outputs,
                             std::span<const Annotation> gts) {
  SequenceResult result;
  result.name = name;
  result.success = success_curve(outputs, gts);
  result.precision = precision_curve(outputs, gts);
  const LtResult lt = lt_pr_re_f(outputs, gts);
  result.lt = lt.curves;
  result.pr = lt.score.pr;
  result.re = lt.score.re;
  result.f = lt.score.f;
  result.tau_star = lt.score.tau_star;
  result.success_auc = result.success.summary;
  result.precision_at_20 = result.precision.summary;
  return result;
}

SequenceResult evaluate_sequence(const ModalSequence& seq, const PromptConfig& cfg,
                                 const TrackerSpec& tracker_spec) {
  try {
    const std::vector<TrackerOutput> outputs = track_sequence(seq, cfg, tracker_spec);
    return score_outputs(seq.name, outputs, seq.annotations);
  } catch (const std::exception& e) {
    SequenceResult result;
    result.name = seq.name;
    result.status = e.what();
    return result;
  }
}

Aggregate aggregate_results(const std::vector<SequenceResult>& results) {
  Aggregate agg;
  for (const SequenceResult& r : results) {
    agg.n_sequences++;
    if (!r.ok()) {
      agg.n_failed++;
      continue;
    }
    agg.pr += r.pr;
    agg.re += r.re;
    agg.f += r.f;
    agg.success_auc += r.success_auc;
    agg.precision_at_20 += r.precision_at_20;
  }
  const int n_ok = agg.n_sequences - agg.n_failed;
  if (n_ok > 0) {
    agg.pr /= n_ok;
    agg.re /= n_ok;
    agg.f /= n_ok;
    agg.success_auc /= n_ok;
    agg.precision_at_20 /= n_ok;
  }
  return agg;
}

RunRecord run_eval(const std::vector<ModalSequence>& sequences, const PromptConfig& cfg,
                   const TrackerSpec& tracker, int jobs) {
  RunRecord record;
  record.run_id = fresh_run_id();
  record.timestamp = iso_timestamp();
  record.prompt = cfg;
  record.tracker = tracker;
  record.per_sequence.resize(sequences.size());

  jobs = std::max(1, jobs);
  if (jobs == 1 || sequences.size() <= 1) {
    for (size_t i = 0; i < sequences.size(); ++i)
      record.per_sequence[i] = evaluate_sequence(sequences[i], cfg, tracker);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    const size_t n_workers = std::min<size_t>(static_cast<size_t>(jobs), sequences.size());
    for (size_t w = 0; w < n_workers; ++w)
      workers.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < sequences.size(); i = next.fetch_add(1))
          record.per_sequence[i] = evaluate_sequence(sequences[i], cfg, tracker);
      });
    for (std::thread& t : workers) t.join();
  }

  std::sort(record.per_sequence.begin(), record.per_sequence.end(),
            [](const SequenceResult& a, const SequenceResult& b) { return a.name < b.name; });
  record.aggregate = aggregate_results(record.per_sequence);
  return record;
}

RunRecord run_eval_manifests(const std::vector<std::filesystem::path>& manifests,
                             const PromptConfig& cfg, const TrackerSpec& tracker, int jobs,
                             std::vector<ModalSequence> extra_sequences) {
  std::vector<ModalSequence> sequences = std::move(extra_sequences);
  std::vector<SequenceResult> load_failures;
  for (const auto& path : manifests) {
    try {
      sequences.push_back(load_sequence(load_manifest(path)));
    } catch (const std::exception& e) {
      SequenceResult fail;
      fail.name = path.string();
      fail.status = e.what();
      load_failures.push_back(std::move(fail));
    }
  }
  RunRecord record = run_eval(sequences, cfg, tracker, jobs);
  for (auto& f : load_failures) record.per_sequence.push_back(std::move(f));
  std::sort(record.per_sequence.begin(), record.per_sequence.end(),
            [](const SequenceResult& a, const SequenceResult& b) { return a.name < b.name; });
  record.aggregate = aggregate_results(record.per_sequence);
  for (const auto& path : manifests) record.manifest_paths.push_back(path.string());
  return record;
}

namespace {

json prompt_to_json(const PromptConfig& cfg) {
  json j;
  if (const auto* dual = std::get_if<DualWeights>(&cfg.weights)) {
    j["lambda"] = dual->lambda;
  } else {
    const auto& t = std::get<TripleWeights>(cfg.weights);
    j["alpha"] = t.alpha;
    j["beta"] = t.beta;
    j["gamma"] = t.gamma;
  }
  json maps = json::object();
  for (const auto& [kind, map] : cfg.aux_colormap) maps[to_string(kind)] = to_string(map);
  if (!maps.empty()) j["colormap"] = maps;
  return j;
}

json result_to_json(const SequenceResult& r) {
  json j{{"name", r.name}, {"status", r.status}};
  if (r.ok()) {
    j["pr"] = r.pr;
    j["re"] = r.re;
    j["f"] = r.f;
    j["tau_star"] = r.tau_star;
    j["success_auc"] = r.success_auc;
    j["precision_at_20"] = r.precision_at_20;
  }
  return j;
}

json results_json(const RunRecord& record) {
  json j;
  j["per_sequence"] = json::array();
  for (const SequenceResult& r : record.per_sequence) j["per_sequence"].push_back(result_to_json(r));
  j["aggregate"] = {{"pr", record.aggregate.pr},
                    {"re", record.aggregate.re},
                    {"f", record.aggregate.f},
                    {"success_auc", record.aggregate.success_auc},
                    {"precision_at_20", record.aggregate.precision_at_20},
                    {"n_sequences", record.aggregate.n_sequences},
                    {"n_failed", record.aggregate.n_failed}};
  return j;
}

}  // namespace

std::string record_results_payload(const RunRecord& record) { return results_json(record).dump(2); }

std::string record_to_json(const RunRecord& record) {
  json j;
  j["run_id"] = record.run_id;
  j["timestamp"] = record.timestamp;
  j["toolkit_version"] = record.toolkit_version;
  j["manifests"] = record.manifest_paths;
  j["prompt"] = prompt_to_json(record.prompt);
  j["tracker"] = {{"name", record.tracker.name},
                  {"seed", record.tracker.mosse.seed},
                  {"learn_rate", record.tracker.mosse.learn_rate},
                  {"psr_threshold", record.tracker.mosse.psr_threshold},
                  {"per_channel", record.tracker.mosse.per_channel}};
  j["results"] = results_json(record);
  return j.dump(2);
}

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_curve_csv(const std::filesystem::path& path, const EvalCurves& curves) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write curve CSV: " + path.string());
  out << "# summary " << format_real(curves.summary) << "\n";
  out << "threshold,value\n";
  for (size_t i = 0; i < curves.thresholds.size(); ++i)
    out << format_real(curves.thresholds[i]) << ',' << format_real(curves.values[i]) << "\n";
}

EvalCurves parse_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve CSV: " + path.string());
  EvalCurves curves;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with("# summary ")) {
      curves.summary = std::strtod(line.c_str() + 10, nullptr);
      continue;
    }
    if (line.starts_with("threshold")) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("curve CSV: missing comma", line_no);
    curves.thresholds.push_back(std::strtod(line.substr(0, comma).c_str(), nullptr));
    curves.values.push_back(std::strtod(line.substr(comma + 1).c_str(), nullptr));
  }
  return curves;
}

namespace {

EvalCurves mean_curves(const std::vector<SequenceResult>& results, bool success) {
  EvalCurves mean;
  int n = 0;
  for (const SequenceResult& r : results) {
    if (!r.ok()) continue;
    const EvalCurves& c = success ? r.success : r.precision;
    if (mean.thresholds.empty()) {
      mean.thresholds = c.thresholds;
      mean.values.assign(c.values.size(), 0.0);
    }
    for (size_t i = 0; i < c.values.size(); ++i) mean.values[i] += c.values[i];
    mean.summary += c.summary;
    ++n;
  }
  if (n > 0) {
    for (double& v : mean.values) v /= n;
    mean.summary /= n;
  }
  return mean;
}

}  // namespace

void write_run_outputs(const std::filesystem::path& out_dir, const RunRecord& record) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "run.json");
    if (!out) throw IoError("cannot write run record: " + (out_dir / "run.json").string());
    out << record_to_json(record) << "\n";
  }
  for (const SequenceResult& r : record.per_sequence) {
    if (!r.ok()) continue;
    write_curve_csv(out_dir / "curves" / (r.name + "_success.csv"), r.success);
    write_curve_csv(out_dir / "curves" / (r.name + "_precision.csv"), r.precision);

    EvalCurves f_curve{r.lt.thresholds, r.lt.f, r.f};
    write_curve_csv(out_dir / "curves" / (r.name + "_lt_f.csv"), f_curve);
  }

  const EvalCurves success = mean_curves(record.per_sequence, true);
  const EvalCurves precision = mean_curves(record.per_sequence, false);
  if (!success.thresholds.empty())
    write_svg_plot(out_dir / "plots" / "success.svg", success, "Success plot",
                   "overlap threshold", "success rate");
  if (!precision.thresholds.empty())
    write_svg_plot(out_dir / "plots" / "precision.svg", precision, "Precision plot",
                   "location error threshold (px)", "precision");
}

std::vector<double> default_lambda_grid() { return {0.0, 0.01, 0.05, 0.1, 0.2}; }

AblateTable run_ablate(const std::vector<ModalSequence>& sequences, const PromptConfig& base,
                       const TrackerSpec& tracker, const std::string& axis,
                       const std::vector<double>& lambda_grid, int jobs) {
  AblateTable table;
  table.axis = axis;

  const auto eval_with = [&](const PromptConfig& cfg, const std::string& label) {
    RunRecord record = run_eval(sequences, cfg, tracker, jobs);
    table.rows.push_back({label, record.aggregate});
  };

  if (axis == "lambda") {
    for (double lambda : lambda_grid.empty() ? default_lambda_grid() : lambda_grid) {
      PromptConfig cfg = base;
      cfg.weights = DualWeights{lambda};
      char label[32];
      std::snprintf(label, sizeof label, "%g", lambda);
      eval_with(cfg, label);
    }
  } else if (axis == "colormap") {
    for (ColormapKind map : {ColormapKind::Jet, ColormapKind::Red, ColormapKind::Gray}) {
      PromptConfig cfg = base;
      for (ModalityKind kind : {ModalityKind::Depth, ModalityKind::Thermal}) cfg.aux_colormap[kind] = map;
      eval_with(cfg, to_string(map));
    }
  } else if (axis == "modality") {
    // Rows mirror the modality ablation: blended default, visible-only
    // (lambda 0), auxiliary-only (lambda 1).
    eval_with(base, "default");
    PromptConfig visible = base;
    visible.weights = DualWeights{0.0};
    eval_with(visible, "visible");
    PromptConfig aux = base;
    aux.weights = DualWeights{1.0};
    eval_with(aux, "auxiliary");
  } else {
    throw ConfigError("unknown ablation axis: " + axis + " (expected lambda, colormap or modality)");
  }
  return table;
}

std::string format_table(const AblateTable& table) {
  std::ostringstream out;
  out << table.axis << " | pr | re | f | success_auc | precision_at_20\n";
  for (const AblateRow& row : table.rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%s | %.4f | %.4f | %.4f | %.4f | %.4f\n", row.label.c_str(),
                  row.aggregate.pr, row.aggregate.re, row.aggregate.f, row.aggregate.success_auc,
                  row.aggregate.precision_at_20);
    out << line;
  }
  return out.str();
}

std::string table_to_csv(const AblateTable& table) {
  std::ostringstream out;
  out << table.axis << ",pr,re,f,success_auc,precision_at_20\n";
  for (const AblateRow& row : table.rows)
    out << row.label << ',' << format_real(row.aggregate.pr) << ',' << format_real(row.aggregate.re)
        << ',' << format_real(row.aggregate.f) << ',' << format_real(row.aggregate.success_auc)
        << ',' << format_real(row.aggregate.precision_at_20) << "\n";
  return out.str();
}

}  // namespace protrack
