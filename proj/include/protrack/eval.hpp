#pragma once

#include "protrack/metrics.hpp"
#include "protrack/mosse.hpp"
#include "protrack/prompt.hpp"
#include "protrack/sequence.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace protrack {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Tracker selection by name: `mosse`, `oracle`, `oracle-always`, or
/// `external:<command>` for the subprocess protocol.
struct TrackerSpec {
  std::string name = "mosse";
  MosseParams mosse;
};

struct SequenceResult {
  std::string name;
  std::string status = "ok";  // or the failure message
  double pr = 0, re = 0, f = 0, tau_star = 0;
  double success_auc = 0, precision_at_20 = 0;
  EvalCurves success, precision;
  LtCurves lt;

  bool ok() const { return status == "ok"; }
};

struct Aggregate {
  double pr = 0, re = 0, f = 0;
  double success_auc = 0, precision_at_20 = 0;
  int n_sequences = 0;
  int n_failed = 0;
};

struct RunRecord {
  std::string run_id;
  std::string timestamp;
  std::string toolkit_version = kToolkitVersion;
  std::vector<std::string> manifest_paths;
  PromptConfig prompt;
  TrackerSpec tracker;
  std::vector<SequenceResult> per_sequence;  // merged in name order
  Aggregate aggregate;
};

/// prompt -> track for one sequence. The first annotation supplies the init
/// box.
std::vector<TrackerOutput> track_sequence(const ModalSequence& seq, const PromptConfig& cfg,
                                          const TrackerSpec& tracker);

/// Metrics for a finished tracker run.
SequenceResult score_outputs(const std::string& name, std::span<const TrackerOutput> outputs,
                             std::span<const Annotation> gts);

/// prompt -> track -> metrics for one sequence; failures land in `status`.
SequenceResult evaluate_sequence(const ModalSequence& seq, const PromptConfig& cfg,
                                 const TrackerSpec& tracker);

/// Evaluates pre-loaded sequences with sequence-level fan-out; results are
/// merged in name order so the job count never changes output bytes.
RunRecord run_eval(const std::vector<ModalSequence>& sequences, const PromptConfig& cfg,
                   const TrackerSpec& tracker, int jobs = 1);

/// Loads each manifest, then evaluates it along with any pre-loaded extra
/// sequences. Per-sequence failures (including load failures) are recorded
/// and skipped.
RunRecord run_eval_manifests(const std::vector<std::filesystem::path>& manifests,
                             const PromptConfig& cfg, const TrackerSpec& tracker, int jobs = 1,
                             std::vector<ModalSequence> extra_sequences = {});

/// The deterministic mean of the per-sequence metric values, failures excluded.
Aggregate aggregate_results(const std::vector<SequenceResult>& results);

/// JSON form of the record; the `results` subtree holds exactly the metric
/// payload, so byte-comparing its dump checks run determinism.
std::string record_to_json(const RunRecord& record);
std::string record_results_payload(const RunRecord& record);

/// run.json + per-sequence curve CSVs + aggregate SVG plots.
void write_run_outputs(const std::filesystem::path& out_dir, const RunRecord& record);

/// Curve CSV: `# summary <value>` comment, then `threshold,value` rows,
/// 17-significant-digit reals so re-parsing is exact.
void write_curve_csv(const std::filesystem::path& path, const EvalCurves& curves);
EvalCurves parse_curve_csv(const std::filesystem::path& path);

/// One ablation table row: grid label plus the aggregate over the suite.
struct AblateRow {
  std::string label;
  Aggregate aggregate;
};

struct AblateTable {
  std::string axis;
  std::vector<AblateRow> rows;
};

/// Re-runs the evaluation once per grid point with shared sequences.
/// Axes: `lambda` (grid values), `colormap` {jet, red, gray},
/// `modality` {default, visible, auxiliary}.
AblateTable run_ablate(const std::vector<ModalSequence>& sequences, const PromptConfig& base,
                       const TrackerSpec& tracker, const std::string& axis,
                       const std::vector<double>& lambda_grid, int jobs = 1);

std::string format_table(const AblateTable& table);
std::string table_to_csv(const AblateTable& table);

/// The paper-default lambda ablation grid.
std::vector<double> default_lambda_grid();

}  // namespace protrack
