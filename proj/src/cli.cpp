#include "edgeveritas/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "edgeveritas/calibrate.hpp"
#include "edgeveritas/classify.hpp"
#include "edgeveritas/config.hpp"
#include "edgeveritas/degrade.hpp"
#include "edgeveritas/imgio.hpp"
#include "edgeveritas/metrics.hpp"
#include "edgeveritas/parallel.hpp"
#include "edgeveritas/scoring.hpp"

namespace edgeveritas {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  double t_low = 0, t_high = 0, blur_sigma = 0, epsilon = 0;
  int blur_kernel = 0;
  bool internal_blur = false;
  std::string strategy, orientation, edge_input;
  std::size_t bins = 0;
  std::uint64_t seed = 0;
};

struct Context {
  RunConfig config;
  unsigned threads = 1;
  std::ostream& out;
  std::ostream& err;

  nlohmann::json config_json() const { return to_json(config); }
};

void write_text(const std::string& path, std::ostream& fallback,
                const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  body(file);
}

void write_json(const std::string& path, std::ostream& fallback, const nlohmann::json& doc) {
  write_text(path, fallback, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

/// CSV artifacts cannot carry the config inline; it goes to `<out>.config.json`.
void write_config_sidecar(const std::string& path, const Context& ctx,
                          nlohmann::json extra = nlohmann::json::object()) {
  if (path.empty()) return;
  extra["config"] = ctx.config_json();
  write_json(path + ".config.json", ctx.out, extra);
}

nlohmann::json failures_json(const std::vector<ScoreFailure>& failures) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : failures) list.push_back({{"id", f.id}, {"message", f.message}});
  return list;
}

void warn_failures(const Context& ctx, const std::vector<ScoreFailure>& failures) {
  for (const auto& f : failures) ctx.err << "warning: skipped " << f.id << ": " << f.message << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, path + " is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------

void cmd_ingest(const Context& ctx, const std::string& root, bool require_labels,
                const std::string& out_path) {
  const Manifest manifest = ingest_dataset(root, require_labels);
  write_manifest(manifest, out_path);
  ctx.err << "ingested " << manifest.entries.size() << " images, skipped " << manifest.skipped
          << '\n';
}

void cmd_score(const Context& ctx, const std::string& manifest_path, const std::string& out_path) {
  const Manifest manifest = read_manifest(manifest_path);
  if (manifest.entries.empty()) throw Error(ErrorCode::EmptyDataset, "manifest has no entries");
  const ScoredManifest scored = score_manifest(manifest, ctx.config.scoring, ctx.threads);
  warn_failures(ctx, scored.failures);
  write_text(out_path, ctx.out, [&](std::ostream& os) { write_scores_csv(scored.scores, os); });
  write_config_sidecar(out_path, ctx, {{"failures", failures_json(scored.failures)}});
}

void cmd_calibrate(const Context& ctx, const std::string& scores_path, const std::string& out_path) {
  std::vector<double> real, fake;
  for (const ScoreRecord& r : read_scores_csv(scores_path)) {
    if (!r.label) continue;
    (*r.label == Label::fake ? fake : real).push_back(r.score);
  }
  const CalibrationResult cal = valley_threshold(real, fake, ctx.config.strategy, ctx.config.bins);
  nlohmann::json doc = to_json(cal);
  doc["config"] = ctx.config_json();
  write_json(out_path, ctx.out, doc);
}

void cmd_classify(const Context& ctx, const std::string& manifest_path,
                  const std::string& calibration_path, const std::string& out_path,
                  const std::string& scores_out) {
  const Manifest manifest = read_manifest(manifest_path);
  const CalibrationResult cal = read_calibration(calibration_path);
  const BatchResult batch =
      classify_batch(manifest, ctx.config.scoring, cal, ctx.config.orientation, ctx.threads);
  warn_failures(ctx, batch.failures);
  nlohmann::json doc = to_json(batch.predictions);
  doc["failures"] = failures_json(batch.failures);
  doc["config"] = ctx.config_json();
  write_json(out_path, ctx.out, doc);
  if (!scores_out.empty()) write_scores_csv(batch.scores, fs::path(scores_out));
}

void cmd_refine(const Context& ctx, const std::string& pred_path, const std::string& manifest_path,
                const std::string& calibration_path, const std::string& truth_path,
                const std::string& gate, const std::string& out_path) {
  const PredictionSet stage1 = load_predictions(pred_path);
  const Manifest manifest = read_manifest(manifest_path);
  const CalibrationResult cal = read_calibration(calibration_path);
  const TruthMap truth =
      truth_path.empty() ? truth_from_manifest(manifest) : truth_from_manifest(read_manifest(truth_path));
  const EdgeLabeler labeler = manifest_labeler(manifest, ctx.config.scoring, cal, ctx.config.orientation);

  RefineResult result;
  nlohmann::json extra;
  if (gate.empty()) {
    result = refine_predictions(stage1, truth, labeler);
    extra["protocol"] = "misclassified";
  } else {
    constexpr std::string_view kPrefix = "confidence:";
    if (!gate.starts_with(kPrefix)) {
      throw Error(ErrorCode::UsageError, "--gate expects confidence:<c>");
    }
    double threshold = 0.0;
    try {
      threshold = std::stod(gate.substr(kPrefix.size()));
    } catch (const std::exception&) {
      throw Error(ErrorCode::UsageError, "--gate expects confidence:<c> with numeric c");
    }
    result = gate_by_confidence(stage1, threshold, labeler, &truth);
    extra["protocol"] = "confidence_gate";
    extra["gate_confidence"] = threshold;
  }
  result.predictions.provenance = stage1.provenance.empty()
                                      ? std::string("edge refinement")
                                      : stage1.provenance + " + edge refinement";
  nlohmann::json doc = to_json(result.predictions);
  for (auto& [key, value] : extra.items()) doc[key] = value;
  doc["misclassified_set_size"] = result.misclassified;
  doc["corrected"] = result.corrected;
  doc["config"] = ctx.config_json();
  write_json(out_path, ctx.out, doc);
  ctx.err << "refined " << result.misclassified << " records, corrected " << result.corrected
          << '\n';
}

void cmd_evaluate(const Context& ctx, const std::string& pred_path, const std::string& truth_path,
                  const std::string& baseline_path, const std::string& out_path) {
  const nlohmann::json pred_doc = read_json_file(pred_path);
  const PredictionSet predictions = predictions_from_json(pred_doc);
  const TruthMap truth = truth_from_manifest(read_manifest(truth_path));

  EvaluationReport report = evaluate(confusion(predictions, truth));
  if (!baseline_path.empty()) {
    const BasicMetrics baseline = basic_metrics(confusion(load_predictions(baseline_path), truth));
    report.accuracy_improvement_pct = accuracy_improvement(report.basic.accuracy, baseline.accuracy);
  }
  if (const auto it = pred_doc.find("corrected"); it != pred_doc.end() && it->is_number_unsigned()) {
    report.corrected = it->get<std::size_t>();
  }
  if (const auto it = pred_doc.find("misclassified_set_size");
      it != pred_doc.end() && it->is_number_unsigned()) {
    report.misclassified_set_size = it->get<std::size_t>();
  }
  nlohmann::json doc = to_json(report);
  doc["config"] = ctx.config_json();
  write_json(out_path, ctx.out, doc);
}

void cmd_degrade(const Context& ctx, const std::string& manifest_path,
                 const std::vector<std::string>& kinds, const std::string& out_path) {
  const Manifest manifest = read_manifest(manifest_path);
  std::vector<DegradationKind> selected;
  if (kinds.empty() || std::find(kinds.begin(), kinds.end(), "all") != kinds.end()) {
    selected.assign(kAllDegradations.begin(), kAllDegradations.end());
  } else {
    for (const std::string& name : kinds) {
      const auto kind = parse_degradation(name);
      if (!kind) throw Error(ErrorCode::UsageError, "unknown degradation kind '" + name + "'");
      selected.push_back(*kind);
    }
  }
  std::vector<DegradationRow> rows;
  nlohmann::json specs = nlohmann::json::array();
  for (const DegradationKind kind : selected) {
    const DegradationSpec spec = ctx.config.degradation(kind);
    rows.push_back(degradation_experiment(manifest, spec, ctx.config.scoring, ctx.config.strategy,
                                          ctx.config.orientation, ctx.threads));
    specs.push_back(to_json(spec));
  }
  write_text(out_path, ctx.out, [&](std::ostream& os) { write_degradation_csv(rows, os); });
  write_config_sidecar(out_path, ctx, {{"degradations", specs}});
}

void cmd_report(const Context& ctx, const std::string& scores_path,
                const std::string& calibration_path, const std::string& out_path) {
  const std::vector<ScoreRecord> scores = read_scores_csv(scores_path);
  const CalibrationResult cal = read_calibration(calibration_path);

  nlohmann::json sorted = nlohmann::json::object();
  nlohmann::json series = nlohmann::json::object();
  for (const Label label : {Label::real, Label::fake}) {
    std::vector<double> values;
    nlohmann::json variance = nlohmann::json::array();
    for (const ScoreRecord& r : scores) {
      if (r.label != label) continue;
      values.push_back(r.score);
      variance.push_back({{"index", variance.size()}, {"id", r.id}, {"variance", r.variance}});
    }
    std::sort(values.begin(), values.end());
    const double center = label == Label::fake ? cal.center_fake : cal.center_real;
    sorted[std::string(to_string(label))] = {{"center", center}, {"scores", values}};
    series[std::string(to_string(label))] = std::move(variance);
  }

  const Histogram& h = cal.histogram;
  nlohmann::json centers = nlohmann::json::array();
  std::optional<std::size_t> threshold_bin;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    centers.push_back(h.center(b));
    const bool last = b + 1 == h.counts.size();
    if (!threshold_bin && cal.threshold >= h.edges[b] &&
        (cal.threshold < h.edges[b + 1] || (last && cal.threshold <= h.edges[b + 1]))) {
      threshold_bin = b;
    }
  }

  const nlohmann::json doc = {
      {"positive_class", "fake"},
      {"threshold", cal.threshold},
      {"orientation", to_string(cal.orientation)},
      {"fallback_midpoint", cal.fallback_midpoint},
      {"sorted_scores", sorted},
      {"histogram",
       {{"edges", h.edges},
        {"counts", h.counts},
        {"centers", centers},
        {"threshold", cal.threshold},
        {"threshold_bin", threshold_bin ? nlohmann::json(*threshold_bin) : nlohmann::json(nullptr)},
        {"valley", {{"low", std::min(cal.center_real, cal.center_fake)},
                    {"high", std::max(cal.center_real, cal.center_fake)}}}}},
      {"variance_series", series},
      {"config", ctx.config_json()},
  };
  write_json(out_path, ctx.out, doc);
}

// ---------------------------------------------------------------------------

bool wants_json_errors(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--errors=json") return true;
    if (args[i] == "--errors" && i + 1 < args.size() && args[i + 1] == "json") return true;
  }
  return false;
}

int report_error(std::ostream& err, bool json, std::string_view code, const std::string& message,
                 int exit_code) {
  if (json) {
    err << nlohmann::json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump()
        << '\n';
  } else {
    err << "error: " << code << ": " << message << '\n';
  }
  return exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const bool json_errors = wants_json_errors(args);

  CLI::App app{"Edge-variance forensics: real vs AI-generated image classification", "edgeveritas"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, errors_mode = "text";
  bool print_config = false;
  unsigned threads = 0;
  Overrides o;
  app.add_option("--config", config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  app.add_option("--errors", errors_mode, "Error output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--print-config", print_config, "Print the effective config and exit");
  app.add_option("--threads", threads, "Worker threads (0 = all cores; capped by EDGEVERITAS_THREADS)");
  auto* opt_seed = app.add_option("--seed", o.seed, "Seed for every random draw");
  auto* opt_t_low = app.add_option("--t-low", o.t_low, "Canny low threshold");
  auto* opt_t_high = app.add_option("--t-high", o.t_high, "Canny high threshold");
  auto* opt_kernel = app.add_option("--blur-kernel", o.blur_kernel, "Gaussian kernel size (odd)");
  auto* opt_sigma = app.add_option("--blur-sigma", o.blur_sigma, "Gaussian sigma");
  auto* opt_internal = app.add_flag("--canny-internal-blur", o.internal_blur,
                                    "Pre-smooth inside Canny as well");
  auto* opt_eps = app.add_option("--epsilon", o.epsilon, "Score denominator epsilon");
  auto* opt_strategy = app.add_option("--strategy", o.strategy, "Class center: median, mean, mode")
                           ->check(CLI::IsMember({"median", "mean", "mode"}));
  auto* opt_orient = app.add_option("--orientation", o.orientation, "recorded or paper_fixed")
                         ->check(CLI::IsMember({"recorded", "paper_fixed"}));
  auto* opt_input = app.add_option("--edge-input", o.edge_input, "native or resized")
                        ->check(CLI::IsMember({"native", "resized"}));
  auto* opt_bins = app.add_option("--bins", o.bins, "Histogram bins")->check(CLI::PositiveNumber);

  std::string root, manifest, out_path, scores, calibration, pred, truth, baseline, gate, scores_out;
  bool require_labels = false;
  std::vector<std::string> kinds;

  auto* ingest = app.add_subcommand("ingest", "Build a manifest from a dataset directory");
  ingest->add_option("--root", root, "Dataset root")->required()->check(CLI::ExistingDirectory);
  ingest->add_flag("--require-labels", require_labels, "Require real/ and fake/ subdirectories");
  ingest->add_option("--out", out_path, "Manifest JSON output")->required();

  auto* score = app.add_subcommand("score", "Compute edge-variance scores");
  score->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  score->add_option("--out", out_path, "Scores CSV output");

  auto* calibrate = app.add_subcommand("calibrate", "Valley threshold from labeled scores");
  calibrate->add_option("--scores", scores)->required()->check(CLI::ExistingFile);
  calibrate->add_option("--out", out_path, "Calibration JSON output");

  auto* classify = app.add_subcommand("classify", "Edge-only classification of a manifest");
  classify->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  classify->add_option("--calibration", calibration)->required()->check(CLI::ExistingFile);
  classify->add_option("--out", out_path, "Predictions JSON output");
  classify->add_option("--scores-out", scores_out, "Also write the computed scores CSV");

  auto* refine = app.add_subcommand("refine", "Re-label misclassified external predictions");
  refine->add_option("--pred", pred, "Stage-1 predictions")->required()->check(CLI::ExistingFile);
  refine->add_option("--manifest", manifest, "Images (and labels)")->required()->check(CLI::ExistingFile);
  refine->add_option("--calibration", calibration)->required()->check(CLI::ExistingFile);
  refine->add_option("--truth", truth, "Manifest supplying ground truth (default: --manifest)")
      ->check(CLI::ExistingFile);
  refine->add_option("--gate", gate, "confidence:<c> routes low-confidence records instead");
  refine->add_option("--out", out_path, "Refined predictions JSON output");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics for a predictions file");
  evaluate_cmd->add_option("--pred", pred)->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--truth", truth, "Labeled manifest")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--baseline", baseline, "Baseline predictions for accuracy improvement")
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--out", out_path, "Report JSON output");

  auto* degrade = app.add_subcommand("degrade", "Robustness under image degradations");
  degrade->add_option("--manifest", manifest)->required()->check(CLI::ExistingFile);
  degrade->add_option("--kind", kinds, "Degradation kinds (default all)");
  degrade->add_option("--out", out_path, "Degradation CSV output");

  auto* report = app.add_subcommand("report", "Figure data from scores and calibration");
  report->add_option("--scores", scores)->required()->check(CLI::ExistingFile);
  report->add_option("--calibration", calibration)->required()->check(CLI::ExistingFile);
  report->add_option("--out", out_path, "Figure data JSON output");

  std::vector<const char*> argv{"edgeveritas"};
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, json_errors, "UsageError", e.what(), kExitUsage);
  }

  try {
    Context ctx{RunConfig{}, resolve_threads(threads), out, err};
    if (!config_path.empty()) merge_config(ctx.config, read_json_file(config_path));
    CannyParams& canny = ctx.config.scoring.canny;
    if (*opt_t_low) canny.t_low = o.t_low;
    if (*opt_t_high) canny.t_high = o.t_high;
    if (*opt_kernel) canny.blur_kernel = o.blur_kernel;
    if (*opt_sigma) canny.blur_sigma = o.blur_sigma;
    if (*opt_internal) canny.internal_blur = o.internal_blur;
    if (*opt_eps) ctx.config.scoring.epsilon = o.epsilon;
    if (*opt_strategy) ctx.config.strategy = *parse_strategy(o.strategy);
    if (*opt_orient) ctx.config.orientation = *parse_orientation_mode(o.orientation);
    if (*opt_input) ctx.config.scoring.input = o.edge_input == "resized" ? EdgeInput::resized : EdgeInput::native;
    if (*opt_bins) ctx.config.bins = o.bins;
    if (*opt_seed) ctx.config.seed = o.seed;
    try {
      canny.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::UsageError, e.what());
    }

    if (print_config) {
      out << ctx.config_json().dump(2) << '\n';
      return kExitOk;
    }

    if (*ingest) cmd_ingest(ctx, root, require_labels, out_path);
    else if (*score) cmd_score(ctx, manifest, out_path);
    else if (*calibrate) cmd_calibrate(ctx, scores, out_path);
    else if (*classify) cmd_classify(ctx, manifest, calibration, out_path, scores_out);
    else if (*refine) cmd_refine(ctx, pred, manifest, calibration, truth, gate, out_path);
    else if (*evaluate_cmd) cmd_evaluate(ctx, pred, truth, baseline, out_path);
    else if (*degrade) cmd_degrade(ctx, manifest, kinds, out_path);
    else if (*report) cmd_report(ctx, scores, calibration, out_path);
    else {
      return report_error(err, json_errors, "UsageError",
                          "a subcommand is required; see --help", kExitUsage);
    }
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::UsageError ? kExitUsage : kExitDataError;
    return report_error(err, json_errors, to_string(e.code()), e.what(), code);
  } catch (const std::exception& e) {
    return report_error(err, json_errors, "InternalError", e.what(), kExitDataError);
  }
  return kExitOk;
}

}  // namespace edgeveritas
