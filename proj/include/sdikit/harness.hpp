#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdikit/adapter.hpp"
#include "sdikit/corpus.hpp"
#include "sdikit/eval.hpp"
#include "sdikit/model.hpp"
#include "sdikit/pipeline.hpp"

namespace sdikit::harness {

// Exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};
// Exit code 2.
struct PipelineError : std::runtime_error {
  explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};
// Exit code 3.
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};
// Exit code 4.
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

struct PipelineSettings {
  std::size_t paraphrase_n = 1;
  bool diversify = true;
  double noise_rate = 0.1;
  // Synthetic:original count ratio enforced by down-sampling the synthetic
  // side before merging; 0 disables the cap.
  double synthetic_ratio = 1.0;
  pipeline::BalanceTargets targets = pipeline::BalanceTargets::defaults();
};

struct EvalSettings {
  double eval_fraction = 0.3;  // share of claims held out, split by claim id
  std::size_t max_new_tokens = 40;
  bool hs_times_100 = false;
  std::string lexicon_path;  // empty = compiled-in defaults
};

struct Seeds {
  std::uint64_t pipeline = 1;
  std::uint64_t init = 2;
  std::uint64_t train = 3;
  std::uint64_t eval = 4;
};

enum class AdapterKind { kLocal, kExternal };

struct ExperimentConfig {
  std::string claims_path = "data/claims_100.jsonl";
  std::string output_dir = "out";
  PipelineSettings pipeline;
  model::ModelConfig model;
  model::TrainOptions train;
  EvalSettings eval;
  Seeds seeds;
  AdapterKind adapter = AdapterKind::kLocal;
  adapter::EndpointDescriptor endpoint;

  void set_all_seeds(std::uint64_t seed);
};

ExperimentConfig default_config();

// Flat "key = value" file; '#' starts a comment. Unknown keys are errors.
ExperimentConfig load_config(const std::string& path);
void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value);

struct PipelineCounts {
  std::size_t claims = 0;
  std::size_t scenarios = 0;
  std::size_t crafted = 0;
  std::size_t original = 0;
  std::size_t augmented = 0;
  std::size_t merged = 0;
  std::size_t balanced = 0;
  std::size_t final_dataset = 0;
  std::size_t vocab = 0;
};

struct PipelineArtifacts {
  PipelineCounts counts;
  pipeline::BalanceReport balance;
  pipeline::QualityReport quality;
  std::vector<std::string> warnings;
};

// Figure-style end-to-end data flow: generation, augmentation, integration,
// preprocessing. Writes all corpus artifacts plus manifest.json.
PipelineArtifacts run_pipeline(const ExperimentConfig& config);

// Trains the treated model (full intervened dataset) and the baseline (the
// original, non-intervened examples only) from shared initial parameters.
void train_models(const ExperimentConfig& config);

struct ExperimentOutcome {
  eval::MetricsReport treated;
  eval::MetricsReport baseline;
  eval::ComparisonTable table;
};

// Local-adapter evaluation of both checkpoints on the identical held-out
// prompt-case list; writes transcripts, reports, and the comparison table.
ExperimentOutcome evaluate_models(const ExperimentConfig& config);

// External-endpoint evaluation over the held-out case list; failures are
// isolated per case and reported as coverage.
struct ExternalOutcome {
  std::size_t attempted = 0;
  std::size_t answered = 0;
  std::vector<std::string> errors;  // one entry per failed case
};

ExternalOutcome evaluate_external(const ExperimentConfig& config);

// train + evaluate against existing pipeline artifacts.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

// Renders the comparison (plus per-framing breakdown and trigger counts)
// from a finished output directory.
std::string render_report(const std::string& output_dir, bool hs_times_100 = false);

// Machine-readable form of the same comparison.
std::string render_report_json(const std::string& output_dir, bool hs_times_100 = false);

}  // namespace sdikit::harness
