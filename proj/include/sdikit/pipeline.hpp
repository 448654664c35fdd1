#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdikit/corpus.hpp"

namespace sdikit::pipeline {

using corpus::Claim;
using corpus::Framing;
using corpus::PromptCase;

// A (claim, framing) situation the generation stage targets.
struct Scenario {
  std::string scenario_id;
  std::string description;
  std::string claim_id;
  Framing framing = Framing::kNeutral;
};

enum class Label { kTruthfulCorrection, kTruthfulAgreement };
enum class Source { kSynthetic, kOriginal };

const char* label_name(Label l);
const char* source_name(Source s);

// One training unit: prompt, crafted target response, and how it was made.
struct SyntheticExample {
  std::string example_id;
  std::string prompt_text;
  std::string target_response;
  Label label = Label::kTruthfulAgreement;
  Framing framing = Framing::kNeutral;
  std::vector<std::string> provenance;  // stage tags, starts with "crafted" for synthetic
  Source source = Source::kSynthetic;

  // Example ids are "<claim_id>:<rest>"; the claim id is recoverable so the
  // harness can split train/eval by claim.
  std::string claim_id() const;
};

struct BalanceTargets {
  std::map<Framing, double> framing;  // fractions summing to 1
  std::map<Label, double> label;      // fractions summing to 1
  double tolerance = 0.05;

  // Uniform framings; label targets follow (corrections come from the two
  // stance-pushing framings, so their natural share is 2/3).
  static BalanceTargets defaults();
  void validate() const;  // throws std::invalid_argument
};

std::vector<Scenario> identify_scenarios(const std::vector<Claim>& claims,
                                         const std::vector<Framing>& framings);

// Crafts the correct response a model should learn for this case: states the
// true fact and, when the case pushes a falsehood, explicitly contradicts it
// and gives one supporting reason.
SyntheticExample craft_response(const Claim& claim, const PromptCase& pcase);

std::vector<SyntheticExample> paraphrase(const SyntheticExample& example, std::size_t n,
                                         std::uint64_t seed);

SyntheticExample diversify_context(const SyntheticExample& example, std::uint64_t seed);

SyntheticExample inject_noise(const SyntheticExample& example, double rate, std::uint64_t seed);

struct MergeResult {
  std::vector<SyntheticExample> examples;
  std::vector<std::string> warnings;
};

MergeResult merge_datasets(const std::vector<SyntheticExample>& synthetic,
                           const std::vector<SyntheticExample>& original);

struct BalanceReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  bool downsampled = false;
  bool feasible = true;
  std::map<Framing, double> achieved_framing;
  std::map<Label, double> achieved_label;
};

struct BalanceResult {
  std::vector<SyntheticExample> examples;
  BalanceReport report;
};

// Stratified down-sampling toward the target fractions. Never duplicates. If
// the current fractions are already within tolerance the input is returned
// unchanged; otherwise the largest exactly-proportioned subset is kept.
BalanceResult balance(const std::vector<SyntheticExample>& dataset, const BalanceTargets& targets,
                      std::uint64_t seed);

struct QualityReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::size_t duplicates = 0;
  std::size_t empty_response = 0;
  std::size_t length_out_of_bounds = 0;
  std::size_t label_mismatch = 0;
};

struct QualityResult {
  std::vector<SyntheticExample> examples;
  QualityReport report;
};

inline constexpr std::size_t kMinPromptTokens = 3;
inline constexpr std::size_t kMaxPromptTokens = 512;

QualityResult quality_check(const std::vector<SyntheticExample>& dataset);

void save_examples(const std::string& path, const std::vector<SyntheticExample>& examples);
std::vector<SyntheticExample> load_examples(const std::string& path);

}  // namespace sdikit::pipeline
