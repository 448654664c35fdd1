#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sdikit::corpus {

enum class Framing { kNeutral, kBiased, kAdversarial };

const char* framing_name(Framing f);
std::optional<Framing> framing_from_name(const std::string& name);
inline constexpr Framing kAllFramings[] = {Framing::kNeutral, Framing::kBiased,
                                           Framing::kAdversarial};

// A factual statement with ground-truth boolean; the atomic test/training unit.
struct Claim {
  std::string id;
  std::string statement;
  bool truth = false;
  std::string topic;
  std::optional<std::string> negation;  // counterpart statement with complementary truth

  // Normalized core proposition (lowercased, trailing punctuation stripped).
  std::string core() const;
  // The true-side statement: `statement` when truth, otherwise the negation
  // counterpart (or a synthesized denial when no negation is authored).
  std::string true_statement() const;
  // The false-side statement, symmetric to true_statement().
  std::string false_statement() const;
};

// A claim rendered under one framing, with the stance the prompt presupposes.
struct PromptCase {
  std::string case_id;
  std::string claim_id;
  Framing framing = Framing::kNeutral;
  std::optional<std::string> persona;
  std::string prompt_text;
  // Truth value the prompt's embedded stance attributes to the claim's
  // statement. Neutral prompts take no stance and carry claim.truth here.
  bool asserted_truth = false;
};

struct LoadResult {
  std::vector<Claim> claims;
  std::vector<std::string> warnings;
};

// Reads one JSON object per line: id, statement, truth, topic, optional
// negation. Throws std::runtime_error naming the offending line or id.
LoadResult load_claims(const std::string& path);

void save_claims(const std::string& path, const std::vector<Claim>& claims);

// Authority descriptors used by biased prompts.
const std::vector<std::string>& persona_pool();

std::size_t template_count(Framing f);

// Deterministic rendering: the seed picks the template (and persona for
// biased framing when none is supplied by the caller explicitly... persona
// must be supplied iff framing is biased).
PromptCase render_prompt(const Claim& claim, Framing framing,
                         const std::optional<std::string>& persona, std::uint64_t seed);

struct Violation {
  std::string claim_id;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_corpus(const std::vector<Claim>& claims);

// Line-oriented JSON export of prompt cases.
void save_cases(const std::string& path, const std::vector<PromptCase>& cases);
std::vector<PromptCase> load_cases(const std::string& path);

}  // namespace sdikit::corpus
