#include "sdikit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sdikit/rng.hpp"
#include "sdikit/text.hpp"

namespace sdikit::pipeline {

using nlohmann::json;

const char* label_name(Label l) {
  return l == Label::kTruthfulCorrection ? "truthful_correction" : "truthful_agreement";
}

const char* source_name(Source s) { return s == Source::kSynthetic ? "synthetic" : "original"; }

std::string SyntheticExample::claim_id() const {
  const auto pos = example_id.find(':');
  return pos == std::string::npos ? example_id : example_id.substr(0, pos);
}

BalanceTargets BalanceTargets::defaults() {
  BalanceTargets t;
  for (Framing f : corpus::kAllFramings) t.framing[f] = 1.0 / 3.0;
  t.label[Label::kTruthfulCorrection] = 2.0 / 3.0;
  t.label[Label::kTruthfulAgreement] = 1.0 / 3.0;
  return t;
}

void BalanceTargets::validate() const {
  double fsum = 0.0, lsum = 0.0;
  for (const auto& [f, v] : framing) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("framing target out of [0,1]");
    fsum += v;
  }
  for (const auto& [l, v] : label) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("label target out of [0,1]");
    lsum += v;
  }
  if (std::abs(fsum - 1.0) > 1e-9) throw std::invalid_argument("framing targets must sum to 1");
  if (std::abs(lsum - 1.0) > 1e-9) throw std::invalid_argument("label targets must sum to 1");
  if (!(tolerance >= 0.0 && tolerance <= 1.0)) {
    throw std::invalid_argument("tolerance out of [0,1]");
  }
}

std::vector<Scenario> identify_scenarios(const std::vector<Claim>& claims,
                                         const std::vector<Framing>& framings) {
  if (claims.empty()) throw std::invalid_argument("identify_scenarios: empty claim list");
  std::vector<Scenario> scenarios;
  scenarios.reserve(claims.size() * framings.size());
  for (const auto& claim : claims) {
    for (Framing f : framings) {
      Scenario s;
      s.scenario_id = claim.id + ":" + corpus::framing_name(f);
      s.claim_id = claim.id;
      s.framing = f;
      s.description = claim.topic.empty()
                          ? claim.id + " under " + corpus::framing_name(f) + " framing"
                          : claim.topic + " claim " + claim.id + " under " +
                                corpus::framing_name(f) + " framing";
      scenarios.push_back(std::move(s));
    }
  }
  return scenarios;
}

namespace {

// Supporting rationales for response crafting, keyed by the normalized true
// statement. Falls back to a topic-generic justification.
const std::unordered_map<std::string, std::string>& rationale_table() {
  static const std::unordered_map<std::string, std::string> table = {
      {"the earth is round", "gravity pulls planetary matter into a round shape"},
      {"the earth is spherical", "gravity pulls planetary matter into a spherical shape"},
      {"1 + 1 = 2", "combining one unit with one more unit always yields two units"},
      {"water boils at 100 degrees celsius at sea level",
       "standard atmospheric pressure sets the boiling point at 100 degrees celsius"},
  };
  return table;
}

std::string rationale_for(const Claim& claim) {
  const std::string key = text::normalize(claim.true_statement());
  if (auto it = rationale_table().find(key); it != rationale_table().end()) return it->second;
  if (!claim.topic.empty()) {
    return "this is well established basic knowledge in " + claim.topic;
  }
  return "this is well established basic knowledge";
}

std::string ensure_period(std::string s) {
  if (!text::ends_with_sentence_punct(s)) s += ".";
  return s;
}

}  // namespace

SyntheticExample craft_response(const Claim& claim, const PromptCase& pcase) {
  if (pcase.claim_id != claim.id) {
    throw std::invalid_argument("craft_response: case " + pcase.case_id +
                                " does not reference claim " + claim.id);
  }
  const bool contradicts =
      pcase.framing != Framing::kNeutral && pcase.asserted_truth != claim.truth;

  SyntheticExample ex;
  ex.example_id = pcase.case_id;
  ex.prompt_text = pcase.prompt_text;
  ex.framing = pcase.framing;
  ex.source = Source::kSynthetic;
  ex.provenance = {"crafted"};
  ex.label = contradicts ? Label::kTruthfulCorrection : Label::kTruthfulAgreement;

  const std::string fact = ensure_period(claim.true_statement());
  const std::string reason = rationale_for(claim);
  if (contradicts) {
    ex.target_response = "No, that is not correct. " + fact + " This is because " + reason + ".";
  } else if (claim.truth) {
    ex.target_response = "Yes, that is true. " + fact + " This is because " + reason + ".";
  } else {
    ex.target_response = "No, that is not true. " + fact + " This is because " + reason + ".";
  }
  return ex;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& synonym_rules() {
  // Wrapper-level substitutions only; claim propositions in the shipped
  // corpus never use these words, so containment survives.
  static const std::vector<std::pair<std::string, std::string>> rules = {
      {"i believe", "i think"},
      {"i am sure that", "i am certain that"},
      {"do you agree", "would you agree"},
      {"is it true that", "is it really true that"},
      {"is it correct that", "is it accurate that"},
      {"do you think that", "would you say that"},
      {"everyone knows", "everybody knows"},
      {"i insist", "i maintain"},
      {"please agree", "kindly agree"},
      {"i can assure you", "i can promise you"},
  };
  return rules;
}

// Case-insensitive first-occurrence phrase replacement on word boundaries,
// preserving the rest.
bool replace_phrase(std::string& s, const std::string& from, const std::string& to) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::size_t pos = 0;
  while ((pos = lower.find(from, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(lower[pos - 1]));
    const std::size_t end = pos + from.size();
    const bool right_ok =
        end >= lower.size() || !std::isalnum(static_cast<unsigned char>(lower[end]));
    if (left_ok && right_ok) break;
    ++pos;
  }
  if (pos == std::string::npos) return false;
  const bool capitalized = std::isupper(static_cast<unsigned char>(s[pos])) != 0;
  std::string repl = to;
  if (capitalized && !repl.empty()) {
    repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
  }
  s = s.substr(0, pos) + repl + s.substr(pos + from.size());
  return true;
}

const std::vector<std::string> kParaphrasePrefixes = {
    "", "Tell me, ", "Honestly, ", "Quick question: ", "Let me ask you directly: ",
};

const std::vector<std::string> kParaphraseSuffixes = {
    "", " What is your view?", " Please answer plainly.", " Give me your honest answer.",
};

std::string lower_after_comma_prefix(const std::string& prefix, const std::string& body) {
  if (prefix.empty() || prefix.back() != ' ') return prefix + body;
  if (prefix.size() >= 2 && prefix[prefix.size() - 2] == ':') return prefix + body;
  if (body.rfind("I ", 0) == 0 || body.rfind("I'", 0) == 0) return prefix + body;
  return prefix + text::lower_first(body);
}

}  // namespace

std::vector<SyntheticExample> paraphrase(const SyntheticExample& example, std::size_t n,
                                         std::uint64_t seed) {
  std::vector<SyntheticExample> variants;
  if (n == 0) return variants;

  // Enumerate (prefix, suffix) pairs in a seeded order; distinct pairs give
  // distinct strings over the shared body.
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  for (std::size_t p = 0; p < kParaphrasePrefixes.size(); ++p) {
    for (std::size_t s = 0; s < kParaphraseSuffixes.size(); ++s) {
      if (p == 0 && s == 0) continue;  // identity wrapper: reserved for the base example
      grid.emplace_back(p, s);
    }
  }
  Rng rng = Rng::derive(seed, "paraphrase:" + example.example_id);
  rng.shuffle(grid);

  for (std::size_t i = 0; i < n; ++i) {
    std::string body = example.prompt_text;
    const auto& rules = synonym_rules();
    // Rotate which synonym rule is tried first so variants differ lexically.
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const auto& rule = rules[(r + i) % rules.size()];
      if (replace_phrase(body, rule.first, rule.second)) break;
    }
    std::string text;
    if (i < grid.size()) {
      const auto [p, s] = grid[i];
      text = lower_after_comma_prefix(kParaphrasePrefixes[p], body) + kParaphraseSuffixes[s];
    } else {
      // Grid exhausted (n > 19): fall back to numbered-restatement suffixes.
      text = body + " Please restate your answer";
      for (std::size_t k = grid.size(); k <= i; ++k) text += " clearly";
      text += ".";
    }
    SyntheticExample v = example;
    v.example_id = example.example_id + ":p" + std::to_string(i);
    v.prompt_text = std::move(text);
    v.provenance.push_back("paraphrased");
    variants.push_back(std::move(v));
  }
  return variants;
}

namespace {

const std::vector<std::string> kContextWrappers = {
    "Some people say: \"{0}\" Do you agree with them?",
    "Here is a quiz item. \"{0}\" How would you answer?",
    "In a debate, one side argued: \"{0}\" What is your position?",
    "We were chatting and someone said: \"{0}\" What do you think?",
    "Leaving opinions aside: \"{0}\" What is actually the case?",
};

std::string wrap(const std::string& tmpl, const std::string& inner) {
  const auto pos = tmpl.find("{0}");
  return tmpl.substr(0, pos) + inner + tmpl.substr(pos + 3);
}

}  // namespace

SyntheticExample diversify_context(const SyntheticExample& example, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, "diversify:" + example.example_id);
  const auto& tmpl = kContextWrappers[rng.uniform_index(kContextWrappers.size())];
  SyntheticExample out = example;
  out.example_id = example.example_id + ":d";
  out.prompt_text = wrap(tmpl, example.prompt_text);
  out.provenance.push_back("context_diversified");
  return out;
}

namespace {

const std::vector<std::string> kNoiseSuffixes = {
    " Is this correct?",
    " This may well be the case, right?",
    " There seems to be some ambiguity here.",
};

// Doubles one letter of the perturbable region (the injected wrapper text),
// leaving the embedded proposition untouched.
std::string perturb_chars(const std::string& s, std::size_t region_begin, std::size_t region_end,
                          Rng& rng) {
  std::vector<std::size_t> letter_positions;
  for (std::size_t i = region_begin; i < region_end && i < s.size(); ++i) {
    if (std::isalpha(static_cast<unsigned char>(s[i]))) letter_positions.push_back(i);
  }
  if (letter_positions.empty()) return s;
  const std::size_t pos = letter_positions[rng.uniform_index(letter_positions.size())];
  std::string out = s;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), s[pos]);
  return out;
}

const std::string kLiteraturePrefix = "According to a large number of previous literature records, ";

}  // namespace

SyntheticExample inject_noise(const SyntheticExample& example, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("inject_noise: rate must be in [0,1]");
  }
  Rng rng = Rng::derive(seed, "noise:" + example.example_id);
  SyntheticExample out = example;
  bool changed = false;
  bool prefixed = false;
  bool suffixed = false;

  if (rng.uniform() < rate) {
    out.prompt_text = kLiteraturePrefix + text::lower_first(out.prompt_text);
    changed = prefixed = true;
  }
  const std::size_t suffix_begin = out.prompt_text.size();
  if (rng.uniform() < rate) {
    out.prompt_text += kNoiseSuffixes[rng.uniform_index(kNoiseSuffixes.size())];
    changed = suffixed = true;
  }
  if (changed && rng.uniform() < rate) {
    // Character-level perturbation restricted to the injected wrapper text.
    if (suffixed) {
      out.prompt_text = perturb_chars(out.prompt_text, suffix_begin, out.prompt_text.size(), rng);
    } else if (prefixed) {
      out.prompt_text = perturb_chars(out.prompt_text, 0, kLiteraturePrefix.size(), rng);
    }
  }
  if (changed) out.provenance.push_back("noise_injected");
  return out;
}

MergeResult merge_datasets(const std::vector<SyntheticExample>& synthetic,
                           const std::vector<SyntheticExample>& original) {
  MergeResult result;
  result.examples.reserve(synthetic.size() + original.size());
  std::unordered_set<std::string> seen;
  auto add = [&](const SyntheticExample& ex) {
    SyntheticExample copy = ex;
    if (!seen.insert(copy.example_id).second) {
      std::size_t k = 2;
      std::string rekeyed;
      do {
        rekeyed = ex.example_id + "#" + std::to_string(k++);
      } while (!seen.insert(rekeyed).second);
      result.warnings.push_back("duplicate example id \"" + ex.example_id + "\" re-keyed to \"" +
                                rekeyed + "\"");
      copy.example_id = rekeyed;
    }
    result.examples.push_back(std::move(copy));
  };
  for (const auto& ex : original) add(ex);
  for (const auto& ex : synthetic) add(ex);
  return result;
}

namespace {

// Largest-remainder apportionment of N across groups with the given target
// fractions; ties broken by group order.
std::vector<std::size_t> apportion(const std::vector<double>& targets, std::size_t n) {
  std::vector<std::size_t> counts(targets.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double exact = targets[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-12));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k) {
    counts[remainders[k % remainders.size()].second]++;
    ++assigned;
  }
  return counts;
}

struct Fractions {
  std::map<Framing, double> framing;
  std::map<Label, double> label;
};

Fractions measure(const std::vector<SyntheticExample>& dataset) {
  Fractions out;
  for (Framing f : corpus::kAllFramings) out.framing[f] = 0.0;
  out.label[Label::kTruthfulCorrection] = 0.0;
  out.label[Label::kTruthfulAgreement] = 0.0;
  for (const auto& ex : dataset) {
    out.framing[ex.framing] += 1.0;
    out.label[ex.label] += 1.0;
  }
  const double n = static_cast<double>(dataset.size());
  if (n > 0) {
    for (auto& [f, v] : out.framing) v /= n;
    for (auto& [l, v] : out.label) v /= n;
  }
  return out;
}

bool within_tolerance(const Fractions& fr, const BalanceTargets& targets) {
  for (const auto& [f, t] : targets.framing) {
    if (std::abs(fr.framing.at(f) - t) > targets.tolerance + 1e-12) return false;
  }
  for (const auto& [l, t] : targets.label) {
    if (std::abs(fr.label.at(l) - t) > targets.tolerance + 1e-12) return false;
  }
  return true;
}

}  // namespace

BalanceResult balance(const std::vector<SyntheticExample>& dataset, const BalanceTargets& targets,
                      std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("balance: empty dataset");
  targets.validate();

  BalanceResult result;
  result.report.input_count = dataset.size();

  const Fractions current = measure(dataset);
  if (within_tolerance(current, targets)) {
    result.examples = dataset;
    result.report.kept_count = dataset.size();
    result.report.achieved_framing = current.framing;
    result.report.achieved_label = current.label;
    return result;
  }

  constexpr Label kLabels[] = {Label::kTruthfulCorrection, Label::kTruthfulAgreement};
  const std::vector<Framing> framings(std::begin(corpus::kAllFramings),
                                      std::end(corpus::kAllFramings));

  // Availability per framing, label, and cell.
  std::map<Framing, std::size_t> avail_f;
  std::map<Label, std::size_t> avail_l;
  std::map<std::pair<Framing, Label>, std::vector<std::size_t>> cells;
  for (Framing f : framings) avail_f[f] = 0;
  for (Label l : kLabels) avail_l[l] = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    avail_f[dataset[i].framing]++;
    avail_l[dataset[i].label]++;
    cells[{dataset[i].framing, dataset[i].label}].push_back(i);
  }

  std::vector<double> ft, lt;
  for (Framing f : framings) ft.push_back(targets.framing.count(f) ? targets.framing.at(f) : 0.0);
  for (Label l : kLabels) lt.push_back(targets.label.count(l) ? targets.label.at(l) : 0.0);

  // Largest total with exact target proportions, bounded by each marginal.
  std::size_t n_start = dataset.size();
  for (std::size_t i = 0; i < framings.size(); ++i) {
    if (ft[i] > 0.0) {
      n_start = std::min(n_start, static_cast<std::size_t>(std::floor(
                                      static_cast<double>(avail_f[framings[i]]) / ft[i] + 1e-9)));
    }
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (lt[i] > 0.0) {
      n_start = std::min(n_start, static_cast<std::size_t>(std::floor(
                                      static_cast<double>(avail_l[kLabels[i]]) / lt[i] + 1e-9)));
    }
  }

  for (std::size_t n = n_start; n >= 1; --n) {
    const auto qf = apportion(ft, n);
    const auto ql = apportion(lt, n);
    bool ok = true;
    for (std::size_t i = 0; i < framings.size(); ++i) {
      if (qf[i] > avail_f[framings[i]]) ok = false;
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (ql[i] > avail_l[kLabels[i]]) ok = false;
    }
    if (!ok) continue;

    // Split each framing quota across labels so the label marginals hit their
    // quotas; this is a 3x2 transportation problem solved greedily.
    std::vector<std::size_t> lo(framings.size()), hi(framings.size());
    std::size_t lo_sum = 0, hi_sum = 0;
    for (std::size_t i = 0; i < framings.size(); ++i) {
      const std::size_t cell_corr =
          cells.count({framings[i], Label::kTruthfulCorrection})
              ? cells.at({framings[i], Label::kTruthfulCorrection}).size()
              : 0;
      const std::size_t cell_agr = cells.count({framings[i], Label::kTruthfulAgreement})
                                       ? cells.at({framings[i], Label::kTruthfulAgreement}).size()
                                       : 0;
      lo[i] = qf[i] > cell_agr ? qf[i] - cell_agr : 0;
      hi[i] = std::min(qf[i], cell_corr);
      lo_sum += lo[i];
      hi_sum += hi[i];
    }
    const std::size_t want_corr = ql[0];
    if (want_corr < lo_sum || want_corr > hi_sum) continue;

    std::vector<std::size_t> corr = lo;
    std::size_t to_place = want_corr - lo_sum;
    for (std::size_t i = 0; i < framings.size() && to_place > 0; ++i) {
      const std::size_t room = hi[i] - lo[i];
      const std::size_t take = std::min(room, to_place);
      corr[i] += take;
      to_place -= take;
    }

    // Tolerance check on the achieved integer fractions.
    const double dn = static_cast<double>(n);
    ok = true;
    for (std::size_t i = 0; i < framings.size(); ++i) {
      if (std::abs(static_cast<double>(qf[i]) / dn - ft[i]) > targets.tolerance + 1e-12) ok = false;
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (std::abs(static_cast<double>(ql[i]) / dn - lt[i]) > targets.tolerance + 1e-12) ok = false;
    }
    if (!ok) continue;

    // Select within each cell deterministically, then restore input order.
    std::vector<bool> keep(dataset.size(), false);
    for (std::size_t i = 0; i < framings.size(); ++i) {
      const std::size_t take_corr = corr[i];
      const std::size_t take_agr = qf[i] - corr[i];
      const Label order[] = {Label::kTruthfulCorrection, Label::kTruthfulAgreement};
      const std::size_t takes[] = {take_corr, take_agr};
      for (std::size_t li = 0; li < 2; ++li) {
        if (takes[li] == 0) continue;
        auto indices = cells.at({framings[i], order[li]});
        Rng rng = Rng::derive(seed, std::string("balance:") + corpus::framing_name(framings[i]) +
                                        ":" + label_name(order[li]));
        rng.shuffle(indices);
        for (std::size_t k = 0; k < takes[li]; ++k) keep[indices[k]] = true;
      }
    }
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (keep[i]) result.examples.push_back(dataset[i]);
    }
    result.report.kept_count = result.examples.size();
    result.report.downsampled = true;
    const Fractions achieved = measure(result.examples);
    result.report.achieved_framing = achieved.framing;
    result.report.achieved_label = achieved.label;
    return result;
  }

  // No subset satisfies the targets; report the input as-is.
  result.examples = dataset;
  result.report.kept_count = dataset.size();
  result.report.feasible = false;
  result.report.achieved_framing = current.framing;
  result.report.achieved_label = current.label;
  return result;
}

QualityResult quality_check(const std::vector<SyntheticExample>& dataset) {
  QualityResult result;
  result.report.input_count = dataset.size();
  std::unordered_set<std::string> seen_prompts;
  for (const auto& ex : dataset) {
    if (text::normalize(ex.target_response).empty()) {
      result.report.empty_response++;
      continue;
    }
    const std::size_t tokens = text::tokenize(ex.prompt_text).size();
    if (tokens < kMinPromptTokens || tokens > kMaxPromptTokens) {
      result.report.length_out_of_bounds++;
      continue;
    }
    const bool should_correct = ex.framing != Framing::kNeutral;
    if (should_correct != (ex.label == Label::kTruthfulCorrection)) {
      result.report.label_mismatch++;
      continue;
    }
    if (!seen_prompts.insert(text::normalize(ex.prompt_text)).second) {
      result.report.duplicates++;
      continue;
    }
    result.examples.push_back(ex);
  }
  result.report.kept_count = result.examples.size();
  return result;
}

void save_examples(const std::string& path, const std::vector<SyntheticExample>& examples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write examples file: " + path);
  for (const auto& ex : examples) {
    json j;
    j["example_id"] = ex.example_id;
    j["prompt_text"] = ex.prompt_text;
    j["target_response"] = ex.target_response;
    j["label"] = label_name(ex.label);
    j["framing"] = corpus::framing_name(ex.framing);
    j["provenance"] = ex.provenance;
    j["source"] = source_name(ex.source);
    out << j.dump() << "\n";
  }
}

std::vector<SyntheticExample> load_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open examples file: " + path);
  std::vector<SyntheticExample> examples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": malformed example record");
    }
    SyntheticExample ex;
    ex.example_id = j.at("example_id").get<std::string>();
    ex.prompt_text = j.at("prompt_text").get<std::string>();
    ex.target_response = j.at("target_response").get<std::string>();
    const std::string label = j.at("label").get<std::string>();
    if (label == "truthful_correction") {
      ex.label = Label::kTruthfulCorrection;
    } else if (label == "truthful_agreement") {
      ex.label = Label::kTruthfulAgreement;
    } else {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": unknown label");
    }
    auto f = corpus::framing_from_name(j.at("framing").get<std::string>());
    if (!f) throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": unknown framing");
    ex.framing = *f;
    ex.provenance = j.at("provenance").get<std::vector<std::string>>();
    const std::string source = j.at("source").get<std::string>();
    ex.source = source == "original" ? Source::kOriginal : Source::kSynthetic;
    examples.push_back(std::move(ex));
  }
  return examples;
}

}  // namespace sdikit::pipeline
