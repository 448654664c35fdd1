#include "sdikit/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "sdikit/preprocess.hpp"
#include "sdikit/rng.hpp"
#include "sdikit/text.hpp"

namespace sdikit::harness {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::set_all_seeds(std::uint64_t seed) {
  seeds.pipeline = seed;
  seeds.init = seed;
  seeds.train = seed;
  seeds.eval = seed;
}

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.model.n_layers = 2;
  config.model.d_model = 32;
  config.model.n_heads = 4;
  config.model.d_ff = 64;
  config.model.vocab_size = 512;
  config.model.max_len = 96;
  config.model.dropout = 0.0;
  config.train.steps = 600;
  config.train.batch_size = 16;
  config.train.adam.learning_rate = 3e-3;
  return config;
}

namespace {

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key " + key + ": expected a boolean, got \"" + value + "\"");
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected a number, got \"" + value + "\"");
  }
}

long long parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": expected an integer, got \"" + value + "\"");
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value) {
  using pipeline::Label;
  if (key == "claims_path") config.claims_path = value;
  else if (key == "output_dir") config.output_dir = value;
  else if (key == "adapter") {
    if (value == "local") config.adapter = AdapterKind::kLocal;
    else if (value == "external") config.adapter = AdapterKind::kExternal;
    else throw ConfigError("config key adapter: expected local|external, got \"" + value + "\"");
  }
  else if (key == "seed") config.set_all_seeds(static_cast<std::uint64_t>(parse_int(value, key)));
  else if (key == "seed_pipeline") config.seeds.pipeline = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "seed_init") config.seeds.init = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "seed_train") config.seeds.train = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "seed_eval") config.seeds.eval = static_cast<std::uint64_t>(parse_int(value, key));
  else if (key == "pipeline.paraphrase_n") config.pipeline.paraphrase_n = static_cast<std::size_t>(parse_int(value, key));
  else if (key == "pipeline.diversify") config.pipeline.diversify = parse_bool(value, key);
  else if (key == "pipeline.noise_rate") config.pipeline.noise_rate = parse_double(value, key);
  else if (key == "pipeline.synthetic_ratio") config.pipeline.synthetic_ratio = parse_double(value, key);
  else if (key == "pipeline.balance_tolerance") config.pipeline.targets.tolerance = parse_double(value, key);
  else if (key == "pipeline.target_neutral") config.pipeline.targets.framing[corpus::Framing::kNeutral] = parse_double(value, key);
  else if (key == "pipeline.target_biased") config.pipeline.targets.framing[corpus::Framing::kBiased] = parse_double(value, key);
  else if (key == "pipeline.target_adversarial") config.pipeline.targets.framing[corpus::Framing::kAdversarial] = parse_double(value, key);
  else if (key == "pipeline.target_correction") config.pipeline.targets.label[Label::kTruthfulCorrection] = parse_double(value, key);
  else if (key == "pipeline.target_agreement") config.pipeline.targets.label[Label::kTruthfulAgreement] = parse_double(value, key);
  else if (key == "model.n_layers") config.model.n_layers = static_cast<int>(parse_int(value, key));
  else if (key == "model.d_model") config.model.d_model = static_cast<int>(parse_int(value, key));
  else if (key == "model.n_heads") config.model.n_heads = static_cast<int>(parse_int(value, key));
  else if (key == "model.d_ff") config.model.d_ff = static_cast<int>(parse_int(value, key));
  else if (key == "model.vocab_size") config.model.vocab_size = static_cast<int>(parse_int(value, key));
  else if (key == "model.max_len") config.model.max_len = static_cast<int>(parse_int(value, key));
  else if (key == "model.dropout") config.model.dropout = parse_double(value, key);
  else if (key == "train.steps") config.train.steps = static_cast<std::size_t>(parse_int(value, key));
  else if (key == "train.batch_size") config.train.batch_size = static_cast<std::size_t>(parse_int(value, key));
  else if (key == "train.learning_rate") config.train.adam.learning_rate = parse_double(value, key);
  else if (key == "train.beta1") config.train.adam.beta1 = parse_double(value, key);
  else if (key == "train.beta2") config.train.adam.beta2 = parse_double(value, key);
  else if (key == "train.epsilon") config.train.adam.epsilon = parse_double(value, key);
  else if (key == "eval.fraction") config.eval.eval_fraction = parse_double(value, key);
  else if (key == "eval.max_new_tokens") config.eval.max_new_tokens = static_cast<std::size_t>(parse_int(value, key));
  else if (key == "eval.hs_times_100") config.eval.hs_times_100 = parse_bool(value, key);
  else if (key == "eval.lexicon_path") config.eval.lexicon_path = value;
  else if (key == "external.url") config.endpoint.base_url = value;
  else if (key == "external.path") config.endpoint.path = value;
  else if (key == "external.model") config.endpoint.model = value;
  else if (key == "external.auth_env") config.endpoint.auth_env = value;
  else if (key == "external.timeout_ms") config.endpoint.timeout_ms = static_cast<int>(parse_int(value, key));
  else if (key == "external.max_attempts") config.endpoint.max_attempts = static_cast<int>(parse_int(value, key));
  else if (key == "external.backoff_base_ms") config.endpoint.backoff_base_ms = static_cast<int>(parse_int(value, key));
  else if (key == "external.backoff_cap_ms") config.endpoint.backoff_cap_ms = static_cast<int>(parse_int(value, key));
  else throw ConfigError("unknown config key \"" + key + "\"");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig config = default_config();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ": line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_override(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

namespace {

std::string path_in(const ExperimentConfig& config, const std::string& name) {
  return (fs::path(config.output_dir) / name).string();
}

void require_artifacts(const ExperimentConfig& config, const std::vector<std::string>& names,
                       const std::string& hint) {
  std::vector<std::string> missing;
  for (const auto& name : names) {
    if (!fs::exists(path_in(config, name))) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "missing artifacts in " + config.output_dir + ":";
    for (const auto& m : missing) msg += " " + m;
    msg += " (" + hint + ")";
    throw PipelineError(msg);
  }
}

// Deterministic claim-id split; the eval share is held out of training.
std::pair<std::vector<std::string>, std::set<std::string>> split_claims(
    const std::vector<corpus::Claim>& claims, double eval_fraction, std::uint64_t eval_seed) {
  std::vector<std::string> ids;
  ids.reserve(claims.size());
  for (const auto& c : claims) ids.push_back(c.id);
  std::vector<std::string> shuffled = ids;
  Rng rng = Rng::derive(eval_seed, "claim-split");
  rng.shuffle(shuffled);
  const std::size_t eval_count =
      static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(ids.size())));
  std::set<std::string> eval_ids(shuffled.begin(),
                                 shuffled.begin() + static_cast<std::ptrdiff_t>(
                                                        std::min(eval_count, shuffled.size())));
  return {ids, eval_ids};
}

eval::Lexicon lexicon_for(const ExperimentConfig& config) {
  if (config.eval.lexicon_path.empty()) return eval::Lexicon::defaults();
  return eval::Lexicon::from_file(config.eval.lexicon_path);
}

std::vector<corpus::PromptCase> render_eval_cases(const std::vector<corpus::Claim>& claims,
                                                  const std::set<std::string>& eval_ids,
                                                  std::uint64_t eval_seed) {
  std::vector<corpus::PromptCase> cases;
  const auto& personas = corpus::persona_pool();
  for (const auto& claim : claims) {
    if (!eval_ids.count(claim.id)) continue;
    for (corpus::Framing f : corpus::kAllFramings) {
      std::optional<std::string> persona;
      if (f == corpus::Framing::kBiased) {
        Rng rng = Rng::derive(eval_seed, "eval-persona:" + claim.id);
        persona = personas[rng.uniform_index(personas.size())];
      }
      cases.push_back(corpus::render_prompt(claim, f, persona, eval_seed));
    }
  }
  return cases;
}

}  // namespace

PipelineArtifacts run_pipeline(const ExperimentConfig& config) {
  PipelineArtifacts artifacts;
  const std::uint64_t seed = config.seeds.pipeline;

  // Stage: load and validate the claim corpus.
  corpus::LoadResult loaded;
  try {
    loaded = corpus::load_claims(config.claims_path);
  } catch (const std::exception& e) {
    throw PipelineError(std::string("stage load_claims: ") + e.what());
  }
  artifacts.warnings = loaded.warnings;
  const auto& claims = loaded.claims;
  const auto validation = corpus::validate_corpus(claims);
  if (!validation.ok()) {
    std::string msg = "stage validate_corpus: corpus invariant violations:";
    for (const auto& v : validation.violations) msg += " [" + v.claim_id + "] " + v.message + ";";
    throw PipelineError(msg);
  }
  artifacts.counts.claims = claims.size();

  try {
    fs::create_directories(config.output_dir);
    corpus::save_claims(path_in(config, "claims.jsonl"), claims);

    // Stage: synthetic data generation (scenarios, prompting, response crafting).
    const std::vector<corpus::Framing> framings(std::begin(corpus::kAllFramings),
                                                std::end(corpus::kAllFramings));
    const auto scenarios = pipeline::identify_scenarios(claims, framings);
    artifacts.counts.scenarios = scenarios.size();

    std::unordered_map<std::string, const corpus::Claim*> claim_by_id;
    for (const auto& c : claims) claim_by_id.emplace(c.id, &c);
    const auto& personas = corpus::persona_pool();

    std::vector<corpus::PromptCase> cases;
    std::vector<pipeline::SyntheticExample> crafted;
    for (const auto& scenario : scenarios) {
      const corpus::Claim& claim = *claim_by_id.at(scenario.claim_id);
      std::optional<std::string> persona;
      if (scenario.framing == corpus::Framing::kBiased) {
        Rng rng = Rng::derive(seed, "persona:" + scenario.scenario_id);
        persona = personas[rng.uniform_index(personas.size())];
      }
      const auto pcase = corpus::render_prompt(claim, scenario.framing, persona, seed);
      cases.push_back(pcase);
      crafted.push_back(pipeline::craft_response(claim, pcase));
    }
    corpus::save_cases(path_in(config, "prompt_cases.jsonl"), cases);
    pipeline::save_examples(path_in(config, "synthetic_raw.jsonl"), crafted);
    artifacts.counts.crafted = crafted.size();

    // The non-intervened side: one plain factual QA example per claim.
    std::vector<pipeline::SyntheticExample> originals;
    for (const auto& claim : claims) {
      const auto pcase = corpus::render_prompt(claim, corpus::Framing::kNeutral, std::nullopt,
                                               seed ^ 0x5bd1e995u);
      pipeline::SyntheticExample ex = pipeline::craft_response(claim, pcase);
      ex.example_id = claim.id + ":original";
      ex.source = pipeline::Source::kOriginal;
      ex.provenance = {"original"};
      originals.push_back(std::move(ex));
    }
    pipeline::save_examples(path_in(config, "originals.jsonl"), originals);
    artifacts.counts.original = originals.size();

    // Stage: data augmentation (paraphrase -> contextual diversity -> noise).
    std::vector<pipeline::SyntheticExample> augmented;
    for (const auto& ex : crafted) {
      std::vector<pipeline::SyntheticExample> variants = {ex};
      if (config.pipeline.paraphrase_n > 0) {
        auto more = pipeline::paraphrase(ex, config.pipeline.paraphrase_n, seed);
        variants.insert(variants.end(), more.begin(), more.end());
      }
      if (config.pipeline.diversify) {
        const std::size_t base_count = variants.size();
        for (std::size_t i = 0; i < base_count; ++i) {
          variants.push_back(pipeline::diversify_context(variants[i], seed));
        }
      }
      for (auto& v : variants) {
        augmented.push_back(pipeline::inject_noise(v, config.pipeline.noise_rate, seed));
      }
    }

    // Optional synthetic:original mixing cap.
    if (config.pipeline.synthetic_ratio > 0.0) {
      const auto cap = static_cast<std::size_t>(
          std::llround(config.pipeline.synthetic_ratio * static_cast<double>(originals.size())));
      if (augmented.size() > cap) {
        std::vector<std::size_t> order(augmented.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng rng = Rng::derive(seed, "mix-ratio");
        rng.shuffle(order);
        std::vector<bool> keep(augmented.size(), false);
        for (std::size_t i = 0; i < cap; ++i) keep[order[i]] = true;
        std::vector<pipeline::SyntheticExample> capped;
        capped.reserve(cap);
        for (std::size_t i = 0; i < augmented.size(); ++i) {
          if (keep[i]) capped.push_back(std::move(augmented[i]));
        }
        augmented = std::move(capped);
      }
    }
    pipeline::save_examples(path_in(config, "synthetic_augmented.jsonl"), augmented);
    artifacts.counts.augmented = augmented.size();

    // Stage: data integration (merge, balance, quality assurance).
    auto merged = pipeline::merge_datasets(augmented, originals);
    for (const auto& w : merged.warnings) artifacts.warnings.push_back(w);
    artifacts.counts.merged = merged.examples.size();

    auto balanced = pipeline::balance(merged.examples, config.pipeline.targets, seed);
    artifacts.balance = balanced.report;
    artifacts.counts.balanced = balanced.examples.size();
    if (!balanced.report.feasible) {
      artifacts.warnings.push_back("balance: targets infeasible; dataset left unchanged");
    }

    auto cleaned = pipeline::quality_check(balanced.examples);
    artifacts.quality = cleaned.report;
    artifacts.counts.final_dataset = cleaned.examples.size();
    pipeline::save_examples(path_in(config, "dataset.jsonl"), cleaned.examples);

    // Stage: preprocessing interface (vocabulary over the merged corpus so
    // held-out prompts encode without gaps).
    const auto vocab = prep::Vocab::build(merged.examples,
                                          static_cast<std::size_t>(config.model.vocab_size));
    vocab.save(path_in(config, "vocab.tsv"));
    artifacts.counts.vocab = vocab.size();

    json manifest;
    manifest["format"] = "sdikit-manifest v1";
    manifest["seeds"] = {{"pipeline", config.seeds.pipeline},
                         {"init", config.seeds.init},
                         {"train", config.seeds.train},
                         {"eval", config.seeds.eval}};
    manifest["counts"] = {{"claims", artifacts.counts.claims},
                          {"scenarios", artifacts.counts.scenarios},
                          {"crafted", artifacts.counts.crafted},
                          {"original", artifacts.counts.original},
                          {"augmented", artifacts.counts.augmented},
                          {"merged", artifacts.counts.merged},
                          {"balanced", artifacts.counts.balanced},
                          {"final_dataset", artifacts.counts.final_dataset},
                          {"vocab", artifacts.counts.vocab}};
    manifest["balance"] = {{"feasible", artifacts.balance.feasible},
                           {"downsampled", artifacts.balance.downsampled},
                           {"kept", artifacts.balance.kept_count}};
    for (const auto& [f, v] : artifacts.balance.achieved_framing) {
      manifest["balance"]["achieved_framing"][corpus::framing_name(f)] = v;
    }
    for (const auto& [l, v] : artifacts.balance.achieved_label) {
      manifest["balance"]["achieved_label"][pipeline::label_name(l)] = v;
    }
    manifest["quality"] = {{"input", artifacts.quality.input_count},
                           {"kept", artifacts.quality.kept_count},
                           {"duplicates", artifacts.quality.duplicates},
                           {"empty_response", artifacts.quality.empty_response},
                           {"length_out_of_bounds", artifacts.quality.length_out_of_bounds},
                           {"label_mismatch", artifacts.quality.label_mismatch}};
    manifest["warnings"] = artifacts.warnings;
    std::ofstream mout(path_in(config, "manifest.json"));
    mout << manifest.dump(2) << "\n";
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(std::string("pipeline failed: ") + e.what());
  }
  return artifacts;
}

namespace {

std::vector<prep::EncodedExample> encode_for_training(
    const std::vector<pipeline::SyntheticExample>& examples, const prep::Vocab& vocab,
    std::size_t max_len) {
  std::vector<prep::EncodedExample> encoded;
  encoded.reserve(examples.size());
  for (const auto& ex : examples) {
    encoded.push_back(prep::encode_example(ex, vocab, max_len));
  }
  return encoded;
}

void save_train_log(const std::string& path, const model::TrainLog& log,
                    const std::string& model_id) {
  json j;
  j["model_id"] = model_id;
  j["seed"] = log.seed;
  j["config"] = {{"n_layers", log.config.n_layers}, {"d_model", log.config.d_model},
                 {"n_heads", log.config.n_heads},   {"d_ff", log.config.d_ff},
                 {"vocab_size", log.config.vocab_size}, {"max_len", log.config.max_len},
                 {"dropout", log.config.dropout}};
  j["steps"] = log.losses.size();
  j["losses"] = log.losses;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

void train_models(const ExperimentConfig& config) {
  require_artifacts(config, {"claims.jsonl", "dataset.jsonl", "originals.jsonl", "vocab.tsv"},
                    "run the generate step first");
  try {
    const auto claims = corpus::load_claims(path_in(config, "claims.jsonl")).claims;
    const auto dataset = pipeline::load_examples(path_in(config, "dataset.jsonl"));
    const auto originals = pipeline::load_examples(path_in(config, "originals.jsonl"));
    const auto vocab = prep::Vocab::load(path_in(config, "vocab.tsv"));

    model::ModelConfig mconfig = config.model;
    mconfig.vocab_size = std::max(mconfig.vocab_size, static_cast<int>(vocab.size()));

    const auto [all_ids, eval_ids] = split_claims(claims, config.eval.eval_fraction,
                                                  config.seeds.eval);
    std::vector<pipeline::SyntheticExample> treated_set, baseline_set;
    for (const auto& ex : dataset) {
      if (!eval_ids.count(ex.claim_id())) treated_set.push_back(ex);
    }
    for (const auto& ex : originals) {
      if (!eval_ids.count(ex.claim_id())) baseline_set.push_back(ex);
    }
    if (treated_set.empty() || baseline_set.empty()) {
      throw TrainingError("training sets are empty after the train/eval split");
    }

    const auto treated_encoded =
        encode_for_training(treated_set, vocab, static_cast<std::size_t>(mconfig.max_len));
    const auto baseline_encoded =
        encode_for_training(baseline_set, vocab, static_cast<std::size_t>(mconfig.max_len));

    // Shared initial weights: the training data is the only variable.
    const auto init = model::init_params(mconfig, config.seeds.init);
    const auto treated = model::train_from(init, treated_encoded, config.train,
                                           config.seeds.train);
    const auto baseline = model::train_from(init, baseline_encoded, config.train,
                                            config.seeds.train);

    model::save_checkpoint(path_in(config, "checkpoint_treated.txt"), treated.params,
                           config.seeds.train);
    model::save_checkpoint(path_in(config, "checkpoint_baseline.txt"), baseline.params,
                           config.seeds.train);
    save_train_log(path_in(config, "trainlog_treated.json"), treated.log, "toy-sdi");
    save_train_log(path_in(config, "trainlog_baseline.json"), baseline.log, "toy-original");
  } catch (const model::TrainingDiverged& e) {
    throw TrainingError(e.what());
  } catch (const TrainingError&) {
    throw;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrainingError(std::string("training failed: ") + e.what());
  }
}

ExperimentOutcome evaluate_models(const ExperimentConfig& config) {
  require_artifacts(config,
                    {"claims.jsonl", "vocab.tsv", "checkpoint_treated.txt",
                     "checkpoint_baseline.txt"},
                    "run the generate and train steps first");
  try {
    const auto claims = corpus::load_claims(path_in(config, "claims.jsonl")).claims;
    const auto vocab = prep::Vocab::load(path_in(config, "vocab.tsv"));
    const auto lexicon = lexicon_for(config);

    const auto [all_ids, eval_ids] = split_claims(claims, config.eval.eval_fraction,
                                                  config.seeds.eval);
    const auto cases = render_eval_cases(claims, eval_ids, config.seeds.eval);
    if (cases.empty()) throw EvalError("no evaluation cases: eval fraction too small");
    corpus::save_cases(path_in(config, "eval_cases.jsonl"), cases);

    auto run_model = [&](const std::string& checkpoint, const std::string& model_id) {
      const auto ckpt = model::load_checkpoint(path_in(config, checkpoint));
      adapter::LocalAdapter local(model_id, ckpt.params, vocab, config.eval.max_new_tokens);
      std::vector<eval::Transcript> transcripts;
      for (const auto& pcase : cases) {
        const auto response = local.respond(pcase.prompt_text);
        transcripts.push_back({pcase.case_id, model_id, response.text});
      }
      return transcripts;
    };

    const auto treated_transcripts = run_model("checkpoint_treated.txt", "toy-sdi");
    const auto baseline_transcripts = run_model("checkpoint_baseline.txt", "toy-original");
    eval::save_transcripts(path_in(config, "transcripts_treated.jsonl"), treated_transcripts);
    eval::save_transcripts(path_in(config, "transcripts_baseline.jsonl"), baseline_transcripts);

    ExperimentOutcome outcome;
    outcome.treated = eval::compute_metrics(treated_transcripts, cases, claims, lexicon);
    outcome.baseline = eval::compute_metrics(baseline_transcripts, cases, claims, lexicon);
    if (outcome.treated.case_hash != outcome.baseline.case_hash) {
      throw EvalError("protocol violation: the two models did not see the same case sequence");
    }
    {
      std::ofstream out(path_in(config, "report_treated.json"));
      out << eval::report_to_json(outcome.treated);
    }
    {
      std::ofstream out(path_in(config, "report_baseline.json"));
      out << eval::report_to_json(outcome.baseline);
    }
    outcome.table = eval::compare(outcome.treated, outcome.baseline, config.eval.hs_times_100);
    {
      std::ofstream out(path_in(config, "comparison.txt"));
      out << outcome.table.render_text();
    }
    {
      std::ofstream out(path_in(config, "comparison.json"));
      out << outcome.table.render_json();
    }
    return outcome;
  } catch (const EvalError&) {
    throw;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvalError(std::string("evaluation failed: ") + e.what());
  }
}

ExternalOutcome evaluate_external(const ExperimentConfig& config) {
  require_artifacts(config, {"claims.jsonl"}, "run the generate step first");
  try {
    const auto claims = corpus::load_claims(path_in(config, "claims.jsonl")).claims;
    const auto lexicon = lexicon_for(config);
    const auto [all_ids, eval_ids] = split_claims(claims, config.eval.eval_fraction,
                                                  config.seeds.eval);
    const auto cases = render_eval_cases(claims, eval_ids, config.seeds.eval);
    corpus::save_cases(path_in(config, "eval_cases.jsonl"), cases);

    adapter::ExternalAdapter external(config.endpoint);
    const std::string model_id = external.id();

    ExternalOutcome outcome;
    std::vector<eval::Transcript> transcripts;
    json errors = json::array();
    for (const auto& pcase : cases) {
      outcome.attempted++;
      // A failing case must not stop the remaining ones.
      const auto response = external.respond(pcase.prompt_text);
      if (response.ok) {
        outcome.answered++;
        transcripts.push_back({pcase.case_id, model_id, response.text});
      } else {
        const std::string msg = pcase.case_id + ": " +
                                adapter::error_kind_name(response.error) + ": " + response.detail;
        outcome.errors.push_back(msg);
        errors.push_back({{"case_id", pcase.case_id},
                          {"error", adapter::error_kind_name(response.error)},
                          {"detail", response.detail}});
      }
    }
    eval::save_transcripts(path_in(config, "transcripts_external.jsonl"), transcripts);
    {
      std::ofstream out(path_in(config, "errors_external.jsonl"));
      for (const auto& e : errors) out << e.dump() << "\n";
    }
    json report;
    report["model_id"] = model_id;
    report["coverage"] = {{"attempted", outcome.attempted}, {"answered", outcome.answered}};
    if (!transcripts.empty()) {
      auto metrics = eval::compute_metrics(transcripts, cases, claims, lexicon);
      metrics.coverage_total = outcome.attempted;
      report["metrics"] = json::parse(eval::report_to_json(metrics));
    }
    std::ofstream out(path_in(config, "report_external.json"));
    out << report.dump(2) << "\n";
    return outcome;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvalError(std::string("external evaluation failed: ") + e.what());
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  train_models(config);
  return evaluate_models(config);
}

namespace {

std::pair<eval::MetricsReport, eval::MetricsReport> load_report_pair(
    const std::string& output_dir) {
  std::vector<std::string> missing;
  const auto treated_path = (fs::path(output_dir) / "report_treated.json").string();
  const auto baseline_path = (fs::path(output_dir) / "report_baseline.json").string();
  if (!fs::exists(treated_path)) missing.push_back("report_treated.json");
  if (!fs::exists(baseline_path)) missing.push_back("report_baseline.json");
  if (!missing.empty()) {
    std::string msg = "missing artifacts in " + output_dir + ":";
    for (const auto& m : missing) msg += " " + m;
    throw EvalError(msg);
  }
  return {eval::report_from_json_file(treated_path), eval::report_from_json_file(baseline_path)};
}

}  // namespace

std::string render_report_json(const std::string& output_dir, bool hs_times_100) {
  const auto [treated, baseline] = load_report_pair(output_dir);
  return eval::compare(treated, baseline, hs_times_100).render_json();
}

std::string render_report(const std::string& output_dir, bool hs_times_100) {
  const auto [treated, baseline] = load_report_pair(output_dir);
  const auto table = eval::compare(treated, baseline, hs_times_100);

  std::ostringstream out;
  out << table.render_text();
  for (const auto* report : {&treated, &baseline}) {
    out << "\nPer-framing breakdown - " << report->model_id << "\n";
    for (const auto& [framing, slice] : report->per_framing) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "  %-12s total=%zu accuracy=%.2f%% sr=%.2f%% cr=%.2f%% hs=%.2f\n",
                    framing.c_str(), slice.total, slice.accuracy * 100.0, slice.sr * 100.0,
                    slice.cr * 100.0, slice.hs_mean);
      out << buf;
    }
  }
  for (const auto* report : {&treated, &baseline}) {
    out << "\nSycophancy triggers - " << report->model_id << "\n";
    for (const auto& [trigger, count] : report->trigger_counts) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "  %-24s %zu\n", trigger.c_str(), count);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace sdikit::harness
