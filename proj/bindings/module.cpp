// Python bindings for the main operations: corpus rendering, the synthetic
// data stages, preprocessing, the toy transformer, and the evaluation
// metrics. Thin wrappers over the C++ library; see the README for the CLI.

#include "sdikit/adapter.hpp"
#include "sdikit/corpus.hpp"
#include "sdikit/eval.hpp"
#include "sdikit/harness.hpp"
#include "sdikit/model.hpp"
#include "sdikit/pipeline.hpp"
#include "sdikit/preprocess.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sdikit;

namespace {

// Trained toy model plus its vocabulary, ready for greedy question answering.
struct ToyModel {
  model::ModelParameters params;
  prep::Vocab vocab;
  std::vector<double> losses;
  std::size_t max_new_tokens = 40;

  std::string respond(const std::string& prompt) const {
    adapter::LocalAdapter local("toy", params, vocab, max_new_tokens);
    return local.respond(prompt).text;
  }
};

ToyModel train_toy(const std::vector<pipeline::SyntheticExample>& examples,
                   model::ModelConfig config, const model::TrainOptions& options,
                   std::uint64_t seed, std::size_t max_new_tokens) {
  ToyModel toy;
  toy.vocab = prep::Vocab::build(examples, static_cast<std::size_t>(config.vocab_size));
  config.vocab_size = static_cast<int>(toy.vocab.size());
  std::vector<prep::EncodedExample> encoded;
  for (const auto& ex : examples) {
    encoded.push_back(prep::encode_example(ex, toy.vocab,
                                           static_cast<std::size_t>(config.max_len)));
  }
  auto result = model::train(config, encoded, options, seed);
  toy.params = std::move(result.params);
  toy.losses = std::move(result.log.losses);
  toy.max_new_tokens = max_new_tokens;
  return toy;
}

}  // namespace

PYBIND11_MODULE(_sdikit, m) {
  m.doc() = "Anti-sycophancy synthetic-data intervention toolkit";

  // --- corpus ---------------------------------------------------------------
  py::enum_<corpus::Framing>(m, "Framing")
      .value("neutral", corpus::Framing::kNeutral)
      .value("biased", corpus::Framing::kBiased)
      .value("adversarial", corpus::Framing::kAdversarial);

  py::class_<corpus::Claim>(m, "Claim")
      .def(py::init<>())
      .def_readwrite("id", &corpus::Claim::id)
      .def_readwrite("statement", &corpus::Claim::statement)
      .def_readwrite("truth", &corpus::Claim::truth)
      .def_readwrite("topic", &corpus::Claim::topic)
      .def_readwrite("negation", &corpus::Claim::negation)
      .def("core", &corpus::Claim::core)
      .def("__repr__", [](const corpus::Claim& c) {
        return "Claim(id=" + c.id + ", truth=" + (c.truth ? "True" : "False") + ")";
      });

  py::class_<corpus::PromptCase>(m, "PromptCase")
      .def(py::init<>())
      .def_readwrite("case_id", &corpus::PromptCase::case_id)
      .def_readwrite("claim_id", &corpus::PromptCase::claim_id)
      .def_readwrite("framing", &corpus::PromptCase::framing)
      .def_readwrite("persona", &corpus::PromptCase::persona)
      .def_readwrite("prompt_text", &corpus::PromptCase::prompt_text)
      .def_readwrite("asserted_truth", &corpus::PromptCase::asserted_truth);

  m.def("load_claims", [](const std::string& path) {
    const auto result = corpus::load_claims(path);
    return py::make_tuple(result.claims, result.warnings);
  }, py::arg("path"), "Load claims from a JSONL file; returns (claims, warnings).");
  m.def("validate_corpus", [](const std::vector<corpus::Claim>& claims) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& v : corpus::validate_corpus(claims).violations) {
      out.emplace_back(v.claim_id, v.message);
    }
    return out;
  }, py::arg("claims"));
  m.def("render_prompt", &corpus::render_prompt, py::arg("claim"), py::arg("framing"),
        py::arg("persona") = std::nullopt, py::arg("seed") = 0);
  m.def("persona_pool", [] { return corpus::persona_pool(); });

  // --- pipeline -------------------------------------------------------------
  py::enum_<pipeline::Label>(m, "Label")
      .value("truthful_correction", pipeline::Label::kTruthfulCorrection)
      .value("truthful_agreement", pipeline::Label::kTruthfulAgreement);

  py::enum_<pipeline::Source>(m, "Source")
      .value("synthetic", pipeline::Source::kSynthetic)
      .value("original", pipeline::Source::kOriginal);

  py::class_<pipeline::Scenario>(m, "Scenario")
      .def_readonly("scenario_id", &pipeline::Scenario::scenario_id)
      .def_readonly("description", &pipeline::Scenario::description)
      .def_readonly("claim_id", &pipeline::Scenario::claim_id)
      .def_readonly("framing", &pipeline::Scenario::framing);

  py::class_<pipeline::SyntheticExample>(m, "SyntheticExample")
      .def(py::init<>())
      .def_readwrite("example_id", &pipeline::SyntheticExample::example_id)
      .def_readwrite("prompt_text", &pipeline::SyntheticExample::prompt_text)
      .def_readwrite("target_response", &pipeline::SyntheticExample::target_response)
      .def_readwrite("label", &pipeline::SyntheticExample::label)
      .def_readwrite("framing", &pipeline::SyntheticExample::framing)
      .def_readwrite("provenance", &pipeline::SyntheticExample::provenance)
      .def_readwrite("source", &pipeline::SyntheticExample::source)
      .def("claim_id", &pipeline::SyntheticExample::claim_id);

  py::class_<pipeline::BalanceTargets>(m, "BalanceTargets")
      .def(py::init(&pipeline::BalanceTargets::defaults))
      .def_readwrite("framing", &pipeline::BalanceTargets::framing)
      .def_readwrite("label", &pipeline::BalanceTargets::label)
      .def_readwrite("tolerance", &pipeline::BalanceTargets::tolerance);

  m.def("identify_scenarios", &pipeline::identify_scenarios, py::arg("claims"),
        py::arg("framings"));
  m.def("craft_response", &pipeline::craft_response, py::arg("claim"), py::arg("case"));
  m.def("paraphrase", &pipeline::paraphrase, py::arg("example"), py::arg("n"), py::arg("seed"));
  m.def("diversify_context", &pipeline::diversify_context, py::arg("example"), py::arg("seed"));
  m.def("inject_noise", &pipeline::inject_noise, py::arg("example"), py::arg("rate"),
        py::arg("seed"));
  m.def("merge_datasets", [](const std::vector<pipeline::SyntheticExample>& synthetic,
                             const std::vector<pipeline::SyntheticExample>& original) {
    const auto result = pipeline::merge_datasets(synthetic, original);
    return py::make_tuple(result.examples, result.warnings);
  }, py::arg("synthetic"), py::arg("original"));
  m.def("balance", [](const std::vector<pipeline::SyntheticExample>& dataset,
                      const pipeline::BalanceTargets& targets, std::uint64_t seed) {
    const auto result = pipeline::balance(dataset, targets, seed);
    py::dict report;
    report["feasible"] = result.report.feasible;
    report["downsampled"] = result.report.downsampled;
    report["kept"] = result.report.kept_count;
    report["achieved_framing"] = result.report.achieved_framing;
    report["achieved_label"] = result.report.achieved_label;
    return py::make_tuple(result.examples, report);
  }, py::arg("dataset"), py::arg("targets"), py::arg("seed"));
  m.def("quality_check", [](const std::vector<pipeline::SyntheticExample>& dataset) {
    const auto result = pipeline::quality_check(dataset);
    py::dict report;
    report["kept"] = result.report.kept_count;
    report["duplicates"] = result.report.duplicates;
    report["empty_response"] = result.report.empty_response;
    report["length_out_of_bounds"] = result.report.length_out_of_bounds;
    report["label_mismatch"] = result.report.label_mismatch;
    return py::make_tuple(result.examples, report);
  }, py::arg("dataset"));
  m.def("save_examples", &pipeline::save_examples, py::arg("path"), py::arg("examples"));
  m.def("load_examples", &pipeline::load_examples, py::arg("path"));

  // --- preprocessing --------------------------------------------------------
  py::class_<prep::Vocab>(m, "Vocab")
      .def_static("build", &prep::Vocab::build, py::arg("examples"), py::arg("max_size"))
      .def_static("load", &prep::Vocab::load, py::arg("path"))
      .def("save", &prep::Vocab::save, py::arg("path"))
      .def("id_of", &prep::Vocab::id_of, py::arg("token"))
      .def("token_of", &prep::Vocab::token_of, py::arg("id"))
      .def("encode_text", &prep::Vocab::encode_text, py::arg("text"))
      .def("decode", &prep::Vocab::decode, py::arg("ids"))
      .def("__len__", &prep::Vocab::size);

  py::class_<prep::EncodedExample>(m, "EncodedExample")
      .def_readonly("token_ids", &prep::EncodedExample::token_ids)
      .def_readonly("loss_mask", &prep::EncodedExample::loss_mask);

  m.def("encode_example", &prep::encode_example, py::arg("example"), py::arg("vocab"),
        py::arg("max_len"));

  // --- model ----------------------------------------------------------------
  py::class_<model::ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("n_layers", &model::ModelConfig::n_layers)
      .def_readwrite("d_model", &model::ModelConfig::d_model)
      .def_readwrite("n_heads", &model::ModelConfig::n_heads)
      .def_readwrite("d_ff", &model::ModelConfig::d_ff)
      .def_readwrite("vocab_size", &model::ModelConfig::vocab_size)
      .def_readwrite("max_len", &model::ModelConfig::max_len)
      .def_readwrite("dropout", &model::ModelConfig::dropout);

  py::class_<model::TrainOptions>(m, "TrainOptions")
      .def(py::init<>())
      .def_readwrite("steps", &model::TrainOptions::steps)
      .def_readwrite("batch_size", &model::TrainOptions::batch_size)
      .def_property(
          "learning_rate",
          [](const model::TrainOptions& o) { return o.adam.learning_rate; },
          [](model::TrainOptions& o, double v) { o.adam.learning_rate = v; });

  py::class_<ToyModel>(m, "ToyModel")
      .def("respond", &ToyModel::respond, py::arg("prompt"))
      .def_readonly("losses", &ToyModel::losses);

  m.def("train_toy", &train_toy, py::arg("examples"), py::arg("config"), py::arg("options"),
        py::arg("seed"), py::arg("max_new_tokens") = 40,
        "Build a vocabulary, encode the examples, and train the toy transformer.");

  // --- evaluation -----------------------------------------------------------
  py::enum_<eval::StanceKind>(m, "StanceKind")
      .value("agree_error", eval::StanceKind::kAgreeError)
      .value("corrected", eval::StanceKind::kCorrected)
      .value("hedge", eval::StanceKind::kHedge)
      .value("truthful_agree", eval::StanceKind::kTruthfulAgree)
      .value("deny_truth", eval::StanceKind::kDenyTruth)
      .value("unparseable", eval::StanceKind::kUnparseable);

  py::enum_<eval::Trigger>(m, "Trigger")
      .value("none", eval::Trigger::kNone)
      .value("unconditional_approval", eval::Trigger::kUnconditionalApproval)
      .value("avoid_correction", eval::Trigger::kAvoidCorrection)
      .value("authority_capitulation", eval::Trigger::kAuthorityCapitulation);

  py::class_<eval::Transcript>(m, "Transcript")
      .def(py::init([](std::string case_id, std::string model_id, std::string response_text) {
             return eval::Transcript{std::move(case_id), std::move(model_id),
                                     std::move(response_text)};
           }),
           py::arg("case_id"), py::arg("model_id"), py::arg("response_text"))
      .def_readwrite("case_id", &eval::Transcript::case_id)
      .def_readwrite("model_id", &eval::Transcript::model_id)
      .def_readwrite("response_text", &eval::Transcript::response_text);

  py::class_<eval::StanceLabel>(m, "StanceLabel")
      .def_readonly("kind", &eval::StanceLabel::kind)
      .def_readonly("trigger", &eval::StanceLabel::trigger)
      .def("__repr__", [](const eval::StanceLabel& s) {
        return std::string("StanceLabel(") + eval::stance_name(s.kind) + ", " +
               eval::trigger_name(s.trigger) + ")";
      });

  py::class_<eval::MetricsSlice>(m, "MetricsSlice")
      .def_readonly("total", &eval::MetricsSlice::total)
      .def_readonly("correct", &eval::MetricsSlice::correct)
      .def_readonly("accuracy", &eval::MetricsSlice::accuracy)
      .def_readonly("sr", &eval::MetricsSlice::sr)
      .def_readonly("cr", &eval::MetricsSlice::cr)
      .def_readonly("hs_mean", &eval::MetricsSlice::hs_mean);

  py::class_<eval::MetricsReport>(m, "MetricsReport")
      .def_readonly("model_id", &eval::MetricsReport::model_id)
      .def_readonly("overall", &eval::MetricsReport::overall)
      .def_readonly("per_framing", &eval::MetricsReport::per_framing)
      .def_readonly("kind_counts", &eval::MetricsReport::kind_counts)
      .def_readonly("trigger_counts", &eval::MetricsReport::trigger_counts)
      .def_readonly("case_hash", &eval::MetricsReport::case_hash)
      .def("to_json", [](const eval::MetricsReport& r) { return eval::report_to_json(r); });

  py::class_<eval::ComparisonTable>(m, "ComparisonTable")
      .def("render_text", &eval::ComparisonTable::render_text)
      .def("render_json", &eval::ComparisonTable::render_json);

  py::class_<eval::Lexicon>(m, "Lexicon")
      .def_static("defaults", [] { return eval::Lexicon::defaults(); })
      .def_static("from_file", &eval::Lexicon::from_file, py::arg("path"))
      .def("save", &eval::Lexicon::save, py::arg("path"));

  m.def("classify_stance", &eval::classify_stance, py::arg("transcript"), py::arg("case"),
        py::arg("claim"), py::arg("lexicon") = eval::Lexicon::defaults());
  m.def("score_helpfulness", &eval::score_helpfulness, py::arg("transcript"), py::arg("case"),
        py::arg("claim"), py::arg("lexicon") = eval::Lexicon::defaults());
  m.def("compute_metrics", &eval::compute_metrics, py::arg("transcripts"), py::arg("cases"),
        py::arg("claims"), py::arg("lexicon") = eval::Lexicon::defaults());
  m.def("compare", &eval::compare, py::arg("treated"), py::arg("baseline"),
        py::arg("hs_times_100") = false);

  // --- harness --------------------------------------------------------------
  py::class_<harness::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init(&harness::default_config))
      .def_readwrite("claims_path", &harness::ExperimentConfig::claims_path)
      .def_readwrite("output_dir", &harness::ExperimentConfig::output_dir)
      .def("set_all_seeds", &harness::ExperimentConfig::set_all_seeds, py::arg("seed"))
      .def("set", &harness::apply_override, py::arg("key"), py::arg("value"),
           "Apply a flat config override, e.g. set('train.steps', '200').");

  m.def("load_config", &harness::load_config, py::arg("path"));
  m.def("run_pipeline", [](const harness::ExperimentConfig& config) {
    const auto artifacts = harness::run_pipeline(config);
    py::dict counts;
    counts["claims"] = artifacts.counts.claims;
    counts["scenarios"] = artifacts.counts.scenarios;
    counts["crafted"] = artifacts.counts.crafted;
    counts["original"] = artifacts.counts.original;
    counts["augmented"] = artifacts.counts.augmented;
    counts["merged"] = artifacts.counts.merged;
    counts["balanced"] = artifacts.counts.balanced;
    counts["final_dataset"] = artifacts.counts.final_dataset;
    counts["vocab"] = artifacts.counts.vocab;
    return counts;
  }, py::arg("config"));
  m.def("run_experiment", [](const harness::ExperimentConfig& config) {
    const auto outcome = harness::run_experiment(config);
    return py::make_tuple(outcome.treated, outcome.baseline, outcome.table);
  }, py::arg("config"), "Train treated + baseline models and evaluate both; "
                        "pipeline artifacts must exist.");
  m.def("render_report", &harness::render_report, py::arg("output_dir"),
        py::arg("hs_times_100") = false);

  m.attr("__version__") = "0.1.0";
}
