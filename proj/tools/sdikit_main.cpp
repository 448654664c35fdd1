#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdikit/harness.hpp"

namespace {

using sdikit::harness::ExperimentConfig;

struct CliOptions {
  std::string config_path;
  std::string claims_path;
  std::string output_dir;
  std::vector<std::string> overrides;
  long long seed = -1;
  bool paper_literal = false;
  bool report_json = false;
};

ExperimentConfig resolve_config(const CliOptions& opts) {
  ExperimentConfig config = opts.config_path.empty()
                                ? sdikit::harness::default_config()
                                : sdikit::harness::load_config(opts.config_path);
  if (!opts.claims_path.empty()) config.claims_path = opts.claims_path;
  if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
  if (opts.seed >= 0) config.set_all_seeds(static_cast<std::uint64_t>(opts.seed));
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw sdikit::harness::ConfigError("--set expects key=value, got \"" + kv + "\"");
    }
    sdikit::harness::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.paper_literal) config.eval.hs_times_100 = true;
  return config;
}

void print_pipeline_summary(const sdikit::harness::PipelineArtifacts& artifacts) {
  const auto& c = artifacts.counts;
  std::printf("pipeline: %zu claims -> %zu scenarios -> %zu crafted (+%zu original)\n", c.claims,
              c.scenarios, c.crafted, c.original);
  std::printf("          %zu augmented -> %zu merged -> %zu balanced -> %zu final, vocab %zu\n",
              c.augmented, c.merged, c.balanced, c.final_dataset, c.vocab);
  for (const auto& w : artifacts.warnings) std::printf("warning: %s\n", w.c_str());
}

int run(const std::string& command, const CliOptions& opts) {
  const ExperimentConfig config = resolve_config(opts);
  if (command == "generate") {
    print_pipeline_summary(sdikit::harness::run_pipeline(config));
  } else if (command == "train") {
    sdikit::harness::train_models(config);
    std::printf("trained: checkpoints written to %s\n", config.output_dir.c_str());
  } else if (command == "evaluate") {
    if (config.adapter == sdikit::harness::AdapterKind::kExternal) {
      const auto outcome = sdikit::harness::evaluate_external(config);
      std::printf("external evaluation: %zu/%zu cases answered\n", outcome.answered,
                  outcome.attempted);
      for (const auto& e : outcome.errors) std::printf("error: %s\n", e.c_str());
    } else {
      const auto outcome = sdikit::harness::evaluate_models(config);
      std::fputs(outcome.table.render_text().c_str(), stdout);
    }
  } else if (command == "report") {
    if (opts.report_json) {
      std::fputs(sdikit::harness::render_report_json(config.output_dir,
                                                     config.eval.hs_times_100)
                     .c_str(),
                 stdout);
    } else {
      std::fputs(
          sdikit::harness::render_report(config.output_dir, config.eval.hs_times_100).c_str(),
          stdout);
    }
  } else if (command == "run-all") {
    if (config.adapter == sdikit::harness::AdapterKind::kExternal) {
      throw sdikit::harness::ConfigError(
          "run-all requires the local adapter; use generate + evaluate for external endpoints");
    }
    print_pipeline_summary(sdikit::harness::run_pipeline(config));
    const auto outcome = sdikit::harness::run_experiment(config);
    std::fputs(outcome.table.render_text().c_str(), stdout);
    std::fputs(
        sdikit::harness::render_report(config.output_dir, config.eval.hs_times_100).c_str(),
        stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anti-sycophancy synthetic-data intervention toolkit"};
  app.require_subcommand(1);

  CliOptions opts;
  const std::vector<std::string> commands = {"generate", "train", "evaluate", "report", "run-all"};
  const std::vector<std::string> descriptions = {
      "Run the data pipeline and write corpus artifacts",
      "Train the treated and baseline models from pipeline artifacts",
      "Evaluate both models (or an external endpoint) on the held-out cases",
      "Render the comparison report from a finished output directory",
      "generate + train + evaluate + report in one go",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", opts.config_path, "Flat key=value config file");
    sub->add_option("--claims", opts.claims_path, "Claims JSONL path (overrides config)");
    sub->add_option("--out", opts.output_dir, "Output directory (overrides config)");
    sub->add_option("--seed", opts.seed, "Set all seeds at once");
    sub->add_option("--set", opts.overrides, "Override any config key (key=value, repeatable)");
    sub->add_flag("--paper-literal", opts.paper_literal,
                  "Additionally report the helpfulness mean multiplied by 100");
    if (commands[i] == "report") {
      sub->add_flag("--json", opts.report_json, "Emit the comparison as JSON instead of text");
    }
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) command = commands[i];
  }

  try {
    return run(command, opts);
  } catch (const sdikit::harness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const sdikit::harness::PipelineError& e) {
    std::fprintf(stderr, "pipeline error: %s\n", e.what());
    return 2;
  } catch (const sdikit::harness::TrainingError& e) {
    std::fprintf(stderr, "training error: %s\n", e.what());
    return 3;
  } catch (const sdikit::harness::EvalError& e) {
    std::fprintf(stderr, "evaluation error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
