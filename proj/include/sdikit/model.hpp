#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sdikit/preprocess.hpp"

namespace sdikit::model {

struct ModelConfig {
  int n_layers = 2;
  int d_model = 32;
  int n_heads = 4;
  int d_ff = 64;
  int vocab_size = 256;
  int max_len = 64;
  double dropout = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// Biases and normalization gains are stored as 1xN matrices so every tensor
// can be visited uniformly (init, Adam, checkpoints, gradient checks).
struct LayerParams {
  Eigen::MatrixXd wq, wk, wv, wo;      // d_model x d_model
  Eigen::MatrixXd w1, b1;              // d_model x d_ff, 1 x d_ff
  Eigen::MatrixXd w2, b2;              // d_ff x d_model, 1 x d_model
  Eigen::MatrixXd ln1_gain, ln1_bias;  // 1 x d_model
  Eigen::MatrixXd ln2_gain, ln2_bias;  // 1 x d_model
};

struct ModelParameters {
  ModelConfig config;
  Eigen::MatrixXd tok_embedding;       // vocab_size x d_model
  std::vector<LayerParams> layers;
  Eigen::MatrixXd lnf_gain, lnf_bias;  // 1 x d_model
  Eigen::MatrixXd w_out;               // d_model x vocab_size

  bool all_finite() const;
};

// Visits every tensor in a stable order with a stable name; the order defines
// the checkpoint layout and the optimizer pairing.
template <typename Params, typename Fn>
void for_each_tensor(Params& params, Fn&& fn) {
  fn("tok_embedding", params.tok_embedding);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    auto& layer = params.layers[i];
    const std::string p = "layer" + std::to_string(i) + ".";
    fn(p + "attn.wq", layer.wq);
    fn(p + "attn.wk", layer.wk);
    fn(p + "attn.wv", layer.wv);
    fn(p + "attn.wo", layer.wo);
    fn(p + "ffn.w1", layer.w1);
    fn(p + "ffn.b1", layer.b1);
    fn(p + "ffn.w2", layer.w2);
    fn(p + "ffn.b2", layer.b2);
    fn(p + "ln1.gain", layer.ln1_gain);
    fn(p + "ln1.bias", layer.ln1_bias);
    fn(p + "ln2.gain", layer.ln2_gain);
    fn(p + "ln2.bias", layer.ln2_bias);
  }
  fn("ln_f.gain", params.lnf_gain);
  fn("ln_f.bias", params.lnf_bias);
  fn("head.w", params.w_out);
}

ModelParameters init_params(const ModelConfig& config, std::uint64_t seed);

// Zero-valued gradient (or moment) container shaped like `params`.
ModelParameters zeros_like(const ModelParameters& params);

// Per-row next-token logits; row r of the result is seq_len x vocab_size.
std::vector<Eigen::MatrixXd> forward(const ModelParameters& params, const prep::Batch& batch);

// Attention weights for one batch row: [layer][head] is a seq x seq matrix.
// Exposed so mask/normalization invariants can be checked from tests.
std::vector<std::vector<Eigen::MatrixXd>> attention_weights(const ModelParameters& params,
                                                            const std::vector<int>& tokens,
                                                            const std::vector<bool>& pad_mask);

// Mean negative log-likelihood over loss-masked target positions.
double loss(const std::vector<Eigen::MatrixXd>& logits, const prep::Batch& batch);

struct LossAndGrad {
  double loss = 0.0;
  ModelParameters grads;
};

// Exact reverse-mode gradients of loss(forward(params, batch), batch).
LossAndGrad grad(const ModelParameters& params, const prep::Batch& batch);

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  ModelParameters m;  // first moments
  ModelParameters v;  // second moments
  std::uint64_t step = 0;
  AdamOptions options;

  static OptimizerState create(const ModelParameters& params, const AdamOptions& options);
};

void adam_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state);

struct TrainOptions {
  std::size_t steps = 200;
  std::size_t batch_size = 16;
  AdamOptions adam;
};

struct TrainLog {
  std::vector<double> losses;
  std::uint64_t seed = 0;
  ModelConfig config;
};

struct TrainingDiverged : std::runtime_error {
  explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
};

struct TrainResult {
  ModelParameters params;
  TrainLog log;
};

TrainResult train(const ModelConfig& config, const std::vector<prep::EncodedExample>& dataset,
                  const TrainOptions& options, std::uint64_t seed);

// Train from explicit initial parameters; `seed` drives batching (and dropout
// when enabled) only.
TrainResult train_from(ModelParameters init, const std::vector<prep::EncodedExample>& dataset,
                       const TrainOptions& options, std::uint64_t seed);

enum class DecodeMode { kGreedy, kSampled };

struct SampleOptions {
  DecodeMode mode = DecodeMode::kGreedy;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

// Autoregressive decoding; returns prompt + generated tokens, stopping after
// eos or max_new new tokens. Greedy ties resolve to the lowest token id.
std::vector<int> generate(const ModelParameters& params, const std::vector<int>& prompt_tokens,
                          std::size_t max_new, const SampleOptions& options = {});

// Versioned text checkpoint (hexfloat payload; exact round-trip).
void save_checkpoint(const std::string& path, const ModelParameters& params, std::uint64_t seed);

struct Checkpoint {
  ModelParameters params;
  std::uint64_t seed = 0;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace sdikit::model
