#include "sdikit/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sdikit/rng.hpp"

namespace sdikit::model {

namespace {

constexpr double kLnEps = 1e-5;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_deriv(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599344;
  return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

Eigen::MatrixXd positional_encoding(int seq_len, int d_model) {
  Eigen::MatrixXd pe(seq_len, d_model);
  for (int pos = 0; pos < seq_len; ++pos) {
    for (int i = 0; i < d_model; ++i) {
      const double angle =
          static_cast<double>(pos) /
          std::pow(10000.0, static_cast<double>(2 * (i / 2)) / static_cast<double>(d_model));
      pe(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

struct LnCache {
  Eigen::MatrixXd xhat;     // T x d
  Eigen::VectorXd inv_std;  // T
};

// y = gain .* xhat + bias, row-wise over T.
Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gain,
                           const Eigen::MatrixXd& bias, LnCache& cache) {
  const int T = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  cache.xhat.resize(T, d);
  cache.inv_std.resize(T);
  Eigen::MatrixXd out(T, d);
  for (int t = 0; t < T; ++t) {
    const double mean = x.row(t).mean();
    const double var = (x.row(t).array() - mean).square().mean();
    const double inv_std = 1.0 / std::sqrt(var + kLnEps);
    cache.inv_std(t) = inv_std;
    cache.xhat.row(t) = (x.row(t).array() - mean) * inv_std;
    out.row(t) = cache.xhat.row(t).cwiseProduct(gain.row(0)) + bias.row(0);
  }
  return out;
}

// Standard three-term layer-norm backward; accumulates parameter grads.
Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy, const LnCache& cache,
                                    const Eigen::MatrixXd& gain, Eigen::MatrixXd& dgain,
                                    Eigen::MatrixXd& dbias) {
  const int T = static_cast<int>(dy.rows());
  const int d = static_cast<int>(dy.cols());
  Eigen::MatrixXd dx(T, d);
  for (int t = 0; t < T; ++t) {
    dbias.row(0) += dy.row(t);
    dgain.row(0) += dy.row(t).cwiseProduct(cache.xhat.row(t));
    const Eigen::RowVectorXd dxhat = dy.row(t).cwiseProduct(gain.row(0));
    const double mean_dxhat = dxhat.mean();
    const double mean_dxhat_xhat = dxhat.cwiseProduct(cache.xhat.row(t)).mean();
    dx.row(t) =
        cache.inv_std(t) *
        (dxhat.array() - mean_dxhat - cache.xhat.row(t).array() * mean_dxhat_xhat).matrix();
  }
  return dx;
}

struct LayerCache {
  Eigen::MatrixXd x_in;
  LnCache ln1;
  Eigen::MatrixXd ln1_out;
  Eigen::MatrixXd q, k, v;
  std::vector<Eigen::MatrixXd> att;  // per head, T x T
  Eigen::MatrixXd att_concat;
  Eigen::MatrixXd attn_drop_mask;  // empty when dropout off
  Eigen::MatrixXd x_mid;
  LnCache ln2;
  Eigen::MatrixXd ln2_out;
  Eigen::MatrixXd ffn_pre;
  Eigen::MatrixXd ffn_act;
  Eigen::MatrixXd ffn_drop_mask;
};

struct RowCache {
  std::vector<int> tokens;
  std::vector<bool> pad;
  std::vector<LayerCache> layers;
  LnCache lnf;
  Eigen::MatrixXd x_final;
  Eigen::MatrixXd logits;
};

Eigen::MatrixXd dropout_mask(int rows, int cols, double rate, Rng& rng) {
  Eigen::MatrixXd mask(rows, cols);
  const double keep = 1.0 - rate;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      mask(r, c) = rng.uniform() < rate ? 0.0 : 1.0 / keep;
    }
  }
  return mask;
}

// Full forward over one padded row, caching activations for the backward
// pass. `dropout_rng` non-null enables (inverted) dropout on the attention
// and feed-forward outputs.
RowCache forward_row(const ModelParameters& params, const std::vector<int>& tokens,
                     const std::vector<bool>& pad, Rng* dropout_rng) {
  const auto& config = params.config;
  const int T = static_cast<int>(tokens.size());
  const int d = config.d_model;
  const int heads = config.n_heads;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  RowCache cache;
  cache.tokens = tokens;
  cache.pad = pad;

  Eigen::MatrixXd x(T, d);
  const Eigen::MatrixXd pe = positional_encoding(T, d);
  for (int t = 0; t < T; ++t) {
    const int id = tokens[static_cast<std::size_t>(t)];
    if (id < 0 || id >= config.vocab_size) {
      throw std::invalid_argument("forward: token id out of range: " + std::to_string(id));
    }
    x.row(t) = params.tok_embedding.row(id) + pe.row(t);
  }

  cache.layers.resize(static_cast<std::size_t>(config.n_layers));
  for (int li = 0; li < config.n_layers; ++li) {
    const auto& layer = params.layers[static_cast<std::size_t>(li)];
    LayerCache& lc = cache.layers[static_cast<std::size_t>(li)];
    lc.x_in = x;
    lc.ln1_out = layer_norm(x, layer.ln1_gain, layer.ln1_bias, lc.ln1);
    lc.q = lc.ln1_out * layer.wq;
    lc.k = lc.ln1_out * layer.wk;
    lc.v = lc.ln1_out * layer.wv;

    lc.att.resize(static_cast<std::size_t>(heads));
    lc.att_concat.resize(T, d);
    for (int h = 0; h < heads; ++h) {
      const auto qh = lc.q.middleCols(h * dh, dh);
      const auto kh = lc.k.middleCols(h * dh, dh);
      const auto vh = lc.v.middleCols(h * dh, dh);
      Eigen::MatrixXd scores = qh * kh.transpose() * scale;
      // Causal and padding masks combine additively before the softmax.
      for (int i = 0; i < T; ++i) {
        for (int j = 0; j < T; ++j) {
          if (j > i || !pad[static_cast<std::size_t>(j)]) scores(i, j) = kNegInf;
        }
      }
      Eigen::MatrixXd& att = lc.att[static_cast<std::size_t>(h)];
      att.resize(T, T);
      for (int i = 0; i < T; ++i) {
        double row_max = kNegInf;
        for (int j = 0; j <= i; ++j) row_max = std::max(row_max, scores(i, j));
        double denom = 0.0;
        for (int j = 0; j < T; ++j) {
          att(i, j) = scores(i, j) == kNegInf ? 0.0 : std::exp(scores(i, j) - row_max);
          denom += att(i, j);
        }
        att.row(i) /= denom;
      }
      lc.att_concat.middleCols(h * dh, dh) = att * vh;
    }

    Eigen::MatrixXd proj = lc.att_concat * layer.wo;
    if (dropout_rng != nullptr && config.dropout > 0.0) {
      lc.attn_drop_mask = dropout_mask(T, d, config.dropout, *dropout_rng);
      proj = proj.cwiseProduct(lc.attn_drop_mask);
    }
    lc.x_mid = x + proj;

    lc.ln2_out = layer_norm(lc.x_mid, layer.ln2_gain, layer.ln2_bias, lc.ln2);
    lc.ffn_pre = (lc.ln2_out * layer.w1).rowwise() + layer.b1.row(0);
    lc.ffn_act = lc.ffn_pre.unaryExpr([](double v) { return gelu(v); });
    Eigen::MatrixXd ffn_out = (lc.ffn_act * layer.w2).rowwise() + layer.b2.row(0);
    if (dropout_rng != nullptr && config.dropout > 0.0) {
      lc.ffn_drop_mask = dropout_mask(T, d, config.dropout, *dropout_rng);
      ffn_out = ffn_out.cwiseProduct(lc.ffn_drop_mask);
    }
    x = lc.x_mid + ffn_out;
  }

  cache.x_final = layer_norm(x, params.lnf_gain, params.lnf_bias, cache.lnf);
  cache.logits = cache.x_final * params.w_out;
  return cache;
}

void check_batch(const ModelParameters& params, const prep::Batch& batch) {
  if (batch.rows() == 0) throw std::invalid_argument("forward: empty batch");
  if (batch.cols() > static_cast<std::size_t>(params.config.max_len)) {
    throw std::invalid_argument("forward: sequence length exceeds max_len");
  }
  if (batch.pad_mask.size() != batch.rows() || batch.loss_mask.size() != batch.rows()) {
    throw std::invalid_argument("forward: mask/token row mismatch");
  }
}

}  // namespace

void ModelConfig::validate() const {
  if (n_layers < 1 || d_model < 1 || n_heads < 1 || d_ff < 1 || vocab_size < 1 || max_len < 8) {
    throw std::invalid_argument("model config: counts must be >= 1 and max_len >= 8");
  }
  if (d_model % n_heads != 0) {
    throw std::invalid_argument("model config: d_model must be divisible by n_heads");
  }
  if (vocab_size <= static_cast<int>(prep::kReservedTokens)) {
    throw std::invalid_argument("model config: vocab_size must exceed the reserved tokens");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("model config: dropout must be in [0,1)");
  }
}

bool ModelParameters::all_finite() const {
  bool ok = true;
  for_each_tensor(*this, [&](const std::string&, const Eigen::MatrixXd& m) {
    if (!m.allFinite()) ok = false;
  });
  return ok;
}

namespace {

ModelParameters alloc_params(const ModelConfig& config) {
  ModelParameters params;
  params.config = config;
  params.tok_embedding = Eigen::MatrixXd::Zero(config.vocab_size, config.d_model);
  params.layers.resize(static_cast<std::size_t>(config.n_layers));
  for (auto& layer : params.layers) {
    layer.wq = Eigen::MatrixXd::Zero(config.d_model, config.d_model);
    layer.wk = Eigen::MatrixXd::Zero(config.d_model, config.d_model);
    layer.wv = Eigen::MatrixXd::Zero(config.d_model, config.d_model);
    layer.wo = Eigen::MatrixXd::Zero(config.d_model, config.d_model);
    layer.w1 = Eigen::MatrixXd::Zero(config.d_model, config.d_ff);
    layer.b1 = Eigen::MatrixXd::Zero(1, config.d_ff);
    layer.w2 = Eigen::MatrixXd::Zero(config.d_ff, config.d_model);
    layer.b2 = Eigen::MatrixXd::Zero(1, config.d_model);
    layer.ln1_gain = Eigen::MatrixXd::Zero(1, config.d_model);
    layer.ln1_bias = Eigen::MatrixXd::Zero(1, config.d_model);
    layer.ln2_gain = Eigen::MatrixXd::Zero(1, config.d_model);
    layer.ln2_bias = Eigen::MatrixXd::Zero(1, config.d_model);
  }
  params.lnf_gain = Eigen::MatrixXd::Zero(1, config.d_model);
  params.lnf_bias = Eigen::MatrixXd::Zero(1, config.d_model);
  params.w_out = Eigen::MatrixXd::Zero(config.d_model, config.vocab_size);
  return params;
}

}  // namespace

ModelParameters init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  ModelParameters params = alloc_params(config);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.d_model));
  for_each_tensor(params, [&](const std::string& name, Eigen::MatrixXd& m) {
    const bool is_gain = name.find("gain") != std::string::npos;
    const bool is_bias = name.find("bias") != std::string::npos || name.find(".b") != std::string::npos;
    if (is_gain) {
      m.setOnes();
    } else if (is_bias) {
      m.setZero();
    } else {
      Rng rng = Rng::derive(seed, "init:" + name);
      for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) m(r, c) = rng.normal() * scale;
      }
    }
  });
  return params;
}

ModelParameters zeros_like(const ModelParameters& params) { return alloc_params(params.config); }

std::vector<Eigen::MatrixXd> forward(const ModelParameters& params, const prep::Batch& batch) {
  check_batch(params, batch);
  std::vector<Eigen::MatrixXd> logits;
  logits.reserve(batch.rows());
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    logits.push_back(forward_row(params, batch.tokens[r], batch.pad_mask[r], nullptr).logits);
  }
  return logits;
}

std::vector<std::vector<Eigen::MatrixXd>> attention_weights(const ModelParameters& params,
                                                            const std::vector<int>& tokens,
                                                            const std::vector<bool>& pad_mask) {
  const RowCache cache = forward_row(params, tokens, pad_mask, nullptr);
  std::vector<std::vector<Eigen::MatrixXd>> out;
  out.reserve(cache.layers.size());
  for (const auto& layer : cache.layers) out.push_back(layer.att);
  return out;
}

namespace {

// Supervised positions: targets sit at masked positions t >= 1 and are
// predicted from the logits at t-1.
std::size_t count_targets(const prep::Batch& batch) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    for (std::size_t t = 1; t < batch.loss_mask[r].size(); ++t) {
      if (batch.loss_mask[r][t]) ++count;
    }
  }
  return count;
}

double log_sum_exp(const Eigen::RowVectorXd& row) {
  const double m = row.maxCoeff();
  return m + std::log((row.array() - m).exp().sum());
}

}  // namespace

double loss(const std::vector<Eigen::MatrixXd>& logits, const prep::Batch& batch) {
  if (logits.size() != batch.rows()) throw std::invalid_argument("loss: shape mismatch");
  const std::size_t targets = count_targets(batch);
  if (targets == 0) throw std::invalid_argument("loss: no supervised positions");
  double total = 0.0;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    for (std::size_t t = 1; t < batch.loss_mask[r].size(); ++t) {
      if (!batch.loss_mask[r][t]) continue;
      const int target = batch.tokens[r][t];
      const Eigen::RowVectorXd row = logits[r].row(static_cast<Eigen::Index>(t - 1));
      total += log_sum_exp(row) - row(target);
    }
  }
  return total / static_cast<double>(targets);
}

namespace {

LossAndGrad grad_impl(const ModelParameters& params, const prep::Batch& batch, Rng* dropout_rng) {
  check_batch(params, batch);
  const auto& config = params.config;
  const int d = config.d_model;
  const int heads = config.n_heads;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  const std::size_t targets = count_targets(batch);
  if (targets == 0) throw std::invalid_argument("grad: no supervised positions");
  const double inv_targets = 1.0 / static_cast<double>(targets);

  LossAndGrad out;
  out.grads = zeros_like(params);

  for (std::size_t r = 0; r < batch.rows(); ++r) {
    RowCache cache = forward_row(params, batch.tokens[r], batch.pad_mask[r], dropout_rng);
    const int T = static_cast<int>(cache.tokens.size());

    // Cross-entropy over masked targets; dlogits = (softmax - onehot)/M.
    Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(T, config.vocab_size);
    for (int t = 1; t < T; ++t) {
      if (!batch.loss_mask[r][static_cast<std::size_t>(t)]) continue;
      const int target = batch.tokens[r][static_cast<std::size_t>(t)];
      const Eigen::RowVectorXd row = cache.logits.row(t - 1);
      const double lse = log_sum_exp(row);
      out.loss += lse - row(target);
      Eigen::RowVectorXd probs = (row.array() - lse).exp();
      probs(target) -= 1.0;
      dlogits.row(t - 1) += probs * inv_targets;
    }

    Eigen::MatrixXd dx_final = dlogits * params.w_out.transpose();
    out.grads.w_out += cache.x_final.transpose() * dlogits;

    Eigen::MatrixXd dx =
        layer_norm_backward(dx_final, cache.lnf, params.lnf_gain, out.grads.lnf_gain,
                            out.grads.lnf_bias);

    for (int li = config.n_layers - 1; li >= 0; --li) {
      const auto& layer = params.layers[static_cast<std::size_t>(li)];
      auto& glayer = out.grads.layers[static_cast<std::size_t>(li)];
      const LayerCache& lc = cache.layers[static_cast<std::size_t>(li)];

      // Feed-forward block backward (x = x_mid + drop(ffn(ln2(x_mid)))).
      Eigen::MatrixXd dffn_out = dx;
      if (lc.ffn_drop_mask.size() > 0) dffn_out = dffn_out.cwiseProduct(lc.ffn_drop_mask);
      glayer.w2 += lc.ffn_act.transpose() * dffn_out;
      glayer.b2.row(0) += dffn_out.colwise().sum();
      Eigen::MatrixXd dact = dffn_out * layer.w2.transpose();
      Eigen::MatrixXd dpre =
          dact.cwiseProduct(lc.ffn_pre.unaryExpr([](double v) { return gelu_deriv(v); }));
      glayer.w1 += lc.ln2_out.transpose() * dpre;
      glayer.b1.row(0) += dpre.colwise().sum();
      Eigen::MatrixXd dln2_out = dpre * layer.w1.transpose();
      Eigen::MatrixXd dx_mid =
          dx + layer_norm_backward(dln2_out, lc.ln2, layer.ln2_gain, glayer.ln2_gain,
                                   glayer.ln2_bias);

      // Attention block backward (x_mid = x_in + drop(att_concat * wo)).
      Eigen::MatrixXd dproj = dx_mid;
      if (lc.attn_drop_mask.size() > 0) dproj = dproj.cwiseProduct(lc.attn_drop_mask);
      glayer.wo += lc.att_concat.transpose() * dproj;
      Eigen::MatrixXd datt_concat = dproj * layer.wo.transpose();

      Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(T, d);
      Eigen::MatrixXd dk = Eigen::MatrixXd::Zero(T, d);
      Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(T, d);
      for (int h = 0; h < heads; ++h) {
        const auto vh = lc.v.middleCols(h * dh, dh);
        const auto qh = lc.q.middleCols(h * dh, dh);
        const auto kh = lc.k.middleCols(h * dh, dh);
        const Eigen::MatrixXd& att = lc.att[static_cast<std::size_t>(h)];
        const auto datt_c = datt_concat.middleCols(h * dh, dh);

        Eigen::MatrixXd datt = datt_c * vh.transpose();
        dv.middleCols(h * dh, dh) += att.transpose() * datt_c;

        // Softmax backward row-wise; masked entries carry zero weight so
        // their score gradient vanishes automatically.
        Eigen::MatrixXd dscores(T, T);
        for (int i = 0; i < T; ++i) {
          const double dot = datt.row(i).dot(att.row(i));
          dscores.row(i) = att.row(i).array() * (datt.row(i).array() - dot);
        }
        dscores *= scale;
        dq.middleCols(h * dh, dh) += dscores * kh;
        dk.middleCols(h * dh, dh) += dscores.transpose() * qh;
      }

      glayer.wq += lc.ln1_out.transpose() * dq;
      glayer.wk += lc.ln1_out.transpose() * dk;
      glayer.wv += lc.ln1_out.transpose() * dv;
      Eigen::MatrixXd dln1_out = dq * layer.wq.transpose() + dk * layer.wk.transpose() +
                                 dv * layer.wv.transpose();
      dx = dx_mid + layer_norm_backward(dln1_out, lc.ln1, layer.ln1_gain, glayer.ln1_gain,
                                        glayer.ln1_bias);
    }

    for (int t = 0; t < T; ++t) {
      if (!batch.pad_mask[r][static_cast<std::size_t>(t)]) continue;
      out.grads.tok_embedding.row(cache.tokens[static_cast<std::size_t>(t)]) += dx.row(t);
    }
  }

  out.loss *= inv_targets;
  return out;
}

}  // namespace

LossAndGrad grad(const ModelParameters& params, const prep::Batch& batch) {
  return grad_impl(params, batch, nullptr);
}

OptimizerState OptimizerState::create(const ModelParameters& params, const AdamOptions& options) {
  OptimizerState state;
  state.m = zeros_like(params);
  state.v = zeros_like(params);
  state.options = options;
  return state;
}

namespace {

std::vector<Eigen::MatrixXd*> tensor_ptrs(ModelParameters& params) {
  std::vector<Eigen::MatrixXd*> ptrs;
  for_each_tensor(params, [&](const std::string&, Eigen::MatrixXd& m) { ptrs.push_back(&m); });
  return ptrs;
}

std::vector<const Eigen::MatrixXd*> tensor_ptrs(const ModelParameters& params) {
  std::vector<const Eigen::MatrixXd*> ptrs;
  for_each_tensor(params, [&](const std::string&, const Eigen::MatrixXd& m) { ptrs.push_back(&m); });
  return ptrs;
}

}  // namespace

void adam_step(ModelParameters& params, const ModelParameters& grads, OptimizerState& state) {
  auto p = tensor_ptrs(params);
  auto g = tensor_ptrs(grads);
  auto m = tensor_ptrs(state.m);
  auto v = tensor_ptrs(state.v);
  if (p.size() != g.size()) throw std::invalid_argument("adam_step: parameter/gradient mismatch");

  state.step += 1;
  const auto& opt = state.options;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]->rows() != g[i]->rows() || p[i]->cols() != g[i]->cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    *m[i] = opt.beta1 * *m[i] + (1.0 - opt.beta1) * *g[i];
    *v[i] = opt.beta2 * *v[i] + (1.0 - opt.beta2) * g[i]->cwiseProduct(*g[i]);
    const Eigen::MatrixXd m_hat = *m[i] / bc1;
    const Eigen::MatrixXd v_hat = *v[i] / bc2;
    p[i]->array() -= opt.learning_rate * m_hat.array() / (v_hat.array().sqrt() + opt.epsilon);
  }
}

TrainResult train(const ModelConfig& config, const std::vector<prep::EncodedExample>& dataset,
                  const TrainOptions& options, std::uint64_t seed) {
  return train_from(init_params(config, seed), dataset, options, seed);
}

TrainResult train_from(ModelParameters init, const std::vector<prep::EncodedExample>& dataset,
                       const TrainOptions& options, std::uint64_t seed) {
  init.config.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");

  const ModelConfig config = init.config;
  TrainResult result;
  result.params = std::move(init);
  result.log.seed = seed;
  result.log.config = config;

  OptimizerState state = OptimizerState::create(result.params, options.adam);
  Rng dropout_rng = Rng::derive(seed, "dropout");

  std::size_t done = 0;
  for (std::size_t epoch = 0; done < options.steps; ++epoch) {
    const std::uint64_t batch_seed =
        Rng::derive(seed, "epoch:" + std::to_string(epoch)).next_u64();
    const auto batches = prep::make_batches(dataset, options.batch_size, batch_seed);
    for (const auto& batch : batches) {
      if (done >= options.steps) break;
      LossAndGrad lg = grad_impl(result.params, batch,
                                 config.dropout > 0.0 ? &dropout_rng : nullptr);
      if (!std::isfinite(lg.loss)) {
        throw TrainingDiverged("training diverged: non-finite loss at step " +
                               std::to_string(done));
      }
      adam_step(result.params, lg.grads, state);
      result.log.losses.push_back(lg.loss);
      ++done;
    }
  }
  return result;
}

std::vector<int> generate(const ModelParameters& params, const std::vector<int>& prompt_tokens,
                          std::size_t max_new, const SampleOptions& options) {
  if (prompt_tokens.empty()) throw std::invalid_argument("generate: empty prompt");
  if (prompt_tokens.size() + max_new > static_cast<std::size_t>(params.config.max_len)) {
    throw std::invalid_argument("generate: prompt length + max_new exceeds max_len");
  }

  std::vector<int> seq = prompt_tokens;
  Rng rng = Rng::derive(options.seed, "sample");
  for (std::size_t step = 0; step < max_new; ++step) {
    const std::vector<bool> pad(seq.size(), true);
    const RowCache cache = forward_row(params, seq, pad, nullptr);
    const Eigen::RowVectorXd row = cache.logits.row(static_cast<Eigen::Index>(seq.size()) - 1);

    int next = 0;
    if (options.mode == DecodeMode::kGreedy) {
      double best = row(0);
      for (int i = 1; i < row.size(); ++i) {
        if (row(i) > best) {
          best = row(i);
          next = i;
        }
      }
    } else {
      const double temp = options.temperature > 0.0 ? options.temperature : 1.0;
      Eigen::RowVectorXd scaled = row / temp;
      const double lse = log_sum_exp(scaled);
      const Eigen::RowVectorXd probs = (scaled.array() - lse).exp();
      double u = rng.uniform();
      double acc = 0.0;
      next = static_cast<int>(probs.size()) - 1;
      for (int i = 0; i < probs.size(); ++i) {
        acc += probs(i);
        if (u < acc) {
          next = i;
          break;
        }
      }
    }
    seq.push_back(next);
    if (next == prep::kEosId) break;
  }
  return seq;
}

namespace {

std::string format_hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParameters& params, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  const auto& c = params.config;
  out << "sdikit-checkpoint v1\n";
  out << "n_layers " << c.n_layers << "\n";
  out << "d_model " << c.d_model << "\n";
  out << "n_heads " << c.n_heads << "\n";
  out << "d_ff " << c.d_ff << "\n";
  out << "vocab_size " << c.vocab_size << "\n";
  out << "max_len " << c.max_len << "\n";
  out << "dropout " << format_hex(c.dropout) << "\n";
  out << "seed " << seed << "\n";
  for_each_tensor(params, [&](const std::string& name, const Eigen::MatrixXd& m) {
    out << "tensor " << name << " " << m.rows() << " " << m.cols() << "\n";
    for (int r = 0; r < m.rows(); ++r) {
      for (int col = 0; col < m.cols(); ++col) {
        if (col) out << " ";
        out << format_hex(m(r, col));
      }
      out << "\n";
    }
  });
  out << "end\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated checkpoint");
    return line;
  };
  if (next_line() != "sdikit-checkpoint v1") {
    throw std::runtime_error(path + ": unsupported checkpoint format");
  }

  ModelConfig config;
  Checkpoint ckpt;
  auto read_kv = [&](const std::string& key) -> std::string {
    std::istringstream ss(next_line());
    std::string k, v;
    ss >> k >> v;
    if (k != key) throw std::runtime_error(path + ": expected header key " + key);
    return v;
  };
  config.n_layers = std::stoi(read_kv("n_layers"));
  config.d_model = std::stoi(read_kv("d_model"));
  config.n_heads = std::stoi(read_kv("n_heads"));
  config.d_ff = std::stoi(read_kv("d_ff"));
  config.vocab_size = std::stoi(read_kv("vocab_size"));
  config.max_len = std::stoi(read_kv("max_len"));
  config.dropout = std::strtod(read_kv("dropout").c_str(), nullptr);
  ckpt.seed = std::stoull(read_kv("seed"));
  config.validate();

  ckpt.params = alloc_params(config);
  for_each_tensor(ckpt.params, [&](const std::string& name, Eigen::MatrixXd& m) {
    std::istringstream header(next_line());
    std::string kind, got_name;
    Eigen::Index rows = 0, cols = 0;
    header >> kind >> got_name >> rows >> cols;
    if (kind != "tensor" || got_name != name || rows != m.rows() || cols != m.cols()) {
      throw std::runtime_error(path + ": tensor header mismatch at " + name);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      std::istringstream row(next_line());
      std::string tok;
      for (Eigen::Index col = 0; col < cols; ++col) {
        if (!(row >> tok)) throw std::runtime_error(path + ": short tensor row in " + name);
        m(r, col) = std::strtod(tok.c_str(), nullptr);
      }
    }
  });
  if (next_line() != "end") throw std::runtime_error(path + ": missing end marker");
  return ckpt;
}

}  // namespace sdikit::model
