/*
 * Copyright 2026 The ltwkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Single-layer LSTM sequence classifier trained from scratch.
//
// Each scalar input x_t is broadcast to an m-vector (x_t * e), run through
// one LSTM layer, the per-step outputs h_t are sum-pooled and a softmax head
// produces class probabilities. Training minimizes the negative
// log-likelihood with minibatch SGD and backpropagation through time.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nn.hpp"
#include "series.hpp"

namespace ltw {

class Rng;

struct GateParams {
  Eigen::MatrixXd input_w;      // m x m, applied to x_t * e
  Eigen::MatrixXd recurrent_w;  // m x m, applied to h_{t-1}
  Eigen::VectorXd bias;         // m
};

struct LstmParams {
  std::size_t hidden = 0;
  std::size_t classes = 0;
  GateParams candidate, input, forget, output;
  Eigen::MatrixXd head_w;  // C x m
  Eigen::VectorXd head_b;  // C

  static LstmParams zeros(std::size_t hidden, std::size_t classes);
  static LstmParams uniform(std::size_t hidden, std::size_t classes, double scale, Rng& rng);

  std::size_t parameter_count() const;

  /// Calls f(name, data, count) for every parameter block in a fixed order.
  template <class F>
  void visit(F&& f) {
    const char* names[] = {"candidate", "input", "forget", "output"};
    GateParams* gates[] = {&candidate, &input, &forget, &output};
    for (int g = 0; g < 4; ++g) {
      std::string n(names[g]);
      f(n + ".W", gates[g]->input_w.data(), static_cast<std::size_t>(gates[g]->input_w.size()));
      f(n + ".U", gates[g]->recurrent_w.data(), static_cast<std::size_t>(gates[g]->recurrent_w.size()));
      f(n + ".b", gates[g]->bias.data(), static_cast<std::size_t>(gates[g]->bias.size()));
    }
    f(std::string("head.W"), head_w.data(), static_cast<std::size_t>(head_w.size()));
    f(std::string("head.b"), head_b.data(), static_cast<std::size_t>(head_b.size()));
  }
  template <class F>
  void visit(F&& f) const {
    const_cast<LstmParams*>(this)->visit([&](const std::string& name, double* data, std::size_t count) {
      f(name, static_cast<const double*>(data), count);
    });
  }
};

/// Per-step activations kept for the backward pass; columns are time steps.
struct LstmCache {
  std::vector<double> inputs;
  Eigen::MatrixXd candidate, input_gate, forget_gate, output_gate;
  Eigen::MatrixXd cell, cell_tanh, hidden;
  Eigen::VectorXd pooled;
};

struct LstmForward {
  ProbabilityVector prob;
  LstmCache cache;
};

/// Per-window min-max quantization to levels 0..S, returned as level / S.
/// Constant series map to zeros.
std::vector<double> discretize(std::span<const double> x, int levels);

/// Forward pass over an already discretized sequence. Throws Diverged on
/// non-finite activations.
LstmForward forward(const LstmParams& params, std::span<const double> x);

struct LabeledSequence {
  std::span<const double> x;
  int label;
};

/// Sum over the batch of -log P[label].
double loss(const LstmParams& params, std::span<const LabeledSequence> batch);

struct LstmGradient {
  LstmParams grad;  // same shape as the parameters
  double loss = 0.0;
  std::size_t correct = 0;
};

/// Exact gradient of loss() by backpropagation through time.
LstmGradient backward(const LstmParams& params, std::span<const LabeledSequence> batch);

struct TrainConfig {
  std::size_t hidden = 90;
  std::size_t batch_size = 60;
  std::size_t max_epochs = 50;
  double learning_rate = 0.05;
  int levels = 100;
  std::uint64_t seed = 0;
  double init_scale = 0.08;

  void validate(std::size_t train_size) const;
};

struct EpochStats {
  std::size_t epoch;  // 1-based
  double loss;        // mean per-sample loss accumulated over the epoch
  double train_acc;   // fraction predicted correctly during the epoch
};

/// Trained parameters plus what is needed to apply them.
struct LstmModel {
  LstmParams params;
  int levels = 100;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::vector<EpochStats> trace;

  std::size_t num_classes() const { return params.classes; }
};

/// Minibatch SGD. The update uses the batch-mean gradient. Deterministic in
/// config.seed.
LstmModel train(const Dataset& train_data, const TrainConfig& config);

/// Discretize, then forward.
ProbabilityVector predict_prob(const LstmModel& model, std::span<const double> x);

int predict(const LstmModel& model, std::span<const double> x);

// Checkpoint: line-oriented text with a versioned header; values use the
// shortest round-trip decimal form so load(save(m)) is exact.
std::string format_checkpoint(const LstmModel& model);
LstmModel parse_checkpoint(std::string_view contents);
void save_checkpoint(const LstmModel& model, const std::string& path);
LstmModel load_checkpoint(const std::string& path);

/// CSV `epoch,loss,train_acc`.
void save_loss_trace(std::span<const EpochStats> trace, const std::string& path);

}  // namespace ltw
