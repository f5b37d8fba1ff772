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
#include "lstm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "error.hpp"
#include "random.hpp"
#include "text.hpp"

namespace ltw {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// The four gate affines stacked as [candidate; input; forget; output] so one
// matrix-vector product serves all gates. Because the input is x_t * e, the
// input weights only ever act through their row sums.
struct Packed {
  MatrixXd recurrent;  // 4m x m
  VectorXd input_sum;  // 4m
  VectorXd bias;       // 4m

  explicit Packed(const LstmParams& p) {
    const auto m = static_cast<Eigen::Index>(p.hidden);
    recurrent.resize(4 * m, m);
    input_sum.resize(4 * m);
    bias.resize(4 * m);
    const GateParams* gates[] = {&p.candidate, &p.input, &p.forget, &p.output};
    for (Eigen::Index g = 0; g < 4; ++g) {
      recurrent.middleRows(g * m, m) = gates[g]->recurrent_w;
      input_sum.segment(g * m, m) = gates[g]->input_w.rowwise().sum();
      bias.segment(g * m, m) = gates[g]->bias;
    }
  }
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void softmax_inplace(VectorXd& v) {
  const double top = v.maxCoeff();
  v = (v.array() - top).exp();
  v /= v.sum();
}

LstmForward run_forward(const LstmParams& params, const Packed& packed, std::span<const double> x) {
  require(!x.empty(), "lstm input must be non-empty");
  const auto m = static_cast<Eigen::Index>(params.hidden);
  const auto n = static_cast<Eigen::Index>(x.size());
  LstmForward out;
  LstmCache& c = out.cache;
  c.inputs.assign(x.begin(), x.end());
  c.candidate.resize(m, n);
  c.input_gate.resize(m, n);
  c.forget_gate.resize(m, n);
  c.output_gate.resize(m, n);
  c.cell.resize(m, n);
  c.cell_tanh.resize(m, n);
  c.hidden.resize(m, n);

  VectorXd h = VectorXd::Zero(m), cell = VectorXd::Zero(m), z(4 * m);
  for (Eigen::Index t = 0; t < n; ++t) {
    z.noalias() = packed.recurrent * h;
    z += packed.input_sum * x[static_cast<std::size_t>(t)] + packed.bias;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double cand = std::tanh(z(r));
      const double ig = sigmoid(z(m + r));
      const double fg = sigmoid(z(2 * m + r));
      const double og = sigmoid(z(3 * m + r));
      const double cs = fg * cell(r) + ig * cand;
      const double ct = std::tanh(cs);
      c.candidate(r, t) = cand;
      c.input_gate(r, t) = ig;
      c.forget_gate(r, t) = fg;
      c.output_gate(r, t) = og;
      c.cell(r, t) = cs;
      c.cell_tanh(r, t) = ct;
      cell(r) = cs;
      h(r) = og * ct;
    }
    c.hidden.col(t) = h;
  }
  c.pooled = c.hidden.rowwise().sum();
  VectorXd logits = params.head_w * c.pooled + params.head_b;
  if (!logits.allFinite()) fail(ErrorCode::Diverged, "lstm forward produced non-finite activations");
  softmax_inplace(logits);
  out.prob.assign(logits.data(), logits.data() + logits.size());
  return out;
}

struct PackedGradient {
  MatrixXd recurrent;
  VectorXd input_sum;
  VectorXd bias;
  MatrixXd head_w;
  VectorXd head_b;

  PackedGradient(std::size_t hidden, std::size_t classes) {
    const auto m = static_cast<Eigen::Index>(hidden);
    const auto k = static_cast<Eigen::Index>(classes);
    recurrent = MatrixXd::Zero(4 * m, m);
    input_sum = VectorXd::Zero(4 * m);
    bias = VectorXd::Zero(4 * m);
    head_w = MatrixXd::Zero(k, m);
    head_b = VectorXd::Zero(k);
  }
};

// Adds the gradient of -log P[label] for one sequence.
void accumulate(const LstmParams& params, const Packed& packed, const LstmForward& fwd, int label,
                PackedGradient& g) {
  const auto m = static_cast<Eigen::Index>(params.hidden);
  const LstmCache& c = fwd.cache;
  const auto n = c.hidden.cols();

  VectorXd dlogits = Eigen::Map<const VectorXd>(fwd.prob.data(), static_cast<Eigen::Index>(fwd.prob.size()));
  dlogits(label) -= 1.0;
  g.head_w.noalias() += dlogits * c.pooled.transpose();
  g.head_b += dlogits;
  const VectorXd dpool = params.head_w.transpose() * dlogits;

  MatrixXd dz(4 * m, n);
  VectorXd dh_next = VectorXd::Zero(m), dc_next = VectorXd::Zero(m);
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    for (Eigen::Index r = 0; r < m; ++r) {
      const double dh = dpool(r) + dh_next(r);
      const double ct = c.cell_tanh(r, t);
      const double og = c.output_gate(r, t);
      const double ig = c.input_gate(r, t);
      const double fg = c.forget_gate(r, t);
      const double cand = c.candidate(r, t);
      const double c_prev = t > 0 ? c.cell(r, t - 1) : 0.0;
      const double dc = dc_next(r) + dh * og * (1.0 - ct * ct);
      dz(r, t) = dc * ig * (1.0 - cand * cand);
      dz(m + r, t) = dc * cand * ig * (1.0 - ig);
      dz(2 * m + r, t) = dc * c_prev * fg * (1.0 - fg);
      dz(3 * m + r, t) = dh * ct * og * (1.0 - og);
      dc_next(r) = dc * fg;
    }
    dh_next.noalias() = packed.recurrent.transpose() * dz.col(t);
  }
  // Recurrent weights see h_{t-1}, which is zero at t = 0.
  if (n > 1) g.recurrent.noalias() += dz.rightCols(n - 1) * c.hidden.leftCols(n - 1).transpose();
  g.bias += dz.rowwise().sum();
  const Eigen::Map<const VectorXd> xs(c.inputs.data(), n);
  g.input_sum.noalias() += dz * xs;
}

LstmParams unpack(const PackedGradient& g, std::size_t hidden, std::size_t classes) {
  LstmParams out = LstmParams::zeros(hidden, classes);
  const auto m = static_cast<Eigen::Index>(hidden);
  GateParams* gates[] = {&out.candidate, &out.input, &out.forget, &out.output};
  for (Eigen::Index k = 0; k < 4; ++k) {
    gates[k]->recurrent_w = g.recurrent.middleRows(k * m, m);
    gates[k]->bias = g.bias.segment(k * m, m);
    gates[k]->input_w = g.input_sum.segment(k * m, m).replicate(1, m);
  }
  out.head_w = g.head_w;
  out.head_b = g.head_b;
  return out;
}

void check_label(const LstmParams& params, int label) {
  require(label >= 0 && static_cast<std::size_t>(label) < params.classes,
          "label " + std::to_string(label) + " out of range for " + std::to_string(params.classes) + " classes");
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t hidden, std::size_t classes) {
  require(hidden >= 1 && classes >= 1, "lstm needs hidden >= 1 and classes >= 1");
  const auto m = static_cast<Eigen::Index>(hidden);
  const auto k = static_cast<Eigen::Index>(classes);
  LstmParams p;
  p.hidden = hidden;
  p.classes = classes;
  for (GateParams* g : {&p.candidate, &p.input, &p.forget, &p.output}) {
    g->input_w = MatrixXd::Zero(m, m);
    g->recurrent_w = MatrixXd::Zero(m, m);
    g->bias = VectorXd::Zero(m);
  }
  p.head_w = MatrixXd::Zero(k, m);
  p.head_b = VectorXd::Zero(k);
  return p;
}

LstmParams LstmParams::uniform(std::size_t hidden, std::size_t classes, double scale, Rng& rng) {
  LstmParams p = zeros(hidden, classes);
  p.visit([&](const std::string&, double* data, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) data[i] = rng.uniform(-scale, scale);
  });
  return p;
}

std::size_t LstmParams::parameter_count() const {
  std::size_t total = 0;
  visit([&](const std::string&, const double*, std::size_t count) { total += count; });
  return total;
}

std::vector<double> discretize(std::span<const double> x, int levels) {
  require(levels >= 2, "discretization needs at least 2 levels");
  std::vector<double> out(x.size(), 0.0);
  if (x.empty()) return out;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  const double s = static_cast<double>(levels);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::round(s * (x[i] - *lo) / range) / s;
  return out;
}

LstmForward forward(const LstmParams& params, std::span<const double> x) {
  return run_forward(params, Packed(params), x);
}

double loss(const LstmParams& params, std::span<const LabeledSequence> batch) {
  require(!batch.empty(), "loss needs a non-empty batch");
  const Packed packed(params);
  double total = 0.0;
  for (const auto& s : batch) {
    check_label(params, s.label);
    total -= std::log(run_forward(params, packed, s.x).prob[static_cast<std::size_t>(s.label)]);
  }
  return total;
}

LstmGradient backward(const LstmParams& params, std::span<const LabeledSequence> batch) {
  require(!batch.empty(), "backward needs a non-empty batch");
  const Packed packed(params);
  PackedGradient g(params.hidden, params.classes);
  LstmGradient out;
  for (const auto& s : batch) {
    check_label(params, s.label);
    const LstmForward fwd = run_forward(params, packed, s.x);
    out.loss -= std::log(fwd.prob[static_cast<std::size_t>(s.label)]);
    if (argmax(fwd.prob) == static_cast<std::size_t>(s.label)) ++out.correct;
    accumulate(params, packed, fwd, s.label, g);
  }
  out.grad = unpack(g, params.hidden, params.classes);
  return out;
}

void TrainConfig::validate(std::size_t train_size) const {
  require(hidden >= 1, "hidden size must be >= 1");
  require(batch_size >= 1, "batch size must be >= 1");
  require(batch_size <= train_size, "batch size " + std::to_string(batch_size) + " exceeds training-set size " +
                                        std::to_string(train_size));
  require(max_epochs >= 1, "max_epochs must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning rate must be positive");
  require(levels >= 2, "levels must be >= 2");
  require(init_scale >= 0.0, "init scale must be non-negative");
}

LstmModel train(const Dataset& train_data, const TrainConfig& config) {
  config.validate(train_data.size());
  require(train_data.num_classes() >= 1, "training set has no classes");

  std::vector<std::vector<double>> inputs;
  std::vector<int> labels;
  inputs.reserve(train_data.size());
  for (std::size_t i = 0; i < train_data.size(); ++i) {
    inputs.push_back(discretize(train_data[i].values(), config.levels));
    labels.push_back(train_data.label_of(i));
  }

  Rng rng(config.seed);
  LstmModel model;
  model.params = LstmParams::uniform(config.hidden, train_data.num_classes(), config.init_scale, rng);
  model.levels = config.levels;
  model.seed = config.seed;

  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<LabeledSequence> batch;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back({inputs[order[i]], labels[order[i]]});
      LstmGradient g;
      try {
        g = backward(model.params, batch);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Diverged) throw;
        fail(ErrorCode::Diverged, "training diverged in epoch " + std::to_string(epoch));
      }
      if (!std::isfinite(g.loss)) fail(ErrorCode::Diverged, "training diverged in epoch " + std::to_string(epoch));
      epoch_loss += g.loss;
      correct += g.correct;
      const double step = config.learning_rate / static_cast<double>(batch.size());
      std::vector<std::pair<double*, std::size_t>> dst;
      model.params.visit([&](const std::string&, double* data, std::size_t count) { dst.emplace_back(data, count); });
      std::size_t block = 0;
      g.grad.visit([&](const std::string&, const double* grad, std::size_t count) {
        double* p = dst[block++].first;
        for (std::size_t i = 0; i < count; ++i) p[i] -= step * grad[i];
      });
    }
    const double n = static_cast<double>(order.size());
    model.trace.push_back({epoch, epoch_loss / n, static_cast<double>(correct) / n});
    model.epochs = epoch;
  }
  return model;
}

ProbabilityVector predict_prob(const LstmModel& model, std::span<const double> x) {
  return forward(model.params, discretize(x, model.levels)).prob;
}

int predict(const LstmModel& model, std::span<const double> x) { return static_cast<int>(argmax(predict_prob(model, x))); }

std::string format_checkpoint(const LstmModel& model) {
  std::string out = "ltwkit-lstm 1\n";
  out += "hidden " + std::to_string(model.params.hidden) + '\n';
  out += "classes " + std::to_string(model.params.classes) + '\n';
  out += "levels " + std::to_string(model.levels) + '\n';
  out += "seed " + std::to_string(model.seed) + '\n';
  out += "epochs " + std::to_string(model.epochs) + '\n';
  model.params.visit([&](const std::string& name, const double* data, std::size_t count) {
    out += name;
    for (std::size_t i = 0; i < count; ++i) {
      out += ' ';
      out += text::format_double(data[i]);
    }
    out += '\n';
  });
  return out;
}

LstmModel parse_checkpoint(std::string_view contents) {
  std::map<std::string, std::vector<std::string_view>> lines;
  std::size_t pos = 0;
  bool header = false;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    auto line = text::trim(contents.substr(pos, (nl == std::string_view::npos ? contents.size() : nl) - pos));
    pos = nl == std::string_view::npos ? contents.size() : nl + 1;
    if (line.empty()) continue;
    auto fields = text::split(line, ' ');
    if (!header) {
      if (fields.size() != 2 || fields[0] != "ltwkit-lstm") fail(ErrorCode::Parse, "not an ltwkit lstm checkpoint");
      if (fields[1] != "1") fail(ErrorCode::Parse, "unsupported checkpoint version " + std::string(fields[1]));
      header = true;
      continue;
    }
    std::string key(fields[0]);
    fields.erase(fields.begin());
    lines[key] = std::move(fields);
  }
  if (!header) fail(ErrorCode::Parse, "empty checkpoint");
  auto scalar = [&](const char* key) -> long long {
    auto it = lines.find(key);
    if (it == lines.end() || it->second.size() != 1) fail(ErrorCode::Parse, std::string("checkpoint lacks '") + key + "'");
    return text::parse_int(it->second[0]);
  };
  const long long hidden = scalar("hidden"), classes = scalar("classes");
  if (hidden < 1 || classes < 1 || hidden > 100000 || classes > 100000)
    fail(ErrorCode::Parse, "checkpoint has invalid shape");
  LstmModel model;
  model.params = LstmParams::zeros(static_cast<std::size_t>(hidden), static_cast<std::size_t>(classes));
  model.levels = static_cast<int>(scalar("levels"));
  model.seed = static_cast<std::uint64_t>(scalar("seed"));
  model.epochs = static_cast<std::size_t>(scalar("epochs"));
  model.params.visit([&](const std::string& name, double* data, std::size_t count) {
    auto it = lines.find(name);
    if (it == lines.end()) fail(ErrorCode::Parse, "checkpoint lacks block '" + name + "'");
    if (it->second.size() != count)
      fail(ErrorCode::Parse, "block '" + name + "' has " + std::to_string(it->second.size()) + " values, expected " +
                                 std::to_string(count));
    for (std::size_t i = 0; i < count; ++i) {
      data[i] = text::parse_double(it->second[i]);
      if (!std::isfinite(data[i])) fail(ErrorCode::Parse, "non-finite value in block '" + name + "'");
    }
  });
  return model;
}

void save_checkpoint(const LstmModel& model, const std::string& path) { text::write_file(path, format_checkpoint(model)); }

LstmModel load_checkpoint(const std::string& path) { return parse_checkpoint(text::read_file(path)); }

void save_loss_trace(std::span<const EpochStats> trace, const std::string& path) {
  std::string out = "epoch,loss,train_acc\n";
  for (const auto& e : trace)
    out += std::to_string(e.epoch) + ',' + text::format_double(e.loss) + ',' + text::format_double(e.train_acc) + '\n';
  text::write_file(path, out);
}

}  // namespace ltw
