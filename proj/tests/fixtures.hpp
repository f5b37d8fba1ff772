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
// Small deterministic datasets shared by the unit and acceptance tests.

#ifndef LTWKIT_TESTS_FIXTURES_HPP
#define LTWKIT_TESTS_FIXTURES_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lstm.hpp"
#include "series.hpp"

namespace fixtures {

// Three classes that stay distinct after min-max scaling: four pulses per
// window at different duty cycles, with mild noise.
inline ltw::Dataset toy_shapes(std::size_t count, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.03);
  std::vector<ltw::Series> windows;
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % 3);
    std::vector<double> v(length);
    for (std::size_t t = 0; t < length; ++t) {
      const double u = static_cast<double>(t) / static_cast<double>(length - 1);
      // Pulse trains with duty cycles 0.2, 0.5 and 0.8: pooled hidden
      // states separate them regardless of where a window starts.
      const double phase = std::fmod(u * 4.0, 1.0);
      const double duty = 0.2 + 0.3 * label;
      const double base = phase < duty ? 1.0 : 0.0;
      v[t] = base + noise(gen);
    }
    windows.emplace_back(std::move(v), label, "toy" + std::to_string(i));
  }
  return ltw::Dataset(std::move(windows), 3);
}

// Largest relative gap between backward() and central differences over every
// parameter. Denominators are floored so that exact zeros compare cleanly.
inline double worst_gradient_error(ltw::LstmParams params, const std::vector<std::vector<double>>& inputs,
                                   const std::vector<int>& labels, double step = 1e-5) {
  std::vector<ltw::LabeledSequence> batch;
  for (std::size_t i = 0; i < inputs.size(); ++i) batch.push_back({inputs[i], labels[i]});
  const auto analytic = ltw::backward(params, batch).grad;
  std::vector<double> grads;
  analytic.visit([&](const std::string&, const double* d, std::size_t n) { grads.insert(grads.end(), d, d + n); });
  std::vector<double*> slots;
  params.visit([&](const std::string&, double* d, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) slots.push_back(d + i);
  });
  double worst = 0.0;
  for (std::size_t p = 0; p < slots.size(); ++p) {
    double* slot = slots[p];
    const double saved = *slot;
    *slot = saved + step;
    const double up = ltw::loss(params, batch);
    *slot = saved - step;
    const double down = ltw::loss(params, batch);
    *slot = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double scale = std::max({std::abs(numeric), std::abs(grads[p]), 1e-7});
    worst = std::max(worst, std::abs(numeric - grads[p]) / scale);
  }
  return worst;
}

}  // namespace fixtures

#endif  // LTWKIT_TESTS_FIXTURES_HPP
