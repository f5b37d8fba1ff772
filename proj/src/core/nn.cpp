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
#include "nn.hpp"

#include <algorithm>

#include "error.hpp"

namespace ltw {

std::vector<double> distances_to(std::span<const double> query, const Dataset& train, const DistanceSpec& spec) {
  std::vector<double> d(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) d[i] = evaluate(spec, query, train[i].values());
  return d;
}

NeighborList select_neighbors(std::span<const double> distances, std::size_t m) {
  require(m >= 1, "need at least one neighbour");
  require(m <= distances.size(), [&] {
    return "asked for " + std::to_string(m) + " neighbours from " + std::to_string(distances.size()) +
           " training windows";
  });
  NeighborList all(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) all[i] = {i, distances[i]};
  auto before = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m), all.end(), before);
  all.resize(m);
  return all;
}

NeighborList nearest_neighbors(std::span<const double> query, const Dataset& train, const DistanceSpec& spec,
                               std::size_t m) {
  require(!train.empty(), "training set is empty");
  require(m <= train.size(), [&] {
    return "asked for " + std::to_string(m) + " neighbours from " + std::to_string(train.size()) +
           " training windows";
  });
  return select_neighbors(distances_to(query, train, spec), m);
}

int classify_1nn(std::span<const double> query, const Dataset& train, const DistanceSpec& spec) {
  auto nn = nearest_neighbors(query, train, spec, 1);
  return train.label_of(nn.front().index);
}

ProbabilityVector rank_weighted_vote(const NeighborList& neighbors, const Dataset& train) {
  const std::size_t m = neighbors.size();
  require(m >= 2, "rank-weighted vote needs m >= 2");
  require(train.num_classes() > 0, "training set has no classes");
  ProbabilityVector p(train.num_classes(), 0.0);
  const double total = static_cast<double>(m * (m - 1)) / 2.0;
  for (std::size_t i = 0; i < m; ++i)
    p[static_cast<std::size_t>(train.label_of(neighbors[i].index))] += static_cast<double>(m - 1 - i) / total;
  return p;
}

ProbabilityVector prob_vector_knn(std::span<const double> query, const Dataset& train, const DistanceSpec& spec,
                                  std::size_t m) {
  require(m >= 2, "prob_vector_knn needs m >= 2");
  return rank_weighted_vote(nearest_neighbors(query, train, spec, m), train);
}

std::size_t argmax(std::span<const double> p) {
  require(!p.empty(), "argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace ltw
