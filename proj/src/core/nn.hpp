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

// Nearest-neighbour classification over any DistanceSpec.

#include <cstddef>
#include <span>
#include <vector>

#include "distance.hpp"
#include "series.hpp"

namespace ltw {

struct Neighbor {
  std::size_t index;  // into the training set
  double distance;
};

/// Ascending by distance, ties broken by lower training index.
using NeighborList = std::vector<Neighbor>;

/// Per-class probabilities; sums to 1.
using ProbabilityVector = std::vector<double>;

inline constexpr int kDefaultNeighbors = 5;

/// Distances from the query to every training window. Asymmetric kinds are
/// evaluated query-first.
std::vector<double> distances_to(std::span<const double> query, const Dataset& train, const DistanceSpec& spec);

/// The m smallest entries of a distance row.
NeighborList select_neighbors(std::span<const double> distances, std::size_t m);

NeighborList nearest_neighbors(std::span<const double> query, const Dataset& train, const DistanceSpec& spec,
                               std::size_t m);

int classify_1nn(std::span<const double> query, const Dataset& train, const DistanceSpec& spec);

/// Rank-weighted vote: the i-th neighbour (1-based) adds m - i to its class,
/// normalized by m(m-1)/2. The m-th neighbour therefore carries no weight.
ProbabilityVector rank_weighted_vote(const NeighborList& neighbors, const Dataset& train);

ProbabilityVector prob_vector_knn(std::span<const double> query, const Dataset& train, const DistanceSpec& spec,
                                  std::size_t m = kDefaultNeighbors);

/// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> p);

}  // namespace ltw
