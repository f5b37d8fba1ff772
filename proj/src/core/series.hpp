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

// Series, datasets, window cutting and leakage-safe fold partitioning.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ltw {

/// One univariate sequence. Values are non-empty and finite; a label, when
/// present, is a class index. source_id names the full-length trace the
/// values came from (a window inherits it from its trace).
class Series {
 public:
  Series(std::vector<double> values, std::optional<int> label = std::nullopt, std::string source_id = {});

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::optional<int>& label() const { return label_; }
  const std::string& source_id() const { return source_id_; }

  /// Copy of [start, start + length) carrying the same label and source_id.
  Series slice(std::size_t start, std::size_t length) const;

  friend bool operator==(const Series&, const Series&) = default;

 private:
  std::vector<double> values_;
  std::optional<int> label_;
  std::string source_id_;
};

/// Fixed-length windows with class metadata. num_classes may exceed
/// 1 + max label when the dataset is one side of a split.
class Dataset {
 public:
  Dataset(std::vector<Series> windows, std::size_t num_classes);

  /// Infers window_length from the members and num_classes = 1 + max label.
  static Dataset from_windows(std::vector<Series> windows);

  const std::vector<Series>& series() const { return series_; }
  std::size_t size() const { return series_.size(); }
  bool empty() const { return series_.empty(); }
  const Series& operator[](std::size_t i) const { return series_[i]; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t window_length() const { return window_length_; }

  /// Label of member i; throws if it is unlabeled.
  int label_of(std::size_t i) const;

 private:
  std::vector<Series> series_;
  std::size_t num_classes_ = 0;
  std::size_t window_length_ = 0;
};

inline constexpr std::size_t kDefaultWindowLength = 200;
inline constexpr std::size_t kDefaultStride = 50;

/// Windows starting at 0, s, 2s, ... plus one anchored at len - n.
/// Traces shorter than n yield nothing.
std::vector<Series> cut_windows(const Series& trace, std::size_t window_length,
                                std::size_t stride = kDefaultStride);

std::vector<Series> cut_all(std::span<const Series> traces, std::size_t window_length,
                            std::size_t stride = kDefaultStride);

class FoldPlan {
 public:
  FoldPlan(int num_folds, std::map<std::string, int> assignment);

  int num_folds() const { return num_folds_; }
  const std::map<std::string, int>& assignment() const { return assignment_; }

  /// Fold of a source; throws OutOfRange when the source is unknown.
  int fold_of(const std::string& source_id) const;

  /// Test folds for a given fold test: (i, (i + 1) mod num_folds).
  std::pair<int, int> test_pair(int fold_test) const;

  bool is_test(int fold_test, const std::string& source_id) const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;

 private:
  int num_folds_;
  std::map<std::string, int> assignment_;
};

/// Assigns whole traces to folds, stratified by label, deterministic in seed.
/// Must run before cutting so that overlapping windows of one trace never
/// straddle train and test.
FoldPlan partition_folds(std::span<const Series> traces, int num_folds, std::uint64_t seed);

struct Split {
  Dataset train;
  Dataset test;
};

Split split(const Dataset& dataset, const FoldPlan& plan, int fold_test);

// CSV: header `source_id,label,v0,v1,...`, label -1 for unlabeled, rows may
// have different lengths.
std::vector<Series> load_series_csv(const std::string& path);
std::vector<Series> parse_series_csv(const std::string& contents);
void save_series_csv(std::span<const Series> series, const std::string& path);
std::string format_series_csv(std::span<const Series> series);

// CSV: header `source_id,fold`.
FoldPlan load_fold_plan_csv(const std::string& path);
void save_fold_plan_csv(const FoldPlan& plan, const std::string& path);

}  // namespace ltw
