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
#include "series.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "random.hpp"
#include "text.hpp"

namespace ltw {

Series::Series(std::vector<double> values, std::optional<int> label, std::string source_id)
    : values_(std::move(values)), label_(label), source_id_(std::move(source_id)) {
  require(!values_.empty(), "series must be non-empty");
  for (std::size_t i = 0; i < values_.size(); ++i)
    require(std::isfinite(values_[i]), "series value " + std::to_string(i) + " is not finite");
  require(!label_ || *label_ >= 0, "series label must be non-negative");
}

Series Series::slice(std::size_t start, std::size_t length) const {
  require(start + length <= values_.size() && length > 0, "slice out of range");
  auto first = values_.begin() + static_cast<std::ptrdiff_t>(start);
  return Series(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(length)), label_, source_id_);
}

Dataset::Dataset(std::vector<Series> windows, std::size_t num_classes)
    : series_(std::move(windows)), num_classes_(num_classes) {
  if (!series_.empty()) window_length_ = series_.front().size();
  for (const auto& s : series_) {
    require(s.size() == window_length_, "dataset windows must share one length (" +
                                             std::to_string(window_length_) + " vs " + std::to_string(s.size()) + ")");
    if (s.label())
      require(static_cast<std::size_t>(*s.label()) < num_classes_,
              "label " + std::to_string(*s.label()) + " out of range for " + std::to_string(num_classes_) + " classes");
  }
}

Dataset Dataset::from_windows(std::vector<Series> windows) {
  int max_label = -1;
  for (const auto& s : windows)
    if (s.label()) max_label = std::max(max_label, *s.label());
  return Dataset(std::move(windows), static_cast<std::size_t>(max_label + 1));
}

int Dataset::label_of(std::size_t i) const {
  const auto& l = series_.at(i).label();
  require(l.has_value(), "window " + std::to_string(i) + " is unlabeled");
  return *l;
}

std::vector<Series> cut_windows(const Series& trace, std::size_t window_length, std::size_t stride) {
  require(window_length >= 1, "window length must be >= 1");
  require(stride >= 1, "stride must be >= 1");
  std::vector<Series> out;
  if (trace.size() < window_length) return out;
  const std::size_t last = trace.size() - window_length;
  for (std::size_t start = 0; start <= last; start += stride) out.push_back(trace.slice(start, window_length));
  if (last % stride != 0) out.push_back(trace.slice(last, window_length));
  return out;
}

std::vector<Series> cut_all(std::span<const Series> traces, std::size_t window_length, std::size_t stride) {
  std::vector<Series> out;
  for (const auto& t : traces) {
    auto w = cut_windows(t, window_length, stride);
    std::move(w.begin(), w.end(), std::back_inserter(out));
  }
  return out;
}

FoldPlan::FoldPlan(int num_folds, std::map<std::string, int> assignment)
    : num_folds_(num_folds), assignment_(std::move(assignment)) {
  require(num_folds_ >= 2, "need at least 2 folds");
  for (const auto& [id, fold] : assignment_)
    require(fold >= 0 && fold < num_folds_, "source '" + id + "' assigned to invalid fold " + std::to_string(fold));
}

int FoldPlan::fold_of(const std::string& source_id) const {
  auto it = assignment_.find(source_id);
  if (it == assignment_.end()) fail(ErrorCode::OutOfRange, "source '" + source_id + "' is not in the fold plan");
  return it->second;
}

std::pair<int, int> FoldPlan::test_pair(int fold_test) const {
  require(fold_test >= 0 && fold_test < num_folds_, "fold test " + std::to_string(fold_test) + " out of range");
  return {fold_test, (fold_test + 1) % num_folds_};
}

bool FoldPlan::is_test(int fold_test, const std::string& source_id) const {
  auto [a, b] = test_pair(fold_test);
  int f = fold_of(source_id);
  return f == a || f == b;
}

FoldPlan partition_folds(std::span<const Series> traces, int num_folds, std::uint64_t seed) {
  require(num_folds >= 2, "need at least 2 folds");
  // One entry per distinct source, grouped by label (-1 = unlabeled).
  std::map<int, std::vector<std::string>> groups;
  std::set<std::string> seen;
  for (const auto& t : traces) {
    if (!seen.insert(t.source_id()).second) continue;
    groups[t.label().value_or(-1)].push_back(t.source_id());
  }
  require(seen.size() >= static_cast<std::size_t>(num_folds),
          "need at least " + std::to_string(num_folds) + " distinct traces, got " + std::to_string(seen.size()));

  // A class on fewer than three folds disappears from the training side of
  // the fold test whose pair covers it.
  const std::size_t min_per_class = std::min<std::size_t>(3, static_cast<std::size_t>(num_folds));
  for (const auto& [label, ids] : groups)
    if (label >= 0 && ids.size() < min_per_class)
      fail(ErrorCode::InvalidArgument, "class " + std::to_string(label) + " has " + std::to_string(ids.size()) +
                                           " trace(s); at least " + std::to_string(min_per_class) +
                                           " are needed so every training split contains it");

  Rng rng(seed);
  std::map<std::string, int> assignment;
  std::size_t pos = 0;
  for (auto& [label, ids] : groups) {
    rng.shuffle(ids);
    for (const auto& id : ids) assignment[id] = static_cast<int>(pos++ % static_cast<std::size_t>(num_folds));
  }
  return FoldPlan(num_folds, std::move(assignment));
}

Split split(const Dataset& dataset, const FoldPlan& plan, int fold_test) {
  std::vector<Series> train, test;
  for (const auto& s : dataset.series()) (plan.is_test(fold_test, s.source_id()) ? test : train).push_back(s);
  require(!train.empty(), "fold test " + std::to_string(fold_test) + " leaves an empty training split");
  require(!test.empty(), "fold test " + std::to_string(fold_test) + " leaves an empty test split");
  return {Dataset(std::move(train), dataset.num_classes()), Dataset(std::move(test), dataset.num_classes())};
}

std::vector<Series> parse_series_csv(const std::string& contents) {
  std::vector<Series> out;
  std::size_t line_no = 0, pos = 0;
  bool header_seen = false;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    std::string_view line(contents.data() + pos, (nl == std::string::npos ? contents.size() : nl) - pos);
    pos = nl == std::string::npos ? contents.size() : nl + 1;
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.starts_with("source_id")) continue;
    }
    auto fields = text::split(line, ',');
    auto where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() < 3) fail(ErrorCode::Parse, where + "expected source_id,label and at least one value");
    std::optional<int> label;
    try {
      long long l = text::parse_int(fields[1]);
      if (l < -1 || l > 1'000'000) fail(ErrorCode::Parse, "label out of range");
      if (l >= 0) label = static_cast<int>(l);
      std::vector<double> values;
      values.reserve(fields.size() - 2);
      for (std::size_t i = 2; i < fields.size(); ++i) {
        if (text::trim(fields[i]).empty() && i + 1 == fields.size()) break;  // trailing comma
        double v = text::parse_double(fields[i]);
        if (!std::isfinite(v)) fail(ErrorCode::Parse, "non-finite value in column " + std::to_string(i));
        values.push_back(v);
      }
      out.emplace_back(std::move(values), label, std::string(text::trim(fields[0])));
    } catch (const Error& e) {
      fail(ErrorCode::Parse, where + e.what());
    }
  }
  return out;
}

std::vector<Series> load_series_csv(const std::string& path) { return parse_series_csv(text::read_file(path)); }

std::string format_series_csv(std::span<const Series> series) {
  std::size_t width = 0;
  for (const auto& s : series) width = std::max(width, s.size());
  std::string out = "source_id,label";
  for (std::size_t i = 0; i < width; ++i) out += ",v" + std::to_string(i);
  out += '\n';
  for (const auto& s : series) {
    require(s.source_id().find_first_of(",\n\r") == std::string::npos,
            "source_id '" + s.source_id() + "' cannot be written to CSV");
    out += s.source_id();
    out += ',';
    out += std::to_string(s.label().value_or(-1));
    for (double v : s.values()) {
      out += ',';
      out += text::format_double(v);
    }
    out += '\n';
  }
  return out;
}

void save_series_csv(std::span<const Series> series, const std::string& path) {
  text::write_file(path, format_series_csv(series));
}

FoldPlan load_fold_plan_csv(const std::string& path) {
  const std::string contents = text::read_file(path);
  std::map<std::string, int> assignment;
  int max_fold = -1;
  std::size_t line_no = 0, pos = 0;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    std::string_view line(contents.data() + pos, (nl == std::string::npos ? contents.size() : nl) - pos);
    pos = nl == std::string::npos ? contents.size() : nl + 1;
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line == "source_id,fold") continue;
    auto fields = text::split(line, ',');
    if (fields.size() != 2) fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected source_id,fold");
    long long fold = 0;
    try {
      fold = text::parse_int(fields[1]);
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (fold < 0 || fold > 1000) fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": fold out of range");
    if (!assignment.emplace(std::string(text::trim(fields[0])), static_cast<int>(fold)).second)
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": duplicate source_id");
    max_fold = std::max(max_fold, static_cast<int>(fold));
  }
  if (max_fold < 1) fail(ErrorCode::Parse, "fold plan '" + path + "' needs at least two folds");
  return FoldPlan(max_fold + 1, std::move(assignment));
}

void save_fold_plan_csv(const FoldPlan& plan, const std::string& path) {
  std::string out = "source_id,fold\n";
  for (const auto& [id, fold] : plan.assignment()) out += id + ',' + std::to_string(fold) + '\n';
  text::write_file(path, out);
}

}  // namespace ltw
