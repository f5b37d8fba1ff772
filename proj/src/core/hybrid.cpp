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
#include "hybrid.hpp"

#include <algorithm>

#include "error.hpp"
#include "text.hpp"

namespace ltw {

int fuse(std::span<const double> p_ltw, std::span<const double> p_lstm) {
  require(p_ltw.size() == p_lstm.size(), [&] {
    return "probability vectors differ in length (" + std::to_string(p_ltw.size()) + " vs " +
           std::to_string(p_lstm.size()) + ")";
  });
  require(!p_ltw.empty(), "empty probability vectors");
  std::size_t best = 0;
  double best_mass = p_ltw[0] + p_lstm[0];
  for (std::size_t c = 1; c < p_ltw.size(); ++c) {
    const double mass = p_ltw[c] + p_lstm[c];
    if (mass > best_mass) best = c, best_mass = mass;
  }
  return static_cast<int>(best);
}

AuditRecord fuse_components(std::span<const double> distances, const Dataset& train, std::size_t m_neighbors,
                            ProbabilityVector p_lstm) {
  AuditRecord r;
  const NeighborList nb = select_neighbors(distances, m_neighbors);
  r.p_ltw = rank_weighted_vote(nb, train);
  r.pred_ltw = train.label_of(nb.front().index);
  require(p_lstm.size() == r.p_ltw.size(), [&] {
    return "lstm emits " + std::to_string(p_lstm.size()) + " classes, training set has " +
           std::to_string(r.p_ltw.size());
  });
  r.p_lstm = std::move(p_lstm);
  r.pred_lstm = static_cast<int>(argmax(r.p_lstm));
  r.pred_hybrid = fuse(r.p_ltw, r.p_lstm);
  return r;
}

namespace {

AuditRecord classify_one(std::span<const double> query, const Dataset& train, const HybridConfig& config,
                         const LstmModel& model) {
  std::vector<double> distances;
  try {
    distances = distances_to(query, train, config.ltw_spec);
  } catch (const Error& e) {
    fail(e.code(), std::string("nearest-neighbour component: ") + e.what());
  }
  ProbabilityVector p_lstm;
  try {
    p_lstm = predict_prob(model, query);
  } catch (const Error& e) {
    fail(e.code(), std::string("lstm component: ") + e.what());
  }
  return fuse_components(distances, train, config.m_neighbors, std::move(p_lstm));
}

}  // namespace

int hybrid_classify(std::span<const double> query, const Dataset& train, const HybridConfig& config,
                    const LstmModel& model) {
  require(query.size() == train.window_length(), [&] {
    return "query length " + std::to_string(query.size()) + " differs from window length " +
           std::to_string(train.window_length());
  });
  return classify_one(query, train, config, model).pred_hybrid;
}

std::vector<AuditRecord> hybrid_classify_batch(const Dataset& queries, const Dataset& train,
                                               const HybridConfig& config, const LstmModel& model) {
  std::vector<AuditRecord> out;
  out.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Series& q = queries[i];
    require(q.size() == train.window_length(), "query length differs from window length");
    AuditRecord r = classify_one(q.values(), train, config, model);
    r.query_id = q.source_id() + '#' + std::to_string(i);
    r.true_label = q.label().value_or(-1);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_audit_csv(std::span<const AuditRecord> records) {
  const std::size_t classes = records.empty() ? 0 : records.front().p_ltw.size();
  std::string out = "query_id,true_label,pred_ltw,pred_lstm,pred_hybrid";
  for (std::size_t c = 0; c < classes; ++c) out += ",p_ltw_" + std::to_string(c);
  for (std::size_t c = 0; c < classes; ++c) out += ",p_lstm_" + std::to_string(c);
  out += '\n';
  for (const auto& r : records) {
    require(r.p_ltw.size() == classes && r.p_lstm.size() == classes, "audit records disagree on class count");
    out += r.query_id + ',' + std::to_string(r.true_label) + ',' + std::to_string(r.pred_ltw) + ',' +
           std::to_string(r.pred_lstm) + ',' + std::to_string(r.pred_hybrid);
    for (double p : r.p_ltw) out += ',' + text::format_double(p);
    for (double p : r.p_lstm) out += ',' + text::format_double(p);
    out += '\n';
  }
  return out;
}

std::vector<AuditRecord> parse_audit_csv(const std::string& contents) {
  std::vector<AuditRecord> out;
  std::size_t pos = 0, line_no = 0, classes = 0;
  bool header = false;
  while (pos < contents.size()) {
    auto nl = contents.find('\n', pos);
    std::string_view line(contents.data() + pos, (nl == std::string::npos ? contents.size() : nl) - pos);
    pos = nl == std::string::npos ? contents.size() : nl + 1;
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    auto fields = text::split(line, ',');
    if (!header) {
      if (fields.size() < 5 || fields[0] != "query_id" || (fields.size() - 5) % 2 != 0)
        fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": not an audit header");
      classes = (fields.size() - 5) / 2;
      header = true;
      continue;
    }
    if (fields.size() != 5 + 2 * classes)
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(5 + 2 * classes) +
                                 " fields");
    try {
      AuditRecord r;
      r.query_id = std::string(fields[0]);
      r.true_label = static_cast<int>(text::parse_int(fields[1]));
      r.pred_ltw = static_cast<int>(text::parse_int(fields[2]));
      r.pred_lstm = static_cast<int>(text::parse_int(fields[3]));
      r.pred_hybrid = static_cast<int>(text::parse_int(fields[4]));
      for (std::size_t c = 0; c < classes; ++c) r.p_ltw.push_back(text::parse_double(fields[5 + c]));
      for (std::size_t c = 0; c < classes; ++c) r.p_lstm.push_back(text::parse_double(fields[5 + classes + c]));
      out.push_back(std::move(r));
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_audit_csv(std::span<const AuditRecord> records, const std::string& path) {
  text::write_file(path, format_audit_csv(records));
}

std::vector<AuditRecord> load_audit_csv(const std::string& path) { return parse_audit_csv(text::read_file(path)); }

}  // namespace ltw
