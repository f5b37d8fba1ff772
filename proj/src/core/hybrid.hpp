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

// Late fusion of the nearest-neighbour vote and the LSTM probabilities: the
// two vectors are added and the largest combined entry wins.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distance.hpp"
#include "lstm.hpp"
#include "nn.hpp"
#include "series.hpp"

namespace ltw {

struct HybridConfig {
  DistanceSpec ltw_spec = DistanceSpec::parse("ltw:G=1-10:cid");
  std::size_t m_neighbors = kDefaultNeighbors;
};

/// argmax(p_ltw + p_lstm), lowest class index on ties.
int fuse(std::span<const double> p_ltw, std::span<const double> p_lstm);

/// One row of the audit trail: both component vectors and all three
/// decisions. pred_ltw is the 1NN decision (the nearest neighbour's label).
struct AuditRecord {
  std::string query_id;
  int true_label = -1;  // -1 when the query is unlabeled
  int pred_ltw = 0;
  int pred_lstm = 0;
  int pred_hybrid = 0;
  ProbabilityVector p_ltw;
  ProbabilityVector p_lstm;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

/// Fusion of precomputed component outputs; the distance row is the query's
/// distances to every training window.
AuditRecord fuse_components(std::span<const double> distances, const Dataset& train, std::size_t m_neighbors,
                            ProbabilityVector p_lstm);

int hybrid_classify(std::span<const double> query, const Dataset& train, const HybridConfig& config,
                    const LstmModel& model);

/// Query ids are "<source_id>#<index in batch>".
std::vector<AuditRecord> hybrid_classify_batch(const Dataset& queries, const Dataset& train,
                                               const HybridConfig& config, const LstmModel& model);

// CSV `query_id,true_label,pred_ltw,pred_lstm,pred_hybrid,p_ltw_0..,p_lstm_0..`.
std::string format_audit_csv(std::span<const AuditRecord> records);
std::vector<AuditRecord> parse_audit_csv(const std::string& contents);
void save_audit_csv(std::span<const AuditRecord> records, const std::string& path);
std::vector<AuditRecord> load_audit_csv(const std::string& path);

}  // namespace ltw
