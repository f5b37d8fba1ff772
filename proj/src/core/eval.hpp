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

// Fold-based experiment driver, metrics, G sweep, kernel timing and report
// emission.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "distance.hpp"
#include "hybrid.hpp"
#include "lstm.hpp"
#include "series.hpp"

namespace ltw {

enum class ClassifierKind { NearestNeighbor, Lstm, Hybrid };

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::NearestNeighbor;
  DistanceSpec spec;                         // NearestNeighbor, Hybrid
  std::size_t m_neighbors = kDefaultNeighbors;  // Hybrid
  TrainConfig train;                         // Lstm, Hybrid

  static ClassifierConfig nearest_neighbor(DistanceSpec spec);
  static ClassifierConfig lstm(TrainConfig train);
  static ClassifierConfig hybrid(DistanceSpec spec, std::size_t m_neighbors, TrainConfig train);

  bool trains() const { return kind != ClassifierKind::NearestNeighbor; }

  /// Stable display name, free of commas, e.g. "1nn[dtw:w=30:cost=sq]".
  std::string name() const;
};

struct ExperimentConfig {
  std::size_t window_length = kDefaultWindowLength;
  std::size_t stride = kDefaultStride;
  std::vector<ClassifierConfig> classifiers;
  int repeats = 1;  // runs per fold for classifiers that train
};

/// Seed used for the LSTM of a given fold and run.
std::uint64_t run_seed(std::uint64_t base, int fold, int run);

struct PredictionRecord {
  std::string classifier;
  int fold = 0;
  int run = 0;
  std::string query_id;
  int true_label = 0;
  int pred = 0;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

struct HybridAudit {
  std::string classifier;
  int fold = 0;
  int run = 0;
  std::vector<AuditRecord> records;
};

struct KernelTiming {
  std::string spec;
  std::size_t evaluations = 0;
  double seconds = 0;

  double ms_per_1000() const { return evaluations ? seconds * 1e6 / static_cast<double>(evaluations) : 0.0; }
};

/// Everything an experiment produced. Metrics are derived from this alone.
struct ExperimentRun {
  std::string config_echo;
  int num_folds = 0;
  std::vector<std::string> classifiers;
  std::vector<PredictionRecord> predictions;
  std::vector<HybridAudit> audits;
  std::vector<KernelTiming> timings;
};

/// Splits every fold test, trains what needs training, classifies every test
/// window. Deterministic in the configured seeds.
ExperimentRun run_experiment(std::span<const Series> traces, const FoldPlan& plan, const ExperimentConfig& config);

/// |A_correct ∪ B_correct| / N.
double union_accuracy(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth);

double accuracy(std::span<const int> pred, std::span<const int> truth);

struct AccuracyCell {
  std::string classifier;
  int fold = 0;
  std::vector<double> runs;
  double mean = 0;
  double stddev = 0;  // sample std, 0 when fewer than 2 runs
};

struct UnionCell {
  std::string classifier;  // the hybrid
  int fold = 0;
  int run = 0;
  double acc_ltw = 0;
  double acc_lstm = 0;
  double union_acc = 0;
  double acc_hybrid = 0;
};

struct ExperimentReport {
  std::vector<std::string> classifiers;
  int num_folds = 0;
  std::vector<AccuracyCell> accuracy;  // classifier-major, fold-minor
  std::vector<UnionCell> unions;
  std::map<std::string, std::vector<std::vector<std::size_t>>> confusion;  // [true][pred], all folds and runs

  const AccuracyCell& cell(const std::string& classifier, int fold) const;
  double mean_accuracy(const std::string& classifier) const;
};

/// Pure function of the predictions and audits.
ExperimentReport build_report(const ExperimentRun& run);

/// Writes accuracy.csv, summary.csv, union.csv, confusion_<k>.csv and
/// gnuplot-ready accuracy.dat / union.dat into dir.
void write_report(const ExperimentReport& report, const std::string& dir);

/// Persists the raw run (predictions.csv, audits/, timing.csv, config.txt)
/// and the report derived from it.
void write_run(const ExperimentRun& run, const std::string& dir);

/// Reads back what write_run persisted.
ExperimentRun load_run(const std::string& dir);

// Per-fold accuracy of 1NN-LTW for each warp set.
struct SweepTable {
  std::vector<std::string> settings;
  std::vector<std::vector<double>> accuracy;  // [fold][setting]
  std::vector<double> mean() const;
};

SweepTable g_sweep(std::span<const Series> traces, const FoldPlan& plan, std::span<const WarpIndexSet> settings,
                   std::size_t window_length = kDefaultWindowLength, std::size_t stride = kDefaultStride);

std::string format_sweep_csv(const SweepTable& table);

struct BenchRow {
  std::string spec;
  std::size_t length = 0;
  double seconds_per_eval = 0;  // median over timed runs
  double ratio = 0;             // against the previous length for the same spec, 0 for the first
};

/// Median wall time per evaluation on random pairs; warmup discarded.
std::vector<BenchRow> bench_kernels(std::span<const std::string> specs, std::span<const std::size_t> lengths,
                                    std::size_t pairs, std::uint64_t seed, int runs = 31);

std::string format_bench_csv(std::span<const BenchRow> rows);

/// Worker count for distance-matrix fills; LTWKIT_THREADS overrides.
unsigned worker_threads();

}  // namespace ltw
