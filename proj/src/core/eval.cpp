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
#include "eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "error.hpp"
#include "nn.hpp"
#include "random.hpp"
#include "text.hpp"

namespace ltw {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

template <class F>
void parallel_rows(std::size_t rows, F&& body) {
  const unsigned workers = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(rows, 1));
  if (workers <= 1) {
    for (std::size_t r = 0; r < rows; ++r) body(r);
    return;
  }
  // Static interleaved partition; every row is written by exactly one worker.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t r = w; r < rows; r += workers) body(r);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string train_key(const TrainConfig& t) {
  return "m=" + std::to_string(t.hidden) + ":b=" + std::to_string(t.batch_size) + ":e=" +
         std::to_string(t.max_epochs) + ":lr=" + text::format_double(t.learning_rate) +
         ":S=" + std::to_string(t.levels) + ":seed=" + std::to_string(t.seed);
}

double sample_std(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::vector<std::string_view> lines_of(const std::string& contents) {
  std::vector<std::string_view> out;
  for (auto line : text::split(contents, '\n')) {
    line = text::trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("LTWKIT_THREADS")) {
    try {
      long long n = text::parse_int(env);
      if (n >= 1) return static_cast<unsigned>(std::min<long long>(n, 256));
    } catch (const Error&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ClassifierConfig ClassifierConfig::nearest_neighbor(DistanceSpec spec) {
  ClassifierConfig c;
  c.kind = ClassifierKind::NearestNeighbor;
  c.spec = std::move(spec);
  return c;
}

ClassifierConfig ClassifierConfig::lstm(TrainConfig train) {
  ClassifierConfig c;
  c.kind = ClassifierKind::Lstm;
  c.train = train;
  return c;
}

ClassifierConfig ClassifierConfig::hybrid(DistanceSpec spec, std::size_t m_neighbors, TrainConfig train) {
  ClassifierConfig c;
  c.kind = ClassifierKind::Hybrid;
  c.spec = std::move(spec);
  c.m_neighbors = m_neighbors;
  c.train = train;
  return c;
}

std::string ClassifierConfig::name() const {
  switch (kind) {
    case ClassifierKind::NearestNeighbor:
      return "1nn[" + spec.to_string() + "]";
    case ClassifierKind::Lstm:
      return "lstm[" + train_key(train) + "]";
    case ClassifierKind::Hybrid:
      return "lstm/ltw[" + spec.to_string() + ":k=" + std::to_string(m_neighbors) + "|" + train_key(train) + "]";
  }
  return "?";
}

std::uint64_t run_seed(std::uint64_t base, int fold, int run) {
  return base + 1000003ull * static_cast<std::uint64_t>(run) + 7919ull * static_cast<std::uint64_t>(fold);
}

ExperimentRun run_experiment(std::span<const Series> traces, const FoldPlan& plan, const ExperimentConfig& config) {
  require(!config.classifiers.empty(), "experiment has no classifiers");
  require(config.repeats >= 1, "repeats must be >= 1");
  const Dataset all = Dataset::from_windows(cut_all(traces, config.window_length, config.stride));
  require(!all.empty(), "no trace is long enough for windows of length " + std::to_string(config.window_length));

  ExperimentRun run;
  run.num_folds = plan.num_folds();
  std::string& echo = run.config_echo;
  echo += "window_length=" + std::to_string(config.window_length) + '\n';
  echo += "stride=" + std::to_string(config.stride) + '\n';
  echo += "repeats=" + std::to_string(config.repeats) + '\n';
  echo += "num_folds=" + std::to_string(plan.num_folds()) + '\n';
  echo += "traces=" + std::to_string(traces.size()) + '\n';
  echo += "windows=" + std::to_string(all.size()) + '\n';
  echo += "num_classes=" + std::to_string(all.num_classes()) + '\n';
  for (const auto& c : config.classifiers) {
    run.classifiers.push_back(c.name());
    echo += "classifier=" + c.name() + '\n';
    if (!c.trains()) continue;
    for (int f = 0; f < plan.num_folds(); ++f)
      for (int r = 0; r < config.repeats; ++r)
        echo += "seed[" + c.name() + "][fold=" + std::to_string(f) + "][run=" + std::to_string(r) +
                "]=" + std::to_string(run_seed(c.train.seed, f, r)) + '\n';
  }
  // Reject bad kernel settings before any fold trains.
  for (const auto& c : config.classifiers) {
    if (c.kind == ClassifierKind::Lstm) continue;
    try {
      c.spec.validate(config.window_length);
    } catch (const Error& e) {
      fail(e.code(), c.name() + ": " + e.what());
    }
  }

  std::map<std::string, KernelTiming> timings;
  for (int fold = 0; fold < plan.num_folds(); ++fold) {
    const std::string where = "fold " + std::to_string(fold);
    const Split sp = split(all, plan, fold);
    const Dataset& train = sp.train;
    const Dataset& test = sp.test;
    std::vector<int> truth(test.size());
    std::vector<std::string> ids(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      truth[i] = test.label_of(i);
      ids[i] = test[i].source_id() + '#' + std::to_string(i);
    }

    std::map<std::string, std::vector<double>> matrices;  // row-major test x train
    auto matrix = [&](const DistanceSpec& spec) -> const std::vector<double>& {
      const std::string key = spec.to_string();
      auto it = matrices.find(key);
      if (it != matrices.end()) return it->second;
      std::vector<double> m(test.size() * train.size());
      const auto t0 = Clock::now();
      parallel_rows(test.size(), [&](std::size_t q) {
        const auto query = test[q].values();
        for (std::size_t j = 0; j < train.size(); ++j) m[q * train.size() + j] = evaluate(spec, query, train[j].values());
      });
      auto& t = timings[key];
      t.spec = key;
      t.evaluations += m.size();
      t.seconds += std::chrono::duration<double>(Clock::now() - t0).count();
      return matrices.emplace(key, std::move(m)).first->second;
    };

    std::map<std::string, std::vector<ProbabilityVector>> lstm_probs;
    auto lstm_outputs = [&](const TrainConfig& base, int r) -> const std::vector<ProbabilityVector>& {
      const std::string key = train_key(base) + "#" + std::to_string(r);
      auto it = lstm_probs.find(key);
      if (it != lstm_probs.end()) return it->second;
      TrainConfig tc = base;
      tc.seed = run_seed(base.seed, fold, r);
      tc.batch_size = std::min(tc.batch_size, train.size());
      const LstmModel model = ltw::train(train, tc);
      std::vector<ProbabilityVector> probs(test.size());
      parallel_rows(test.size(), [&](std::size_t q) { probs[q] = predict_prob(model, test[q].values()); });
      return lstm_probs.emplace(key, std::move(probs)).first->second;
    };

    for (const auto& c : config.classifiers) {
      const std::string name = c.name();
      try {
        switch (c.kind) {
          case ClassifierKind::NearestNeighbor: {
            const auto& m = matrix(c.spec);
            for (std::size_t q = 0; q < test.size(); ++q) {
              const std::span<const double> row(m.data() + q * train.size(), train.size());
              const auto nb = select_neighbors(row, 1);
              run.predictions.push_back({name, fold, 0, ids[q], truth[q], train.label_of(nb.front().index)});
            }
            break;
          }
          case ClassifierKind::Lstm:
            for (int r = 0; r < config.repeats; ++r) {
              const auto& probs = lstm_outputs(c.train, r);
              for (std::size_t q = 0; q < test.size(); ++q)
                run.predictions.push_back({name, fold, r, ids[q], truth[q], static_cast<int>(argmax(probs[q]))});
            }
            break;
          case ClassifierKind::Hybrid: {
            const auto& m = matrix(c.spec);
            for (int r = 0; r < config.repeats; ++r) {
              const auto& probs = lstm_outputs(c.train, r);
              HybridAudit audit{name, fold, r, {}};
              for (std::size_t q = 0; q < test.size(); ++q) {
                const std::span<const double> row(m.data() + q * train.size(), train.size());
                AuditRecord rec = fuse_components(row, train, c.m_neighbors, probs[q]);
                rec.query_id = ids[q];
                rec.true_label = truth[q];
                run.predictions.push_back({name, fold, r, ids[q], truth[q], rec.pred_hybrid});
                audit.records.push_back(std::move(rec));
              }
              run.audits.push_back(std::move(audit));
            }
            break;
          }
        }
      } catch (const Error& e) {
        fail(e.code(), where + ", " + name + ": " + e.what());
      }
    }
  }
  for (auto& [key, t] : timings) run.timings.push_back(t);
  return run;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  require(pred.size() == truth.size(), "prediction and truth lengths differ");
  require(!truth.empty(), "accuracy of an empty set");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) ok += pred[i] == truth[i];
  return static_cast<double>(ok) / static_cast<double>(truth.size());
}

double union_accuracy(std::span<const int> pred_a, std::span<const int> pred_b, std::span<const int> truth) {
  require(pred_a.size() == truth.size() && pred_b.size() == truth.size(),
          "union accuracy needs equal-length prediction lists (" + std::to_string(pred_a.size()) + ", " +
              std::to_string(pred_b.size()) + ", " + std::to_string(truth.size()) + ")");
  require(!truth.empty(), "union accuracy of an empty set");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) ok += pred_a[i] == truth[i] || pred_b[i] == truth[i];
  return static_cast<double>(ok) / static_cast<double>(truth.size());
}

const AccuracyCell& ExperimentReport::cell(const std::string& classifier, int fold) const {
  for (const auto& c : accuracy)
    if (c.classifier == classifier && c.fold == fold) return c;
  fail(ErrorCode::OutOfRange, "no accuracy for '" + classifier + "' on fold " + std::to_string(fold));
}

double ExperimentReport::mean_accuracy(const std::string& classifier) const {
  double sum = 0;
  int n = 0;
  for (const auto& c : accuracy)
    if (c.classifier == classifier) sum += c.mean, ++n;
  require(n > 0, "no accuracy for '" + classifier + "'");
  return sum / n;
}

ExperimentReport build_report(const ExperimentRun& run) {
  ExperimentReport rep;
  rep.classifiers = run.classifiers;
  rep.num_folds = run.num_folds;

  // (classifier, fold, run) -> (correct, total)
  std::map<std::tuple<std::string, int, int>, std::pair<std::size_t, std::size_t>> counts;
  int max_label = 0;
  for (const auto& p : run.predictions) {
    auto& c = counts[{p.classifier, p.fold, p.run}];
    c.first += p.pred == p.true_label;
    ++c.second;
    max_label = std::max({max_label, p.pred, p.true_label});
  }
  for (const auto& name : rep.classifiers) {
    for (int f = 0; f < rep.num_folds; ++f) {
      AccuracyCell cell;
      cell.classifier = name;
      cell.fold = f;
      for (auto it = counts.lower_bound({name, f, 0}); it != counts.end(); ++it) {
        const auto& [key, c] = *it;
        if (std::get<0>(key) != name || std::get<1>(key) != f) break;
        cell.runs.push_back(static_cast<double>(c.first) / static_cast<double>(c.second));
      }
      if (cell.runs.empty()) continue;
      double sum = 0;
      for (double a : cell.runs) sum += a;
      cell.mean = sum / static_cast<double>(cell.runs.size());
      cell.stddev = sample_std(cell.runs, cell.mean);
      rep.accuracy.push_back(std::move(cell));
    }
  }

  const auto classes = static_cast<std::size_t>(max_label + 1);
  for (const auto& name : rep.classifiers)
    rep.confusion[name] = std::vector<std::vector<std::size_t>>(classes, std::vector<std::size_t>(classes, 0));
  for (const auto& p : run.predictions)
    if (p.true_label >= 0) ++rep.confusion[p.classifier][static_cast<std::size_t>(p.true_label)][static_cast<std::size_t>(p.pred)];

  for (const auto& a : run.audits) {
    std::vector<int> truth, ltw, lstm, hyb;
    for (const auto& r : a.records) {
      truth.push_back(r.true_label);
      ltw.push_back(r.pred_ltw);
      lstm.push_back(r.pred_lstm);
      hyb.push_back(r.pred_hybrid);
    }
    if (truth.empty()) continue;
    rep.unions.push_back({a.classifier, a.fold, a.run, accuracy(ltw, truth), accuracy(lstm, truth),
                          union_accuracy(ltw, lstm, truth), accuracy(hyb, truth)});
  }
  return rep;
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path root(dir);

  std::string acc = "classifier,fold,run,accuracy\n";
  std::string summary = "classifier,fold,runs,mean,std\n";
  for (const auto& c : report.accuracy) {
    for (std::size_t r = 0; r < c.runs.size(); ++r)
      acc += csv_safe(c.classifier) + ',' + std::to_string(c.fold) + ',' + std::to_string(r) + ',' +
             text::format_double(c.runs[r]) + '\n';
    summary += csv_safe(c.classifier) + ',' + std::to_string(c.fold) + ',' + std::to_string(c.runs.size()) + ',' +
               text::format_double(c.mean) + ',' + (c.runs.size() >= 2 ? text::format_double(c.stddev) : "") + '\n';
  }
  text::write_file((root / "accuracy.csv").string(), acc);
  text::write_file((root / "summary.csv").string(), summary);

  std::string uni = "classifier,fold,run,acc_ltw,acc_lstm,union,acc_hybrid\n";
  for (const auto& u : report.unions)
    uni += csv_safe(u.classifier) + ',' + std::to_string(u.fold) + ',' + std::to_string(u.run) + ',' +
           text::format_double(u.acc_ltw) + ',' + text::format_double(u.acc_lstm) + ',' +
           text::format_double(u.union_acc) + ',' + text::format_double(u.acc_hybrid) + '\n';
  text::write_file((root / "union.csv").string(), uni);

  std::string legend = "index,classifier\n";
  for (std::size_t k = 0; k < report.classifiers.size(); ++k) {
    const auto& name = report.classifiers[k];
    legend += std::to_string(k) + ',' + csv_safe(name) + '\n';
    auto it = report.confusion.find(name);
    if (it == report.confusion.end()) continue;
    std::string conf = "true\\pred";
    for (std::size_t c = 0; c < it->second.size(); ++c) conf += ',' + std::to_string(c);
    conf += '\n';
    for (std::size_t t = 0; t < it->second.size(); ++t) {
      conf += std::to_string(t);
      for (auto n : it->second[t]) conf += ',' + std::to_string(n);
      conf += '\n';
    }
    text::write_file((root / ("confusion_" + std::to_string(k) + ".csv")).string(), conf);
  }
  text::write_file((root / "classifiers.csv").string(), legend);

  // gnuplot: one row per fold, one column per classifier (mean over runs).
  std::string dat = "# fold";
  for (std::size_t k = 0; k < report.classifiers.size(); ++k) dat += " c" + std::to_string(k);
  dat += "\n";
  for (std::size_t k = 0; k < report.classifiers.size(); ++k) dat += "# c" + std::to_string(k) + " = " + report.classifiers[k] + '\n';
  for (int f = 0; f < report.num_folds; ++f) {
    dat += std::to_string(f);
    for (const auto& name : report.classifiers) {
      double v = std::nan("");
      for (const auto& c : report.accuracy)
        if (c.classifier == name && c.fold == f) v = c.mean;
      dat += ' ' + (std::isnan(v) ? std::string("NaN") : text::format_double(v));
    }
    dat += '\n';
  }
  text::write_file((root / "accuracy.dat").string(), dat);

  std::string udat = "# fold run acc_ltw acc_lstm union acc_hybrid\n";
  for (const auto& u : report.unions)
    udat += std::to_string(u.fold) + ' ' + std::to_string(u.run) + ' ' + text::format_double(u.acc_ltw) + ' ' +
            text::format_double(u.acc_lstm) + ' ' + text::format_double(u.union_acc) + ' ' +
            text::format_double(u.acc_hybrid) + '\n';
  text::write_file((root / "union.dat").string(), udat);
}

void write_run(const ExperimentRun& run, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root / "audits");
  std::string pred = "classifier,fold,run,query_id,true_label,pred\n";
  for (const auto& p : run.predictions)
    pred += csv_safe(p.classifier) + ',' + std::to_string(p.fold) + ',' + std::to_string(p.run) + ',' + p.query_id +
            ',' + std::to_string(p.true_label) + ',' + std::to_string(p.pred) + '\n';
  text::write_file((root / "predictions.csv").string(), pred);

  std::string index = "classifier,fold,run,file\n";
  for (const auto& a : run.audits) {
    const auto k = static_cast<std::size_t>(
        std::find(run.classifiers.begin(), run.classifiers.end(), a.classifier) - run.classifiers.begin());
    const std::string file = "c" + std::to_string(k) + "_fold" + std::to_string(a.fold) + "_run" + std::to_string(a.run) + ".csv";
    save_audit_csv(a.records, (root / "audits" / file).string());
    index += csv_safe(a.classifier) + ',' + std::to_string(a.fold) + ',' + std::to_string(a.run) + ',' + file + '\n';
  }
  text::write_file((root / "audits" / "index.csv").string(), index);

  std::string timing = "spec,evaluations,seconds,ms_per_1000\n";
  for (const auto& t : run.timings)
    timing += t.spec + ',' + std::to_string(t.evaluations) + ',' + text::format_double(t.seconds) + ',' +
              text::format_double(t.ms_per_1000()) + '\n';
  text::write_file((root / "timing.csv").string(), timing);
  text::write_file((root / "config.txt").string(), run.config_echo);
  write_report(build_report(run), dir);
}

ExperimentRun load_run(const std::string& dir) {
  const fs::path root(dir);
  ExperimentRun run;
  const std::string pred_text = text::read_file((root / "predictions.csv").string());
  bool header = true;
  for (auto line : lines_of(pred_text)) {
    if (header) {
      header = false;
      continue;
    }
    auto f = text::split(line, ',');
    if (f.size() != 6) fail(ErrorCode::Parse, "predictions.csv: expected 6 fields");
    PredictionRecord p{std::string(f[0]), static_cast<int>(text::parse_int(f[1])), static_cast<int>(text::parse_int(f[2])),
                       std::string(f[3]), static_cast<int>(text::parse_int(f[4])), static_cast<int>(text::parse_int(f[5]))};
    if (std::find(run.classifiers.begin(), run.classifiers.end(), p.classifier) == run.classifiers.end())
      run.classifiers.push_back(p.classifier);
    run.num_folds = std::max(run.num_folds, p.fold + 1);
    run.predictions.push_back(std::move(p));
  }
  const fs::path index = root / "audits" / "index.csv";
  if (fs::exists(index)) {
    header = true;
    for (auto line : lines_of(text::read_file(index.string()))) {
      if (header) {
        header = false;
        continue;
      }
      auto f = text::split(line, ',');
      if (f.size() != 4) fail(ErrorCode::Parse, "audits/index.csv: expected 4 fields");
      run.audits.push_back({std::string(f[0]), static_cast<int>(text::parse_int(f[1])),
                            static_cast<int>(text::parse_int(f[2])),
                            load_audit_csv((root / "audits" / std::string(f[3])).string())});
    }
  }
  if (fs::exists(root / "config.txt")) {
    run.config_echo = text::read_file((root / "config.txt").string());
    for (auto line : lines_of(run.config_echo))
      if (line.starts_with("num_folds=")) run.num_folds = static_cast<int>(text::parse_int(line.substr(10)));
  }
  return run;
}

std::vector<double> SweepTable::mean() const {
  std::vector<double> m(settings.size(), 0.0);
  for (const auto& row : accuracy)
    for (std::size_t s = 0; s < row.size(); ++s) m[s] += row[s] / static_cast<double>(accuracy.size());
  return m;
}

SweepTable g_sweep(std::span<const Series> traces, const FoldPlan& plan, std::span<const WarpIndexSet> settings,
                   std::size_t window_length, std::size_t stride) {
  require(!settings.empty(), "g_sweep needs at least one warp set");
  ExperimentConfig cfg;
  cfg.window_length = window_length;
  cfg.stride = stride;
  for (const auto& g : settings) {
    DistanceSpec spec;
    spec.kind = DistanceKind::Ltw;
    spec.offsets = g;
    cfg.classifiers.push_back(ClassifierConfig::nearest_neighbor(spec));
  }
  const ExperimentReport rep = build_report(run_experiment(traces, plan, cfg));
  SweepTable table;
  for (const auto& g : settings) table.settings.push_back("G=" + g.to_string());
  for (int f = 0; f < plan.num_folds(); ++f) {
    std::vector<double> row;
    for (const auto& c : cfg.classifiers) row.push_back(rep.cell(c.name(), f).mean);
    table.accuracy.push_back(std::move(row));
  }
  return table;
}

std::string format_sweep_csv(const SweepTable& table) {
  std::string out = "fold";
  for (const auto& s : table.settings) out += ',' + s;
  out += '\n';
  for (std::size_t f = 0; f < table.accuracy.size(); ++f) {
    out += std::to_string(f);
    for (double a : table.accuracy[f]) out += ',' + text::format_double(a);
    out += '\n';
  }
  out += "mean";
  for (double a : table.mean()) out += ',' + text::format_double(a);
  out += '\n';
  return out;
}

std::vector<BenchRow> bench_kernels(std::span<const std::string> specs, std::span<const std::size_t> lengths,
                                    std::size_t pairs, std::uint64_t seed, int runs) {
  require(!specs.empty() && !lengths.empty(), "bench needs specs and lengths");
  require(pairs >= 100, "bench needs at least 100 pairs per length");
  require(runs >= 1, "bench needs at least one timed run");
  for (std::size_t i = 1; i < lengths.size(); ++i) require(lengths[i] > lengths[i - 1], "bench lengths must increase");

  std::vector<BenchRow> rows;
  volatile double sink = 0;
  for (const auto& text_spec : specs) {
    const DistanceSpec spec = DistanceSpec::parse(text_spec);
    struct Case {
      std::vector<std::vector<double>> xs, ys;
      std::size_t reps = 1;
      std::vector<double> samples;
    };
    std::vector<Case> cases(lengths.size());
    auto pass = [&](const Case& c) {
      double acc = 0;
      for (std::size_t p = 0; p < pairs; ++p) acc += evaluate(spec, c.xs[p], c.ys[p]);
      sink = sink + acc;
    };
    for (std::size_t l = 0; l < lengths.size(); ++l) {
      const std::size_t n = lengths[l];
      spec.validate(n);
      Rng rng(seed + n);
      auto& c = cases[l];
      c.xs.assign(pairs, std::vector<double>(n));
      c.ys.assign(pairs, std::vector<double>(n));
      for (std::size_t p = 0; p < pairs; ++p)
        for (std::size_t i = 0; i < n; ++i) c.xs[p][i] = rng.normal(), c.ys[p][i] = rng.normal();
      // Warmup, then size the repetitions so each timed run lasts about 8 ms.
      const auto t0 = Clock::now();
      pass(c);
      const double one = std::chrono::duration<double>(Clock::now() - t0).count();
      c.reps = static_cast<std::size_t>(std::max(1.0, std::ceil(0.008 / std::max(one, 1e-9))));
    }
    // Keep the core busy briefly so clocks settle before anything is timed.
    const auto settle = Clock::now();
    while (std::chrono::duration<double>(Clock::now() - settle).count() < 0.1)
      for (const auto& c : cases) pass(c);
    // Lengths alternate within each round so that machine drift hits all of them alike.
    for (int r = 0; r < runs; ++r)
      for (auto& c : cases) {
        const auto t0 = Clock::now();
        for (std::size_t k = 0; k < c.reps; ++k) pass(c);
        c.samples.push_back(std::chrono::duration<double>(Clock::now() - t0).count() /
                            static_cast<double>(c.reps * pairs));
      }
    double prev = 0;
    for (std::size_t l = 0; l < lengths.size(); ++l) {
      auto& samples = cases[l].samples;
      std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2), samples.end());
      const double median = samples[samples.size() / 2];
      rows.push_back({spec.to_string(), lengths[l], median, prev > 0 ? median / prev : 0.0});
      prev = median;
    }
  }
  return rows;
}

std::string format_bench_csv(std::span<const BenchRow> rows) {
  std::string out = "spec,n,seconds_per_eval,ratio_vs_prev\n";
  for (const auto& r : rows)
    out += r.spec + ',' + std::to_string(r.length) + ',' + text::format_double(r.seconds_per_eval) + ',' +
           (r.ratio > 0 ? text::format_double(r.ratio) : std::string()) + '\n';
  return out;
}

}  // namespace ltw
