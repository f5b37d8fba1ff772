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
// ltwkit command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "ltwkit/ltwkit.h"

namespace {

// Nonzero status from the library, carrying its message.
struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(ltw_status status) {
  if (status != LTW_OK) throw LibraryError(std::string(ltw_status_name(status)) + ": " + ltw_last_error());
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using SeriesList = std::unique_ptr<ltw_series_list, Deleter<ltw_series_list, ltw_series_list_destroy>>;
using FoldPlan = std::unique_ptr<ltw_fold_plan, Deleter<ltw_fold_plan, ltw_fold_plan_destroy>>;
using Distance = std::unique_ptr<ltw_distance, Deleter<ltw_distance, ltw_distance_destroy>>;
using Model = std::unique_ptr<ltw_lstm_model, Deleter<ltw_lstm_model, ltw_lstm_model_destroy>>;
using Audit = std::unique_ptr<ltw_audit, Deleter<ltw_audit, ltw_audit_destroy>>;
using Profiles = std::unique_ptr<ltw_profiles, Deleter<ltw_profiles, ltw_profiles_destroy>>;
using Experiment = std::unique_ptr<ltw_experiment, Deleter<ltw_experiment, ltw_experiment_destroy>>;
using Report = std::unique_ptr<ltw_report, Deleter<ltw_report, ltw_report_destroy>>;

SeriesList load_series(const std::string& path) {
  ltw_series_list* p = nullptr;
  check(ltw_series_list_load_csv(path.c_str(), &p));
  return SeriesList(p);
}

FoldPlan load_plan(const std::string& path) {
  ltw_fold_plan* p = nullptr;
  check(ltw_fold_plan_load_csv(path.c_str(), &p));
  return FoldPlan(p);
}

Distance parse_distance(const std::string& text) {
  ltw_distance* p = nullptr;
  check(ltw_distance_parse(text.c_str(), &p));
  return Distance(p);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

// Writes to path, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// Library calls that only write files need a real path; stdout goes through a temp file.
template <typename Write>
void emit_via_file(const std::string& path, Write&& write) {
  if (!path.empty() && path != "-") {
    write(path);
    return;
  }
  char name[] = "/tmp/ltwkit-XXXXXX";
  const int fd = mkstemp(name);
  if (fd < 0) throw std::runtime_error("cannot create a temporary file");
  close(fd);
  try {
    write(std::string(name));
    std::ifstream in(name, std::ios::binary);
    std::cout << in.rdbuf();
  } catch (...) {
    std::remove(name);
    throw;
  }
  std::remove(name);
}

struct LstmOptions {
  ltw_lstm_config config{};

  void add_to(CLI::App* cmd) {
    ltw_lstm_config_default(&config);
    cmd->add_option("--hidden", config.hidden, "LSTM hidden width")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--batch", config.batch_size, "minibatch size")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--epochs", config.max_epochs, "training epochs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--lr", config.learning_rate, "SGD learning rate")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--levels", config.levels, "discretization levels")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "initialization and shuffling seed")->capture_default_str();
  }
};

struct WindowOptions {
  std::size_t length = 200;
  std::size_t stride = 50;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--length", length, "window length")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--stride", stride, "window stride")->capture_default_str()->check(CLI::PositiveNumber);
  }
};

std::string per_fold_csv(const ltw_report* report) {
  std::ostringstream os;
  os << "classifier,fold,accuracy,std,runs\n";
  const int folds = ltw_report_num_folds(report);
  for (std::size_t c = 0; c < ltw_report_num_classifiers(report); ++c) {
    double total = 0;
    for (int f = 0; f < folds; ++f) {
      double mean = 0, sd = 0;
      std::size_t runs = 0;
      check(ltw_report_accuracy(report, c, f, &mean, &sd, &runs));
      total += mean;
      os << ltw_report_classifier_name(report, c) << ',' << f << ',' << fmt(mean) << ',' << fmt(sd) << ',' << runs
         << '\n';
    }
    os << ltw_report_classifier_name(report, c) << ",mean," << fmt(total / folds) << ",,\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ltwkit: elastic time-series distances, LSTM and hybrid classifiers for power traces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ltw_version()));

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic trace corpus");
  std::uint64_t gen_seed = 1;
  std::size_t gen_per_class = 40, gen_min_len = 220;
  std::string gen_out, gen_profiles, gen_dump;
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--per-class", gen_per_class, "traces per class")->capture_default_str();
  gen->add_option("--min-len", gen_min_len, "minimum trace length")->capture_default_str();
  gen->add_option("--profiles", gen_profiles, "profile bundle (default: built-in)");
  gen->add_option("--dump-profiles", gen_dump, "also write the profile bundle used");
  gen->add_option("--out", gen_out, "corpus CSV (default: stdout)");

  // cut
  auto* cut = app.add_subcommand("cut", "cut traces into fixed-length windows");
  std::string cut_in, cut_out;
  WindowOptions cut_win;
  cut->add_option("--in", cut_in, "trace CSV")->required();
  cut->add_option("--out", cut_out, "window CSV (default: stdout)");
  cut_win.add_to(cut);

  // folds
  auto* folds = app.add_subcommand("folds", "assign traces to folds, stratified by label");
  std::string folds_in, folds_out;
  int folds_k = 5;
  std::uint64_t folds_seed = 1;
  folds->add_option("--in", folds_in, "trace CSV")->required();
  folds->add_option("-k,--k", folds_k, "number of folds")->capture_default_str();
  folds->add_option("--seed", folds_seed, "shuffling seed")->capture_default_str();
  folds->add_option("--out", folds_out, "fold plan CSV (default: stdout)");

  // classify
  auto* classify = app.add_subcommand("classify", "1NN accuracy per fold for one distance");
  std::string cls_spec, cls_corpus, cls_folds, cls_out;
  WindowOptions cls_win;
  classify->add_option("--spec", cls_spec, "distance, e.g. dtw:w=30 or ltw:G=1-10:cid")->required();
  classify->add_option("--corpus", cls_corpus, "trace CSV")->required();
  classify->add_option("--folds", cls_folds, "fold plan CSV")->required();
  classify->add_option("--out", cls_out, "accuracy CSV (default: stdout)");
  cls_win.add_to(classify);

  // train-lstm
  auto* train = app.add_subcommand("train-lstm", "train the LSTM classifier on a window CSV");
  std::string tr_in, tr_out, tr_trace;
  LstmOptions tr_opts;
  train->add_option("--train", tr_in, "labeled window CSV")->required();
  train->add_option("--out", tr_out, "checkpoint file")->required();
  train->add_option("--loss-trace", tr_trace, "per-epoch loss CSV");
  tr_opts.add_to(train);

  // hybrid
  auto* hybrid = app.add_subcommand("hybrid", "fuse 1NN rank votes with LSTM probabilities");
  std::string hy_train, hy_test, hy_model, hy_spec = "ltw:G=1-10:cid", hy_out;
  std::size_t hy_m = 5;
  hybrid->add_option("--train", hy_train, "labeled training window CSV")->required();
  hybrid->add_option("--test", hy_test, "query window CSV")->required();
  hybrid->add_option("--model", hy_model, "LSTM checkpoint")->required();
  hybrid->add_option("--spec", hy_spec, "nearest-neighbour distance")->capture_default_str();
  hybrid->add_option("-m,--neighbors", hy_m, "neighbours in the rank-weighted vote")->capture_default_str();
  hybrid->add_option("--out", hy_out, "audit CSV (default: stdout)");

  // sweep-g
  auto* sweep = app.add_subcommand("sweep-g", "1NN-LTW accuracy per fold across warp index sets");
  std::string sw_corpus, sw_folds, sw_out;
  std::vector<std::string> sw_sets{"1", "1-4", "1-8", "1-12"};
  WindowOptions sw_win;
  sweep->add_option("--corpus", sw_corpus, "trace CSV")->required();
  sweep->add_option("--folds", sw_folds, "fold plan CSV")->required();
  sweep->add_option("-G,--G", sw_sets, "warp index set, repeatable")->capture_default_str();
  sweep->add_option("--out", sw_out, "sweep CSV (default: stdout)");
  sw_win.add_to(sweep);

  // bench
  auto* bench = app.add_subcommand("bench", "time distance kernels across series lengths");
  std::vector<std::string> be_specs{"ltw:G=10", "dtw"};
  std::vector<std::size_t> be_lengths{100, 200, 400, 800};
  std::size_t be_pairs = 100;
  std::uint64_t be_seed = 1;
  std::string be_out;
  bench->add_option("--spec", be_specs, "distance, repeatable")->capture_default_str();
  bench->add_option("--lengths", be_lengths, "increasing series lengths")->delimiter(',')->capture_default_str();
  bench->add_option("--pairs", be_pairs, "random pairs per length (>= 100)")->capture_default_str();
  bench->add_option("--seed", be_seed, "pair generator seed")->capture_default_str();
  bench->add_option("--out", be_out, "bench CSV (default: stdout)");

  // report
  auto* report = app.add_subcommand("report", "metrics from a saved run directory or a hybrid audit");
  std::string rep_run, rep_audit, rep_out;
  auto* rep_run_opt = report->add_option("--run", rep_run, "run directory written by `experiment`");
  auto* rep_audit_opt = report->add_option("--audit", rep_audit, "hybrid audit CSV");
  report->add_option("--out", rep_out, "output directory for --run (default: the run directory)");
  rep_run_opt->excludes(rep_audit_opt);
  report->require_option(1, 2);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run several classifiers over every fold and save the run");
  std::string ex_corpus, ex_folds, ex_out;
  std::vector<std::string> ex_nn;
  bool ex_lstm = false;
  std::vector<std::string> ex_hybrid;
  std::size_t ex_m = 5;
  int ex_repeats = 1;
  WindowOptions ex_win;
  LstmOptions ex_opts;
  experiment->add_option("--corpus", ex_corpus, "trace CSV")->required();
  experiment->add_option("--folds", ex_folds, "fold plan CSV")->required();
  experiment->add_option("--nn", ex_nn, "1NN distance, repeatable");
  experiment->add_flag("--lstm", ex_lstm, "include the LSTM classifier");
  experiment->add_option("--hybrid", ex_hybrid, "hybrid with this distance, repeatable");
  experiment->add_option("-m,--neighbors", ex_m, "neighbours in the hybrid vote")->capture_default_str();
  experiment->add_option("--repeats", ex_repeats, "runs per fold for trained classifiers")->capture_default_str();
  experiment->add_option("--out", ex_out, "run directory")->required();
  ex_win.add_to(experiment);
  ex_opts.add_to(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    auto* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << failing->help();
    return 2;
  }

  try {
    if (*gen) {
      ltw_profiles* raw = nullptr;
      check(gen_profiles.empty() ? ltw_profiles_default(&raw) : ltw_profiles_load(gen_profiles.c_str(), &raw));
      Profiles profiles(raw);
      if (!gen_dump.empty()) check(ltw_profiles_save(profiles.get(), gen_dump.c_str()));
      ltw_series_list* corpus = nullptr;
      check(ltw_generate_corpus(profiles.get(), gen_per_class, gen_min_len, gen_seed, &corpus));
      SeriesList owned(corpus);
      emit_via_file(gen_out, [&](const std::string& p) { check(ltw_series_list_save_csv(owned.get(), p.c_str())); });
    } else if (*cut) {
      auto traces = load_series(cut_in);
      ltw_series_list* windows = nullptr;
      check(ltw_cut_windows(traces.get(), cut_win.length, cut_win.stride, &windows));
      SeriesList owned(windows);
      emit_via_file(cut_out, [&](const std::string& p) { check(ltw_series_list_save_csv(owned.get(), p.c_str())); });
    } else if (*folds) {
      auto traces = load_series(folds_in);
      ltw_fold_plan* plan = nullptr;
      check(ltw_fold_plan_partition(traces.get(), folds_k, folds_seed, &plan));
      FoldPlan owned(plan);
      emit_via_file(folds_out, [&](const std::string& p) { check(ltw_fold_plan_save_csv(owned.get(), p.c_str())); });
    } else if (*classify) {
      auto traces = load_series(cls_corpus);
      auto plan = load_plan(cls_folds);
      auto distance = parse_distance(cls_spec);
      ltw_experiment* raw = nullptr;
      check(ltw_experiment_create(cls_win.length, cls_win.stride, 1, &raw));
      Experiment exp(raw);
      check(ltw_experiment_add_nn(exp.get(), distance.get()));
      ltw_report* rep = nullptr;
      check(ltw_experiment_run(exp.get(), traces.get(), plan.get(), &rep));
      Report owned(rep);
      std::ostringstream os;
      os << "fold,accuracy\n";
      double total = 0;
      const int k = ltw_report_num_folds(owned.get());
      for (int f = 0; f < k; ++f) {
        double mean = 0;
        check(ltw_report_accuracy(owned.get(), 0, f, &mean, nullptr, nullptr));
        total += mean;
        os << f << ',' << fmt(mean) << '\n';
      }
      os << "mean," << fmt(total / k) << '\n';
      emit(cls_out, os.str());
    } else if (*train) {
      auto windows = load_series(tr_in);
      ltw_lstm_model* raw = nullptr;
      check(ltw_lstm_train(windows.get(), &tr_opts.config, &raw));
      Model model(raw);
      check(ltw_lstm_model_save(model.get(), tr_out.c_str()));
      if (!tr_trace.empty()) check(ltw_lstm_model_save_loss_trace(model.get(), tr_trace.c_str()));
      const std::size_t epochs = ltw_lstm_model_num_epochs(model.get());
      double loss = 0, acc = 0;
      check(ltw_lstm_model_epoch(model.get(), epochs - 1, &loss, &acc));
      std::cerr << "trained " << epochs << " epochs, final loss " << fmt(loss) << ", train accuracy " << fmt(acc)
                << '\n';
    } else if (*hybrid) {
      auto train_set = load_series(hy_train);
      auto test_set = load_series(hy_test);
      ltw_lstm_model* raw = nullptr;
      check(ltw_lstm_model_load(hy_model.c_str(), &raw));
      Model model(raw);
      auto distance = parse_distance(hy_spec);
      ltw_audit* audit = nullptr;
      check(ltw_hybrid_classify_batch(test_set.get(), train_set.get(), distance.get(), hy_m, model.get(), &audit));
      Audit owned(audit);
      emit_via_file(hy_out, [&](const std::string& p) { check(ltw_audit_save_csv(owned.get(), p.c_str())); });
      double a = 0, b = 0, u = 0, h = 0;
      if (ltw_audit_metrics(owned.get(), &a, &b, &u, &h) == LTW_OK) {
        std::cerr << "1nn " << fmt(a) << " lstm " << fmt(b) << " union " << fmt(u) << " hybrid " << fmt(h) << '\n';
      }
    } else if (*sweep) {
      auto traces = load_series(sw_corpus);
      auto plan = load_plan(sw_folds);
      std::vector<const char*> sets;
      for (const auto& s : sw_sets) sets.push_back(s.c_str());
      emit_via_file(sw_out, [&](const std::string& p) {
        check(ltw_g_sweep(traces.get(), plan.get(), sets.data(), sets.size(), sw_win.length, sw_win.stride,
                          p.c_str()));
      });
    } else if (*bench) {
      std::vector<const char*> specs;
      for (const auto& s : be_specs) specs.push_back(s.c_str());
      emit_via_file(be_out, [&](const std::string& p) {
        check(ltw_bench_kernels(specs.data(), specs.size(), be_lengths.data(), be_lengths.size(), be_pairs, be_seed,
                                p.c_str(), nullptr));
      });
    } else if (*report) {
      if (!rep_audit.empty()) {
        ltw_audit* raw = nullptr;
        check(ltw_audit_load_csv(rep_audit.c_str(), &raw));
        Audit audit(raw);
        double a = 0, b = 0, u = 0, h = 0;
        check(ltw_audit_metrics(audit.get(), &a, &b, &u, &h));
        emit(rep_out.empty() ? "" : rep_out,
             "acc_ltw,acc_lstm,union_acc,acc_hybrid\n" + fmt(a) + ',' + fmt(b) + ',' + fmt(u) + ',' + fmt(h) + '\n');
      } else {
        ltw_report* raw = nullptr;
        check(ltw_report_load_run(rep_run.c_str(), &raw));
        Report rep(raw);
        const std::string dir = rep_out.empty() ? rep_run : rep_out;
        check(ltw_report_write_metrics(rep.get(), dir.c_str()));
        std::cout << per_fold_csv(rep.get());
      }
    } else if (*experiment) {
      if (ex_nn.empty() && !ex_lstm && ex_hybrid.empty()) {
        std::cerr << "error: experiment needs at least one of --nn, --lstm, --hybrid\n\n" << experiment->help();
        return 2;
      }
      auto traces = load_series(ex_corpus);
      auto plan = load_plan(ex_folds);
      ltw_experiment* raw = nullptr;
      check(ltw_experiment_create(ex_win.length, ex_win.stride, ex_repeats, &raw));
      Experiment exp(raw);
      for (const auto& s : ex_nn) check(ltw_experiment_add_nn(exp.get(), parse_distance(s).get()));
      if (ex_lstm) check(ltw_experiment_add_lstm(exp.get(), &ex_opts.config));
      for (const auto& s : ex_hybrid) {
        check(ltw_experiment_add_hybrid(exp.get(), parse_distance(s).get(), ex_m, &ex_opts.config));
      }
      ltw_report* rep = nullptr;
      check(ltw_experiment_run(exp.get(), traces.get(), plan.get(), &rep));
      Report owned(rep);
      check(ltw_report_write_run(owned.get(), ex_out.c_str()));
      std::cout << per_fold_csv(owned.get());
    }
  } catch (const std::exception& e) {
    std::cerr << "ltwkit " << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
