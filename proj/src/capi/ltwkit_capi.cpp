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
#include "ltwkit/ltwkit.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "distance.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "hybrid.hpp"
#include "lstm.hpp"
#include "nn.hpp"
#include "series.hpp"
#include "synth.hpp"
#include "text.hpp"

struct ltw_series_list {
  std::vector<ltw::Series> items;
};

struct ltw_fold_plan {
  ltw::FoldPlan plan;
};

struct ltw_distance {
  ltw::DistanceSpec spec;
  std::string text;
};

struct ltw_lstm_model {
  ltw::LstmModel model;
};

struct ltw_audit {
  std::vector<ltw::AuditRecord> records;
};

struct ltw_profiles {
  std::vector<ltw::ClassProfile> profiles;
};

struct ltw_experiment {
  ltw::ExperimentConfig config;
};

struct ltw_report {
  ltw::ExperimentRun run;
  ltw::ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

ltw_status to_status(ltw::ErrorCode code) {
  switch (code) {
    case ltw::ErrorCode::InvalidArgument: return LTW_ERR_INVALID_ARGUMENT;
    case ltw::ErrorCode::Parse: return LTW_ERR_PARSE;
    case ltw::ErrorCode::Io: return LTW_ERR_IO;
    case ltw::ErrorCode::Diverged: return LTW_ERR_DIVERGED;
    case ltw::ErrorCode::OutOfRange: return LTW_ERR_OUT_OF_RANGE;
    case ltw::ErrorCode::Internal: return LTW_ERR_INTERNAL;
  }
  return LTW_ERR_INTERNAL;
}

// Runs body, translating exceptions into a status and the thread's message.
template <typename Body>
ltw_status guarded(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return LTW_OK;
  } catch (const ltw::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LTW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LTW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LTW_ERR_INTERNAL;
  }
}

template <typename T>
const T& deref(const T* p, const char* what) {
  if (p == nullptr) ltw::fail(ltw::ErrorCode::InvalidArgument, std::string(what) + " is null");
  return *p;
}

template <typename T>
T& deref_mut(T* p, const char* what) {
  if (p == nullptr) ltw::fail(ltw::ErrorCode::InvalidArgument, std::string(what) + " is null");
  return *p;
}

void require_out(const void* out) {
  if (out == nullptr) ltw::fail(ltw::ErrorCode::InvalidArgument, "output pointer is null");
}

std::string require_text(const char* s, const char* what) {
  if (s == nullptr) ltw::fail(ltw::ErrorCode::InvalidArgument, std::string(what) + " is null");
  return s;
}

std::span<const double> values_of(const double* data, std::size_t length, const char* what) {
  if (data == nullptr && length > 0) ltw::fail(ltw::ErrorCode::InvalidArgument, std::string(what) + " is null");
  return {data, length};
}

// Equal-length labeled windows; num_classes is 1 + max label.
ltw::Dataset dataset_of(const ltw_series_list* list, const char* what) {
  const auto& l = deref(list, what);
  ltw::require(!l.items.empty(), std::string(what) + " is empty");
  return ltw::Dataset::from_windows(l.items);
}

void copy_probs(const ltw::ProbabilityVector& p, double* out, std::size_t num_classes) {
  if (out == nullptr) ltw::fail(ltw::ErrorCode::InvalidArgument, "probability buffer is null");
  if (num_classes != p.size()) {
    ltw::fail(ltw::ErrorCode::InvalidArgument, "probability buffer holds " + std::to_string(num_classes) +
                                                   " classes, model has " + std::to_string(p.size()));
  }
  std::copy(p.begin(), p.end(), out);
}

ltw::TrainConfig train_config_of(const ltw_lstm_config* c) {
  const auto& cfg = deref(c, "lstm config");
  ltw::TrainConfig t;
  t.hidden = cfg.hidden;
  t.batch_size = cfg.batch_size;
  t.max_epochs = cfg.max_epochs;
  t.learning_rate = cfg.learning_rate;
  t.levels = cfg.levels;
  t.seed = cfg.seed;
  return t;
}

std::vector<ltw::WarpIndexSet> offsets_of(const std::size_t* offsets, std::size_t count) {
  if (offsets == nullptr || count == 0) ltw::fail(ltw::ErrorCode::InvalidArgument, "warp index set is empty");
  return {ltw::WarpIndexSet(std::vector<std::size_t>(offsets, offsets + count))};
}

std::size_t audit_classes(const std::vector<ltw::AuditRecord>& records) {
  return records.empty() ? 0 : records.front().p_ltw.size();
}

}  // namespace

extern "C" {

const char* ltw_last_error(void) { return g_last_error.c_str(); }

const char* ltw_status_name(ltw_status status) {
  switch (status) {
    case LTW_OK: return "ok";
    case LTW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LTW_ERR_PARSE: return "parse error";
    case LTW_ERR_IO: return "i/o error";
    case LTW_ERR_DIVERGED: return "diverged";
    case LTW_ERR_OUT_OF_RANGE: return "out of range";
    case LTW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ltw_version(void) { return "1.0.0"; }

// ---- Series lists

ltw_status ltw_series_list_create(ltw_series_list** out) {
  return guarded([&] {
    require_out(out);
    *out = new ltw_series_list{};
  });
}

void ltw_series_list_destroy(ltw_series_list* list) { delete list; }

ltw_status ltw_series_list_append(ltw_series_list* list, const double* values, std::size_t length, int label,
                                  const char* source_id) {
  return guarded([&] {
    auto& l = deref_mut(list, "series list");
    std::string id = source_id ? source_id : "";
    ltw::require(id.find_first_of(",\r\n") == std::string::npos, "source_id may not contain ',' or line breaks");
    ltw::require(label >= -1, "label must be -1 (unlabeled) or a class index");
    auto v = values_of(values, length, "values");
    std::optional<int> lab;
    if (label >= 0) lab = label;
    l.items.emplace_back(std::vector<double>(v.begin(), v.end()), lab, std::move(id));
  });
}

std::size_t ltw_series_list_size(const ltw_series_list* list) { return list ? list->items.size() : 0; }

ltw_status ltw_series_list_get(const ltw_series_list* list, std::size_t index, const double** values,
                               std::size_t* length, int* label, const char** source_id) {
  return guarded([&] {
    const auto& l = deref(list, "series list");
    if (index >= l.items.size()) {
      ltw::fail(ltw::ErrorCode::OutOfRange, "series index " + std::to_string(index) + " out of range");
    }
    const auto& s = l.items[index];
    if (values) *values = s.values().data();
    if (length) *length = s.size();
    if (label) *label = s.label().value_or(-1);
    if (source_id) *source_id = s.source_id().c_str();
  });
}

ltw_status ltw_series_list_load_csv(const char* path, ltw_series_list** out) {
  return guarded([&] {
    require_out(out);
    auto items = ltw::load_series_csv(require_text(path, "path"));
    *out = new ltw_series_list{std::move(items)};
  });
}

ltw_status ltw_series_list_save_csv(const ltw_series_list* list, const char* path) {
  return guarded([&] { ltw::save_series_csv(deref(list, "series list").items, require_text(path, "path")); });
}

ltw_status ltw_cut_windows(const ltw_series_list* traces, std::size_t window_length, std::size_t stride,
                           ltw_series_list** out) {
  return guarded([&] {
    require_out(out);
    auto items = ltw::cut_all(deref(traces, "traces").items, window_length, stride);
    *out = new ltw_series_list{std::move(items)};
  });
}

// ---- Fold plans

ltw_status ltw_fold_plan_partition(const ltw_series_list* traces, int num_folds, std::uint64_t seed,
                                   ltw_fold_plan** out) {
  return guarded([&] {
    require_out(out);
    auto plan = ltw::partition_folds(deref(traces, "traces").items, num_folds, seed);
    *out = new ltw_fold_plan{std::move(plan)};
  });
}

void ltw_fold_plan_destroy(ltw_fold_plan* plan) { delete plan; }

int ltw_fold_plan_num_folds(const ltw_fold_plan* plan) { return plan ? plan->plan.num_folds() : 0; }

ltw_status ltw_fold_plan_fold_of(const ltw_fold_plan* plan, const char* source_id, int* fold) {
  return guarded([&] {
    require_out(fold);
    *fold = deref(plan, "fold plan").plan.fold_of(require_text(source_id, "source_id"));
  });
}

ltw_status ltw_fold_plan_load_csv(const char* path, ltw_fold_plan** out) {
  return guarded([&] {
    require_out(out);
    auto plan = ltw::load_fold_plan_csv(require_text(path, "path"));
    *out = new ltw_fold_plan{std::move(plan)};
  });
}

ltw_status ltw_fold_plan_save_csv(const ltw_fold_plan* plan, const char* path) {
  return guarded([&] { ltw::save_fold_plan_csv(deref(plan, "fold plan").plan, require_text(path, "path")); });
}

ltw_status ltw_split(const ltw_series_list* windows, const ltw_fold_plan* plan, int fold_test,
                     ltw_series_list** train, ltw_series_list** test) {
  return guarded([&] {
    require_out(train);
    require_out(test);
    auto ds = dataset_of(windows, "windows");
    auto s = ltw::split(ds, deref(plan, "fold plan").plan, fold_test);
    auto tr = std::make_unique<ltw_series_list>(ltw_series_list{s.train.series()});
    auto te = std::make_unique<ltw_series_list>(ltw_series_list{s.test.series()});
    *train = tr.release();
    *test = te.release();
  });
}

// ---- Distances

ltw_status ltw_distance_parse(const char* text, ltw_distance** out) {
  return guarded([&] {
    require_out(out);
    auto spec = ltw::DistanceSpec::parse(require_text(text, "distance text"));
    auto canonical = spec.to_string();
    *out = new ltw_distance{std::move(spec), std::move(canonical)};
  });
}

void ltw_distance_destroy(ltw_distance* distance) { delete distance; }

const char* ltw_distance_text(const ltw_distance* distance) { return distance ? distance->text.c_str() : ""; }

ltw_status ltw_distance_evaluate(const ltw_distance* distance, const double* x, std::size_t x_length,
                                 const double* y, std::size_t y_length, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::evaluate(deref(distance, "distance").spec, values_of(x, x_length, "x"), values_of(y, y_length, "y"));
  });
}

ltw_status ltw_dtw(const double* x, const double* y, std::size_t length, int window, int cost_abs, double* out) {
  return guarded([&] {
    require_out(out);
    std::optional<std::size_t> w;
    if (window >= 0) w = static_cast<std::size_t>(window);
    *out = ltw::dtw(values_of(x, length, "x"), values_of(y, length, "y"), w,
                    cost_abs ? ltw::PointCost::Abs : ltw::PointCost::Squared);
  });
}

ltw_status ltw_ltw(const double* x, const double* y, std::size_t length, const std::size_t* offsets,
                   std::size_t num_offsets, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::ltw(values_of(x, length, "x"), values_of(y, length, "y"), offsets_of(offsets, num_offsets).front());
  });
}

ltw_status ltw_ltw_com(const double* x, const double* y, std::size_t length, const std::size_t* offsets,
                       std::size_t num_offsets, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::ltw_com(values_of(x, length, "x"), values_of(y, length, "y"),
                        offsets_of(offsets, num_offsets).front());
  });
}

ltw_status ltw_lb_keogh(const double* x, const double* y, std::size_t length, int window, int cost_abs,
                        double* out) {
  return guarded([&] {
    require_out(out);
    ltw::require(window >= 0, "lb_keogh needs a window >= 0");
    *out = ltw::lb_keogh(values_of(x, length, "x"), values_of(y, length, "y"), static_cast<std::size_t>(window),
                         cost_abs ? ltw::PointCost::Abs : ltw::PointCost::Squared);
  });
}

ltw_status ltw_msm(const double* x, std::size_t x_length, const double* y, std::size_t y_length, double c,
                   double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::msm(values_of(x, x_length, "x"), values_of(y, y_length, "y"), c);
  });
}

ltw_status ltw_complexity_estimate(const double* x, std::size_t length, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::complexity_estimate(values_of(x, length, "x"));
  });
}

ltw_status ltw_cid_enhance(double distance, const double* x, const double* y, std::size_t length, double* out) {
  return guarded([&] {
    require_out(out);
    *out = ltw::cid_enhance(distance, values_of(x, length, "x"), values_of(y, length, "y"));
  });
}

// ---- Nearest neighbour

ltw_status ltw_classify_1nn(const double* query, std::size_t length, const ltw_series_list* train,
                            const ltw_distance* distance, int* label) {
  return guarded([&] {
    require_out(label);
    auto ds = dataset_of(train, "training set");
    *label = ltw::classify_1nn(values_of(query, length, "query"), ds, deref(distance, "distance").spec);
  });
}

ltw_status ltw_prob_vector_knn(const double* query, std::size_t length, const ltw_series_list* train,
                               const ltw_distance* distance, std::size_t m, double* probs, std::size_t num_classes) {
  return guarded([&] {
    auto ds = dataset_of(train, "training set");
    auto p = ltw::prob_vector_knn(values_of(query, length, "query"), ds, deref(distance, "distance").spec, m);
    copy_probs(p, probs, num_classes);
  });
}

// ---- LSTM

void ltw_lstm_config_default(ltw_lstm_config* config) {
  if (config == nullptr) return;
  ltw::TrainConfig t;
  config->hidden = t.hidden;
  config->batch_size = t.batch_size;
  config->max_epochs = t.max_epochs;
  config->learning_rate = t.learning_rate;
  config->levels = t.levels;
  config->seed = t.seed;
}

ltw_status ltw_lstm_train(const ltw_series_list* train, const ltw_lstm_config* config, ltw_lstm_model** out) {
  return guarded([&] {
    require_out(out);
    auto ds = dataset_of(train, "training set");
    auto model = ltw::train(ds, train_config_of(config));
    *out = new ltw_lstm_model{std::move(model)};
  });
}

void ltw_lstm_model_destroy(ltw_lstm_model* model) { delete model; }

std::size_t ltw_lstm_model_num_classes(const ltw_lstm_model* model) {
  return model ? model->model.num_classes() : 0;
}

std::size_t ltw_lstm_model_num_epochs(const ltw_lstm_model* model) { return model ? model->model.trace.size() : 0; }

ltw_status ltw_lstm_model_epoch(const ltw_lstm_model* model, std::size_t epoch, double* loss, double* train_acc) {
  return guarded([&] {
    const auto& trace = deref(model, "model").model.trace;
    if (epoch >= trace.size()) {
      ltw::fail(ltw::ErrorCode::OutOfRange, "epoch " + std::to_string(epoch) + " out of range");
    }
    if (loss) *loss = trace[epoch].loss;
    if (train_acc) *train_acc = trace[epoch].train_acc;
  });
}

ltw_status ltw_lstm_model_save(const ltw_lstm_model* model, const char* path) {
  return guarded([&] { ltw::save_checkpoint(deref(model, "model").model, require_text(path, "path")); });
}

ltw_status ltw_lstm_model_load(const char* path, ltw_lstm_model** out) {
  return guarded([&] {
    require_out(out);
    auto model = ltw::load_checkpoint(require_text(path, "path"));
    *out = new ltw_lstm_model{std::move(model)};
  });
}

ltw_status ltw_lstm_model_save_loss_trace(const ltw_lstm_model* model, const char* path) {
  return guarded([&] { ltw::save_loss_trace(deref(model, "model").model.trace, require_text(path, "path")); });
}

ltw_status ltw_lstm_predict_prob(const ltw_lstm_model* model, const double* x, std::size_t length, double* probs,
                                 std::size_t num_classes) {
  return guarded([&] {
    auto p = ltw::predict_prob(deref(model, "model").model, values_of(x, length, "x"));
    copy_probs(p, probs, num_classes);
  });
}

// ---- Hybrid

ltw_status ltw_fuse(const double* p_ltw, const double* p_lstm, std::size_t num_classes, int* label) {
  return guarded([&] {
    require_out(label);
    *label = ltw::fuse(values_of(p_ltw, num_classes, "p_ltw"), values_of(p_lstm, num_classes, "p_lstm"));
  });
}

ltw_status ltw_hybrid_classify_batch(const ltw_series_list* queries, const ltw_series_list* train,
                                     const ltw_distance* distance, std::size_t m_neighbors,
                                     const ltw_lstm_model* model, ltw_audit** out) {
  return guarded([&] {
    require_out(out);
    const auto& m = deref(model, "model").model;
    auto tr = dataset_of(train, "training set");
    const auto& q = deref(queries, "queries");
    ltw::require(!q.items.empty(), "queries are empty");
    ltw::Dataset qs(q.items, std::max(tr.num_classes(), m.num_classes()));
    ltw::Dataset trs(tr.series(), m.num_classes());
    ltw::HybridConfig cfg;
    cfg.ltw_spec = deref(distance, "distance").spec;
    cfg.m_neighbors = m_neighbors;
    auto records = ltw::hybrid_classify_batch(qs, trs, cfg, m);
    *out = new ltw_audit{std::move(records)};
  });
}

void ltw_audit_destroy(ltw_audit* audit) { delete audit; }

std::size_t ltw_audit_size(const ltw_audit* audit) { return audit ? audit->records.size() : 0; }

std::size_t ltw_audit_num_classes(const ltw_audit* audit) { return audit ? audit_classes(audit->records) : 0; }

ltw_status ltw_audit_get(const ltw_audit* audit, std::size_t index, int* true_label, int* pred_ltw, int* pred_lstm,
                         int* pred_hybrid) {
  return guarded([&] {
    const auto& records = deref(audit, "audit").records;
    if (index >= records.size()) {
      ltw::fail(ltw::ErrorCode::OutOfRange, "audit index " + std::to_string(index) + " out of range");
    }
    const auto& r = records[index];
    if (true_label) *true_label = r.true_label;
    if (pred_ltw) *pred_ltw = r.pred_ltw;
    if (pred_lstm) *pred_lstm = r.pred_lstm;
    if (pred_hybrid) *pred_hybrid = r.pred_hybrid;
  });
}

ltw_status ltw_audit_save_csv(const ltw_audit* audit, const char* path) {
  return guarded([&] { ltw::save_audit_csv(deref(audit, "audit").records, require_text(path, "path")); });
}

ltw_status ltw_audit_load_csv(const char* path, ltw_audit** out) {
  return guarded([&] {
    require_out(out);
    auto records = ltw::load_audit_csv(require_text(path, "path"));
    *out = new ltw_audit{std::move(records)};
  });
}

ltw_status ltw_audit_metrics(const ltw_audit* audit, double* acc_ltw, double* acc_lstm, double* union_acc,
                             double* acc_hybrid) {
  return guarded([&] {
    const auto& records = deref(audit, "audit").records;
    ltw::require(!records.empty(), "audit is empty");
    std::vector<int> truth, a, b, h;
    for (const auto& r : records) {
      ltw::require(r.true_label >= 0, "audit metrics need labeled queries");
      truth.push_back(r.true_label);
      a.push_back(r.pred_ltw);
      b.push_back(r.pred_lstm);
      h.push_back(r.pred_hybrid);
    }
    if (acc_ltw) *acc_ltw = ltw::accuracy(a, truth);
    if (acc_lstm) *acc_lstm = ltw::accuracy(b, truth);
    if (union_acc) *union_acc = ltw::union_accuracy(a, b, truth);
    if (acc_hybrid) *acc_hybrid = ltw::accuracy(h, truth);
  });
}

ltw_status ltw_union_accuracy(const int* pred_a, const int* pred_b, const int* truth, std::size_t count,
                              double* out) {
  return guarded([&] {
    require_out(out);
    ltw::require(pred_a && pred_b && truth, "prediction arrays must not be null");
    *out = ltw::union_accuracy({pred_a, count}, {pred_b, count}, {truth, count});
  });
}

// ---- Synthetic corpus

ltw_status ltw_profiles_default(ltw_profiles** out) {
  return guarded([&] {
    require_out(out);
    *out = new ltw_profiles{ltw::default_profiles()};
  });
}

ltw_status ltw_profiles_load(const char* path, ltw_profiles** out) {
  return guarded([&] {
    require_out(out);
    auto p = ltw::load_profiles(require_text(path, "path"));
    *out = new ltw_profiles{std::move(p)};
  });
}

ltw_status ltw_profiles_save(const ltw_profiles* profiles, const char* path) {
  return guarded([&] { ltw::save_profiles(deref(profiles, "profiles").profiles, require_text(path, "path")); });
}

void ltw_profiles_destroy(ltw_profiles* profiles) { delete profiles; }

std::size_t ltw_profiles_size(const ltw_profiles* profiles) { return profiles ? profiles->profiles.size() : 0; }

std::uint64_t ltw_profiles_hash(const ltw_profiles* profiles) {
  return profiles ? ltw::profiles_hash(profiles->profiles) : 0;
}

ltw_status ltw_generate_corpus(const ltw_profiles* profiles, std::size_t traces_per_class, std::size_t min_length,
                               std::uint64_t seed, ltw_series_list** out) {
  return guarded([&] {
    require_out(out);
    auto items = ltw::generate_corpus(deref(profiles, "profiles").profiles, traces_per_class, min_length, seed);
    *out = new ltw_series_list{std::move(items)};
  });
}

// ---- Experiments

ltw_status ltw_experiment_create(std::size_t window_length, std::size_t stride, int repeats, ltw_experiment** out) {
  return guarded([&] {
    require_out(out);
    ltw::require(window_length > 0 && stride > 0, "window length and stride must be positive");
    ltw::require(repeats >= 1, "repeats must be >= 1");
    auto e = std::make_unique<ltw_experiment>();
    e->config.window_length = window_length;
    e->config.stride = stride;
    e->config.repeats = repeats;
    *out = e.release();
  });
}

void ltw_experiment_destroy(ltw_experiment* experiment) { delete experiment; }

ltw_status ltw_experiment_add_nn(ltw_experiment* experiment, const ltw_distance* distance) {
  return guarded([&] {
    deref_mut(experiment, "experiment")
        .config.classifiers.push_back(ltw::ClassifierConfig::nearest_neighbor(deref(distance, "distance").spec));
  });
}

ltw_status ltw_experiment_add_lstm(ltw_experiment* experiment, const ltw_lstm_config* config) {
  return guarded([&] {
    deref_mut(experiment, "experiment").config.classifiers.push_back(ltw::ClassifierConfig::lstm(train_config_of(config)));
  });
}

ltw_status ltw_experiment_add_hybrid(ltw_experiment* experiment, const ltw_distance* distance,
                                     std::size_t m_neighbors, const ltw_lstm_config* config) {
  return guarded([&] {
    ltw::require(m_neighbors >= 2, "the hybrid needs m_neighbors >= 2");
    deref_mut(experiment, "experiment")
        .config.classifiers.push_back(
            ltw::ClassifierConfig::hybrid(deref(distance, "distance").spec, m_neighbors, train_config_of(config)));
  });
}

ltw_status ltw_experiment_run(const ltw_experiment* experiment, const ltw_series_list* traces,
                              const ltw_fold_plan* plan, ltw_report** out) {
  return guarded([&] {
    require_out(out);
    const auto& cfg = deref(experiment, "experiment").config;
    ltw::require(!cfg.classifiers.empty(), "experiment has no classifiers");
    auto r = std::make_unique<ltw_report>();
    r->run = ltw::run_experiment(deref(traces, "traces").items, deref(plan, "fold plan").plan, cfg);
    r->report = ltw::build_report(r->run);
    *out = r.release();
  });
}

void ltw_report_destroy(ltw_report* report) { delete report; }

ltw_status ltw_report_load_run(const char* dir, ltw_report** out) {
  return guarded([&] {
    require_out(out);
    auto r = std::make_unique<ltw_report>();
    r->run = ltw::load_run(require_text(dir, "directory"));
    r->report = ltw::build_report(r->run);
    *out = r.release();
  });
}

std::size_t ltw_report_num_classifiers(const ltw_report* report) {
  return report ? report->report.classifiers.size() : 0;
}

int ltw_report_num_folds(const ltw_report* report) { return report ? report->report.num_folds : 0; }

const char* ltw_report_classifier_name(const ltw_report* report, std::size_t classifier) {
  if (report == nullptr || classifier >= report->report.classifiers.size()) return "";
  return report->report.classifiers[classifier].c_str();
}

ltw_status ltw_report_accuracy(const ltw_report* report, std::size_t classifier, int fold, double* mean,
                               double* stddev, std::size_t* runs) {
  return guarded([&] {
    const auto& rep = deref(report, "report").report;
    if (classifier >= rep.classifiers.size()) {
      ltw::fail(ltw::ErrorCode::OutOfRange, "classifier index " + std::to_string(classifier) + " out of range");
    }
    const auto& cell = rep.cell(rep.classifiers[classifier], fold);
    if (mean) *mean = cell.mean;
    if (stddev) *stddev = cell.stddev;
    if (runs) *runs = cell.runs.size();
  });
}

ltw_status ltw_report_write_run(const ltw_report* report, const char* dir) {
  return guarded([&] { ltw::write_run(deref(report, "report").run, require_text(dir, "directory")); });
}

ltw_status ltw_report_write_metrics(const ltw_report* report, const char* dir) {
  return guarded([&] { ltw::write_report(deref(report, "report").report, require_text(dir, "directory")); });
}

ltw_status ltw_g_sweep(const ltw_series_list* traces, const ltw_fold_plan* plan, const char* const* warp_sets,
                       std::size_t num_sets, std::size_t window_length, std::size_t stride, const char* out_csv) {
  return guarded([&] {
    ltw::require(warp_sets != nullptr && num_sets > 0, "at least one warp set is required");
    std::vector<ltw::WarpIndexSet> settings;
    for (std::size_t i = 0; i < num_sets; ++i) settings.push_back(ltw::WarpIndexSet::parse(require_text(warp_sets[i], "warp set")));
    auto table = ltw::g_sweep(deref(traces, "traces").items, deref(plan, "fold plan").plan, settings, window_length,
                              stride);
    ltw::text::write_file(require_text(out_csv, "output path"), ltw::format_sweep_csv(table));
  });
}

ltw_status ltw_bench_kernels(const char* const* specs, std::size_t num_specs, const std::size_t* lengths,
                             std::size_t num_lengths, std::size_t pairs, std::uint64_t seed, const char* out_csv,
                             double* seconds) {
  return guarded([&] {
    ltw::require(specs != nullptr && num_specs > 0, "at least one distance spec is required");
    ltw::require(lengths != nullptr && num_lengths > 0, "at least one length is required");
    std::vector<std::string> s;
    for (std::size_t i = 0; i < num_specs; ++i) s.push_back(require_text(specs[i], "spec"));
    auto rows = ltw::bench_kernels(s, {lengths, num_lengths}, pairs, seed);
    if (out_csv) ltw::text::write_file(out_csv, ltw::format_bench_csv(rows));
    if (seconds) {
      for (std::size_t i = 0; i < rows.size(); ++i) seconds[i] = rows[i].seconds_per_eval;
    }
  });
}

}  // extern "C"
