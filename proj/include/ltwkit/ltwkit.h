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
#ifndef LTWKIT_LTWKIT_H
#define LTWKIT_LTWKIT_H

/*
 * C interface to ltwkit: elastic time-series distances (DTW, Local Time
 * Warping, LB_Keogh, MSM, CID), nearest-neighbour and LSTM classifiers,
 * their probability fusion, a synthetic power-trace generator and the
 * fold-based evaluation harness.
 *
 * Conventions:
 *   - Every fallible call returns an ltw_status; LTW_OK is zero.
 *   - On failure, ltw_last_error() returns a message for the calling thread,
 *     valid until that thread's next ltwkit call.
 *   - Objects are opaque handles created by *_create / *_load / producing
 *     calls and released with the matching *_destroy (NULL is accepted).
 *   - Handles are immutable after construction unless a function says
 *     otherwise, and may be shared across threads for reading.
 *   - Labels are class indices >= 0; -1 means unlabeled.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LTWKIT_BUILDING)
#    define LTWKIT_API __declspec(dllexport)
#  else
#    define LTWKIT_API __declspec(dllimport)
#  endif
#else
#  define LTWKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltw_status {
  LTW_OK = 0,
  LTW_ERR_INVALID_ARGUMENT = 1,
  LTW_ERR_PARSE = 2,
  LTW_ERR_IO = 3,
  LTW_ERR_DIVERGED = 4,
  LTW_ERR_OUT_OF_RANGE = 5,
  LTW_ERR_INTERNAL = 99
} ltw_status;

LTWKIT_API const char* ltw_last_error(void);
LTWKIT_API const char* ltw_status_name(ltw_status status);
LTWKIT_API const char* ltw_version(void);

/* ---- Series lists ------------------------------------------------------ */

typedef struct ltw_series_list ltw_series_list;

LTWKIT_API ltw_status ltw_series_list_create(ltw_series_list** out);
LTWKIT_API void ltw_series_list_destroy(ltw_series_list* list);
/* Values must be non-empty and finite. source_id may not contain ',' or newlines. */
LTWKIT_API ltw_status ltw_series_list_append(ltw_series_list* list, const double* values, size_t length, int label,
                                             const char* source_id);
LTWKIT_API size_t ltw_series_list_size(const ltw_series_list* list);
/* Pointers stay valid while the list is alive and unmodified. */
LTWKIT_API ltw_status ltw_series_list_get(const ltw_series_list* list, size_t index, const double** values,
                                          size_t* length, int* label, const char** source_id);
/* CSV: header `source_id,label,v0,v1,...`, one series per row. */
LTWKIT_API ltw_status ltw_series_list_load_csv(const char* path, ltw_series_list** out);
LTWKIT_API ltw_status ltw_series_list_save_csv(const ltw_series_list* list, const char* path);

/* Windows of window_length at starts 0, stride, 2*stride, ... plus one anchored
 * at the end. Traces shorter than window_length are dropped. */
LTWKIT_API ltw_status ltw_cut_windows(const ltw_series_list* traces, size_t window_length, size_t stride,
                                      ltw_series_list** out);

/* ---- Fold plans -------------------------------------------------------- */

typedef struct ltw_fold_plan ltw_fold_plan;

/* Assigns whole traces (by source_id) to folds, stratified by label. */
LTWKIT_API ltw_status ltw_fold_plan_partition(const ltw_series_list* traces, int num_folds, uint64_t seed,
                                              ltw_fold_plan** out);
LTWKIT_API void ltw_fold_plan_destroy(ltw_fold_plan* plan);
LTWKIT_API int ltw_fold_plan_num_folds(const ltw_fold_plan* plan);
LTWKIT_API ltw_status ltw_fold_plan_fold_of(const ltw_fold_plan* plan, const char* source_id, int* fold);
/* CSV: header `source_id,fold`. */
LTWKIT_API ltw_status ltw_fold_plan_load_csv(const char* path, ltw_fold_plan** out);
LTWKIT_API ltw_status ltw_fold_plan_save_csv(const ltw_fold_plan* plan, const char* path);

/* Test side holds the windows whose fold is fold_test or (fold_test + 1) mod k. */
LTWKIT_API ltw_status ltw_split(const ltw_series_list* windows, const ltw_fold_plan* plan, int fold_test,
                                ltw_series_list** train, ltw_series_list** test);

/* ---- Distances --------------------------------------------------------- */

typedef struct ltw_distance ltw_distance;

/* Text form `kind[:key=value|:cid]...`:
 *   dtw:w=30:cost=sq  dtwm:w=30  ltw:G=1-10:cid  ltwcom:G=1-10  lbk:w=5  msm:c=1.0  ed */
LTWKIT_API ltw_status ltw_distance_parse(const char* text, ltw_distance** out);
LTWKIT_API void ltw_distance_destroy(ltw_distance* distance);
/* Canonical text form; owned by the handle. */
LTWKIT_API const char* ltw_distance_text(const ltw_distance* distance);
/* For asymmetric kinds x is the query. */
LTWKIT_API ltw_status ltw_distance_evaluate(const ltw_distance* distance, const double* x, size_t x_length,
                                            const double* y, size_t y_length, double* out);

/* Direct kernels. window < 0 runs unconstrained DTW; cost_abs selects |a-b|
 * instead of (a-b)^2. offsets lists the LTW warp set. */
LTWKIT_API ltw_status ltw_dtw(const double* x, const double* y, size_t length, int window, int cost_abs, double* out);
LTWKIT_API ltw_status ltw_ltw(const double* x, const double* y, size_t length, const size_t* offsets,
                              size_t num_offsets, double* out);
LTWKIT_API ltw_status ltw_ltw_com(const double* x, const double* y, size_t length, const size_t* offsets,
                                  size_t num_offsets, double* out);
LTWKIT_API ltw_status ltw_lb_keogh(const double* x, const double* y, size_t length, int window, int cost_abs,
                                   double* out);
LTWKIT_API ltw_status ltw_msm(const double* x, size_t x_length, const double* y, size_t y_length, double c,
                              double* out);
LTWKIT_API ltw_status ltw_complexity_estimate(const double* x, size_t length, double* out);
LTWKIT_API ltw_status ltw_cid_enhance(double distance, const double* x, const double* y, size_t length,
                                      double* out);

/* ---- Nearest neighbour ------------------------------------------------- */

/* train must hold labeled windows of equal length. */
LTWKIT_API ltw_status ltw_classify_1nn(const double* query, size_t length, const ltw_series_list* train,
                                       const ltw_distance* distance, int* label);
/* Rank-weighted vote of the m nearest neighbours (m >= 2) into probs[num_classes];
 * num_classes must equal 1 + the largest training label. */
LTWKIT_API ltw_status ltw_prob_vector_knn(const double* query, size_t length, const ltw_series_list* train,
                                          const ltw_distance* distance, size_t m, double* probs,
                                          size_t num_classes);

/* ---- LSTM -------------------------------------------------------------- */

typedef struct ltw_lstm_config {
  size_t hidden;
  size_t batch_size;
  size_t max_epochs;
  double learning_rate;
  int levels;
  uint64_t seed;
} ltw_lstm_config;

/* hidden 90, batch 60, 50 epochs, learning rate 0.05, 100 levels, seed 0. */
LTWKIT_API void ltw_lstm_config_default(ltw_lstm_config* config);

typedef struct ltw_lstm_model ltw_lstm_model;

LTWKIT_API ltw_status ltw_lstm_train(const ltw_series_list* train, const ltw_lstm_config* config,
                                     ltw_lstm_model** out);
LTWKIT_API void ltw_lstm_model_destroy(ltw_lstm_model* model);
LTWKIT_API size_t ltw_lstm_model_num_classes(const ltw_lstm_model* model);
LTWKIT_API size_t ltw_lstm_model_num_epochs(const ltw_lstm_model* model);
/* Per-epoch mean loss and training accuracy, epoch in [0, num_epochs). */
LTWKIT_API ltw_status ltw_lstm_model_epoch(const ltw_lstm_model* model, size_t epoch, double* loss,
                                           double* train_acc);
LTWKIT_API ltw_status ltw_lstm_model_save(const ltw_lstm_model* model, const char* path);
LTWKIT_API ltw_status ltw_lstm_model_load(const char* path, ltw_lstm_model** out);
/* CSV `epoch,loss,train_acc`. */
LTWKIT_API ltw_status ltw_lstm_model_save_loss_trace(const ltw_lstm_model* model, const char* path);
LTWKIT_API ltw_status ltw_lstm_predict_prob(const ltw_lstm_model* model, const double* x, size_t length,
                                            double* probs, size_t num_classes);

/* ---- Hybrid ------------------------------------------------------------ */

typedef struct ltw_audit ltw_audit;

/* argmax(p_ltw + p_lstm), lowest index on ties. */
LTWKIT_API ltw_status ltw_fuse(const double* p_ltw, const double* p_lstm, size_t num_classes, int* label);
LTWKIT_API ltw_status ltw_hybrid_classify_batch(const ltw_series_list* queries, const ltw_series_list* train,
                                                const ltw_distance* distance, size_t m_neighbors,
                                                const ltw_lstm_model* model, ltw_audit** out);
LTWKIT_API void ltw_audit_destroy(ltw_audit* audit);
LTWKIT_API size_t ltw_audit_size(const ltw_audit* audit);
LTWKIT_API size_t ltw_audit_num_classes(const ltw_audit* audit);
LTWKIT_API ltw_status ltw_audit_get(const ltw_audit* audit, size_t index, int* true_label, int* pred_ltw,
                                    int* pred_lstm, int* pred_hybrid);
/* CSV `query_id,true_label,pred_ltw,pred_lstm,pred_hybrid,p_ltw_0..,p_lstm_0..`. */
LTWKIT_API ltw_status ltw_audit_save_csv(const ltw_audit* audit, const char* path);
LTWKIT_API ltw_status ltw_audit_load_csv(const char* path, ltw_audit** out);
/* Accuracies of both components, of the fusion, and their union-accuracy. */
LTWKIT_API ltw_status ltw_audit_metrics(const ltw_audit* audit, double* acc_ltw, double* acc_lstm,
                                        double* union_acc, double* acc_hybrid);
/* |A_correct ∪ B_correct| / N over two prediction lists. */
LTWKIT_API ltw_status ltw_union_accuracy(const int* pred_a, const int* pred_b, const int* truth, size_t count,
                                         double* out);

/* ---- Synthetic corpus -------------------------------------------------- */

typedef struct ltw_profiles ltw_profiles;

LTWKIT_API ltw_status ltw_profiles_default(ltw_profiles** out);
LTWKIT_API ltw_status ltw_profiles_load(const char* path, ltw_profiles** out);
LTWKIT_API ltw_status ltw_profiles_save(const ltw_profiles* profiles, const char* path);
LTWKIT_API void ltw_profiles_destroy(ltw_profiles* profiles);
LTWKIT_API size_t ltw_profiles_size(const ltw_profiles* profiles);
LTWKIT_API uint64_t ltw_profiles_hash(const ltw_profiles* profiles);
/* Source ids are "c<class>-t<index>". */
LTWKIT_API ltw_status ltw_generate_corpus(const ltw_profiles* profiles, size_t traces_per_class, size_t min_length,
                                          uint64_t seed, ltw_series_list** out);

/* ---- Experiments ------------------------------------------------------- */

typedef struct ltw_experiment ltw_experiment;
typedef struct ltw_report ltw_report;

LTWKIT_API ltw_status ltw_experiment_create(size_t window_length, size_t stride, int repeats,
                                            ltw_experiment** out);
LTWKIT_API void ltw_experiment_destroy(ltw_experiment* experiment);
LTWKIT_API ltw_status ltw_experiment_add_nn(ltw_experiment* experiment, const ltw_distance* distance);
LTWKIT_API ltw_status ltw_experiment_add_lstm(ltw_experiment* experiment, const ltw_lstm_config* config);
LTWKIT_API ltw_status ltw_experiment_add_hybrid(ltw_experiment* experiment, const ltw_distance* distance,
                                                size_t m_neighbors, const ltw_lstm_config* config);
/* Cuts the traces, runs every fold test and keeps the predictions. */
LTWKIT_API ltw_status ltw_experiment_run(const ltw_experiment* experiment, const ltw_series_list* traces,
                                         const ltw_fold_plan* plan, ltw_report** out);

LTWKIT_API void ltw_report_destroy(ltw_report* report);
/* Re-reads a directory written by ltw_report_write_run. */
LTWKIT_API ltw_status ltw_report_load_run(const char* dir, ltw_report** out);
LTWKIT_API size_t ltw_report_num_classifiers(const ltw_report* report);
LTWKIT_API int ltw_report_num_folds(const ltw_report* report);
LTWKIT_API const char* ltw_report_classifier_name(const ltw_report* report, size_t classifier);
LTWKIT_API ltw_status ltw_report_accuracy(const ltw_report* report, size_t classifier, int fold, double* mean,
                                          double* stddev, size_t* runs);
/* Raw predictions, audits, timings and config plus all metric files. */
LTWKIT_API ltw_status ltw_report_write_run(const ltw_report* report, const char* dir);
/* Metric files only (accuracy, summary, union, confusion, .dat). */
LTWKIT_API ltw_status ltw_report_write_metrics(const ltw_report* report, const char* dir);

/* 1NN-LTW accuracy per fold for each warp set; writes a `fold,G=..,...` CSV
 * with a final mean row. */
LTWKIT_API ltw_status ltw_g_sweep(const ltw_series_list* traces, const ltw_fold_plan* plan,
                                  const char* const* warp_sets, size_t num_sets, size_t window_length,
                                  size_t stride, const char* out_csv);

/* Median seconds per evaluation for each (spec, length); writes
 * `spec,n,seconds_per_eval,ratio_vs_prev`. seconds may be NULL; otherwise it
 * receives num_specs * num_lengths values, spec-major. */
LTWKIT_API ltw_status ltw_bench_kernels(const char* const* specs, size_t num_specs, const size_t* lengths,
                                        size_t num_lengths, size_t pairs, uint64_t seed, const char* out_csv,
                                        double* seconds);

#ifdef __cplusplus
}
#endif

#endif /* LTWKIT_LTWKIT_H */
