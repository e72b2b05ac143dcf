#ifndef WQA_WQA_H
#define WQA_WQA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(WQA_BUILDING_LIBRARY)
#define WQA_API __attribute__((visibility("default")))
#else
#define WQA_API
#endif

typedef enum wqa_status {
  WQA_OK = 0,
  WQA_INVALID_ARGUMENT = 1,
  WQA_IO = 2,
  WQA_PARSE = 3,
  WQA_DOMAIN = 4,
  WQA_INTERNAL = 5
} wqa_status;

/* Labels cross the boundary as ints: 1 relevant, 0 irrelevant. */

WQA_API const char* wqa_version(void);
WQA_API const char* wqa_status_name(wqa_status s);
/* Message for the most recent failure on the calling thread; "" if none. */
WQA_API const char* wqa_last_error(void);
/* Releases any char* returned through an out parameter. */
WQA_API void wqa_string_free(char* s);

typedef struct wqa_corpus wqa_corpus;
typedef struct wqa_model wqa_model;
typedef struct wqa_gazetteer wqa_gazetteer;
typedef struct wqa_optimization_result wqa_optimization_result;

/* corpus */
WQA_API wqa_status wqa_corpus_load(const char* path, wqa_corpus** out);
WQA_API wqa_status wqa_corpus_parse(const char* content, int is_csv, wqa_corpus** out);
WQA_API void wqa_corpus_free(wqa_corpus* c);
WQA_API size_t wqa_corpus_size(const wqa_corpus* c);
WQA_API wqa_status wqa_corpus_clean(const wqa_corpus* c, size_t min_tokens, wqa_corpus** out);
WQA_API wqa_status wqa_corpus_split(const wqa_corpus* c, double train, double test, double validation, uint64_t seed,
                                    wqa_corpus** out);
WQA_API wqa_status wqa_corpus_to_jsonl(const wqa_corpus* c, char** out);
/* sizes[0..2] = train, test, validation */
WQA_API wqa_status wqa_split_sizes(size_t n, double train, double test, double validation, size_t sizes[3]);
/* json array of tokens */
WQA_API wqa_status wqa_preprocess_tokens(const char* text, char** out_json);

/* baseline scorer */
WQA_API wqa_status wqa_model_train(const wqa_corpus* c, size_t epochs, double learning_rate, uint64_t seed, size_t dim,
                                   wqa_model** out);
WQA_API wqa_status wqa_model_load(const char* path, wqa_model** out);
WQA_API wqa_status wqa_model_save(const wqa_model* m, const char* path);
WQA_API wqa_status wqa_model_score_text(const wqa_model* m, const char* text, double* out);
WQA_API void wqa_model_free(wqa_model* m);

/* metrics and fusion; score matrices are model-major, n_models x n_samples */
typedef struct wqa_eval_report {
  double accuracy;
  double error;
  double precision;
  double recall;
  double f1;
  double macro_f1;
  size_t tp;
  size_t fp;
  size_t fn;
  size_t tn;
} wqa_eval_report;

WQA_API wqa_status wqa_evaluate(const int* predictions, const int* labels, size_t n, wqa_eval_report* out);
WQA_API wqa_status wqa_fuse(const double* scores, size_t n_models, size_t n_samples, const double* weights,
                            double* fused_out);
WQA_API wqa_status wqa_fitness_error(const double* scores, size_t n_models, size_t n_samples, const int* labels,
                                     const double* weights, double threshold, double* error_out);

/* optimizers */
typedef double (*wqa_objective_fn)(const double* x, size_t n, void* user);

typedef struct wqa_optimizer_options {
  const char* method;       /* pso, nelder-mead, lbfgs, powell */
  size_t max_iterations;    /* 0: method default */
  uint64_t seed;
  double lower;             /* box applied to every coordinate */
  double upper;
  double tolerance;         /* 0: 1e-6 */
  double lbfgs_fd_step;     /* 0: 1e-3 */
} wqa_optimizer_options;

WQA_API void wqa_optimizer_options_init(wqa_optimizer_options* o);
WQA_API wqa_status wqa_optimize(wqa_objective_fn f, void* user, const double* x0, size_t n,
                                const wqa_optimizer_options* o, wqa_optimization_result** out);
WQA_API wqa_status wqa_optimize_fusion(const double* scores, size_t n_models, size_t n_samples, const int* labels,
                                       double threshold, const wqa_optimizer_options* o,
                                       wqa_optimization_result** out);
WQA_API wqa_status wqa_grid_search(wqa_objective_fn f, void* user, size_t n, double step,
                                   wqa_optimization_result** out);
WQA_API size_t wqa_result_dim(const wqa_optimization_result* r);
WQA_API double wqa_result_error(const wqa_optimization_result* r);
WQA_API size_t wqa_result_evaluations(const wqa_optimization_result* r);
WQA_API wqa_status wqa_result_weights(const wqa_optimization_result* r, double* out, size_t n);
WQA_API wqa_status wqa_result_to_json(const wqa_optimization_result* r, char** out);
WQA_API void wqa_result_free(wqa_optimization_result* r);

/* reduction and clustering; points are row-major m x d */
WQA_API wqa_status wqa_pca_reduce(const double* points, size_t m, size_t d, size_t target_dim, double* reduced_out,
                                  double* explained_out);
WQA_API wqa_status wqa_mst(const double* points, size_t m, size_t d, size_t min_samples, size_t* a_out,
                           size_t* b_out, double* weight_out);
WQA_API wqa_status wqa_hdbscan(const double* points, size_t m, size_t d, size_t min_cluster_size, size_t min_samples,
                               int* labels_out, double* probabilities_out, size_t* n_clusters_out);

/* topics: docs_json is an array of token arrays, one per label */
WQA_API wqa_status wqa_topics(const char* docs_json, const int* labels, size_t n, size_t n_topics, size_t n_terms,
                              char** out_json);

/* geo; NULL paths select the bundled tables */
WQA_API wqa_status wqa_gazetteer_load(const char* patterns_path, const char* regions_path, wqa_gazetteer** out);
WQA_API void wqa_gazetteer_free(wqa_gazetteer* g);
/* *country_out is NULL when nothing matches */
WQA_API wqa_status wqa_map_location(const wqa_gazetteer* g, const char* raw, char** country_out);
WQA_API wqa_status wqa_to_region(const wqa_gazetteer* g, const char* country, char** region_out);

/* pipeline commands: prepare, train-baseline, score, fuse, topics, regions */
WQA_API wqa_status wqa_run_command(const char* name, const char* config_json, char** summary_json);
WQA_API wqa_status wqa_render_summary(const char* summary_json, char** text_out);

#ifdef __cplusplus
}
#endif

#endif
