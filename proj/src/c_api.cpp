#include "wqa/wqa.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "wqa/baseline.hpp"
#include "wqa/corpus.hpp"
#include "wqa/error.hpp"
#include "wqa/fusion.hpp"
#include "wqa/geo.hpp"
#include "wqa/metrics.hpp"
#include "wqa/optimizers.hpp"
#include "wqa/pipeline.hpp"
#include "wqa/reduce_cluster.hpp"
#include "wqa/topics.hpp"

struct wqa_corpus {
  wqa::Corpus value;
};

struct wqa_model {
  wqa::baseline::LogisticModel value;
};

struct wqa_gazetteer {
  wqa::geo::Gazetteer value;
};

struct wqa_optimization_result {
  wqa::opt::OptimizationResult value;
};

namespace {

thread_local std::string last_error;

wqa_status status_of(wqa::ErrorKind k) {
  switch (k) {
    case wqa::ErrorKind::InvalidArgument: return WQA_INVALID_ARGUMENT;
    case wqa::ErrorKind::Io: return WQA_IO;
    case wqa::ErrorKind::Parse: return WQA_PARSE;
    case wqa::ErrorKind::Domain: return WQA_DOMAIN;
  }
  return WQA_INTERNAL;
}

template <class F>
wqa_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return WQA_OK;
  } catch (const wqa::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return WQA_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WQA_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WQA_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return WQA_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) wqa::fail(wqa::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<wqa::Label> labels_of(const int* v, std::size_t n) {
  std::vector<wqa::Label> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] != 0 && v[i] != 1) wqa::fail(wqa::ErrorKind::InvalidArgument, "labels must be 0 or 1");
    out[i] = v[i] ? wqa::Label::Relevant : wqa::Label::Irrelevant;
  }
  return out;
}

wqa::ScoreMatrix matrix_of(const double* scores, std::size_t n_models, std::size_t n_samples) {
  need(scores, "scores");
  std::vector<std::string> names, ids;
  for (std::size_t i = 0; i < n_models; ++i) names.push_back("m" + std::to_string(i));
  for (std::size_t j = 0; j < n_samples; ++j) ids.push_back(std::to_string(j));
  return wqa::ScoreMatrix(names, ids, std::vector<double>(scores, scores + n_models * n_samples));
}

Eigen::MatrixXd points_of(const double* p, std::size_t m, std::size_t d) {
  need(p, "points");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p[i * d + j];
  }
  return out;
}

wqa::opt::OptimizerConfig config_of(const wqa_optimizer_options* o, wqa::opt::Method* method) {
  wqa_optimizer_options d;
  wqa_optimizer_options_init(&d);
  if (!o) o = &d;
  const auto m = wqa::opt::parse_method(o->method ? o->method : "pso");
  if (!m) wqa::fail(wqa::ErrorKind::InvalidArgument, std::string("unknown optimizer '") + o->method + "'");
  *method = *m;
  wqa::opt::OptimizerConfig cfg;
  if (o->max_iterations) cfg.max_iterations = o->max_iterations;
  cfg.seed = o->seed;
  cfg.bounds = {{o->lower, o->upper}};
  if (o->tolerance > 0.0) cfg.tolerance = o->tolerance;
  if (o->lbfgs_fd_step > 0.0) cfg.lbfgs.fd_step = o->lbfgs_fd_step;
  return cfg;
}

}  // namespace

extern "C" {

const char* wqa_version(void) { return "1.0.0"; }

const char* wqa_status_name(wqa_status s) {
  switch (s) {
    case WQA_OK: return "ok";
    case WQA_INVALID_ARGUMENT: return "invalid argument";
    case WQA_IO: return "io error";
    case WQA_PARSE: return "parse error";
    case WQA_DOMAIN: return "domain error";
    case WQA_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wqa_last_error(void) { return last_error.c_str(); }

void wqa_string_free(char* s) { std::free(s); }

wqa_status wqa_corpus_load(const char* path, wqa_corpus** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wqa_corpus{wqa::ingest(path, wqa::format_from_path(path))};
  });
}

wqa_status wqa_corpus_parse(const char* content, int is_csv, wqa_corpus** out) {
  return guard([&] {
    need(content, "content");
    need(out, "out");
    *out = new wqa_corpus{wqa::ingest_string(content, is_csv ? wqa::CorpusFormat::Csv : wqa::CorpusFormat::Jsonl)};
  });
}

void wqa_corpus_free(wqa_corpus* c) { delete c; }

size_t wqa_corpus_size(const wqa_corpus* c) { return c ? c->value.size() : 0; }

wqa_status wqa_corpus_clean(const wqa_corpus* c, size_t min_tokens, wqa_corpus** out) {
  return guard([&] {
    need(c, "corpus");
    need(out, "out");
    wqa::require(min_tokens >= 1, "min_tokens must be at least 1");
    *out = new wqa_corpus{wqa::clean(c->value, min_tokens)};
  });
}

wqa_status wqa_corpus_split(const wqa_corpus* c, double train, double test, double validation, uint64_t seed,
                            wqa_corpus** out) {
  return guard([&] {
    need(c, "corpus");
    need(out, "out");
    *out = new wqa_corpus{wqa::split(c->value, {train, test, validation}, seed)};
  });
}

wqa_status wqa_corpus_to_jsonl(const wqa_corpus* c, char** out) {
  return guard([&] {
    need(c, "corpus");
    need(out, "out");
    *out = dup(wqa::to_jsonl(c->value));
  });
}

wqa_status wqa_split_sizes(size_t n, double train, double test, double validation, size_t sizes[3]) {
  return guard([&] {
    need(sizes, "sizes");
    const auto s = wqa::split_sizes(n, {train, test, validation});
    sizes[0] = s.train;
    sizes[1] = s.test;
    sizes[2] = s.validation;
  });
}

wqa_status wqa_preprocess_tokens(const char* text, char** out_json) {
  return guard([&] {
    need(text, "text");
    need(out_json, "out");
    *out_json = dup(nlohmann::json(wqa::preprocess_tokens(text)).dump());
  });
}

wqa_status wqa_model_train(const wqa_corpus* c, size_t epochs, double learning_rate, uint64_t seed, size_t dim,
                           wqa_model** out) {
  return guard([&] {
    need(c, "corpus");
    need(out, "out");
    wqa::baseline::TrainOptions o;
    if (epochs) o.epochs = epochs;
    if (learning_rate > 0.0) o.learning_rate = learning_rate;
    o.seed = seed;
    if (dim) o.dim = dim;
    *out = new wqa_model{wqa::baseline::train(c->value, o)};
  });
}

wqa_status wqa_model_load(const char* path, wqa_model** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new wqa_model{wqa::baseline::load_model(path)};
  });
}

wqa_status wqa_model_save(const wqa_model* m, const char* path) {
  return guard([&] {
    need(m, "model");
    need(path, "path");
    wqa::baseline::save_model(m->value, path);
  });
}

wqa_status wqa_model_score_text(const wqa_model* m, const char* text, double* out) {
  return guard([&] {
    need(m, "model");
    need(text, "text");
    need(out, "out");
    *out = m->value.score_text(text);
  });
}

void wqa_model_free(wqa_model* m) { delete m; }

wqa_status wqa_evaluate(const int* predictions, const int* labels, size_t n, wqa_eval_report* out) {
  return guard([&] {
    need(predictions, "predictions");
    need(labels, "labels");
    need(out, "out");
    const auto r = wqa::evaluate(labels_of(predictions, n), labels_of(labels, n));
    *out = {r.accuracy, r.error, r.precision, r.recall, r.f1, r.macro_f1,
            r.counts.tp, r.counts.fp, r.counts.fn, r.counts.tn};
  });
}

wqa_status wqa_fuse(const double* scores, size_t n_models, size_t n_samples, const double* weights, double* fused_out) {
  return guard([&] {
    need(weights, "weights");
    need(fused_out, "fused_out");
    const auto m = matrix_of(scores, n_models, n_samples);
    const auto f = wqa::fuse(m, std::span<const double>(weights, n_models));
    std::copy(f.begin(), f.end(), fused_out);
  });
}

wqa_status wqa_fitness_error(const double* scores, size_t n_models, size_t n_samples, const int* labels,
                             const double* weights, double threshold, double* error_out) {
  return guard([&] {
    need(labels, "labels");
    need(weights, "weights");
    need(error_out, "error_out");
    const auto m = matrix_of(scores, n_models, n_samples);
    *error_out = wqa::fitness_error(std::span<const double>(weights, n_models), m, labels_of(labels, n_samples), threshold);
  });
}

void wqa_optimizer_options_init(wqa_optimizer_options* o) {
  if (!o) return;
  o->method = "pso";
  o->max_iterations = 0;
  o->seed = 0;
  o->lower = 0.0;
  o->upper = 1.0;
  o->tolerance = 0.0;
  o->lbfgs_fd_step = 0.0;
}

wqa_status wqa_optimize(wqa_objective_fn f, void* user, const double* x0, size_t n, const wqa_optimizer_options* o,
                        wqa_optimization_result** out) {
  return guard([&] {
    need(reinterpret_cast<const void*>(f), "objective");
    need(x0, "x0");
    need(out, "out");
    wqa::opt::Method m{};
    const auto cfg = config_of(o, &m);
    const wqa::opt::Objective obj([f, user](std::span<const double> x) { return f(x.data(), x.size(), user); });
    *out = new wqa_optimization_result{wqa::opt::optimize(m, obj, std::span<const double>(x0, n), cfg)};
  });
}

wqa_status wqa_optimize_fusion(const double* scores, size_t n_models, size_t n_samples, const int* labels,
                               double threshold, const wqa_optimizer_options* o, wqa_optimization_result** out) {
  return guard([&] {
    need(labels, "labels");
    need(out, "out");
    wqa::opt::Method m{};
    const auto cfg = config_of(o, &m);
    auto matrix = std::make_shared<const wqa::ScoreMatrix>(matrix_of(scores, n_models, n_samples));
    *out = new wqa_optimization_result{
        wqa::opt::optimize_fusion(m, matrix, labels_of(labels, n_samples), threshold, cfg)};
  });
}

wqa_status wqa_grid_search(wqa_objective_fn f, void* user, size_t n, double step, wqa_optimization_result** out) {
  return guard([&] {
    need(reinterpret_cast<const void*>(f), "objective");
    need(out, "out");
    const wqa::opt::Objective obj([f, user](std::span<const double> x) { return f(x.data(), x.size(), user); });
    *out = new wqa_optimization_result{wqa::opt::grid_search_oracle(obj, n, step)};
  });
}

size_t wqa_result_dim(const wqa_optimization_result* r) { return r ? r->value.best_weights.size() : 0; }

double wqa_result_error(const wqa_optimization_result* r) { return r ? r->value.best_error : 1.0; }

size_t wqa_result_evaluations(const wqa_optimization_result* r) { return r ? r->value.evaluations : 0; }

wqa_status wqa_result_weights(const wqa_optimization_result* r, double* out, size_t n) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    wqa::require(n == r->value.best_weights.size(), "output length does not match result dimension");
    std::copy(r->value.best_weights.begin(), r->value.best_weights.end(), out);
  });
}

wqa_status wqa_result_to_json(const wqa_optimization_result* r, char** out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    *out = dup(wqa::opt::to_json(r->value));
  });
}

void wqa_result_free(wqa_optimization_result* r) { delete r; }

wqa_status wqa_pca_reduce(const double* points, size_t m, size_t d, size_t target_dim, double* reduced_out,
                          double* explained_out) {
  return guard([&] {
    need(reduced_out, "reduced_out");
    wqa::cluster::EmbeddingMatrix e;
    e.vectors = points_of(points, m, d);
    e.ids.resize(m);
    const auto r = wqa::cluster::pca(e, target_dim);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < target_dim; ++j) {
        reduced_out[i * target_dim + j] = r.reduced.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
    if (explained_out) std::copy(r.explained_variance.begin(), r.explained_variance.end(), explained_out);
  });
}

wqa_status wqa_mst(const double* points, size_t m, size_t d, size_t min_samples, size_t* a_out, size_t* b_out,
                   double* weight_out) {
  return guard([&] {
    need(a_out, "a_out");
    need(b_out, "b_out");
    need(weight_out, "weight_out");
    const auto edges = wqa::cluster::mst(points_of(points, m, d), min_samples);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      a_out[i] = edges[i].a;
      b_out[i] = edges[i].b;
      weight_out[i] = edges[i].weight;
    }
  });
}

wqa_status wqa_hdbscan(const double* points, size_t m, size_t d, size_t min_cluster_size, size_t min_samples,
                       int* labels_out, double* probabilities_out, size_t* n_clusters_out) {
  return guard([&] {
    need(labels_out, "labels_out");
    const auto r = wqa::cluster::hdbscan(points_of(points, m, d), {min_cluster_size, min_samples, false});
    std::copy(r.assignment.labels.begin(), r.assignment.labels.end(), labels_out);
    if (probabilities_out) {
      std::copy(r.assignment.probabilities.begin(), r.assignment.probabilities.end(), probabilities_out);
    }
    if (n_clusters_out) *n_clusters_out = r.assignment.cluster_count;
  });
}

wqa_status wqa_topics(const char* docs_json, const int* labels, size_t n, size_t n_topics, size_t n_terms,
                      char** out_json) {
  return guard([&] {
    need(docs_json, "docs_json");
    need(labels, "labels");
    need(out_json, "out_json");
    const auto docs = nlohmann::json::parse(docs_json).get<std::vector<std::vector<std::string>>>();
    wqa::require(docs.size() == n, "document count does not match label count");
    const auto w = wqa::topics::ctfidf(docs, std::vector<int>(labels, labels + n));
    *out_json = dup(wqa::topics::to_json(wqa::topics::top_topics(w, n_topics, n_terms)));
  });
}

wqa_status wqa_gazetteer_load(const char* patterns_path, const char* regions_path, wqa_gazetteer** out) {
  return guard([&] {
    need(out, "out");
    if (!patterns_path && !regions_path) {
      *out = new wqa_gazetteer{wqa::geo::default_gazetteer()};
      return;
    }
    need(patterns_path, "patterns_path");
    need(regions_path, "regions_path");
    *out = new wqa_gazetteer{wqa::geo::load_gazetteer(patterns_path, regions_path)};
  });
}

void wqa_gazetteer_free(wqa_gazetteer* g) { delete g; }

wqa_status wqa_map_location(const wqa_gazetteer* g, const char* raw, char** country_out) {
  return guard([&] {
    need(g, "gazetteer");
    need(raw, "raw");
    need(country_out, "country_out");
    const auto c = wqa::geo::map_location(raw, g->value);
    *country_out = c ? dup(*c) : nullptr;
  });
}

wqa_status wqa_to_region(const wqa_gazetteer* g, const char* country, char** region_out) {
  return guard([&] {
    need(g, "gazetteer");
    need(country, "country");
    need(region_out, "region_out");
    *region_out = dup(wqa::geo::to_region(country, g->value));
  });
}

wqa_status wqa_run_command(const char* name, const char* config_json, char** summary_json) {
  return guard([&] {
    need(name, "name");
    need(config_json, "config_json");
    need(summary_json, "summary_json");
    const auto cfg = nlohmann::json::parse(config_json);
    wqa::require(cfg.is_object(), "config must be a json object");
    const std::string cmd = name;
    wqa::pipeline::Json s;
    if (cmd == "prepare") s = wqa::pipeline::cmd_prepare(cfg);
    else if (cmd == "train-baseline") s = wqa::pipeline::cmd_train_baseline(cfg);
    else if (cmd == "score") s = wqa::pipeline::cmd_score(cfg);
    else if (cmd == "fuse") s = wqa::pipeline::cmd_fuse(cfg);
    else if (cmd == "topics") s = wqa::pipeline::cmd_topics(cfg);
    else if (cmd == "regions") s = wqa::pipeline::cmd_regions(cfg);
    else wqa::fail(wqa::ErrorKind::InvalidArgument, "unknown command '" + cmd + "'");
    *summary_json = dup(s.dump());
  });
}

wqa_status wqa_render_summary(const char* summary_json, char** text_out) {
  return guard([&] {
    need(summary_json, "summary_json");
    need(text_out, "text_out");
    *text_out = dup(wqa::pipeline::render(nlohmann::json::parse(summary_json)));
  });
}

}  // extern "C"
