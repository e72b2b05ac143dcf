#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "wqa/wqa.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  wqa_string_free(s);
  return out;
}

double sphere(const double* x, size_t n, void*) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += (x[i] - 0.25 * static_cast<double>(i + 1)) * (x[i] - 0.25 * static_cast<double>(i + 1));
  return s;
}

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(wqa_version(), "");
  EXPECT_STREQ(wqa_status_name(WQA_OK), "ok");
  EXPECT_STREQ(wqa_status_name(WQA_DOMAIN), "domain error");
}

TEST(CApi, NullArgumentsRejected) {
  EXPECT_EQ(wqa_corpus_load(nullptr, nullptr), WQA_INVALID_ARGUMENT);
  EXPECT_STRNE(wqa_last_error(), "");
  wqa_corpus_free(nullptr);
  wqa_model_free(nullptr);
  wqa_result_free(nullptr);
  wqa_gazetteer_free(nullptr);
}

TEST(CApi, CorpusLifecycle) {
  wqa_corpus* c = nullptr;
  const char* jsonl =
      "{\"id\":\"1\",\"text\":\"water crisis here\",\"label\":\"relevant\"}\n"
      "{\"id\":\"2\",\"text\":\"WATER crisis  here\",\"label\":\"relevant\"}\n"
      "{\"id\":\"3\",\"text\":\"football match tonight\",\"label\":\"irrelevant\"}\n"
      "{\"id\":\"4\",\"text\":\"drought hits farmers\",\"label\":\"relevant\"}\n"
      "{\"id\":\"5\",\"text\":\"pizza and movie night\",\"label\":\"irrelevant\"}\n";
  ASSERT_EQ(wqa_corpus_parse(jsonl, 0, &c), WQA_OK);
  EXPECT_EQ(wqa_corpus_size(c), 5u);
  wqa_corpus* cleaned = nullptr;
  ASSERT_EQ(wqa_corpus_clean(c, 3, &cleaned), WQA_OK);
  EXPECT_EQ(wqa_corpus_size(cleaned), 4u);
  wqa_corpus* split = nullptr;
  ASSERT_EQ(wqa_corpus_split(cleaned, 0.7, 0.2, 0.1, 5, &split), WQA_OK);
  char* out = nullptr;
  ASSERT_EQ(wqa_corpus_to_jsonl(split, &out), WQA_OK);
  EXPECT_NE(take(out).find("\"split\""), std::string::npos);

  wqa_model* m = nullptr;
  ASSERT_EQ(wqa_model_train(cleaned, 100, 0.1, 0, 1024, &m), WQA_OK);
  double s = -1;
  ASSERT_EQ(wqa_model_score_text(m, "drought crisis", &s), WQA_OK);
  EXPECT_GE(s, 0.0);
  EXPECT_LE(s, 1.0);
  wqa_model_free(m);
  wqa_corpus_free(split);
  wqa_corpus_free(cleaned);
  wqa_corpus_free(c);
}

TEST(CApi, ParseErrorCarriesLine) {
  wqa_corpus* c = nullptr;
  EXPECT_EQ(wqa_corpus_parse("{\"text\":\"a b c\"}\nnot json\n", 0, &c), WQA_PARSE);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::string(wqa_last_error()).find("line 2"), std::string::npos);
}

TEST(CApi, SplitSizes) {
  size_t sizes[3];
  ASSERT_EQ(wqa_split_sizes(7930, 0.7, 0.2, 0.1, sizes), WQA_OK);
  EXPECT_EQ(sizes[0], 5551u);
  EXPECT_EQ(sizes[1], 1586u);
  EXPECT_EQ(sizes[2], 793u);
}

TEST(CApi, PreprocessTokens) {
  char* out = nullptr;
  ASSERT_EQ(wqa_preprocess_tokens("The water is 100% unsafe!!!", &out), WQA_OK);
  EXPECT_EQ(take(out), "[\"water\",\"unsafe\"]");
}

TEST(CApi, EvaluateAndFuse) {
  const int p[] = {1, 1, 0, 0}, l[] = {1, 0, 1, 0};
  wqa_eval_report r;
  ASSERT_EQ(wqa_evaluate(p, l, 4, &r), WQA_OK);
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.f1, 0.5);

  const double scores[] = {0.8, 0.2, 0.4, 0.6};
  const double w[] = {1.0, 1.0};
  double fused[2];
  ASSERT_EQ(wqa_fuse(scores, 2, 2, w, fused), WQA_OK);
  EXPECT_NEAR(fused[0], 0.6, 1e-15);
  EXPECT_NEAR(fused[1], 0.4, 1e-15);
  const int labels[] = {1, 0};
  double e = -1;
  ASSERT_EQ(wqa_fitness_error(scores, 2, 2, labels, w, 0.5, &e), WQA_OK);
  EXPECT_EQ(e, 0.0);
  const int bad[] = {1, 7};
  EXPECT_EQ(wqa_fitness_error(scores, 2, 2, bad, w, 0.5, &e), WQA_INVALID_ARGUMENT);
}

TEST(CApi, OptimizeCallback) {
  wqa_optimizer_options o;
  wqa_optimizer_options_init(&o);
  o.method = "powell";
  const double x0[] = {0.5, 0.5};
  wqa_optimization_result* r = nullptr;
  ASSERT_EQ(wqa_optimize(sphere, nullptr, x0, 2, &o, &r), WQA_OK);
  double w[2];
  ASSERT_EQ(wqa_result_weights(r, w, 2), WQA_OK);
  EXPECT_NEAR(w[0], 0.25, 1e-6);
  EXPECT_NEAR(w[1], 0.5, 1e-6);
  EXPECT_EQ(wqa_result_dim(r), 2u);
  EXPECT_GT(wqa_result_evaluations(r), 0u);
  char* json = nullptr;
  ASSERT_EQ(wqa_result_to_json(r, &json), WQA_OK);
  EXPECT_NE(take(json).find("powell"), std::string::npos);
  wqa_result_free(r);

  o.method = "simulated-annealing";
  EXPECT_EQ(wqa_optimize(sphere, nullptr, x0, 2, &o, &r), WQA_INVALID_ARGUMENT);
}

TEST(CApi, GridAndFusionSearch) {
  const double scores[] = {0.9, 0.1, 0.4, 0.3, 0.6, 0.8};
  const int labels[] = {1, 0, 1};
  wqa_optimizer_options o;
  wqa_optimizer_options_init(&o);
  wqa_optimization_result* r = nullptr;
  ASSERT_EQ(wqa_optimize_fusion(scores, 2, 3, labels, 0.5, &o, &r), WQA_OK);
  EXPECT_EQ(wqa_result_error(r), 0.0);
  wqa_result_free(r);
  ASSERT_EQ(wqa_grid_search(sphere, nullptr, 2, 0.25, &r), WQA_OK);
  EXPECT_EQ(wqa_result_evaluations(r), 5u);
  wqa_result_free(r);
}

TEST(CApi, ClusteringCalls) {
  const double pts[] = {0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1};
  int labels[6];
  double probs[6];
  size_t k = 0;
  ASSERT_EQ(wqa_hdbscan(pts, 6, 2, 3, 2, labels, probs, &k), WQA_OK);
  EXPECT_EQ(k, 2u);
  size_t a[5], b[5];
  double w[5];
  ASSERT_EQ(wqa_mst(pts, 6, 2, 1, a, b, w), WQA_OK);
  double reduced[6], explained[1];
  const double line[] = {1, 1, 2, 2, 3, 3};
  ASSERT_EQ(wqa_pca_reduce(line, 3, 2, 1, reduced, explained), WQA_OK);
  EXPECT_NEAR(std::abs(reduced[1] - reduced[0]), std::sqrt(2.0), 1e-9);
  EXPECT_EQ(wqa_hdbscan(pts, 6, 2, 1, 2, labels, probs, &k), WQA_INVALID_ARGUMENT);
}

TEST(CApi, Topics) {
  const int labels[] = {0};
  char* out = nullptr;
  ASSERT_EQ(wqa_topics("[[\"drought\"]]", labels, 1, 10, 10, &out), WQA_OK);
  EXPECT_NE(take(out).find("drought"), std::string::npos);
}

TEST(CApi, Gazetteer) {
  wqa_gazetteer* g = nullptr;
  ASSERT_EQ(wqa_gazetteer_load(nullptr, nullptr, &g), WQA_OK);
  char* country = nullptr;
  ASSERT_EQ(wqa_map_location(g, "Florida, FL", &country), WQA_OK);
  EXPECT_EQ(take(country), "USA");
  ASSERT_EQ(wqa_map_location(g, "somewhere nice", &country), WQA_OK);
  EXPECT_EQ(country, nullptr);
  char* region = nullptr;
  ASSERT_EQ(wqa_to_region(g, "Pakistan", &region), WQA_OK);
  EXPECT_EQ(take(region), "Asia");
  EXPECT_EQ(wqa_to_region(g, "Atlantis", &region), WQA_DOMAIN);
  wqa_gazetteer_free(g);
}

TEST(CApi, RunCommand) {
  char* summary = nullptr;
  EXPECT_EQ(wqa_run_command("prepare", "{\"input\":\"/nonexistent.jsonl\",\"output\":\"/tmp/x.jsonl\"}", &summary),
            WQA_IO);
  EXPECT_EQ(wqa_run_command("launch", "{}", &summary), WQA_INVALID_ARGUMENT);
  EXPECT_EQ(wqa_run_command("prepare", "{not json", &summary), WQA_PARSE);
  char* text = nullptr;
  ASSERT_EQ(wqa_render_summary("{\"command\":\"regions\",\"tweets\":0}", &text), WQA_OK);
  EXPECT_FALSE(take(text).empty());
}
