#include <gtest/gtest.h>

#include <cmath>

#include "wqa/error.hpp"
#include "wqa/random.hpp"
#include "wqa/topics.hpp"

using namespace wqa;
using namespace wqa::topics;

namespace {

std::vector<std::string> repeat(const std::string& t, int n) { return std::vector<std::string>(n, t); }

}  // namespace

TEST(Ctfidf, PipeExample) {
  // class 0: "pipe" x4 plus 6 other tokens (10); class 1: 6 tokens without "pipe"
  std::vector<std::vector<std::string>> docs{repeat("pipe", 4), repeat("leak", 6), repeat("rain", 6)};
  auto w = ctfidf(docs, {0, 0, 1});
  EXPECT_DOUBLE_EQ(w.stats.average_tokens, 8.0);
  EXPECT_EQ(w.stats.f.at("pipe"), 4u);
  EXPECT_NEAR(w.weights[0].at("pipe"), 4.0 * std::log(3.0), 1e-9);
  EXPECT_EQ(w.weights[1].count("pipe"), 0u);
}

TEST(Ctfidf, SingleTerm) {
  auto w = ctfidf({{"drought"}}, {0});
  EXPECT_NEAR(w.weights[0].at("drought"), std::log(2.0), 1e-9);
}

TEST(Ctfidf, NoiseIgnored) {
  auto w = ctfidf({{"a1"}, {"b1", "b1"}}, {-1, 0});
  EXPECT_EQ(w.stats.classes, (std::vector<int>{0}));
  EXPECT_EQ(w.stats.f.count("a1"), 0u);
  EXPECT_THROW(ctfidf({{"x"}}, {-1}), Error);
}

TEST(TopTopics, CountAndOrder) {
  std::vector<std::vector<std::string>> docs{{"rain", "dry"}, {"rain"}, {"pipe"}, {"tank"}, {"tank", "queue"}};
  auto ts = top_topics(ctfidf(docs, {5, 5, 2, 9, 9}), 10, 10);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[0].cluster_id, 5);
  EXPECT_EQ(ts[1].cluster_id, 9);
  EXPECT_EQ(ts[2].cluster_id, 2);
  EXPECT_EQ(ts[2].terms.size(), 1u);
  EXPECT_EQ(ts[0].terms[0].first, "rain");
}

TEST(TopTopics, SeededThemeRanksFirst) {
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
  Rng rng(1);
  const std::vector<std::string> filler{"water", "city", "people", "today"};
  for (int i = 0; i < 20; ++i) {
    docs.push_back({"drought", "drought", filler[rng.below(4)], filler[rng.below(4)]});
    labels.push_back(0);
    docs.push_back({"pipes", filler[rng.below(4)], filler[rng.below(4)]});
    labels.push_back(1);
  }
  auto ts = top_topics(ctfidf(docs, labels), 10, 3);
  for (const auto& t : ts) {
    if (t.cluster_id == 0) {
      EXPECT_EQ(t.terms[0].first, "drought");
    }
  }
}

TEST(TopTopics, LimitsRespected) {
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
  for (int c = 0; c < 12; ++c) {
    docs.push_back({"t" + std::to_string(c), "u" + std::to_string(c), "v"});
    labels.push_back(c);
  }
  auto ts = top_topics(ctfidf(docs, labels), 10, 2);
  EXPECT_EQ(ts.size(), 10u);
  for (const auto& t : ts) EXPECT_LE(t.terms.size(), 2u);
}

TEST(TopTopics, RankingInvariantUnderDuplication) {
  Rng rng(4);
  for (int inst = 0; inst < 20; ++inst) {
    std::vector<std::vector<std::string>> docs;
    std::vector<int> labels;
    const std::size_t classes = 1 + rng.below(4);
    for (int d = 0; d < 30; ++d) {
      std::vector<std::string> doc;
      const std::size_t len = 1 + rng.below(6);
      for (std::size_t k = 0; k < len; ++k) doc.push_back("w" + std::to_string(rng.below(15)));
      docs.push_back(doc);
      labels.push_back(static_cast<int>(rng.below(classes)) - (rng.below(10) == 0 ? 100 : 0));
      if (labels.back() < -1) labels.back() = -1;
    }
    if (std::none_of(labels.begin(), labels.end(), [](int l) { return l >= 0; })) labels[0] = 0;
    auto twice_docs = docs;
    twice_docs.insert(twice_docs.end(), docs.begin(), docs.end());
    auto twice_labels = labels;
    twice_labels.insert(twice_labels.end(), labels.begin(), labels.end());
    auto a = top_topics(ctfidf(docs, labels), 10, 20);
    auto b = top_topics(ctfidf(twice_docs, twice_labels), 10, 20);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
      EXPECT_EQ(a[t].cluster_id, b[t].cluster_id);
      ASSERT_EQ(a[t].terms.size(), b[t].terms.size());
      for (std::size_t k = 0; k < a[t].terms.size(); ++k) {
        EXPECT_EQ(a[t].terms[k].first, b[t].terms[k].first) << "instance " << inst;
        EXPECT_NEAR(b[t].terms[k].second, 2 * a[t].terms[k].second, 1e-9);
      }
    }
  }
}

TEST(Export, CsvAndJson) {
  auto ts = top_topics(ctfidf({{"drought"}}, {0}));
  EXPECT_EQ(to_csv(ts).substr(0, 18), "term,weight,topic\n");
  EXPECT_NE(to_json(ts).find("\"cluster_id\":0"), std::string::npos);
}
