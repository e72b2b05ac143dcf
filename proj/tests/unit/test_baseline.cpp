#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "wqa/baseline.hpp"
#include "wqa/error.hpp"
#include "wqa/random.hpp"

using namespace wqa;
using namespace wqa::baseline;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Corpus toy() {
  const char* rel[] = {"drought reservoir empty", "reservoir drought crops", "crops drought wells",
                       "wells reservoir crops", "drought wells empty"};
  const char* irr[] = {"football match tonight", "match pizza concert", "pizza concert tickets",
                       "football tickets sold", "concert tonight pizza"};
  std::vector<Tweet> ts;
  for (int i = 0; i < 5; ++i) ts.push_back({"r" + std::to_string(i), rel[i], {}, Label::Relevant, {}});
  for (int i = 0; i < 5; ++i) ts.push_back({"i" + std::to_string(i), irr[i], {}, Label::Irrelevant, {}});
  return Corpus(ts);
}

}  // namespace

TEST(Features, UnitNormSortedIndices) {
  auto m = train(toy(), {50, 0.1, 0, 1024});
  auto f = m.features("drought drought wells football");
  double norm = 0.0;
  for (double v : f.values) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-6);
  for (std::size_t i = 1; i < f.indices.size(); ++i) EXPECT_LT(f.indices[i - 1], f.indices[i]);
  EXPECT_TRUE(m.features("").indices.empty());
}

TEST(Features, HashIsFnv1a) {
  // FNV-1a 64 of "a": 0xaf63dc4c8601ec8c
  EXPECT_EQ(hash_token("a", std::size_t{1} << 32), 0xaf63dc4c8601ec8cULL % (std::size_t{1} << 32));
}

TEST(Train, SeparableToyCorpus) {
  auto c = toy();
  auto m = train(c);
  auto s = score(m, c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].label == Label::Relevant) {
      EXPECT_GT(s[i], 0.5) << c[i].text;
    } else {
      EXPECT_LT(s[i], 0.5) << c[i].text;
    }
  }
}

TEST(Train, SingleClassRejected) {
  std::vector<Tweet> ts{{"1", "a b c", {}, Label::Relevant, {}}, {"2", "d e f", {}, Label::Relevant, {}}};
  EXPECT_THROW(train(Corpus(ts)), Error);
}

TEST(Train, BitIdentical) {
  auto a = train(toy(), {100, 0.1, 7, 4096});
  auto b = train(toy(), {100, 0.1, 7, 4096});
  EXPECT_EQ(serialize_model(a), serialize_model(b));
  EXPECT_TRUE(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
}

TEST(Train, LossNonIncreasingAtSmallRate) {
  auto c = toy();
  std::vector<double> targets;
  for (const auto& t : c.tweets()) targets.push_back(t.label == Label::Relevant ? 1.0 : 0.0);
  double prev = INFINITY;
  for (std::size_t epochs = 1; epochs <= 30; ++epochs) {
    auto m = train(c, {epochs, 0.01, 0, 512});
    std::vector<FeatureVector> xs;
    for (const auto& t : c.tweets()) xs.push_back(m.features(t.text));
    const double loss = loss_and_gradient(xs, targets, m.weights(), m.bias()).loss;
    EXPECT_LE(loss, prev + 1e-15);
    prev = loss;
  }
}

TEST(Score, ZeroWeightModel) {
  LogisticModel m(64, 0.3);
  EXPECT_DOUBLE_EQ(m.score_text("anything goes here"), sigmoid(0.3));
  EXPECT_DOUBLE_EQ(m.score_text(""), sigmoid(0.3));
}

TEST(Score, EmptyTextIsSigmoidBias) {
  auto m = train(toy(), {20, 0.1, 0, 256});
  EXPECT_DOUBLE_EQ(m.score_text(""), sigmoid(m.bias()));
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(13);
  auto m = train(toy(), {5, 0.1, 0, 32});
  std::vector<FeatureVector> xs;
  std::vector<double> targets;
  for (const auto& t : toy().tweets()) {
    xs.push_back(m.features(t.text));
    targets.push_back(t.label == Label::Relevant ? 1.0 : 0.0);
  }
  for (int point = 0; point < 20; ++point) {
    std::vector<double> w(32);
    for (auto& v : w) v = rng.uniform(-2, 2);
    const double b = rng.uniform(-1, 1);
    auto g = loss_and_gradient(xs, targets, w, b);
    const double h = 1e-6;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto wp = w, wm = w;
      wp[k] += h;
      wm[k] -= h;
      const double fd =
          (loss_and_gradient(xs, targets, wp, b).loss - loss_and_gradient(xs, targets, wm, b).loss) / (2 * h);
      EXPECT_LE(std::abs(fd - g.grad_w[k]), 1e-5 * std::max(1.0, std::abs(fd)));
    }
    const double fdb =
        (loss_and_gradient(xs, targets, w, b + h).loss - loss_and_gradient(xs, targets, w, b - h).loss) / (2 * h);
    EXPECT_LE(std::abs(fdb - g.grad_b), 1e-5 * std::max(1.0, std::abs(fdb)));
  }
}

TEST(Persistence, RoundTrip) {
  auto m = train(toy(), {60, 0.1, 3, 2048});
  auto path = (std::filesystem::temp_directory_path() / "wqa_model_roundtrip.jsonl").string();
  save_model(m, path);
  auto back = load_model(path);
  std::filesystem::remove(path);
  EXPECT_EQ(serialize_model(back), serialize_model(m));
  for (const auto& t : toy().tweets()) EXPECT_EQ(back.score_text(t.text), m.score_text(t.text));
}

TEST(Persistence, CorruptModel) { EXPECT_THROW(parse_model("{\"not\":\"a model\"}\n"), Error); }
