#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wqa/corpus.hpp"

namespace wqa::baseline {

inline constexpr std::size_t kDefaultDim = std::size_t{1} << 18;

// Hashed TF-IDF features, L2-normalized. Indices are unique and ascending.
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
};

// FNV-1a (64-bit) of the token bytes, reduced modulo dim.
std::uint32_t hash_token(std::string_view token, std::size_t dim);

struct TrainOptions {
  std::size_t epochs = 200;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  std::size_t dim = kDefaultDim;
};

class LogisticModel {
 public:
  LogisticModel() = default;
  // A model with every weight zero and idf 1; used for closed-form checks.
  LogisticModel(std::size_t dim, double bias);

  std::size_t dim() const { return weights_.size(); }
  double bias() const { return bias_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t training_docs() const { return n_docs_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> idf() const { return idf_; }

  FeatureVector features(std::string_view text) const;
  // sigmoid(w . x + b)
  double score(const FeatureVector& x) const;
  double score_text(std::string_view text) const { return score(features(text)); }

 private:
  friend LogisticModel train(const Corpus&, const TrainOptions&);
  friend LogisticModel load_model(const std::string&);
  friend LogisticModel parse_model(std::string_view);

  std::vector<double> weights_;
  std::vector<double> idf_;
  double bias_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t n_docs_ = 0;
};

// Full-batch gradient descent on mean cross-entropy over tweets that carry a
// label. Throws Domain unless both labels are present.
LogisticModel train(const Corpus& c, const TrainOptions& opts = {});

std::vector<double> score(const LogisticModel& m, const Corpus& c);

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

// Mean cross-entropy and its analytic gradient; targets are 1 (relevant) / 0.
LossGradient loss_and_gradient(std::span<const FeatureVector> xs, std::span<const double> targets,
                               std::span<const double> w, double b);

// jsonl: a header object, then one {"index","weight","idf"} line per bucket
// whose weight is non-zero or whose idf differs from the unseen-bucket value.
std::string serialize_model(const LogisticModel& m);
void save_model(const LogisticModel& m, const std::string& path);
LogisticModel parse_model(std::string_view content);
LogisticModel load_model(const std::string& path);

}  // namespace wqa::baseline
