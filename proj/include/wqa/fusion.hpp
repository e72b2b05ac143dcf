#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "wqa/corpus.hpp"
#include "wqa/metrics.hpp"

namespace wqa {

// n models x m samples of posterior probabilities for the positive class.
// Values are stored model-major: row(i) is model i's score column.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  // Throws Domain unless names and ids are unique, values.size() == n*m and
  // every value lies in [0, 1].
  ScoreMatrix(std::vector<std::string> model_names, std::vector<std::string> sample_ids, std::vector<double> values);

  std::size_t models() const noexcept { return model_names_.size(); }
  std::size_t samples() const noexcept { return sample_ids_.size(); }
  const std::vector<std::string>& model_names() const noexcept { return model_names_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

  std::span<const double> row(std::size_t model) const {
    return {values_.data() + model * samples(), samples()};
  }
  double at(std::size_t model, std::size_t sample) const { return values_[model * samples() + sample]; }

  // Sub-matrix keeping the named models in the given order.
  ScoreMatrix select_models(const std::vector<std::string>& names) const;
  std::size_t model_index(const std::string& name) const;

 private:
  std::vector<std::string> model_names_;
  std::vector<std::string> sample_ids_;
  std::vector<double> values_;
};

// csv "sample_id,<model1>,...,<modeln>".
ScoreMatrix load_scores(const std::string& path);
ScoreMatrix parse_scores(std::string_view content);
void write_scores(const ScoreMatrix& s, const std::string& path);

// csv "sample_id,label".
std::map<std::string, Label> load_labels(const std::string& path);
std::map<std::string, Label> parse_labels(std::string_view content);

// Labels in the matrix's sample order; a sample without a label is an error.
std::vector<Label> align_labels(const ScoreMatrix& s, const std::map<std::string, Label>& labels);

// Weights are normalized to sum 1 before combining. Each fused value is
// clamped into [min_i S_i[j], max_i S_i[j]] so the convex-combination bound
// holds exactly under rounding.
std::vector<double> fuse(const ScoreMatrix& scores, std::span<const double> weights);

std::vector<double> normalize_weights(std::span<const double> weights);

inline constexpr double kDefaultThreshold = 0.5;

// relevant iff score >= threshold.
std::vector<Label> decide(std::span<const double> fused, double threshold = kDefaultThreshold);

std::vector<double> simple_average(const ScoreMatrix& scores);

// Models by F1 descending, ties by name ascending; first k.
std::vector<std::string> select_top_k(const std::map<std::string, EvalReport>& reports, std::size_t k);

}  // namespace wqa
