#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "wqa/corpus.hpp"

namespace wqa {

class ScoreMatrix;

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Precision, recall and F1 are 0 whenever their denominator is 0.
// error is computed as 1 - accuracy, so accuracy + error == 1 holds exactly.
struct EvalReport {
  double accuracy = 0.0;
  double error = 1.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double macro_f1 = 0.0;  // unweighted mean of per-class F1
  ConfusionCounts counts;
};

ConfusionCounts confusion(std::span<const Label> preds, std::span<const Label> labels,
                          Label positive = Label::Relevant);

EvalReport evaluate(const ConfusionCounts& counts);

inline EvalReport evaluate(std::span<const Label> preds, std::span<const Label> labels) {
  return evaluate(confusion(preds, labels));
}

// 1 - accuracy of decide(fuse(scores, weights), threshold).
double fitness_error(std::span<const double> weights, const ScoreMatrix& scores, std::span<const Label> labels,
                     double threshold = 0.5);

// Flat json object with fixed key order.
std::string to_json(const EvalReport& r, bool include_macro = false);

}  // namespace wqa
