#include "wqa/metrics.hpp"

#include <json.hpp>

#include "wqa/error.hpp"
#include "wqa/fusion.hpp"

namespace wqa {

ConfusionCounts confusion(std::span<const Label> preds, std::span<const Label> labels, Label positive) {
  require(preds.size() == labels.size(), "prediction/label length mismatch: " + std::to_string(preds.size()) +
                                             " vs " + std::to_string(labels.size()));
  require(!preds.empty(), "cannot evaluate an empty prediction set");
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == positive;
    const bool y = labels[i] == positive;
    if (p && y) ++c.tp;
    else if (p) ++c.fp;
    else if (y) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {
double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }
}  // namespace

EvalReport evaluate(const ConfusionCounts& c) {
  require(c.total() > 0, "cannot evaluate zero samples");
  EvalReport r;
  r.counts = c;
  r.accuracy = ratio(c.tp + c.tn, c.total());
  r.error = 1.0 - r.accuracy;
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = ratio(c.tp, c.tp + c.fn);
  r.f1 = f1_of(r.precision, r.recall);
  const double neg_f1 = f1_of(ratio(c.tn, c.tn + c.fn), ratio(c.tn, c.tn + c.fp));
  r.macro_f1 = (r.f1 + neg_f1) / 2.0;
  return r;
}

double fitness_error(std::span<const double> weights, const ScoreMatrix& scores, std::span<const Label> labels,
                     double threshold) {
  require(labels.size() == scores.samples(), "labels do not align with score matrix");
  const auto preds = decide(fuse(scores, weights), threshold);
  return evaluate(confusion(preds, labels)).error;
}

std::string to_json(const EvalReport& r, bool include_macro) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["error"] = r.error;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  if (include_macro) j["macro_f1"] = r.macro_f1;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["tn"] = r.counts.tn;
  return j.dump();
}

}  // namespace wqa
