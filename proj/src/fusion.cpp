#include "wqa/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "wqa/csv.hpp"
#include "wqa/error.hpp"
#include "wqa/text.hpp"

namespace wqa {

ScoreMatrix::ScoreMatrix(std::vector<std::string> model_names, std::vector<std::string> sample_ids,
                         std::vector<double> values)
    : model_names_(std::move(model_names)), sample_ids_(std::move(sample_ids)), values_(std::move(values)) {
  if (model_names_.empty()) fail(ErrorKind::Domain, "score matrix has no models");
  if (values_.size() != model_names_.size() * sample_ids_.size()) {
    fail(ErrorKind::Domain, "score matrix has " + std::to_string(values_.size()) + " values, expected " +
                                std::to_string(model_names_.size() * sample_ids_.size()));
  }
  std::unordered_set<std::string> names(model_names_.begin(), model_names_.end());
  if (names.size() != model_names_.size()) fail(ErrorKind::Domain, "duplicate model name in score matrix");
  std::unordered_set<std::string> ids;
  for (const auto& id : sample_ids_) {
    if (!ids.insert(id).second) fail(ErrorKind::Domain, "duplicate sample id '" + id + "' in score matrix");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorKind::Domain, "score for sample '" + sample_ids_[i % samples()] + "', model '" +
                                  model_names_[i / samples()] + "' is outside [0, 1]");
    }
  }
}

std::size_t ScoreMatrix::model_index(const std::string& name) const {
  auto it = std::find(model_names_.begin(), model_names_.end(), name);
  if (it == model_names_.end()) fail(ErrorKind::InvalidArgument, "unknown model '" + name + "'");
  return static_cast<std::size_t>(it - model_names_.begin());
}

ScoreMatrix ScoreMatrix::select_models(const std::vector<std::string>& names) const {
  std::vector<double> values;
  values.reserve(names.size() * samples());
  for (const auto& n : names) {
    auto r = row(model_index(n));
    values.insert(values.end(), r.begin(), r.end());
  }
  return ScoreMatrix(names, sample_ids_, std::move(values));
}

ScoreMatrix parse_scores(std::string_view content) {
  auto rows = csv::parse(content);
  if (rows.empty()) fail(ErrorKind::Parse, "score file is empty");
  const auto& header = rows.front();
  if (header.fields.size() < 2 || header.fields.front() != "sample_id") {
    fail(ErrorKind::Parse, "score header must be 'sample_id,<model1>,...'");
  }
  std::vector<std::string> names(header.fields.begin() + 1, header.fields.end());
  const std::size_t n = names.size();
  const std::size_t m = rows.size() - 1;
  std::vector<std::string> ids;
  std::vector<double> values(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& r = rows[j + 1];
    if (r.fields.size() != n + 1) {
      fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": expected " + std::to_string(n + 1) + " fields");
    }
    ids.push_back(r.fields[0]);
    for (std::size_t i = 0; i < n; ++i) values[i * m + j] = csv::parse_double(r.fields[i + 1], r.line);
  }
  return ScoreMatrix(std::move(names), std::move(ids), std::move(values));
}

ScoreMatrix load_scores(const std::string& path) {
  try {
    return parse_scores(text::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_scores(const ScoreMatrix& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  std::vector<std::string> header{"sample_id"};
  header.insert(header.end(), s.model_names().begin(), s.model_names().end());
  out << csv::format_row(header);
  for (std::size_t j = 0; j < s.samples(); ++j) {
    std::vector<std::string> row{s.sample_ids()[j]};
    for (std::size_t i = 0; i < s.models(); ++i) row.push_back(csv::format_double(s.at(i, j)));
    out << csv::format_row(row);
  }
}

std::map<std::string, Label> parse_labels(std::string_view content) {
  auto rows = csv::parse(content);
  if (rows.empty()) fail(ErrorKind::Parse, "label file is empty");
  const auto c_id = csv::column(rows.front(), "sample_id");
  const auto c_label = csv::column(rows.front(), "label");
  if (c_id == std::string_view::npos || c_label == std::string_view::npos) {
    fail(ErrorKind::Parse, "label header must be 'sample_id,label'");
  }
  std::map<std::string, Label> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.fields.size() <= std::max(c_id, c_label)) {
      fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": short label row");
    }
    auto l = parse_label(r.fields[c_label]);
    if (!l) fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": unknown label '" + r.fields[c_label] + "'");
    if (!out.emplace(r.fields[c_id], *l).second) {
      fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": duplicate sample id '" + r.fields[c_id] + "'");
    }
  }
  return out;
}

std::map<std::string, Label> load_labels(const std::string& path) {
  try {
    return parse_labels(text::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::vector<Label> align_labels(const ScoreMatrix& s, const std::map<std::string, Label>& labels) {
  std::vector<Label> out;
  out.reserve(s.samples());
  std::vector<std::string> missing;
  for (const auto& id : s.sample_ids()) {
    auto it = labels.find(id);
    if (it == labels.end()) {
      missing.push_back(id);
      continue;
    }
    out.push_back(it->second);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 10) list += ", ...";
    fail(ErrorKind::Domain, std::to_string(missing.size()) + " scored samples have no label: " + list);
  }
  return out;
}

std::vector<double> normalize_weights(std::span<const double> weights) {
  double sum = 0.0;
  bool positive = false;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, "fusion weights must be finite and non-negative");
    positive = positive || w > 0.0;
    sum += w;
  }
  require(positive, "fusion weights must contain a strictly positive entry");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= sum;
  return out;
}

std::vector<double> fuse(const ScoreMatrix& scores, std::span<const double> weights) {
  require(weights.size() == scores.models(), "weight vector has " + std::to_string(weights.size()) +
                                                 " entries for " + std::to_string(scores.models()) + " models");
  const auto w = normalize_weights(weights);
  const std::size_t m = scores.samples();
  std::vector<double> out(m, 0.0);
  std::vector<double> lo(m, 1.0);
  std::vector<double> hi(m, 0.0);
  for (std::size_t i = 0; i < scores.models(); ++i) {
    auto col = scores.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      out[j] += w[i] * col[j];
      lo[j] = std::min(lo[j], col[j]);
      hi[j] = std::max(hi[j], col[j]);
    }
  }
  for (std::size_t j = 0; j < m; ++j) out[j] = std::clamp(out[j], lo[j], hi[j]);
  return out;
}

std::vector<Label> decide(std::span<const double> fused, double threshold) {
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  std::vector<Label> out;
  out.reserve(fused.size());
  for (double s : fused) out.push_back(s >= threshold ? Label::Relevant : Label::Irrelevant);
  return out;
}

std::vector<double> simple_average(const ScoreMatrix& scores) {
  const std::vector<double> ones(scores.models(), 1.0);
  return fuse(scores, ones);
}

std::vector<std::string> select_top_k(const std::map<std::string, EvalReport>& reports, std::size_t k) {
  require(k >= 1, "top-k requires k >= 1");
  require(k <= reports.size(), "top-k: k=" + std::to_string(k) + " exceeds " + std::to_string(reports.size()) +
                                   " models");
  std::vector<std::pair<std::string, double>> ranked;
  for (const auto& [name, r] : reports) ranked.emplace_back(name, r.f1);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].first);
  return out;
}

}  // namespace wqa
