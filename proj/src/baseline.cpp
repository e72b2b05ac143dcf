#include "wqa/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "wqa/error.hpp"
#include "wqa/random.hpp"
#include "wqa/text.hpp"

namespace wqa::baseline {

using nlohmann::json;

std::uint32_t hash_token(std::string_view token, std::size_t dim) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : token) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return static_cast<std::uint32_t>(h % dim);
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double unseen_idf(std::size_t n_docs) { return std::log(static_cast<double>(1 + n_docs)) + 1.0; }

// Raw hashed term counts, ascending by bucket.
std::map<std::uint32_t, double> bucket_counts(std::string_view text, std::size_t dim) {
  std::map<std::uint32_t, double> counts;
  for (const auto& tok : preprocess_tokens(text)) counts[hash_token(tok, dim)] += 1.0;
  return counts;
}

FeatureVector weigh(const std::map<std::uint32_t, double>& counts, std::span<const double> idf) {
  FeatureVector x;
  double norm2 = 0.0;
  for (const auto& [i, tf] : counts) {
    const double v = tf * idf[i];
    x.indices.push_back(i);
    x.values.push_back(v);
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : x.values) v *= inv;
  }
  return x;
}

double margin(const FeatureVector& x, std::span<const double> w, double b) {
  double z = b;
  for (std::size_t k = 0; k < x.indices.size(); ++k) z += w[x.indices[k]] * x.values[k];
  return z;
}

}  // namespace

LogisticModel::LogisticModel(std::size_t dim, double bias) : weights_(dim, 0.0), idf_(dim, 1.0), bias_(bias) {
  require(dim >= 1, "feature dimension must be >= 1");
}

FeatureVector LogisticModel::features(std::string_view text) const { return weigh(bucket_counts(text, dim()), idf_); }

double LogisticModel::score(const FeatureVector& x) const { return sigmoid(margin(x, weights_, bias_)); }

LossGradient loss_and_gradient(std::span<const FeatureVector> xs, std::span<const double> targets,
                               std::span<const double> w, double b) {
  require(xs.size() == targets.size() && !xs.empty(), "loss needs aligned, non-empty samples");
  LossGradient out;
  out.grad_w.assign(w.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  for (std::size_t s = 0; s < xs.size(); ++s) {
    const double z = margin(xs[s], w, b);
    out.loss += (softplus(z) - targets[s] * z) * inv_n;
    const double r = (sigmoid(z) - targets[s]) * inv_n;
    out.grad_b += r;
    for (std::size_t k = 0; k < xs[s].indices.size(); ++k) out.grad_w[xs[s].indices[k]] += r * xs[s].values[k];
  }
  return out;
}

LogisticModel train(const Corpus& c, const TrainOptions& opts) {
  require(opts.dim >= 1, "feature dimension must be >= 1");
  require(opts.epochs >= 1, "epochs must be >= 1");
  require(opts.learning_rate > 0.0 && std::isfinite(opts.learning_rate), "learning rate must be positive");

  std::vector<std::map<std::uint32_t, double>> counts;
  std::vector<double> targets;
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& t : c.tweets()) {
    if (!t.label) continue;
    counts.push_back(bucket_counts(t.text, opts.dim));
    targets.push_back(*t.label == Label::Relevant ? 1.0 : 0.0);
    has_pos = has_pos || *t.label == Label::Relevant;
    has_neg = has_neg || *t.label == Label::Irrelevant;
  }
  if (!has_pos || !has_neg) fail(ErrorKind::Domain, "training needs at least one sample of each label");

  LogisticModel m;
  m.n_docs_ = counts.size();
  m.seed_ = opts.seed;
  std::vector<std::size_t> df(opts.dim, 0);
  for (const auto& doc : counts) {
    for (const auto& kv : doc) ++df[kv.first];
  }
  m.idf_.resize(opts.dim);
  for (std::size_t i = 0; i < opts.dim; ++i) {
    m.idf_[i] = std::log(static_cast<double>(1 + m.n_docs_) / static_cast<double>(1 + df[i])) + 1.0;
  }
  std::vector<FeatureVector> xs;
  xs.reserve(counts.size());
  for (const auto& doc : counts) xs.push_back(weigh(doc, m.idf_));

  // Small seeded perturbation on observed buckets only, so unseen buckets stay
  // exactly zero and the saved model stays sparse.
  m.weights_.assign(opts.dim, 0.0);
  Rng rng(opts.seed);
  for (std::size_t i = 0; i < opts.dim; ++i) {
    if (df[i] > 0) m.weights_[i] = rng.uniform(-1e-3, 1e-3);
  }
  m.bias_ = 0.0;

  for (std::size_t e = 0; e < opts.epochs; ++e) {
    auto lg = loss_and_gradient(xs, targets, m.weights_, m.bias_);
    for (std::size_t i = 0; i < opts.dim; ++i) m.weights_[i] -= opts.learning_rate * lg.grad_w[i];
    m.bias_ -= opts.learning_rate * lg.grad_b;
  }
  return m;
}

std::vector<double> score(const LogisticModel& m, const Corpus& c) {
  require(m.dim() >= 1, "model is not trained");
  std::vector<double> out;
  out.reserve(c.size());
  for (const auto& t : c.tweets()) out.push_back(m.score_text(t.text));
  return out;
}

std::string serialize_model(const LogisticModel& m) {
  nlohmann::ordered_json head;
  head["format"] = "wqa-logistic";
  head["version"] = 1;
  head["dim"] = m.dim();
  head["bias"] = m.bias();
  head["seed"] = m.seed();
  head["n_docs"] = m.training_docs();
  std::string out = head.dump() + "\n";
  const double base = unseen_idf(m.training_docs());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double w = m.weights()[i];
    const double idf = m.idf()[i];
    if (w == 0.0 && idf == base) continue;
    nlohmann::ordered_json row;
    row["index"] = i;
    row["weight"] = w;
    row["idf"] = idf;
    out += row.dump() + "\n";
  }
  return out;
}

void save_model(const LogisticModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << serialize_model(m);
}

LogisticModel parse_model(std::string_view content) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  LogisticModel m;
  bool have_header = false;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, "model line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("format", "") != "wqa-logistic" || j.value("version", 0) != 1) {
          fail(ErrorKind::Parse, "not a wqa-logistic v1 model");
        }
        const auto dim = j.at("dim").get<std::size_t>();
        if (dim == 0) fail(ErrorKind::Parse, "model dimension is zero");
        m.bias_ = j.at("bias").get<double>();
        m.seed_ = j.at("seed").get<std::uint64_t>();
        m.n_docs_ = j.at("n_docs").get<std::size_t>();
        m.weights_.assign(dim, 0.0);
        m.idf_.assign(dim, unseen_idf(m.n_docs_));
        have_header = true;
        continue;
      }
      const auto i = j.at("index").get<std::size_t>();
      if (i >= m.weights_.size()) fail(ErrorKind::Parse, "model line " + std::to_string(line_no) + ": index out of range");
      m.weights_[i] = j.at("weight").get<double>();
      m.idf_[i] = j.at("idf").get<double>();
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, "model line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) fail(ErrorKind::Parse, "model file is empty");
  if (!std::isfinite(m.bias_) ||
      !std::all_of(m.weights_.begin(), m.weights_.end(), [](double v) { return std::isfinite(v); })) {
    fail(ErrorKind::Parse, "model holds non-finite parameters");
  }
  return m;
}

LogisticModel load_model(const std::string& path) {
  try {
    return parse_model(text::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace wqa::baseline
