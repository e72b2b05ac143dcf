#include "wqa/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "wqa/csv.hpp"
#include "wqa/error.hpp"

namespace wqa::topics {

ClassTermStats class_term_stats(const std::vector<std::vector<std::string>>& docs, const std::vector<int>& labels) {
  require(docs.size() == labels.size(), "document and label counts differ");
  ClassTermStats s;
  std::map<int, std::size_t> index;
  for (int l : labels) {
    if (l >= 0) index.emplace(l, 0);
  }
  if (index.empty()) fail(ErrorKind::Domain, "no non-noise documents");
  for (auto& [l, i] : index) {
    i = s.classes.size();
    s.classes.push_back(l);
  }
  s.class_sizes.assign(s.classes.size(), 0);
  s.tf.resize(s.classes.size());
  std::size_t total = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (labels[d] < 0) continue;
    const std::size_t c = index.at(labels[d]);
    ++s.class_sizes[c];
    for (const auto& t : docs[d]) {
      ++s.tf[c][t];
      ++s.f[t];
      ++total;
    }
  }
  s.average_tokens = static_cast<double>(total) / static_cast<double>(s.classes.size());
  return s;
}

TermWeights ctfidf(const ClassTermStats& stats) {
  TermWeights w;
  w.stats = stats;
  w.weights.resize(stats.classes.size());
  for (std::size_t c = 0; c < stats.classes.size(); ++c) {
    for (const auto& [term, n] : stats.tf[c]) {
      const double idf = std::log(1.0 + stats.average_tokens / static_cast<double>(stats.f.at(term)));
      w.weights[c][term] = static_cast<double>(n) * idf;
    }
  }
  return w;
}

std::vector<Topic> top_topics(const TermWeights& w, std::size_t n_topics, std::size_t n_terms) {
  require(n_topics >= 1 && n_terms >= 1, "n_topics and n_terms must be positive");
  const auto& s = w.stats;
  std::vector<std::size_t> order(s.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s.class_sizes[a] != s.class_sizes[b]) return s.class_sizes[a] > s.class_sizes[b];
    return s.classes[a] < s.classes[b];
  });
  if (order.size() > n_topics) order.resize(n_topics);

  std::vector<Topic> out;
  for (std::size_t c : order) {
    Topic t;
    t.cluster_id = s.classes[c];
    t.size = s.class_sizes[c];
    for (const auto& [term, weight] : w.weights[c]) {
      if (weight > 0.0) t.terms.emplace_back(term, weight);
    }
    std::sort(t.terms.begin(), t.terms.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (t.terms.size() > n_terms) t.terms.resize(n_terms);
    out.push_back(std::move(t));
  }
  return out;
}

std::string to_json(const std::vector<Topic>& topics) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : topics) {
    nlohmann::ordered_json o;
    o["cluster_id"] = t.cluster_id;
    o["size"] = t.size;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [term, weight] : t.terms) terms.push_back({{"term", term}, {"weight", weight}});
    o["terms"] = std::move(terms);
    arr.push_back(std::move(o));
  }
  return arr.dump();
}

std::string to_csv(const std::vector<Topic>& topics) {
  std::string out = "term,weight,topic\n";
  for (const auto& t : topics) {
    for (const auto& [term, weight] : t.terms) {
      out += csv::format_row({term, csv::format_double(weight), std::to_string(t.cluster_id)});
    }
  }
  return out;
}

}  // namespace wqa::topics
