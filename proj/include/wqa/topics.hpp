#pragma once

#include <map>
#include <string>
#include <vector>

namespace wqa::topics {

// Term counts per class. Classes are the distinct non-negative labels,
// ascending; documents labelled -1 are ignored.
struct ClassTermStats {
  std::vector<int> classes;
  std::vector<std::size_t> class_sizes;  // documents per class
  std::vector<std::map<std::string, std::size_t>> tf;
  std::map<std::string, std::size_t> f;
  double average_tokens = 0.0;  // A
};

ClassTermStats class_term_stats(const std::vector<std::vector<std::string>>& docs, const std::vector<int>& labels);

// W[c][t] = tf[c][t] * ln(1 + A / f[t]) for every term present in class c.
struct TermWeights {
  ClassTermStats stats;
  std::vector<std::map<std::string, double>> weights;
};

TermWeights ctfidf(const ClassTermStats& stats);

inline TermWeights ctfidf(const std::vector<std::vector<std::string>>& docs, const std::vector<int>& labels) {
  return ctfidf(class_term_stats(docs, labels));
}

struct Topic {
  int cluster_id = 0;
  std::size_t size = 0;
  std::vector<std::pair<std::string, double>> terms;
};

// Classes by document count descending (ties by id), terms by weight
// descending (ties by term).
std::vector<Topic> top_topics(const TermWeights& w, std::size_t n_topics = 10, std::size_t n_terms = 10);

// json array of {cluster_id, size, terms: [{term, weight}]}.
std::string to_json(const std::vector<Topic>& topics);

// csv "term,weight,topic" with one row per ranked term.
std::string to_csv(const std::vector<Topic>& topics);

}  // namespace wqa::topics
