#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "wqa/corpus.hpp"

namespace wqa::cluster {

// One row per sample; row order follows ids.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd vectors;

  std::size_t rows() const { return ids.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
};

// csv "sample_id,v0,...,v{d-1}" (.csv) or jsonl {"id", "vector"} (anything else).
EmbeddingMatrix load_embeddings(const std::string& path);
EmbeddingMatrix parse_embeddings_csv(std::string_view content);
EmbeddingMatrix parse_embeddings_jsonl(std::string_view content);

// Reorders rows to match the corpus. Every corpus id must have a row and every
// row must belong to the corpus; offenders are listed in the error.
EmbeddingMatrix align(const EmbeddingMatrix& e, const Corpus& c);

// Rows scaled to unit length; zero rows are left as they are.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& e);

// Smoothed-idf TF-IDF over preprocess_tokens, rows L2-normalized. The
// vocabulary is sorted so the column order is stable.
struct TfidfMatrix {
  std::vector<std::string> vocabulary;
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows;
};

TfidfMatrix tfidf_matrix(const Corpus& c);

// TF-IDF rows projected onto the top `dim` right singular vectors (subspace
// iteration from a seeded start). Components beyond the rank come out as 0.
EmbeddingMatrix embed_fallback(const Corpus& c, std::size_t dim, std::uint64_t seed = 0);

struct PcaResult {
  EmbeddingMatrix reduced;
  std::vector<double> explained_variance;
  Eigen::MatrixXd components;  // d x target_dim, orthonormal columns
};

PcaResult pca(const EmbeddingMatrix& e, std::size_t target_dim);

inline EmbeddingMatrix pca_reduce(const EmbeddingMatrix& e, std::size_t target_dim) {
  return pca(e, target_dim).reduced;
}

// Distance to the min_samples-th nearest neighbour, the point itself counted
// as the first.
std::vector<double> core_distances(const Eigen::MatrixXd& points, std::size_t min_samples);

struct MstEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

// Prim's algorithm over mutual reachability distance, in the order edges are
// added. min_samples = 1 gives the plain Euclidean MST.
std::vector<MstEdge> mst(const Eigen::MatrixXd& points, std::size_t min_samples);

struct CondensedRow {
  std::size_t parent = 0;
  std::size_t child = 0;
  double lambda = 0.0;
  std::size_t child_size = 0;
};

// Points are 0..m-1, clusters m, m+1, ... with m the root.
struct CondensedTree {
  std::vector<CondensedRow> rows;
  std::vector<double> stability;  // indexed by cluster id - root
  std::vector<std::size_t> selected;
  std::size_t root = 0;
};

struct ClusterAssignment {
  std::vector<int> labels;  // -1 noise
  std::vector<double> probabilities;
  std::size_t cluster_count = 0;
};

struct HdbscanParams {
  std::size_t min_cluster_size = 10;
  std::size_t min_samples = 5;
  bool cosine = false;
};

struct HdbscanResult {
  ClusterAssignment assignment;
  CondensedTree tree;
};

// Fewer points than min_cluster_size gives all noise; min_samples above the
// point count is clamped to it.
HdbscanResult hdbscan(const Eigen::MatrixXd& points, const HdbscanParams& params);

inline HdbscanResult hdbscan(const EmbeddingMatrix& e, const HdbscanParams& params) {
  return hdbscan(e.vectors, params);
}

// csv "sample_id,cluster,probability".
std::string assignment_csv(const std::vector<std::string>& ids, const ClusterAssignment& a);

}  // namespace wqa::cluster
