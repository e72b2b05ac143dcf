#include "wqa/reduce_cluster.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <json.hpp>

#include "wqa/csv.hpp"
#include "wqa/error.hpp"
#include "wqa/random.hpp"
#include "wqa/text.hpp"

namespace wqa::cluster {

namespace {

std::string list_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 10; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > 10) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

EmbeddingMatrix build(std::vector<std::string> ids, const std::vector<std::vector<double>>& rows) {
  if (ids.empty()) fail(ErrorKind::Parse, "embedding file has no rows");
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) fail(ErrorKind::Parse, "duplicate embedding id '" + id + "'");
  }
  const std::size_t d = rows.front().size();
  EmbeddingMatrix e;
  e.ids = std::move(ids);
  e.vectors.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) e.vectors(i, j) = rows[i][j];
  }
  return e;
}

void check_row(const std::vector<double>& row, std::size_t expected, std::size_t line) {
  if (row.size() < 2) fail(ErrorKind::Parse, "line " + std::to_string(line) + ": embedding dimension must be at least 2");
  if (expected && row.size() != expected) {
    fail(ErrorKind::Parse, "line " + std::to_string(line) + ": expected " + std::to_string(expected) +
                               " values, found " + std::to_string(row.size()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) fail(ErrorKind::Parse, "line " + std::to_string(line) + ": non-finite embedding value");
  }
}

double euclid(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return std::sqrt(s);
}

// Row-major copy so distance loops walk contiguous memory.
std::vector<double> row_major(const Eigen::MatrixXd& p) {
  std::vector<double> out(static_cast<std::size_t>(p.size()));
  const auto d = static_cast<std::size_t>(p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) out[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)] = p(i, j);
  }
  return out;
}

std::vector<double> core_distances_rm(const std::vector<double>& x, std::size_t m, std::size_t d, std::size_t k) {
  std::vector<double> core(m, 0.0);
  std::vector<double> dist(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) dist[j] = i == j ? 0.0 : euclid(&x[i * d], &x[j * d], d);
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    core[i] = dist[k - 1];
  }
  return core;
}

std::vector<MstEdge> prim(const std::vector<double>& x, std::size_t m, std::size_t d, const std::vector<double>& core) {
  std::vector<MstEdge> edges;
  if (m < 2) return edges;
  edges.reserve(m - 1);
  std::vector<char> in_tree(m, 0);
  std::vector<double> min_reach(m, INFINITY);
  std::vector<std::size_t> source(m, 1);
  std::size_t current = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    in_tree[current] = 1;
    const double current_core = core[current];
    double best = DBL_MAX;
    std::size_t best_src = 0;
    std::size_t best_node = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (in_tree[j]) continue;
      const double reach_j = min_reach[j];
      const std::size_t src_j = source[j];
      const double pair = euclid(&x[current * d], &x[j * d], d);
      const double mr = std::max(std::max(current_core, core[j]), pair);
      if (mr < reach_j) {
        min_reach[j] = mr;
        source[j] = current;
        if (mr < best) {
          best = mr;
          best_src = current;
          best_node = j;
        }
      } else if (reach_j < best) {
        best = reach_j;
        best_src = src_j;
        best_node = j;
      }
    }
    edges.push_back({best_src, best_node, best});
    current = best_node;
  }
  return edges;
}

struct Merge {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

std::vector<Merge> single_linkage(std::vector<MstEdge> edges, std::size_t m) {
  std::stable_sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) { return a.weight < b.weight; });
  std::vector<std::ptrdiff_t> parent(2 * m - 1, -1);
  std::vector<std::size_t> size(2 * m - 1, 0);
  std::fill(size.begin(), size.begin() + static_cast<std::ptrdiff_t>(m), 1);
  std::size_t next_label = m;
  auto find = [&](std::size_t n) {
    std::size_t p = n;
    while (parent[n] != -1) n = static_cast<std::size_t>(parent[n]);
    while (parent[p] != -1 && static_cast<std::size_t>(parent[p]) != n) {
      const auto up = static_cast<std::size_t>(parent[p]);
      parent[p] = static_cast<std::ptrdiff_t>(n);
      p = up;
    }
    return n;
  };
  std::vector<Merge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    const std::size_t a = find(e.a);
    const std::size_t b = find(e.b);
    out.push_back({a, b, e.weight, size[a] + size[b]});
    parent[a] = parent[b] = static_cast<std::ptrdiff_t>(next_label);
    size[next_label] = size[a] + size[b];
    ++next_label;
  }
  return out;
}

std::vector<std::size_t> bfs_hierarchy(const std::vector<Merge>& h, std::size_t root, std::size_t m) {
  std::vector<std::size_t> result;
  std::vector<std::size_t> queue{root};
  while (!queue.empty()) {
    result.insert(result.end(), queue.begin(), queue.end());
    std::vector<std::size_t> next;
    for (std::size_t x : queue) {
      if (x < m) continue;
      next.push_back(h[x - m].left);
      next.push_back(h[x - m].right);
    }
    queue = std::move(next);
  }
  return result;
}

std::vector<CondensedRow> condense(const std::vector<Merge>& h, std::size_t m, std::size_t min_cluster_size) {
  const std::size_t root = 2 * h.size();
  std::size_t next_label = m + 1;
  std::vector<std::size_t> relabel(root + 1, 0);
  relabel[root] = m;
  std::vector<char> ignore(root + 1, 0);
  std::vector<CondensedRow> rows;

  auto size_of = [&](std::size_t node) { return node >= m ? h[node - m].size : std::size_t{1}; };
  auto drop_points = [&](std::size_t from, std::size_t parent, double lambda) {
    for (std::size_t sub : bfs_hierarchy(h, from, m)) {
      if (sub < m) rows.push_back({parent, sub, lambda, 1});
      ignore[sub] = 1;
    }
  };

  for (std::size_t node : bfs_hierarchy(h, root, m)) {
    if (ignore[node] || node < m) continue;
    const Merge& c = h[node - m];
    const double lambda = c.distance > 0.0 ? 1.0 / c.distance : INFINITY;
    const std::size_t lc = size_of(c.left);
    const std::size_t rc = size_of(c.right);
    if (lc >= min_cluster_size && rc >= min_cluster_size) {
      relabel[c.left] = next_label++;
      rows.push_back({relabel[node], relabel[c.left], lambda, lc});
      relabel[c.right] = next_label++;
      rows.push_back({relabel[node], relabel[c.right], lambda, rc});
    } else if (lc < min_cluster_size && rc < min_cluster_size) {
      drop_points(c.left, relabel[node], lambda);
      drop_points(c.right, relabel[node], lambda);
    } else if (lc < min_cluster_size) {
      relabel[c.right] = relabel[node];
      drop_points(c.left, relabel[node], lambda);
    } else {
      relabel[c.left] = relabel[node];
      drop_points(c.right, relabel[node], lambda);
    }
  }
  return rows;
}

std::vector<double> stability_of(const std::vector<CondensedRow>& rows, std::size_t root) {
  std::size_t max_parent = root;
  std::size_t max_child = root;
  for (const auto& r : rows) {
    max_parent = std::max(max_parent, r.parent);
    max_child = std::max(max_child, r.child);
  }
  std::vector<double> births(max_child + 1, NAN);
  for (const auto& r : rows) births[r.child] = r.lambda;
  births[root] = 0.0;
  std::vector<double> result(max_parent - root + 1, 0.0);
  for (const auto& r : rows) result[r.parent - root] += (r.lambda - births[r.parent]) * static_cast<double>(r.child_size);
  return result;
}

}  // namespace

EmbeddingMatrix parse_embeddings_csv(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) fail(ErrorKind::Parse, "embedding file is empty");
  const auto& header = rows.front();
  if (header.fields.empty() || (header.fields[0] != "sample_id" && header.fields[0] != "id")) {
    fail(ErrorKind::Parse, "line " + std::to_string(header.line) + ": expected header starting with sample_id");
  }
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vecs;
  const std::size_t d = header.fields.size() - 1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.empty() || row.fields[0].empty()) fail(ErrorKind::Parse, "line " + std::to_string(row.line) + ": missing sample_id");
    std::vector<double> v;
    for (std::size_t j = 1; j < row.fields.size(); ++j) v.push_back(csv::parse_double(row.fields[j], row.line));
    check_row(v, d, row.line);
    ids.push_back(row.fields[0]);
    vecs.push_back(std::move(v));
  }
  return build(std::move(ids), vecs);
}

EmbeddingMatrix parse_embeddings_jsonl(std::string_view content) {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vecs;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t nl = std::min(content.find('\n', pos), content.size());
    const std::string_view raw = text::trim(content.substr(pos, nl - pos));
    ++line;
    pos = nl + 1;
    if (raw.empty()) continue;
    const std::string where = "line " + std::to_string(line) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::Parse, where + "malformed json");
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("vector") || !j["vector"].is_array()) {
      fail(ErrorKind::Parse, where + "expected an object with id and vector");
    }
    const auto& id = j["id"];
    std::string sid;
    if (id.is_string()) {
      sid = id.get<std::string>();
    } else if (id.is_number_integer()) {
      sid = std::to_string(id.get<long long>());
    } else {
      fail(ErrorKind::Parse, where + "id must be a string or integer");
    }
    std::vector<double> v;
    for (const auto& x : j["vector"]) {
      if (x.is_number()) {
        v.push_back(x.get<double>());
      } else if (x.is_string()) {
        v.push_back(csv::parse_double(x.get<std::string>(), line));
      } else {
        fail(ErrorKind::Parse, where + "vector entries must be numbers");
      }
    }
    check_row(v, vecs.empty() ? 0 : vecs.front().size(), line);
    ids.push_back(std::move(sid));
    vecs.push_back(std::move(v));
  }
  return build(std::move(ids), vecs);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  const std::string content = text::read_file(path);
  const bool is_csv = path.size() >= 4 && text::fold_case(path.substr(path.size() - 4)) == ".csv";
  return is_csv ? parse_embeddings_csv(content) : parse_embeddings_jsonl(content);
}

EmbeddingMatrix align(const EmbeddingMatrix& e, const Corpus& c) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < e.ids.size(); ++i) index.emplace(e.ids[i], i);
  std::vector<std::string> unknown;
  for (const auto& id : e.ids) {
    if (!c.find(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) fail(ErrorKind::Domain, "embedding ids not in corpus: " + list_ids(unknown));
  std::vector<std::string> missing;
  for (const auto& t : c.tweets()) {
    if (!index.count(t.id)) missing.push_back(t.id);
  }
  if (!missing.empty()) fail(ErrorKind::Domain, "corpus ids without embeddings: " + list_ids(missing));
  EmbeddingMatrix out;
  out.vectors.resize(static_cast<Eigen::Index>(c.size()), e.vectors.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.ids.push_back(c[i].id);
    out.vectors.row(static_cast<Eigen::Index>(i)) = e.vectors.row(static_cast<Eigen::Index>(index.at(c[i].id)));
  }
  return out;
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& e) {
  EmbeddingMatrix out = e;
  for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
    const double n = out.vectors.row(i).norm();
    if (n > 0.0) out.vectors.row(i) /= n;
  }
  return out;
}

TfidfMatrix tfidf_matrix(const Corpus& c) {
  std::vector<std::map<std::string, std::size_t>> counts(c.size());
  std::map<std::string, std::size_t> df;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (auto& tok : preprocess_tokens(c[i].text)) ++counts[i][tok];
    for (const auto& [tok, n] : counts[i]) ++df[tok];
  }
  TfidfMatrix out;
  std::map<std::string, std::size_t> column;
  for (const auto& [tok, n] : df) {
    column.emplace(tok, out.vocabulary.size());
    out.vocabulary.push_back(tok);
  }
  const double n_docs = static_cast<double>(c.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double norm = 0.0;
    std::vector<std::pair<std::size_t, double>> row;
    for (const auto& [tok, n] : counts[i]) {
      const double idf = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df.at(tok)))) + 1.0;
      const double v = static_cast<double>(n) * idf;
      row.emplace_back(column.at(tok), v);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (const auto& [j, v] : row) trip.emplace_back(static_cast<int>(i), static_cast<int>(j), v / norm);
  }
  out.rows.resize(static_cast<Eigen::Index>(c.size()), static_cast<Eigen::Index>(out.vocabulary.size()));
  out.rows.setFromTriplets(trip.begin(), trip.end());
  return out;
}

EmbeddingMatrix embed_fallback(const Corpus& c, std::size_t dim, std::uint64_t seed) {
  require(dim >= 2, "embedding dimension must be at least 2");
  if (c.empty()) fail(ErrorKind::Domain, "cannot embed an empty corpus");
  const TfidfMatrix t = tfidf_matrix(c);
  if (t.vocabulary.empty()) fail(ErrorKind::Domain, "no tokens left after preprocessing");
  const auto& x = t.rows;
  const auto m = x.rows();
  const auto v = x.cols();
  const Eigen::Index k = std::min<Eigen::Index>({static_cast<Eigen::Index>(dim), m, v});

  Rng rng(seed);
  Eigen::MatrixXd q(v, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < v; ++i) q(i, j) = rng.uniform(-1.0, 1.0);
  }
  auto orthonormalize = [](const Eigen::MatrixXd& a) -> Eigen::MatrixXd {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  };
  q = orthonormalize(q);
  for (int it = 0; it < 60; ++it) {
    const Eigen::MatrixXd y = x * q;
    const Eigen::MatrixXd z = x.transpose() * y;
    q = orthonormalize(z);
  }
  const Eigen::MatrixXd b = x * q;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const Eigen::MatrixXd proj = x * (q * svd.matrixV());

  EmbeddingMatrix out;
  for (const auto& tw : c.tweets()) out.ids.push_back(tw.id);
  out.vectors = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(dim));
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (!(s(j) > 1e-10 * smax)) continue;
    Eigen::VectorXd col = proj.col(j);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    out.vectors.col(j) = col;
  }
  return out;
}

PcaResult pca(const EmbeddingMatrix& e, std::size_t target_dim) {
  require(target_dim >= 1, "target_dim must be positive");
  require(target_dim <= e.dim(), "target_dim " + std::to_string(target_dim) + " exceeds embedding dimension " +
                                     std::to_string(e.dim()));
  require(e.rows() >= 1, "cannot reduce an empty embedding matrix");
  const Eigen::RowVectorXd mean = e.vectors.colwise().mean();
  const Eigen::MatrixXd centered = e.vectors.rowwise() - mean;
  const double denom = std::max<double>(1.0, static_cast<double>(e.rows()) - 1.0);
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const auto d = static_cast<Eigen::Index>(e.dim());
  const auto k = static_cast<Eigen::Index>(target_dim);

  PcaResult r;
  r.components.resize(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - j);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    r.components.col(j) = v;
    r.explained_variance.push_back(std::max(0.0, eig.eigenvalues()(d - 1 - j)));
  }
  r.reduced.ids = e.ids;
  r.reduced.vectors = centered * r.components;
  return r;
}

std::vector<double> core_distances(const Eigen::MatrixXd& points, std::size_t min_samples) {
  const auto m = static_cast<std::size_t>(points.rows());
  require(min_samples >= 1 && min_samples <= m, "min_samples must lie in [1, number of points]");
  return core_distances_rm(row_major(points), m, static_cast<std::size_t>(points.cols()), min_samples);
}

std::vector<MstEdge> mst(const Eigen::MatrixXd& points, std::size_t min_samples) {
  const auto m = static_cast<std::size_t>(points.rows());
  require(m >= 2, "a spanning tree needs at least 2 points");
  const auto d = static_cast<std::size_t>(points.cols());
  const auto x = row_major(points);
  return prim(x, m, d, core_distances_rm(x, m, d, std::clamp<std::size_t>(min_samples, 1, m)));
}

HdbscanResult hdbscan(const Eigen::MatrixXd& raw, const HdbscanParams& params) {
  require(params.min_cluster_size >= 2, "min_cluster_size must be at least 2");
  require(params.min_samples >= 1, "min_samples must be at least 1");
  const auto m = static_cast<std::size_t>(raw.rows());
  require(m >= 1, "hdbscan needs at least one point");
  require(raw.allFinite(), "embedding contains non-finite values");

  HdbscanResult out;
  out.assignment.labels.assign(m, -1);
  out.assignment.probabilities.assign(m, 0.0);
  out.tree.root = m;
  if (m < params.min_cluster_size || m < 2) return out;

  Eigen::MatrixXd points = raw;
  if (params.cosine) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const double n = points.row(i).norm();
      if (n > 0.0) points.row(i) /= n;
    }
  }
  const auto d = static_cast<std::size_t>(points.cols());
  const auto x = row_major(points);
  const auto core = core_distances_rm(x, m, d, std::min(params.min_samples, m));
  const auto hierarchy = single_linkage(prim(x, m, d, core), m);
  auto& tree = out.tree;
  tree.rows = condense(hierarchy, m, params.min_cluster_size);
  tree.stability = stability_of(tree.rows, m);

  // Excess of mass over non-root clusters, children before parents.
  const std::size_t n_clusters = tree.stability.size();
  std::vector<double> stab = tree.stability;
  std::vector<char> is_cluster(n_clusters, 1);
  is_cluster[0] = 0;
  std::vector<std::vector<std::size_t>> children(n_clusters);
  std::vector<std::size_t> parent_of(m + n_clusters, m);
  for (const auto& r : tree.rows) {
    parent_of[r.child] = r.parent;
    if (r.child_size > 1) children[r.parent - m].push_back(r.child);
  }
  for (std::size_t idx = n_clusters; idx-- > 1;) {
    double subtree = 0.0;
    for (std::size_t ch : children[idx]) subtree += stab[ch - m];
    if (subtree > stab[idx]) {
      is_cluster[idx] = 0;
      stab[idx] = subtree;
    } else {
      std::deque<std::size_t> queue(children[idx].begin(), children[idx].end());
      while (!queue.empty()) {
        const std::size_t node = queue.front();
        queue.pop_front();
        is_cluster[node - m] = 0;
        for (std::size_t ch : children[node - m]) queue.push_back(ch);
      }
    }
  }

  std::vector<int> label_of_cluster(n_clusters, -1);
  int next = 0;
  for (std::size_t idx = 1; idx < n_clusters; ++idx) {
    if (!is_cluster[idx]) continue;
    label_of_cluster[idx] = next++;
    tree.selected.push_back(m + idx);
  }
  out.assignment.cluster_count = static_cast<std::size_t>(next);

  for (std::size_t p = 0; p < m; ++p) {
    std::size_t node = parent_of[p];
    while (node != m && !is_cluster[node - m]) node = parent_of[node];
    if (node != m) out.assignment.labels[p] = label_of_cluster[node - m];
  }

  // Largest lambda per parent, taken over each run of consecutive rows.
  std::vector<double> deaths(n_clusters, 0.0);
  if (!tree.rows.empty()) {
    std::size_t cur = tree.rows[0].parent;
    double best = tree.rows[0].lambda;
    for (std::size_t i = 1; i < tree.rows.size(); ++i) {
      const auto& r = tree.rows[i];
      if (r.parent == cur) {
        best = std::max(best, r.lambda);
      } else {
        deaths[cur - m] = best;
        cur = r.parent;
        best = r.lambda;
      }
    }
    deaths[cur - m] = best;
  }
  for (const auto& r : tree.rows) {
    if (r.child >= m) continue;
    const int label = out.assignment.labels[r.child];
    if (label < 0) continue;
    const double max_lambda = deaths[tree.selected[static_cast<std::size_t>(label)] - m];
    if (max_lambda == 0.0 || std::isinf(r.lambda)) {
      out.assignment.probabilities[r.child] = 1.0;
    } else {
      out.assignment.probabilities[r.child] = std::min(r.lambda, max_lambda) / max_lambda;
    }
  }
  return out;
}

std::string assignment_csv(const std::vector<std::string>& ids, const ClusterAssignment& a) {
  require(ids.size() == a.labels.size(), "id count does not match assignment size");
  std::string out = "sample_id,cluster,probability\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += csv::format_row({ids[i], std::to_string(a.labels[i]), csv::format_double(a.probabilities[i])});
  }
  return out;
}

}  // namespace wqa::cluster
