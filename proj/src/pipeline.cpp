#include "wqa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "wqa/baseline.hpp"
#include "wqa/corpus.hpp"
#include "wqa/csv.hpp"
#include "wqa/error.hpp"
#include "wqa/fusion.hpp"
#include "wqa/geo.hpp"
#include "wqa/metrics.hpp"
#include "wqa/optimizers.hpp"
#include "wqa/reduce_cluster.hpp"
#include "wqa/resources.hpp"
#include "wqa/text.hpp"
#include "wqa/topics.hpp"

namespace wqa::pipeline {

namespace {

using In = nlohmann::json;

bool has(const In& c, const char* key) { return c.contains(key) && !c[key].is_null(); }

template <class T>
T get(const In& c, const char* key, T fallback) {
  if (!has(c, key)) return fallback;
  try {
    return c[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::InvalidArgument, std::string("config key '") + key + "' has the wrong type");
  }
}

std::string need(const In& c, const char* key) {
  if (!has(c, key)) fail(ErrorKind::InvalidArgument, std::string("missing config key '") + key + "'");
  return get<std::string>(c, key, "");
}

std::string input_path(const In& c, const char* key) {
  std::string p = need(c, key);
  if (!std::filesystem::is_regular_file(p)) fail(ErrorKind::Io, "no such file: '" + p + "'");
  return p;
}

std::optional<std::string> optional_input(const In& c, const char* key) {
  if (!has(c, key)) return std::nullopt;
  return input_path(c, key);
}

std::size_t count(const In& c, const char* key, std::size_t fallback, std::size_t lo) {
  if (!has(c, key)) return fallback;
  if (!c[key].is_number_integer() || c[key].get<long long>() < static_cast<long long>(lo)) {
    fail(ErrorKind::InvalidArgument, std::string("config key '") + key + "' must be an integer >= " + std::to_string(lo));
  }
  return c[key].get<std::size_t>();
}

std::uint64_t seed_of(const In& c) {
  if (!has(c, "seed")) return 0;
  if (!c["seed"].is_number_integer() || c["seed"].get<long long>() < 0) {
    fail(ErrorKind::InvalidArgument, "seed must be a non-negative integer");
  }
  return c["seed"].get<std::uint64_t>();
}

Corpus load_corpus(const std::string& path) {
  return ingest(path, format_from_path(path));
}

std::optional<Split> split_filter(const In& c, const char* fallback) {
  const std::string v = get<std::string>(c, "split", fallback);
  if (v == "all") return std::nullopt;
  auto s = parse_split(v);
  if (!s) fail(ErrorKind::InvalidArgument, "unknown split '" + v + "'");
  return s;
}

std::optional<Label> label_filter(const In& c, const char* fallback) {
  const std::string v = get<std::string>(c, "label", fallback);
  if (v == "any" || v == "all") return std::nullopt;
  auto l = parse_label(v);
  if (!l) fail(ErrorKind::InvalidArgument, "unknown label '" + v + "'");
  return l;
}

geo::Gazetteer gazetteer_of(const In& c) {
  const auto pat = optional_input(c, "gazetteer_patterns");
  const auto reg = optional_input(c, "gazetteer_regions");
  if (!pat && !reg) return geo::default_gazetteer();
  return geo::parse_gazetteer(pat ? text::read_file(*pat) : std::string(resources::gazetteer_patterns()),
                              reg ? text::read_file(*reg) : std::string(resources::gazetteer_regions()));
}

Json eval_json(const EvalReport& r) { return Json::parse(to_json(r, true)); }

Json label_counts(const Corpus& c) {
  Json out;
  std::size_t rel = 0, irr = 0, none = 0;
  for (const auto& t : c.tweets()) {
    if (!t.label) ++none;
    else if (*t.label == Label::Relevant) ++rel;
    else ++irr;
  }
  out["relevant"] = rel;
  out["irrelevant"] = irr;
  out["unlabeled"] = none;
  return out;
}

std::string labels_csv(const Corpus& c) {
  std::string out = "sample_id,label\n";
  for (const auto& t : c.tweets()) {
    if (t.label) out += csv::format_row({t.id, std::string(to_string(*t.label))});
  }
  return out;
}

}  // namespace

Json cmd_prepare(const In& cfg) {
  const std::string in = input_path(cfg, "input");
  const std::string out_path = need(cfg, "output");
  const auto annotations = optional_input(cfg, "annotations");
  const auto keywords = optional_input(cfg, "keywords");
  const std::size_t min_tokens = count(cfg, "min_tokens", kDefaultMinTokens, 1);
  SplitRatios ratios;
  ratios.train = get<double>(cfg, "train_ratio", ratios.train);
  ratios.test = get<double>(cfg, "test_ratio", ratios.test);
  ratios.validation = get<double>(cfg, "validation_ratio", ratios.validation);

  CorpusFormat fmt = format_from_path(in);
  if (has(cfg, "format")) {
    const std::string f = get<std::string>(cfg, "format", "");
    if (f == "csv") fmt = CorpusFormat::Csv;
    else if (f == "jsonl") fmt = CorpusFormat::Jsonl;
    else fail(ErrorKind::InvalidArgument, "unknown corpus format '" + f + "'");
  }

  Json s;
  s["command"] = "prepare";
  Corpus c = ingest(in, fmt);
  if (c.empty()) fail(ErrorKind::Domain, "empty corpus");
  s["records_in"] = c.size();
  c = clean(c, min_tokens);
  s["after_clean"] = c.size();
  if (keywords || get<bool>(cfg, "keyword_filter", false)) {
    c = keyword_filter(c, keywords ? text::parse_lines(text::read_file(*keywords)) : default_keywords());
    s["after_keyword_filter"] = c.size();
  }
  if (c.empty()) fail(ErrorKind::Domain, "empty corpus after cleaning");
  if (annotations) c = apply_labels(c, merge_annotations(load_annotations(*annotations)));
  c = split(c, ratios, seed_of(cfg));
  write_jsonl(c, out_path);
  if (has(cfg, "labels_out")) text::write_file(need(cfg, "labels_out"), labels_csv(c));

  s["total"] = c.size();
  Json sizes, labels;
  for (Split sp : {Split::Train, Split::Test, Split::Validation}) {
    const Corpus part = select(c, sp, std::nullopt);
    sizes[std::string(to_string(sp))] = part.size();
    labels[std::string(to_string(sp))] = label_counts(part);
  }
  s["splits"] = sizes;
  s["labels"] = labels;
  s["output"] = out_path;
  return s;
}

Json cmd_train_baseline(const In& cfg) {
  const Corpus c = load_corpus(input_path(cfg, "corpus"));
  const std::string out_path = need(cfg, "output");
  baseline::TrainOptions opts;
  opts.epochs = count(cfg, "epochs", opts.epochs, 1);
  opts.learning_rate = get<double>(cfg, "learning_rate", opts.learning_rate);
  require(opts.learning_rate > 0.0 && std::isfinite(opts.learning_rate), "learning_rate must be positive");
  opts.seed = seed_of(cfg);
  opts.dim = count(cfg, "dim", opts.dim, 2);
  const Corpus train = select(c, split_filter(cfg, "train"), std::nullopt);
  const auto model = baseline::train(train, opts);
  baseline::save_model(model, out_path);

  std::vector<Label> preds, truth;
  const auto scores = baseline::score(model, train);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!train[i].label) continue;
    preds.push_back(scores[i] >= kDefaultThreshold ? Label::Relevant : Label::Irrelevant);
    truth.push_back(*train[i].label);
  }
  Json s;
  s["command"] = "train-baseline";
  s["training_docs"] = model.training_docs();
  s["epochs"] = opts.epochs;
  s["learning_rate"] = opts.learning_rate;
  s["seed"] = opts.seed;
  s["dim"] = opts.dim;
  s["training"] = eval_json(evaluate(preds, truth));
  s["output"] = out_path;
  return s;
}

Json cmd_score(const In& cfg) {
  const Corpus c = load_corpus(input_path(cfg, "corpus"));
  const auto model = baseline::load_model(input_path(cfg, "model"));
  const std::string out_path = need(cfg, "output");
  const std::string name = get<std::string>(cfg, "model_name", "baseline");
  require(!name.empty() && name != "sample_id", "invalid model name");
  const auto scores = baseline::score(model, c);

  std::vector<std::string> ids;
  for (const auto& t : c.tweets()) ids.push_back(t.id);
  std::vector<std::string> names;
  std::vector<double> values;
  if (const auto base = optional_input(cfg, "merge_into")) {
    const ScoreMatrix old = load_scores(*base);
    std::map<std::string, std::size_t> pos;
    for (std::size_t j = 0; j < old.samples(); ++j) pos[old.sample_ids()[j]] = j;
    std::vector<std::string> missing;
    for (const auto& id : ids) {
      if (!pos.count(id)) missing.push_back(id);
    }
    if (!missing.empty() || old.samples() != ids.size()) {
      fail(ErrorKind::Domain, "'" + *base + "' does not cover the same samples as the corpus");
    }
    for (std::size_t i = 0; i < old.models(); ++i) {
      if (old.model_names()[i] == name) continue;
      names.push_back(old.model_names()[i]);
      for (const auto& id : ids) values.push_back(old.at(i, pos.at(id)));
    }
  }
  names.push_back(name);
  values.insert(values.end(), scores.begin(), scores.end());
  const ScoreMatrix merged(names, ids, values);
  write_scores(merged, out_path);

  Json s;
  s["command"] = "score";
  s["samples"] = merged.samples();
  s["models"] = merged.model_names();
  s["output"] = out_path;
  return s;
}

namespace {

ScoreMatrix subset(const ScoreMatrix& m, const std::vector<std::string>& ids) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t j = 0; j < m.samples(); ++j) pos[m.sample_ids()[j]] = j;
  std::vector<std::string> missing;
  for (const auto& id : ids) {
    if (!pos.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) list += (i ? ", " : "") + missing[i];
    fail(ErrorKind::Domain, std::to_string(missing.size()) + " samples have no scores: " + list);
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < m.models(); ++i) {
    for (const auto& id : ids) values.push_back(m.at(i, pos.at(id)));
  }
  return ScoreMatrix(m.model_names(), ids, values);
}

struct FuseData {
  ScoreMatrix validation;
  ScoreMatrix test;
  std::vector<Label> validation_labels;
  std::vector<Label> test_labels;
};

FuseData fuse_inputs(const In& cfg) {
  FuseData d;
  if (has(cfg, "validation_scores") || has(cfg, "test_scores")) {
    const auto labels = load_labels(input_path(cfg, "labels"));
    d.validation = load_scores(input_path(cfg, "validation_scores"));
    d.test = load_scores(input_path(cfg, "test_scores"));
    d.validation_labels = align_labels(d.validation, labels);
    d.test_labels = align_labels(d.test, labels);
  } else {
    const ScoreMatrix all = load_scores(input_path(cfg, "scores"));
    const Corpus c = load_corpus(input_path(cfg, "corpus"));
    std::map<std::string, Label> labels;
    if (const auto lp = optional_input(cfg, "labels")) {
      labels = load_labels(*lp);
    } else {
      for (const auto& t : c.tweets()) {
        if (t.label) labels[t.id] = *t.label;
      }
    }
    std::vector<std::string> val_ids, test_ids;
    for (const auto& t : c.tweets()) {
      if (!t.split || !labels.count(t.id)) continue;
      if (*t.split == Split::Validation) val_ids.push_back(t.id);
      if (*t.split == Split::Test) test_ids.push_back(t.id);
    }
    if (val_ids.empty()) fail(ErrorKind::Domain, "no labeled validation samples");
    if (test_ids.empty()) fail(ErrorKind::Domain, "no labeled test samples");
    d.validation = subset(all, val_ids);
    d.test = subset(all, test_ids);
    d.validation_labels = align_labels(d.validation, labels);
    d.test_labels = align_labels(d.test, labels);
  }
  if (d.validation.model_names() != d.test.model_names()) {
    fail(ErrorKind::Domain, "validation and test score files list different models");
  }
  return d;
}

}  // namespace

Json cmd_fuse(const In& cfg) {
  const FuseData d = fuse_inputs(cfg);
  const double threshold = get<double>(cfg, "threshold", kDefaultThreshold);
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  const std::size_t top_k = count(cfg, "top_k", 0, 0);
  const std::string which = get<std::string>(cfg, "optimizer", "pso");
  std::vector<opt::Method> methods;
  if (which == "all") {
    methods = {opt::Method::Pso, opt::Method::NelderMead, opt::Method::Lbfgs, opt::Method::Powell};
  } else if (auto m = opt::parse_method(which)) {
    methods = {*m};
  } else {
    fail(ErrorKind::InvalidArgument, "unknown optimizer '" + which + "'");
  }
  opt::OptimizerConfig ocfg;
  ocfg.seed = seed_of(cfg);
  if (has(cfg, "max_iterations")) ocfg.max_iterations = count(cfg, "max_iterations", 1, 1);
  opt::FusionSearch search;
  search.restarts = count(cfg, "restarts", search.restarts, 0);
  search.pso_swarms = count(cfg, "pso_swarms", search.pso_swarms, 1);
  if (!get<bool>(cfg, "smoothing", true)) search.temperatures.clear();

  const auto& names = d.validation.model_names();
  std::map<std::string, EvalReport> val_reports;
  std::map<std::string, EvalReport> test_reports;
  for (std::size_t i = 0; i < names.size(); ++i) {
    val_reports[names[i]] = evaluate(decide(d.validation.row(i), threshold), d.validation_labels);
    test_reports[names[i]] = evaluate(decide(d.test.row(i), threshold), d.test_labels);
  }
  const std::size_t k = top_k == 0 ? names.size() : top_k;
  require(k <= names.size(), "top_k " + std::to_string(k) + " exceeds the " + std::to_string(names.size()) +
                                 " available models");
  const auto selected = select_top_k(val_reports, k);
  const auto val = std::make_shared<const ScoreMatrix>(d.validation.select_models(selected));
  const ScoreMatrix test = d.test.select_models(selected);

  Json report;
  report["command"] = "fuse";
  report["threshold"] = threshold;
  report["top_k"] = k;
  report["selected_models"] = selected;
  report["validation_samples"] = val->samples();
  report["test_samples"] = test.samples();
  Json entries = Json::array();
  for (const auto& name : selected) {
    Json e;
    e["name"] = name;
    e["kind"] = "model";
    e["validation"] = eval_json(val_reports.at(name));
    e["test"] = eval_json(test_reports.at(name));
    entries.push_back(std::move(e));
  }
  auto add_combined = [&](const std::string& name, const std::string& kind, const std::vector<double>& w) {
    Json e;
    e["name"] = name;
    e["kind"] = kind;
    e["weights"] = w;
    e["validation"] = eval_json(evaluate(decide(fuse(*val, w), threshold), d.validation_labels));
    e["test"] = eval_json(evaluate(decide(fuse(test, w), threshold), d.test_labels));
    entries.push_back(std::move(e));
  };
  add_combined("simple_averaging", "simple_averaging", opt::uniform_weights(selected.size()));

  Json runs = Json::array();
  std::string weights_csv = "method,model,weight\n";
  for (auto m : methods) {
    const auto r = opt::optimize_fusion(m, val, d.validation_labels, threshold, ocfg, search);
    const auto w = normalize_weights(r.best_weights);
    const std::string method(opt::to_string(m));
    add_combined(methods.size() == 1 ? "fused" : "fused_" + method, "fused", w);
    entries.back()["method"] = method;
    runs.push_back(Json::parse(opt::to_json(r)));
    for (std::size_t i = 0; i < selected.size(); ++i) {
      weights_csv += csv::format_row({method, selected[i], csv::format_double(w[i])});
    }
  }
  report["entries"] = std::move(entries);
  report["optimization"] = std::move(runs);
  if (has(cfg, "report")) text::write_file(need(cfg, "report"), report.dump(2) + "\n");
  if (has(cfg, "weights")) text::write_file(need(cfg, "weights"), weights_csv);
  return report;
}

namespace {

Json topics_json(const std::vector<topics::Topic>& ts) { return Json::parse(topics::to_json(ts)); }

std::vector<topics::Topic> topics_for(const std::vector<std::vector<std::string>>& docs, const std::vector<int>& labels,
                                      std::size_t n_topics, std::size_t n_terms) {
  if (std::none_of(labels.begin(), labels.end(), [](int l) { return l >= 0; })) return {};
  return topics::top_topics(topics::ctfidf(docs, labels), n_topics, n_terms);
}

void append_csv(std::string& out, const std::string& group, const std::vector<topics::Topic>& ts) {
  for (const auto& t : ts) {
    for (const auto& [term, weight] : t.terms) {
      out += csv::format_row({group, term, csv::format_double(weight), std::to_string(t.cluster_id)});
    }
  }
}

}  // namespace

Json cmd_topics(const In& cfg) {
  const Corpus all = load_corpus(input_path(cfg, "corpus"));
  const std::string out_path = need(cfg, "output");
  const auto emb_path = optional_input(cfg, "embeddings");
  const std::size_t n_topics = count(cfg, "n_topics", 10, 1);
  const std::size_t n_terms = count(cfg, "n_terms", 10, 1);
  const std::size_t min_count = count(cfg, "min_count", 70, 1);
  const std::size_t target_dim = count(cfg, "target_dim", 5, 1);
  const std::size_t fallback_dim = count(cfg, "fallback_dim", 16, 2);
  cluster::HdbscanParams hp;
  hp.min_cluster_size = count(cfg, "min_cluster_size", hp.min_cluster_size, 2);
  hp.min_samples = count(cfg, "min_samples", hp.min_samples, 1);
  hp.cosine = get<bool>(cfg, "cosine", false);
  const geo::Gazetteer gaz = gazetteer_of(cfg);

  const auto lf = label_filter(cfg, "relevant");
  const Corpus c = select(all, split_filter(cfg, "all"), lf);
  if (c.empty()) {
    fail(ErrorKind::Domain, lf ? "no " + std::string(to_string(*lf)) + " tweets" : std::string("no tweets selected"));
  }

  cluster::EmbeddingMatrix e = emb_path ? cluster::align(cluster::load_embeddings(*emb_path), c)
                                        : cluster::embed_fallback(c, fallback_dim, seed_of(cfg));
  if (hp.cosine) e = cluster::l2_normalize(e);
  const auto reduced = cluster::pca_reduce(e, std::min(target_dim, e.dim()));
  const auto result = cluster::hdbscan(reduced, hp);
  const auto& labels = result.assignment.labels;

  std::vector<std::vector<std::string>> docs;
  for (const auto& t : c.tweets()) docs.push_back(preprocess_tokens(t.text));

  Json report;
  report["command"] = "topics";
  report["documents"] = c.size();
  report["embedding"] = emb_path ? "file" : "tfidf-svd";
  report["embedding_dim"] = e.dim();
  report["reduced_dim"] = reduced.dim();
  report["clusters"] = result.assignment.cluster_count;
  report["noise"] = std::count(labels.begin(), labels.end(), -1);
  const auto global = topics_for(docs, labels, n_topics, n_terms);
  report["global"] = topics_json(global);
  std::string csv_out = "group,term,weight,topic\n";
  append_csv(csv_out, "global", global);

  const auto located = geo::locate(c, gaz);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c.size(); ++i) index[c[i].id] = i;
  for (auto key : {geo::GroupKey::Country, geo::GroupKey::Region}) {
    const char* section = key == geo::GroupKey::Country ? "countries" : "regions";
    const char* prefix = key == geo::GroupKey::Country ? "country:" : "region:";
    Json groups = Json::array();
    Json excluded = Json::array();
    for (const auto& g : geo::group(located.tweets, key)) {
      if (g.count < min_count) {
        excluded.push_back({{"key", g.key}, {"count", g.count}});
        continue;
      }
      std::vector<std::vector<std::string>> gdocs;
      std::vector<int> glabels;
      for (const auto& id : g.ids) {
        gdocs.push_back(docs[index.at(id)]);
        glabels.push_back(labels[index.at(id)]);
      }
      const auto ts = topics_for(gdocs, glabels, n_topics, n_terms);
      groups.push_back({{"key", g.key}, {"count", g.count}, {"topics", topics_json(ts)}});
      append_csv(csv_out, prefix + g.key, ts);
    }
    report[section] = std::move(groups);
    report[std::string("excluded_") + section] = std::move(excluded);
  }
  report["unmapped"] = located.unmapped.size();

  text::write_file(out_path, report.dump(2) + "\n");
  if (has(cfg, "csv")) text::write_file(need(cfg, "csv"), csv_out);
  if (has(cfg, "assignments")) {
    text::write_file(need(cfg, "assignments"), cluster::assignment_csv(reduced.ids, result.assignment));
  }
  return report;
}

Json cmd_regions(const In& cfg) {
  const Corpus all = load_corpus(input_path(cfg, "corpus"));
  const std::size_t min_count = count(cfg, "min_count", 70, 1);
  const geo::Gazetteer gaz = gazetteer_of(cfg);
  const Corpus c = select(all, split_filter(cfg, "all"), label_filter(cfg, "any"));
  const auto located = geo::locate(c, gaz);

  Json report;
  report["command"] = "regions";
  report["tweets"] = c.size();
  report["located"] = located.tweets.size();
  report["unmapped"] = located.unmapped.size();
  report["min_count"] = min_count;
  for (auto key : {geo::GroupKey::Country, geo::GroupKey::Region}) {
    const auto groups = geo::group(located.tweets, key);
    Json rows = Json::array();
    for (const auto& g : groups) rows.push_back({{"key", g.key}, {"count", g.count}, {"retained", g.count >= min_count}});
    const bool country = key == geo::GroupKey::Country;
    report[country ? "countries" : "regions"] = std::move(rows);
    const char* path_key = country ? "countries_csv" : "regions_csv";
    if (has(cfg, path_key)) text::write_file(need(cfg, path_key), geo::to_csv(groups));
  }
  report["residual"] = located.unmapped;
  if (has(cfg, "residual")) {
    std::string out = "sample_id\n";
    for (const auto& id : located.unmapped) out += csv::format_row({id});
    text::write_file(need(cfg, "residual"), out);
  }
  if (has(cfg, "output")) text::write_file(need(cfg, "output"), report.dump(2) + "\n");
  return report;
}

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string scalar(const In& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

std::string render(const In& s) {
  std::ostringstream out;
  const std::string cmd = s.value("command", "");
  if (cmd == "fuse" && s.contains("entries")) {
    out << pad("entry", 22) << pad("val_acc", 10) << pad("val_f1", 10) << pad("test_acc", 10) << "test_f1\n";
    for (const auto& e : s.at("entries")) {
      out << pad(e.at("name").get<std::string>(), 22) << pad(fixed(e.at("validation").at("accuracy").get<double>()), 10)
          << pad(fixed(e.at("validation").at("f1").get<double>()), 10)
          << pad(fixed(e.at("test").at("accuracy").get<double>()), 10) << fixed(e.at("test").at("f1").get<double>())
          << "\n";
    }
    for (const auto& e : s.at("entries")) {
      if (e.at("kind") != "fused") continue;
      out << e.at("name").get<std::string>() << " weights:";
      for (const auto& w : e.at("weights")) out << " " << fixed(w.get<double>());
      out << "\n";
    }
    return out.str();
  }
  if (cmd == "topics" && s.contains("global")) {
    out << "documents " << s.at("documents").dump() << ", clusters " << s.at("clusters").dump() << ", noise "
        << s.at("noise").dump() << "\n";
    auto show = [&](const std::string& title, const In& ts) {
      out << title << "\n";
      for (const auto& t : ts) {
        out << "  [" << t.at("cluster_id").dump() << "] n=" << t.at("size").dump() << ":";
        for (const auto& term : t.at("terms")) out << " " << term.at("term").get<std::string>();
        out << "\n";
      }
    };
    show("global", s.at("global"));
    for (const char* sec : {"countries", "regions"}) {
      for (const auto& g : s.at(sec)) show(g.at("key").get<std::string>() + " (" + g.at("count").dump() + ")", g.at("topics"));
    }
    return out.str();
  }
  if (cmd == "regions" && s.contains("countries")) {
    for (const char* sec : {"countries", "regions"}) {
      out << pad(sec, 30) << "count\n";
      for (const auto& g : s.at(sec)) {
        out << pad(g.at("key").get<std::string>() + (g.at("retained").get<bool>() ? "" : " *"), 30) << g.at("count").dump()
            << "\n";
      }
    }
    out << "unmapped " << s.at("unmapped").dump() << " (* below min_count " << s.at("min_count").dump() << ")\n";
    return out.str();
  }
  for (const auto& [k, v] : s.items()) {
    if (v.is_object()) {
      out << k << ":\n";
      for (const auto& [k2, v2] : v.items()) out << "  " << pad(k2, 20) << (v2.is_object() ? v2.dump() : scalar(v2)) << "\n";
    } else {
      out << pad(k, 22) << scalar(v) << "\n";
    }
  }
  return out.str();
}

}  // namespace wqa::pipeline
