#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wqa/wqa.h"

namespace {

enum class Kind { Text, Int, Real, Flag };

struct Key {
  const char* name;
  Kind kind;
  const char* help;
};

struct Bound {
  Key key;
  CLI::Option* option = nullptr;
  std::string text;
  bool flag = false;
};

const std::map<std::string, std::vector<Key>>& command_keys() {
  static const std::map<std::string, std::vector<Key>> keys = {
      {"prepare",
       {{"input", Kind::Text, "raw corpus (jsonl or csv)"},
        {"output", Kind::Text, "prepared corpus jsonl"},
        {"format", Kind::Text, "jsonl or csv; default from extension"},
        {"seed", Kind::Int, "split seed"},
        {"min_tokens", Kind::Int, "drop tweets with fewer whitespace tokens"},
        {"keyword_filter", Kind::Flag, "keep only tweets matching the bundled keywords"},
        {"keywords", Kind::Text, "keyword list file (implies filtering)"},
        {"annotations", Kind::Text, "csv id,label with one row per vote"},
        {"train_ratio", Kind::Real, "default 0.7"},
        {"test_ratio", Kind::Real, "default 0.2"},
        {"validation_ratio", Kind::Real, "default 0.1"},
        {"labels_out", Kind::Text, "also write csv sample_id,label"}}},
      {"train-baseline",
       {{"corpus", Kind::Text, "prepared corpus"},
        {"output", Kind::Text, "model file"},
        {"split", Kind::Text, "training split (train, test, validation, all)"},
        {"epochs", Kind::Int, "gradient steps"},
        {"learning_rate", Kind::Real, "step size"},
        {"seed", Kind::Int, "initialisation seed"},
        {"dim", Kind::Int, "hashed feature dimension"}}},
      {"score",
       {{"corpus", Kind::Text, "prepared corpus"},
        {"model", Kind::Text, "model file"},
        {"output", Kind::Text, "scores csv"},
        {"model_name", Kind::Text, "column name for this model"},
        {"merge_into", Kind::Text, "existing scores csv to extend"}}},
      {"fuse",
       {{"scores", Kind::Text, "scores csv for every sample"},
        {"corpus", Kind::Text, "prepared corpus giving splits (and labels)"},
        {"labels", Kind::Text, "csv sample_id,label"},
        {"validation_scores", Kind::Text, "validation scores csv"},
        {"test_scores", Kind::Text, "test scores csv"},
        {"optimizer", Kind::Text, "pso, nelder-mead, lbfgs, powell or all"},
        {"top_k", Kind::Int, "fuse the k best models by validation F1 (0 = all)"},
        {"threshold", Kind::Real, "decision threshold"},
        {"seed", Kind::Int, "optimizer seed"},
        {"max_iterations", Kind::Int, "iteration cap per run"},
        {"restarts", Kind::Int, "extra starts for local methods (default 10)"},
        {"pso_swarms", Kind::Int, "independent PSO swarms, best kept (default 3)"},
        {"smoothing", Kind::Flag, "smoothed stages for local methods; --smoothing=false disables"},
        {"report", Kind::Text, "json report path"},
        {"weights", Kind::Text, "csv weight vector path"}}},
      {"topics",
       {{"corpus", Kind::Text, "prepared corpus"},
        {"output", Kind::Text, "json topic report"},
        {"csv", Kind::Text, "plot-ready csv group,term,weight,topic"},
        {"assignments", Kind::Text, "csv sample_id,cluster,probability"},
        {"embeddings", Kind::Text, "embedding file; TF-IDF fallback when absent"},
        {"split", Kind::Text, "split to analyse (default all)"},
        {"label", Kind::Text, "relevant, irrelevant or any (default relevant)"},
        {"fallback_dim", Kind::Int, "fallback embedding dimension"},
        {"target_dim", Kind::Int, "PCA dimension"},
        {"min_cluster_size", Kind::Int, "HDBSCAN minimum cluster size"},
        {"min_samples", Kind::Int, "HDBSCAN neighbourhood size"},
        {"cosine", Kind::Flag, "L2-normalize embeddings first"},
        {"n_topics", Kind::Int, "topics per section"},
        {"n_terms", Kind::Int, "terms per topic"},
        {"min_count", Kind::Int, "minimum tweets per country or region"},
        {"seed", Kind::Int, "fallback embedding seed"},
        {"gazetteer_patterns", Kind::Text, "csv pattern,country"},
        {"gazetteer_regions", Kind::Text, "csv country,region"}}},
      {"regions",
       {{"corpus", Kind::Text, "prepared corpus"},
        {"countries_csv", Kind::Text, "country table"},
        {"regions_csv", Kind::Text, "region table"},
        {"residual", Kind::Text, "ids with no mapped location"},
        {"output", Kind::Text, "json report"},
        {"min_count", Kind::Int, "minimum tweets per group"},
        {"split", Kind::Text, "split filter (default all)"},
        {"label", Kind::Text, "label filter (default any)"},
        {"gazetteer_patterns", Kind::Text, "csv pattern,country"},
        {"gazetteer_regions", Kind::Text, "csv country,region"}}},
  };
  return keys;
}

std::string flag_name(const char* key) {
  std::string s = key;
  for (auto& ch : s) {
    if (ch == '_') ch = '-';
  }
  return "--" + s;
}

int error(const std::string& msg) {
  std::cerr << "wqa: error: " << msg << "\n";
  return 2;
}

int run(const std::string& name, const std::vector<Bound>& bound) {
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& b : bound) {
    if (b.option->count() == 0) continue;
    const std::string key = b.key.name;
    switch (b.key.kind) {
      case Kind::Text: cfg[key] = b.text; break;
      case Kind::Flag: cfg[key] = b.flag; break;
      case Kind::Int: {
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(b.text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != b.text.size() || b.text.empty()) return error(flag_name(b.key.name) + " expects an integer");
        cfg[key] = v;
        break;
      }
      case Kind::Real: {
        std::size_t used = 0;
        double v = 0;
        try {
          v = std::stod(b.text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != b.text.size() || b.text.empty()) return error(flag_name(b.key.name) + " expects a number");
        cfg[key] = v;
        break;
      }
    }
  }
  char* summary = nullptr;
  if (wqa_run_command(name.c_str(), cfg.dump().c_str(), &summary) != WQA_OK) return error(wqa_last_error());
  char* text = nullptr;
  const wqa_status st = wqa_render_summary(summary, &text);
  wqa_string_free(summary);
  if (st != WQA_OK) return error(wqa_last_error());
  std::cout << text;
  wqa_string_free(text);
  return 0;
}

int report(const std::string& path) {
  std::ifstream in(path);
  if (!in) return error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  char* text = nullptr;
  if (wqa_render_summary(ss.str().c_str(), &text) != WQA_OK) return error(path + ": " + wqa_last_error());
  std::cout << text;
  wqa_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Late fusion, clustering and topic tools for labelled short texts"};
  app.set_config("--config", "", "INI file; [section] names a subcommand, keys match flag names");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wqa_version()));

  std::map<std::string, std::vector<Bound>> bound;
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"prepare", "clean, label and split a corpus"},
      {"train-baseline", "train the logistic-regression baseline"},
      {"score", "write per-model posterior scores"},
      {"fuse", "optimise fusion weights and evaluate"},
      {"topics", "cluster documents and extract topics"},
      {"regions", "country and region distribution"},
  };
  for (const auto& [name, keys] : command_keys()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    subs[name] = sub;
    auto& list = bound[name];
    list.reserve(keys.size());
    for (const auto& k : keys) {
      list.push_back({k, nullptr, {}, false});
      auto& b = list.back();
      if (k.kind == Kind::Flag) {
        b.option = sub->add_flag(flag_name(k.name), b.flag, k.help);
      } else {
        b.option = sub->add_option(flag_name(k.name), b.text, k.help);
      }
    }
  }
  std::string report_path;
  auto* rep = app.add_subcommand("report", "print a saved json report as a table");
  rep->add_option("file", report_path, "report written by fuse, topics or regions")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (rep->parsed()) return report(report_path);
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) return run(name, bound[name]);
  }
  return error("no command given");
}
