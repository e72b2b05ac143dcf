#pragma once

#include <string>

#include <json.hpp>

namespace wqa::pipeline {

using Json = nlohmann::ordered_json;

// Each command reads a flat json config, writes its output files and returns a
// summary. Unknown keys are ignored; missing input files raise Io before any
// work starts.

// input, output, [format, seed, min_tokens, keyword_filter, keywords,
// annotations, train_ratio, test_ratio, validation_ratio, labels_out]
Json cmd_prepare(const nlohmann::json& cfg);

// corpus, output, [split, epochs, learning_rate, seed, dim]
Json cmd_train_baseline(const nlohmann::json& cfg);

// corpus, model, output, [model_name, merge_into]
Json cmd_score(const nlohmann::json& cfg);

// scores + corpus (splits and labels), or validation_scores + test_scores +
// labels; [labels, optimizer, top_k, threshold, seed, max_iterations,
// restarts, smoothing, report, weights]
Json cmd_fuse(const nlohmann::json& cfg);

// corpus, output, [embeddings, csv, assignments, split, label, fallback_dim,
// target_dim, min_cluster_size, min_samples, cosine, n_topics, n_terms,
// min_count, seed, gazetteer_patterns, gazetteer_regions]
Json cmd_topics(const nlohmann::json& cfg);

// corpus, [countries_csv, regions_csv, residual, output, min_count, split,
// label, gazetteer_patterns, gazetteer_regions]
Json cmd_regions(const nlohmann::json& cfg);

// Plain-text table for any summary or report returned above.
std::string render(const nlohmann::json& summary);

}  // namespace wqa::pipeline
