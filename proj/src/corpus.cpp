#include "wqa/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "wqa/csv.hpp"
#include "wqa/error.hpp"
#include "wqa/random.hpp"
#include "wqa/resources.hpp"
#include "wqa/text.hpp"

namespace wqa {

using nlohmann::json;

std::string_view to_string(Label l) { return l == Label::Relevant ? "relevant" : "irrelevant"; }

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Validation: return "validation";
  }
  return "train";
}

std::optional<Label> parse_label(std::string_view s) {
  const std::string v = text::fold_case(text::trim(s));
  if (v == "relevant" || v == "1") return Label::Relevant;
  if (v == "irrelevant" || v == "non-relevant" || v == "not relevant" || v == "0") return Label::Irrelevant;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  const std::string v = text::fold_case(text::trim(s));
  if (v == "train") return Split::Train;
  if (v == "test") return Split::Test;
  if (v == "validation" || v == "val") return Split::Validation;
  return std::nullopt;
}

Corpus::Corpus(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
  std::unordered_set<std::string> seen;
  for (const auto& t : tweets_) {
    if (t.id.empty()) fail(ErrorKind::Domain, "tweet with empty id");
    if (!seen.insert(t.id).second) fail(ErrorKind::Domain, "duplicate id '" + t.id + "'");
  }
}

const Tweet* Corpus::find(std::string_view id) const {
  for (const auto& t : tweets_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

CorpusFormat format_from_path(std::string_view path) {
  auto dot = path.rfind('.');
  if (dot != std::string_view::npos && text::fold_case(path.substr(dot)) == ".csv") return CorpusFormat::Csv;
  return CorpusFormat::Jsonl;
}

namespace {

[[noreturn]] void record_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

struct RawRecord {
  std::size_t line;
  std::optional<std::string> id;
  std::string text;
  std::optional<std::string> location;
  std::optional<std::string> label;
  std::optional<std::string> split;
};

Corpus assemble(std::vector<RawRecord> records) {
  std::vector<Tweet> tweets;
  tweets.reserve(records.size());
  std::unordered_map<std::string, std::size_t> explicit_ids;
  for (const auto& r : records) {
    if (r.id && !explicit_ids.emplace(*r.id, r.line).second) {
      record_error(r.line, "duplicate id '" + *r.id + "' (first seen on line " + std::to_string(explicit_ids[*r.id]) + ")");
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    Tweet t;
    if (r.id) {
      t.id = *r.id;
    } else {
      t.id = std::to_string(i + 1);
      if (explicit_ids.count(t.id)) record_error(r.line, "assigned id '" + t.id + "' collides with an explicit id");
    }
    t.text = std::move(r.text);
    if (r.location && !text::trim(*r.location).empty()) t.location = std::move(r.location);
    if (r.label && !text::trim(*r.label).empty()) {
      t.label = parse_label(*r.label);
      if (!t.label) record_error(r.line, "unknown label '" + *r.label + "'");
    }
    if (r.split && !text::trim(*r.split).empty()) {
      t.split = parse_split(*r.split);
      if (!t.split) record_error(r.line, "unknown split '" + *r.split + "'");
    }
    tweets.push_back(std::move(t));
  }
  return Corpus(std::move(tweets));
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  record_error(line, std::string("field '") + key + "' must be a string");
}

std::vector<RawRecord> read_jsonl(std::string_view content) {
  std::vector<RawRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    auto line = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    if (text::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      record_error(line_no, std::string("malformed json: ") + e.what());
    }
    if (!obj.is_object()) record_error(line_no, "record is not a json object");
    auto txt = obj.find("text");
    if (txt == obj.end() || !txt->is_string()) record_error(line_no, "missing required field 'text'");
    RawRecord r{line_no, optional_string(obj, "id", line_no), txt->get<std::string>(),
                optional_string(obj, "location", line_no), optional_string(obj, "label", line_no),
                optional_string(obj, "split", line_no)};
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RawRecord> read_csv(std::string_view content) {
  auto rows = csv::parse(content);
  if (rows.empty()) return {};
  const auto& header = rows.front();
  const auto c_text = csv::column(header, "text");
  if (c_text == std::string_view::npos) record_error(header.line, "header lacks required column 'text'");
  const auto c_id = csv::column(header, "id");
  const auto c_loc = csv::column(header, "location");
  const auto c_label = csv::column(header, "label");
  const auto c_split = csv::column(header, "split");
  auto get = [](const csv::Row& row, std::size_t col) -> std::optional<std::string> {
    if (col == std::string_view::npos || col >= row.fields.size()) return std::nullopt;
    return row.fields[col];
  };
  std::vector<RawRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != header.fields.size()) {
      record_error(row.line, "expected " + std::to_string(header.fields.size()) + " fields, found " +
                                 std::to_string(row.fields.size()));
    }
    auto id = get(row, c_id);
    if (id && id->empty()) id.reset();
    out.push_back({row.line, id, row.fields[c_text], get(row, c_loc), get(row, c_label), get(row, c_split)});
  }
  return out;
}

}  // namespace

Corpus ingest_string(std::string_view content, CorpusFormat format) {
  return assemble(format == CorpusFormat::Csv ? read_csv(content) : read_jsonl(content));
}

Corpus ingest(const std::string& path, CorpusFormat format) {
  const std::string content = text::read_file(path);
  try {
    return ingest_string(content, format);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string to_jsonl(const Corpus& c) {
  std::string out;
  for (const auto& t : c.tweets()) {
    nlohmann::ordered_json obj;
    obj["id"] = t.id;
    obj["text"] = t.text;
    if (t.location) obj["location"] = *t.location;
    if (t.label) obj["label"] = std::string(to_string(*t.label));
    if (t.split) obj["split"] = std::string(to_string(*t.split));
    out += obj.dump(-1, ' ', false, json::error_handler_t::replace);
    out.push_back('\n');
  }
  return out;
}

void write_jsonl(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << to_jsonl(c);
}

Corpus clean(const Corpus& c, std::size_t min_tokens) {
  require(min_tokens >= 1, "min_tokens must be >= 1");
  std::unordered_set<std::string> seen;
  std::vector<Tweet> kept;
  for (const auto& t : c.tweets()) {
    std::string norm = text::normalize(t.text);
    if (text::split_whitespace(norm).size() < min_tokens) continue;
    if (!seen.insert(std::move(norm)).second) continue;
    kept.push_back(t);
  }
  return Corpus(std::move(kept));
}

std::vector<std::string> default_keywords() { return text::parse_lines(resources::keywords()); }

Corpus keyword_filter(const Corpus& c, const std::vector<std::string>& keywords) {
  require(!keywords.empty(), "keyword list is empty");
  std::vector<std::string> folded;
  for (const auto& k : keywords) {
    if (!k.empty()) folded.push_back(text::fold_case(k));
  }
  require(!folded.empty(), "keyword list holds only empty strings");
  std::vector<Tweet> kept;
  for (const auto& t : c.tweets()) {
    const std::string body = text::fold_case(t.text);
    if (std::any_of(folded.begin(), folded.end(), [&](const std::string& k) { return body.find(k) != std::string::npos; })) {
      kept.push_back(t);
    }
  }
  return Corpus(std::move(kept));
}

AnnotationSet load_annotations(const std::string& path) {
  auto rows = csv::parse(text::read_file(path));
  AnnotationSet set;
  if (rows.empty()) return set;
  const auto c_id = csv::column(rows.front(), "id");
  const auto c_label = csv::column(rows.front(), "label");
  if (c_id == std::string_view::npos || c_label == std::string_view::npos) {
    fail(ErrorKind::Parse, path + ": annotation header must contain 'id' and 'label'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.fields.size() <= std::max(c_id, c_label)) record_error(r.line, "short annotation row");
    auto label = parse_label(r.fields[c_label]);
    if (!label) record_error(r.line, "unknown label '" + r.fields[c_label] + "'");
    set.votes[r.fields[c_id]].push_back(*label);
  }
  return set;
}

std::map<std::string, Label> merge_annotations(const AnnotationSet& a) {
  std::map<std::string, Label> out;
  for (const auto& [id, votes] : a.votes) {
    if (votes.size() < 3 || votes.size() % 2 == 0) {
      fail(ErrorKind::Domain, "tweet '" + id + "' has " + std::to_string(votes.size()) +
                                  " votes; an odd count of at least 3 is required");
    }
    auto relevant = std::count(votes.begin(), votes.end(), Label::Relevant);
    out[id] = 2 * static_cast<std::size_t>(relevant) > votes.size() ? Label::Relevant : Label::Irrelevant;
  }
  return out;
}

Corpus apply_labels(const Corpus& c, const std::map<std::string, Label>& labels) {
  std::vector<Tweet> tweets = c.tweets();
  for (auto& t : tweets) {
    if (auto it = labels.find(t.id); it != labels.end()) t.label = it->second;
  }
  return Corpus(std::move(tweets));
}

SplitSizes split_sizes(std::size_t n, const SplitRatios& r) {
  require(r.train > 0 && r.test > 0 && r.validation > 0, "split ratios must be positive");
  require(std::abs(r.train + r.test + r.validation - 1.0) <= 1e-9, "split ratios must sum to 1");
  // The epsilon absorbs representation error such as 7930 * 0.1 = 792.99...
  auto part = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
  };
  SplitSizes s;
  s.test = part(r.test);
  s.validation = part(r.validation);
  s.train = n - s.test - s.validation;
  return s;
}

namespace {

// Rounds the (strata x parts) quota matrix so that every cell is the floor or
// ceiling of its exact quota while row totals (stratum sizes) and column totals
// (part sizes) are met. Among valid roundings, the one rounding up the largest
// fractional parts wins.
std::vector<std::array<std::size_t, 3>> round_quotas(const std::vector<std::size_t>& strata,
                                                     const std::array<std::size_t, 3>& parts, std::size_t n) {
  const std::size_t k = strata.size();
  std::vector<std::array<std::size_t, 3>> base(k);
  std::vector<std::array<std::size_t, 3>> frac(k);
  std::vector<std::size_t> row_need(k);
  std::array<std::size_t, 3> col_need = parts;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t used = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      base[i][j] = strata[i] * parts[j] / n;
      frac[i][j] = strata[i] * parts[j] % n;
      used += base[i][j];
      col_need[j] -= base[i][j];
    }
    row_need[i] = strata[i] - used;
  }

  std::vector<std::array<bool, 3>> chosen(k, {false, false, false});
  std::vector<std::array<bool, 3>> best;
  long long best_score = -1;
  std::function<void(std::size_t, std::array<std::size_t, 3>, long long)> search =
      [&](std::size_t row, std::array<std::size_t, 3> cols, long long score) {
        if (row == k) {
          if (cols == std::array<std::size_t, 3>{0, 0, 0} && score > best_score) {
            best_score = score;
            best = chosen;
          }
          return;
        }
        for (unsigned mask = 0; mask < 8; ++mask) {
          if (static_cast<std::size_t>(__builtin_popcount(mask)) != row_need[row]) continue;
          bool ok = true;
          long long add = 0;
          auto next = cols;
          for (std::size_t j = 0; j < 3 && ok; ++j) {
            bool up = (mask >> j) & 1u;
            chosen[row][j] = up;
            if (!up) continue;
            if (frac[row][j] == 0 || next[j] == 0) ok = false;
            else {
              --next[j];
              add += static_cast<long long>(frac[row][j]);
            }
          }
          if (ok) search(row + 1, next, score + add);
        }
        chosen[row] = {false, false, false};
      };
  search(0, col_need, 0);
  if (best_score < 0) fail(ErrorKind::Domain, "stratified split is impossible for this corpus");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < 3; ++j) base[i][j] += best[i][j] ? 1 : 0;
  }
  return base;
}

}  // namespace

Corpus split(const Corpus& c, const SplitRatios& ratios, std::uint64_t seed) {
  const std::size_t n = c.size();
  const SplitSizes sizes = split_sizes(n, ratios);
  if (n < 3) fail(ErrorKind::Domain, "corpus of " + std::to_string(n) + " tweets is too small to split (need >= 3)");

  // Strata in fixed order: relevant, irrelevant, unlabeled.
  std::array<std::vector<std::size_t>, 3> members;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = c[i].label;
    members[!l ? 2 : (*l == Label::Relevant ? 0 : 1)].push_back(i);
  }
  std::vector<std::size_t> strata_sizes;
  std::vector<std::size_t> strata_index;
  for (std::size_t s = 0; s < 3; ++s) {
    if (!members[s].empty()) {
      strata_sizes.push_back(members[s].size());
      strata_index.push_back(s);
    }
  }
  // Column order here is test, validation, train.
  auto counts = round_quotas(strata_sizes, {sizes.test, sizes.validation, sizes.train}, n);

  std::vector<Tweet> tweets = c.tweets();
  Rng rng(seed);
  for (std::size_t r = 0; r < strata_index.size(); ++r) {
    auto& idx = members[strata_index[r]];
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    std::size_t pos = 0;
    for (std::size_t j = 0; j < counts[r][0]; ++j) tweets[idx[pos++]].split = Split::Test;
    for (std::size_t j = 0; j < counts[r][1]; ++j) tweets[idx[pos++]].split = Split::Validation;
    while (pos < idx.size()) tweets[idx[pos++]].split = Split::Train;
  }
  return Corpus(std::move(tweets));
}

Corpus select(const Corpus& c, std::optional<Split> split, std::optional<Label> label) {
  std::vector<Tweet> kept;
  for (const auto& t : c.tweets()) {
    if (split && t.split != split) continue;
    if (label && t.label != label) continue;
    kept.push_back(t);
  }
  return Corpus(std::move(kept));
}

StopWords::StopWords() : StopWords(text::parse_lines(resources::stopwords())) {}

StopWords::StopWords(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(text::fold_case(w));
}

const StopWords& default_stop_words() {
  static const StopWords words;
  return words;
}

std::vector<std::string> preprocess_tokens(std::string_view raw, const StopWords& stop) {
  auto is_word_byte = [](unsigned char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch >= 0x80;
  };
  std::vector<std::string> out;
  for (std::string token : text::split_whitespace(text::fold_case(raw))) {
    if (token.rfind("http://", 0) == 0 || token.rfind("https://", 0) == 0 || token.rfind("www.", 0) == 0) continue;
    if (token.front() == '@') continue;
    std::size_t i = 0;
    while (i < token.size()) {
      while (i < token.size() && !is_word_byte(static_cast<unsigned char>(token[i]))) ++i;
      std::size_t start = i;
      while (i < token.size() && is_word_byte(static_cast<unsigned char>(token[i]))) ++i;
      if (i == start) continue;
      std::string_view piece(token.data() + start, i - start);
      if (std::any_of(piece.begin(), piece.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) continue;
      if (text::utf8_length(piece) < 3) continue;
      if (stop.contains(piece)) continue;
      out.emplace_back(piece);
    }
  }
  return out;
}

}  // namespace wqa
