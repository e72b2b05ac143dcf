#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace wqa {

enum class Label { Relevant, Irrelevant };
enum class Split { Train, Test, Validation };

std::string_view to_string(Label l);
std::string_view to_string(Split s);
// Accepts "relevant"/"irrelevant" (also "non-relevant", "1"/"0"), case-insensitive.
std::optional<Label> parse_label(std::string_view s);
// Accepts "train", "test", "validation" (also "val").
std::optional<Split> parse_split(std::string_view s);

struct Tweet {
  std::string id;
  std::string text;
  std::optional<std::string> location;
  std::optional<Label> label;
  std::optional<Split> split;

  bool operator==(const Tweet&) const = default;
};

// Ordered, id-unique collection. Immutable once built; every operation below
// returns a new Corpus.
class Corpus {
 public:
  Corpus() = default;
  // Throws Domain on empty or duplicate ids.
  explicit Corpus(std::vector<Tweet> tweets);

  const std::vector<Tweet>& tweets() const noexcept { return tweets_; }
  std::size_t size() const noexcept { return tweets_.size(); }
  bool empty() const noexcept { return tweets_.empty(); }
  const Tweet& operator[](std::size_t i) const { return tweets_[i]; }
  const Tweet* find(std::string_view id) const;

  bool operator==(const Corpus& other) const { return tweets_ == other.tweets_; }

 private:
  std::vector<Tweet> tweets_;
};

enum class CorpusFormat { Jsonl, Csv };

// Infers the format from the extension (.csv → csv, anything else → jsonl).
CorpusFormat format_from_path(std::string_view path);

// Missing ids are assigned the 1-based record number as a string.
Corpus ingest(const std::string& path, CorpusFormat format);
Corpus ingest_string(std::string_view content, CorpusFormat format);

void write_jsonl(const Corpus& c, const std::string& path);
std::string to_jsonl(const Corpus& c);

inline constexpr std::size_t kDefaultMinTokens = 3;

// Drops duplicates (case-folded, whitespace-collapsed text; first occurrence
// wins) and tweets with fewer than min_tokens whitespace tokens.
Corpus clean(const Corpus& c, std::size_t min_tokens = kDefaultMinTokens);

std::vector<std::string> default_keywords();

// Keeps tweets whose case-folded text contains any keyword as a substring.
Corpus keyword_filter(const Corpus& c, const std::vector<std::string>& keywords);

struct AnnotationSet {
  std::map<std::string, std::vector<Label>> votes;
};

// Reads csv "id,label" with one row per vote.
AnnotationSet load_annotations(const std::string& path);

std::map<std::string, Label> merge_annotations(const AnnotationSet& a);

// Sets each tweet's label from the merged votes; tweets without votes keep
// their label.
Corpus apply_labels(const Corpus& c, const std::map<std::string, Label>& labels);

struct SplitRatios {
  double train = 0.7;
  double test = 0.2;
  double validation = 0.1;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t validation = 0;
};

// Overall part sizes: test and validation are floor(n * ratio), train takes
// the remainder.
SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios);

// Label-stratified, seeded split. Order of tweets is preserved; only the split
// field changes.
Corpus split(const Corpus& c, const SplitRatios& ratios, std::uint64_t seed);

Corpus select(const Corpus& c, std::optional<Split> split, std::optional<Label> label);

class StopWords {
 public:
  StopWords();  // bundled list
  explicit StopWords(const std::vector<std::string>& words);

  bool contains(std::string_view w) const { return words_.count(std::string(w)) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

const StopWords& default_stop_words();

// Case-fold; drop URLs and @mentions, strip leading '#'; split on anything
// that is not a letter or digit; drop tokens containing digits, shorter than
// three characters, or in the stop list.
std::vector<std::string> preprocess_tokens(std::string_view text, const StopWords& stop = default_stop_words());

}  // namespace wqa
