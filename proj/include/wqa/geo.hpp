#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wqa/corpus.hpp"

namespace wqa::geo {

class Gazetteer {
 public:
  struct Pattern {
    std::string text;  // case-folded
    std::string country;
  };

  // Throws Domain if a pattern's country has no region.
  Gazetteer(std::vector<Pattern> patterns, std::map<std::string, std::string> regions);

  const std::vector<Pattern>& patterns() const { return patterns_; }
  const std::map<std::string, std::string>& regions() const { return regions_; }

 private:
  std::vector<Pattern> patterns_;
  std::map<std::string, std::string> regions_;
};

// csv "pattern,country" and csv "country,region". Patterns keep file order.
Gazetteer parse_gazetteer(std::string_view patterns_csv, std::string_view regions_csv);
Gazetteer load_gazetteer(const std::string& patterns_path, const std::string& regions_path);
const Gazetteer& default_gazetteer();

std::optional<std::string> map_location(std::string_view raw, const Gazetteer& g);

// Throws Domain for a country the region table does not know.
std::string to_region(const std::string& country, const Gazetteer& g);

struct LocatedTweet {
  std::string id;
  std::string country;
  std::string region;
};

struct Located {
  std::vector<LocatedTweet> tweets;
  std::vector<std::string> unmapped;  // ids with no or unmatched location
};

Located locate(const Corpus& c, const Gazetteer& g);

enum class GroupKey { Country, Region };

struct GroupReport {
  std::string key;
  std::size_t count = 0;
  std::vector<std::string> ids;
};

// Every group, count descending then key ascending.
std::vector<GroupReport> group(const std::vector<LocatedTweet>& tweets, GroupKey key);

// Groups with at least min_count members, in the same order.
std::vector<GroupReport> group_and_filter(const std::vector<LocatedTweet>& tweets, GroupKey key,
                                          std::size_t min_count = 70);

// csv "key,count".
std::string to_csv(const std::vector<GroupReport>& groups);

}  // namespace wqa::geo
