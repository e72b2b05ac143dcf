#include "wqa/geo.hpp"

#include <algorithm>

#include "wqa/csv.hpp"
#include "wqa/error.hpp"
#include "wqa/resources.hpp"
#include "wqa/text.hpp"

namespace wqa::geo {

namespace {

std::vector<csv::Row> body(std::string_view content, const std::string& first, const std::string& second) {
  auto rows = csv::parse(content);
  if (rows.empty() || rows[0].fields.size() < 2 || rows[0].fields[0] != first || rows[0].fields[1] != second) {
    fail(ErrorKind::Parse, "line 1: expected header " + first + "," + second);
  }
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.fields.size() != 2 || r.fields[0].empty() || r.fields[1].empty()) {
      fail(ErrorKind::Parse, "line " + std::to_string(r.line) + ": expected two non-empty fields");
    }
  }
  return rows;
}

}  // namespace

Gazetteer::Gazetteer(std::vector<Pattern> patterns, std::map<std::string, std::string> regions)
    : patterns_(std::move(patterns)), regions_(std::move(regions)) {
  for (auto& p : patterns_) {
    require(!p.text.empty(), "empty gazetteer pattern");
    p.text = text::fold_case(p.text);
    if (!regions_.count(p.country)) fail(ErrorKind::Domain, "country '" + p.country + "' has no region");
  }
}

Gazetteer parse_gazetteer(std::string_view patterns_csv, std::string_view regions_csv) {
  std::vector<Gazetteer::Pattern> patterns;
  for (const auto& r : body(patterns_csv, "pattern", "country")) patterns.push_back({r.fields[0], r.fields[1]});
  std::map<std::string, std::string> regions;
  for (const auto& r : body(regions_csv, "country", "region")) regions[r.fields[0]] = r.fields[1];
  return Gazetteer(std::move(patterns), std::move(regions));
}

Gazetteer load_gazetteer(const std::string& patterns_path, const std::string& regions_path) {
  return parse_gazetteer(text::read_file(patterns_path), text::read_file(regions_path));
}

const Gazetteer& default_gazetteer() {
  static const Gazetteer g = parse_gazetteer(resources::gazetteer_patterns(), resources::gazetteer_regions());
  return g;
}

std::optional<std::string> map_location(std::string_view raw, const Gazetteer& g) {
  const std::string folded = text::fold_case(raw);
  for (const auto& p : g.patterns()) {
    if (folded.find(p.text) != std::string::npos) return p.country;
  }
  return std::nullopt;
}

std::string to_region(const std::string& country, const Gazetteer& g) {
  const auto it = g.regions().find(country);
  if (it == g.regions().end()) fail(ErrorKind::Domain, "unknown country '" + country + "'");
  return it->second;
}

Located locate(const Corpus& c, const Gazetteer& g) {
  Located out;
  for (const auto& t : c.tweets()) {
    std::optional<std::string> country;
    if (t.location) country = map_location(*t.location, g);
    if (country) {
      out.tweets.push_back({t.id, *country, to_region(*country, g)});
    } else {
      out.unmapped.push_back(t.id);
    }
  }
  return out;
}

std::vector<GroupReport> group(const std::vector<LocatedTweet>& tweets, GroupKey key) {
  std::map<std::string, GroupReport> groups;
  for (const auto& t : tweets) {
    const std::string& k = key == GroupKey::Country ? t.country : t.region;
    auto& g = groups[k];
    g.key = k;
    ++g.count;
    g.ids.push_back(t.id);
  }
  std::vector<GroupReport> out;
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  std::stable_sort(out.begin(), out.end(), [](const GroupReport& a, const GroupReport& b) { return a.count > b.count; });
  return out;
}

std::vector<GroupReport> group_and_filter(const std::vector<LocatedTweet>& tweets, GroupKey key, std::size_t min_count) {
  require(min_count >= 1, "min_count must be at least 1");
  auto all = group(tweets, key);
  std::erase_if(all, [&](const GroupReport& g) { return g.count < min_count; });
  return all;
}

std::string to_csv(const std::vector<GroupReport>& groups) {
  std::string out = "key,count\n";
  for (const auto& g : groups) out += csv::format_row({g.key, std::to_string(g.count)});
  return out;
}

}  // namespace wqa::geo
