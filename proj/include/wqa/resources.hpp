#pragma once

#include <string_view>

// Bundled lists compiled in from data/ so results never depend on the
// working directory.
namespace wqa::resources {

std::string_view stopwords();
std::string_view keywords();
std::string_view gazetteer_patterns();
std::string_view gazetteer_regions();

}  // namespace wqa::resources
