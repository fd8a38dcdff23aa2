#pragma once

#include <string_view>

// Data files compiled into the library from data/.
namespace fmm::bundled {

extern const std::string_view paper_city_map;
extern const std::string_view rule_tables;
extern const std::string_view priorities;

}  // namespace fmm::bundled
