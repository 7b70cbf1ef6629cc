#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrlab/mapping.hpp"

namespace qrlab {

struct CatalogParam {
  std::string key;
  std::string description;
  bool required = false;
};

struct CatalogEntry {
  std::string name;
  std::string formula;
  std::vector<CatalogParam> params;
  std::string declared_pair;     // human-readable, e.g. "K1 = 1/alpha, K2 = 0"
  std::string declared_holder;   // e.g. "alpha"
  std::optional<std::size_t> only_dimension;  // set for entries that exist only in one n
};

// Stable catalog listing, in display order.
const std::vector<CatalogEntry>& catalog_entries();

// Builds a catalog mapping. Every entry takes an optional `n` (default 2)
// and lives on the unit ball of R^n unless the caller swaps the domain.
//   identity, translate(b1..bn), linear(a11..ann), radial_stretch(alpha),
//   winding(k), rank_deficient
MappingSpec catalog_lookup(std::string_view name, const ParamMap& params = {});

// Parses "name" or "name:key=value,key=value".
std::pair<std::string, ParamMap> parse_map_selector(std::string_view selector);

// Inverse of parse_map_selector for a looked-up mapping.
std::string map_selector(const MappingSpec& map);

}  // namespace qrlab
