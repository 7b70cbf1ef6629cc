#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrlab/domain.hpp"
#include "qrlab/error.hpp"
#include "qrlab/mapping.hpp"

namespace qrlab::cli {

// Thrown for malformed flags and inconsistent configurations (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> map;   // catalog selector
  std::optional<std::string> grid;  // CSV samples
  std::optional<std::string> meta;  // JSON sidecar
  std::optional<std::string> omega;
  std::optional<std::string> compact;
  std::optional<std::string> center;
  std::optional<double> k1;
  std::optional<double> k2;
  std::string alpha = "auto";
  std::size_t radii = 50;
  std::size_t pairs = 10'000;
  std::size_t samples = 10'000;  // distortion samples
  std::uint64_t seed = 0;
  double tol_rel = 1e-7;
  std::uint64_t budget = 10'000'000;
  std::vector<std::string> suites;
  std::optional<std::string> samples_csv;  // fit: a,b rows
  std::optional<std::string> out;
  std::optional<std::string> csv;
  bool no_timestamp = false;

  void validate() const;
  // Flags that reproduce this run.
  std::vector<std::string> replay_args() const;
};

// "ball:c1,...,cn,R" or "box:l1,...,ln,h1,...,hn".
DomainRegion parse_region(const std::string& text);
std::string format_region(const DomainRegion& region);
// Comma-separated coordinates.
Vec parse_point(const std::string& text);

// Catalog or grid mapping with --omega applied.
MappingSpec resolve_map(const RunConfig& config);
// --compact, or the concentric half-size copy of the domain.
DomainRegion resolve_compact(const RunConfig& config, const MappingSpec& map);
// --center, or the domain center.
Vec resolve_center(const RunConfig& config, const MappingSpec& map);
std::optional<double> resolve_alpha(const RunConfig& config);

}  // namespace qrlab::cli
