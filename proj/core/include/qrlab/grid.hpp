#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "qrlab/mapping.hpp"

namespace qrlab {

// Sidecar describing a regular grid: node (i1..in) sits at
// origin + (i1*spacing1, ..., in*spacingn).
struct GridMeta {
  std::size_t n = 0;
  std::vector<std::size_t> shape;
  Vec spacing;
  Vec origin;

  std::size_t node_count() const;
  DomainRegion box() const;
};

// Node values f(node) stored in row-major order over `shape` (last index
// fastest).
struct GridSamples {
  GridMeta meta;
  std::vector<Vec> values;
};

// Multilinear interpolant over the grid box. No exact differential.
MappingSpec grid_mapping(GridSamples samples, std::string name = "grid");

GridMeta read_grid_meta(const std::filesystem::path& meta_path);
GridSamples read_grid(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);
MappingSpec load_grid_mapping(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path);

// Evaluates `map` at every node of `meta`.
GridSamples sample_on_grid(const MappingSpec& map, const GridMeta& meta);

// CSV columns x1..xn,f1..fn with a header row; JSON sidecar {n, grid_shape,
// spacing, origin}.
void write_grid(const GridSamples& samples, const std::filesystem::path& csv_path,
                const std::filesystem::path& meta_path);

}  // namespace qrlab
