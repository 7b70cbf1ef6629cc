#include "qrlab/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qrlab/error.hpp"

namespace qrlab {

namespace {

std::vector<double> parse_csv_row(std::string_view line) {
  std::vector<double> out;
  while (true) {
    const auto comma = line.find(',');
    std::string_view cell = line.substr(0, comma);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.remove_suffix(1);
    double value = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw InvalidArgument("grid CSV: non-numeric cell '" + std::string(cell) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

bool looks_like_header(std::string_view line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return !(c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9'));
  }
  return true;
}

void validate(const GridMeta& meta) {
  if (meta.n < 2) throw InvalidArgument("grid meta: n must be at least 2");
  if (meta.shape.size() != meta.n || meta.spacing.size() != meta.n || meta.origin.size() != meta.n)
    throw InvalidArgument("grid meta: grid_shape, spacing and origin must have n entries");
  for (std::size_t i = 0; i < meta.n; ++i) {
    if (meta.shape[i] < 2) throw InvalidArgument("grid meta: every grid_shape entry must be >= 2");
    if (!(meta.spacing[i] > 0.0)) throw InvalidArgument("grid meta: spacing must be positive");
  }
}

}  // namespace

std::size_t GridMeta::node_count() const {
  std::size_t count = 1;
  for (std::size_t s : shape) count *= s;
  return count;
}

DomainRegion GridMeta::box() const {
  Vec high(n);
  for (std::size_t i = 0; i < n; ++i) high[i] = origin[i] + spacing[i] * static_cast<double>(shape[i] - 1);
  return DomainRegion::box(origin, high);
}

MappingSpec grid_mapping(GridSamples samples, std::string name) {
  validate(samples.meta);
  if (samples.values.size() != samples.meta.node_count())
    throw InvalidArgument("grid: value count does not match grid_shape");
  const std::size_t n = samples.meta.n;
  for (const Vec& v : samples.values)
    if (v.size() != n || !all_finite(v)) throw InvalidArgument("grid: node values must be finite n-vectors");

  MappingSpec m;
  m.name = std::move(name);
  m.n = n;
  m.domain = samples.meta.box();
  auto shared = std::make_shared<const GridSamples>(std::move(samples));
  m.evaluate = [shared](std::span<const double> x) {
    const GridMeta& meta = shared->meta;
    const std::size_t dims = meta.n;
    std::vector<std::size_t> base(dims);
    Vec frac(dims);
    for (std::size_t i = 0; i < dims; ++i) {
      const double t = (x[i] - meta.origin[i]) / meta.spacing[i];
      const double top = static_cast<double>(meta.shape[i] - 1);
      if (t < -1e-9 || t > top + 1e-9) throw DomainError("grid: point outside the sampled box");
      const double cell = std::clamp(std::floor(t), 0.0, top - 1.0);
      base[i] = static_cast<std::size_t>(cell);
      frac[i] = std::clamp(t - cell, 0.0, 1.0);
    }
    Vec y(dims, 0.0);
    const std::size_t corners = std::size_t{1} << dims;
    for (std::size_t c = 0; c < corners; ++c) {
      double weight = 1.0;
      std::size_t index = 0;
      for (std::size_t i = 0; i < dims; ++i) {
        const bool upper = (c >> i) & 1U;
        weight *= upper ? frac[i] : 1.0 - frac[i];
        index = index * meta.shape[i] + base[i] + (upper ? 1 : 0);
      }
      if (weight == 0.0) continue;
      const Vec& v = shared->values[index];
      for (std::size_t k = 0; k < dims; ++k) y[k] += weight * v[k];
    }
    return y;
  };
  return m;
}

GridMeta read_grid_meta(const std::filesystem::path& meta_path) {
  std::ifstream in(meta_path);
  if (!in) throw InvalidArgument("cannot open grid meta '" + meta_path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("grid meta: ") + e.what());
  }
  GridMeta meta;
  try {
    meta.n = j.at("n").get<std::size_t>();
    meta.shape = j.at("grid_shape").get<std::vector<std::size_t>>();
    const auto& spacing = j.at("spacing");
    meta.spacing = spacing.is_number() ? Vec(meta.n, spacing.get<double>()) : spacing.get<Vec>();
    meta.origin = j.at("origin").get<Vec>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("grid meta: ") + e.what());
  }
  validate(meta);
  return meta;
}

GridSamples read_grid(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  GridSamples samples;
  samples.meta = read_grid_meta(meta_path);
  const GridMeta& meta = samples.meta;
  const std::size_t n = meta.n;
  samples.values.assign(meta.node_count(), Vec{});

  std::ifstream in(csv_path);
  if (!in) throw InvalidArgument("cannot open grid CSV '" + csv_path.string() + "'");
  std::string line;
  std::size_t filled = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (first && looks_like_header(line)) {
      first = false;
      continue;
    }
    first = false;
    const auto row = parse_csv_row(line);
    if (row.size() != 2 * n) throw InvalidArgument("grid CSV: expected 2n columns per row");
    std::size_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (row[i] - meta.origin[i]) / meta.spacing[i];
      const double k = std::round(t);
      if (std::abs(t - k) > 1e-6 || k < 0 || k > static_cast<double>(meta.shape[i] - 1))
        throw InvalidArgument("grid CSV: row coordinates are not on the grid");
      index = index * meta.shape[i] + static_cast<std::size_t>(k);
    }
    if (!samples.values[index].empty()) throw InvalidArgument("grid CSV: duplicate node");
    samples.values[index] = Vec(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
    ++filled;
  }
  if (filled != meta.node_count()) throw InvalidArgument("grid CSV: missing nodes");
  return samples;
}

MappingSpec load_grid_mapping(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path) {
  return grid_mapping(read_grid(csv_path, meta_path), "grid:" + csv_path.filename().string());
}

namespace {

Vec node_position(const GridMeta& meta, std::size_t index) {
  Vec x(meta.n);
  for (std::size_t i = meta.n; i-- > 0;) {
    const std::size_t k = index % meta.shape[i];
    index /= meta.shape[i];
    x[i] = meta.origin[i] + meta.spacing[i] * static_cast<double>(k);
  }
  return x;
}

}  // namespace

GridSamples sample_on_grid(const MappingSpec& map, const GridMeta& meta) {
  validate(meta);
  if (meta.n != map.n) throw InvalidArgument("grid dimension does not match mapping");
  GridSamples samples{meta, {}};
  samples.values.reserve(meta.node_count());
  for (std::size_t k = 0; k < meta.node_count(); ++k) samples.values.push_back(map(node_position(meta, k)));
  return samples;
}

void write_grid(const GridSamples& samples, const std::filesystem::path& csv_path,
                const std::filesystem::path& meta_path) {
  const GridMeta& meta = samples.meta;
  validate(meta);
  std::ofstream csv(csv_path);
  if (!csv) throw InvalidArgument("cannot write grid CSV '" + csv_path.string() + "'");
  for (std::size_t i = 0; i < meta.n; ++i) csv << (i ? "," : "") << "x" << i + 1;
  for (std::size_t i = 0; i < meta.n; ++i) csv << ",f" << i + 1;
  csv << '\n';
  char buf[64];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    csv.write(buf, res.ptr - buf);
  };
  for (std::size_t k = 0; k < samples.values.size(); ++k) {
    const Vec x = node_position(meta, k);
    for (std::size_t i = 0; i < meta.n; ++i) {
      if (i) csv << ',';
      put(x[i]);
    }
    for (double v : samples.values[k]) {
      csv << ',';
      put(v);
    }
    csv << '\n';
  }
  nlohmann::json j;
  j["n"] = meta.n;
  j["grid_shape"] = meta.shape;
  j["spacing"] = meta.spacing;
  j["origin"] = meta.origin;
  std::ofstream out(meta_path);
  if (!out) throw InvalidArgument("cannot write grid meta '" + meta_path.string() + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qrlab
