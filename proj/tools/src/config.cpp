#include "qrlab_cli/config.hpp"

#include <charconv>
#include <cmath>

#include "qrlab/catalog.hpp"
#include "qrlab/grid.hpp"
#include "qrlab_cli/format.hpp"

namespace qrlab::cli {

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v))
      throw UsageError("malformed " + what + " '" + text + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (map && grid) throw UsageError("--map and --grid are mutually exclusive");
  if (grid.has_value() != meta.has_value()) throw UsageError("--grid and --meta must be given together");
  if (!(tol_rel > 0.0) || !std::isfinite(tol_rel)) throw UsageError("--tol-rel must be positive");
  if (radii < 2) throw UsageError("--radii must be at least 2");
  if (pairs < 100) throw UsageError("--pairs must be at least 100");
  if (samples < 1) throw UsageError("--samples must be positive");
  if (budget < 1000) throw UsageError("--budget must be at least 1000");
  if (k1 && !(*k1 > 0.0 && std::isfinite(*k1))) throw UsageError("--k1 must be positive and finite");
  if (k2 && !(*k2 >= 0.0 && std::isfinite(*k2))) throw UsageError("--k2 must be nonnegative and finite");
  if (k1.has_value() != k2.has_value()) throw UsageError("--k1 and --k2 must be given together");
  resolve_alpha(*this);
}

std::vector<std::string> RunConfig::replay_args() const {
  std::vector<std::string> a{command};
  auto add = [&a](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  if (map) add("--map", *map);
  if (grid) add("--grid", *grid);
  if (meta) add("--meta", *meta);
  if (omega) add("--omega", *omega);
  if (compact) add("--compact", *compact);
  if (center) add("--center", *center);
  if (k1) add("--k1", format_number(*k1));
  if (k2) add("--k2", format_number(*k2));
  if (samples_csv) add("--samples-csv", *samples_csv);
  for (const auto& s : suites) add("--suite", s);
  add("--alpha", alpha);
  add("--radii", std::to_string(radii));
  add("--pairs", std::to_string(pairs));
  add("--samples", std::to_string(samples));
  add("--seed", std::to_string(seed));
  add("--tol-rel", format_number(tol_rel));
  add("--budget", std::to_string(budget));
  return a;
}

DomainRegion parse_region(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("region '" + text + "' must start with ball: or box:");
  const std::string kind = text.substr(0, colon);
  const std::vector<double> v = parse_list(text.substr(colon + 1), "region");
  try {
    if (kind == "ball") {
      if (v.size() < 3) throw UsageError("ball region needs a center of dimension >= 2 and a radius");
      return DomainRegion::ball(Vec(v.begin(), v.end() - 1), v.back());
    }
    if (kind == "box") {
      if (v.size() < 4 || v.size() % 2 != 0) throw UsageError("box region needs 2n coordinates, n >= 2");
      const auto half = static_cast<std::ptrdiff_t>(v.size() / 2);
      return DomainRegion::box(Vec(v.begin(), v.begin() + half), Vec(v.begin() + half, v.end()));
    }
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown region kind '" + kind + "'");
}

std::string format_region(const DomainRegion& region) {
  std::string out;
  auto append = [&out](const Vec& v) {
    for (double x : v) out += format_number(x) + ",";
  };
  if (region.kind() == DomainRegion::Kind::ball) {
    out = "ball:";
    append(region.center());
    out += format_number(region.radius());
  } else {
    out = "box:";
    append(region.low());
    append(region.high());
    out.pop_back();
  }
  return out;
}

Vec parse_point(const std::string& text) { return parse_list(text, "point"); }

MappingSpec resolve_map(const RunConfig& config) {
  MappingSpec map;
  if (config.grid) {
    map = load_grid_mapping(*config.grid, *config.meta);
  } else if (config.map) {
    const auto [name, params] = parse_map_selector(*config.map);
    try {
      map = catalog_lookup(name, params);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("no mapping given (use --map or --grid/--meta)");
  }
  if (config.omega) {
    const DomainRegion omega = parse_region(*config.omega);
    if (omega.dim() != map.n) throw UsageError("--omega dimension does not match the mapping");
    if (config.grid) {
      const GridMeta meta = read_grid_meta(*config.meta);
      try {
        inset_distance(omega, meta.box());
      } catch (const DomainError&) {
        if (!(omega.kind() == DomainRegion::Kind::box && omega.low() == meta.box().low() &&
              omega.high() == meta.box().high()))
          throw UsageError("--omega must lie inside the grid box");
      }
    }
    map = with_domain(std::move(map), omega);
  }
  return map;
}

DomainRegion resolve_compact(const RunConfig& config, const MappingSpec& map) {
  if (config.compact) {
    const DomainRegion v = parse_region(*config.compact);
    if (v.dim() != map.n) throw UsageError("--compact dimension does not match the mapping");
    try {
      inset_distance(v, map.domain);
    } catch (const DomainError&) {
      throw UsageError("--compact must lie strictly inside the domain");
    }
    return v;
  }
  const DomainRegion& omega = map.domain;
  if (omega.kind() == DomainRegion::Kind::ball) return DomainRegion::ball(omega.center(), 0.5 * omega.radius());
  const Vec mid = omega.midpoint();
  Vec lo(map.n), hi(map.n);
  for (std::size_t i = 0; i < map.n; ++i) {
    const double half = 0.25 * (omega.high()[i] - omega.low()[i]);
    lo[i] = mid[i] - half;
    hi[i] = mid[i] + half;
  }
  return DomainRegion::box(lo, hi);
}

Vec resolve_center(const RunConfig& config, const MappingSpec& map) {
  if (!config.center) return map.domain.midpoint();
  const Vec c = parse_point(*config.center);
  if (c.size() != map.n) throw UsageError("--center dimension does not match the mapping");
  if (!map.domain.contains(c) || map.domain.boundary_distance(c) <= 0.0)
    throw UsageError("--center must be an interior point of the domain");
  return c;
}

std::optional<double> resolve_alpha(const RunConfig& config) {
  if (config.alpha == "auto") return std::nullopt;
  double v = 0.0;
  const auto& s = config.alpha;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !(v > 0.0 && v <= 1.0))
    throw UsageError("--alpha must be 'auto' or a number in (0, 1]");
  return v;
}

}  // namespace qrlab::cli
