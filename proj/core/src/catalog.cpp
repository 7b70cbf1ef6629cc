#include "qrlab/catalog.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qrlab/differential.hpp"
#include "qrlab/error.hpp"

namespace qrlab {

namespace {

const ParamMap kNoParams;

std::size_t dimension_param(const ParamMap& params) {
  const auto it = params.find("n");
  if (it == params.end()) return 2;
  const double n = it->second;
  if (n != std::floor(n) || n < 2 || n > 10)
    throw InvalidArgument("parameter n must be an integer in [2, 10]");
  return static_cast<std::size_t>(n);
}

void check_keys(std::string_view name, const ParamMap& params, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.contains(key))
      throw InvalidArgument("unknown parameter '" + key + "' for catalog entry '" + std::string(name) + "'");
    if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' must be finite");
  }
}

std::string indexed_key(char prefix, std::size_t i) { return std::string(1, prefix) + std::to_string(i + 1); }

std::string matrix_key(std::size_t i, std::size_t j) {
  return "a" + std::to_string(i + 1) + std::to_string(j + 1);
}

MappingSpec base_spec(std::string name, std::size_t n, const ParamMap& params) {
  MappingSpec m;
  m.name = std::move(name);
  m.n = n;
  m.domain = DomainRegion::ball(Vec(n, 0.0), 1.0);
  m.params = params;
  return m;
}

MappingSpec make_identity(const ParamMap& params) {
  check_keys("identity", params, {"n"});
  const std::size_t n = dimension_param(params);
  MappingSpec m = base_spec("identity", n, params);
  m.evaluate = [](std::span<const double> x) { return Vec(x.begin(), x.end()); };
  m.exact_differential = [n](std::span<const double>) { return SquareMatrix::identity(n); };
  m.declared_distortion = DistortionPair(1.0, 0.0);
  m.declared_holder = 1.0;
  return m;
}

MappingSpec make_translate(const ParamMap& params) {
  const std::size_t n = dimension_param(params);
  std::set<std::string> allowed{"n"};
  Vec b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string key = indexed_key('b', i);
    allowed.insert(key);
    if (auto it = params.find(key); it != params.end()) b[i] = it->second;
  }
  check_keys("translate", params, allowed);
  MappingSpec m = base_spec("translate", n, params);
  m.evaluate = [b](std::span<const double> x) {
    Vec y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
    return y;
  };
  m.exact_differential = [n](std::span<const double>) { return SquareMatrix::identity(n); };
  m.declared_distortion = DistortionPair(1.0, 0.0);
  m.declared_holder = 1.0;
  return m;
}

MappingSpec make_linear(const ParamMap& params) {
  const std::size_t n = dimension_param(params);
  if (n > 9) throw InvalidArgument("linear supports n <= 9 (entry keys a11..a99)");
  std::set<std::string> allowed{"n"};
  SquareMatrix a = SquareMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::string key = matrix_key(i, j);
      allowed.insert(key);
      if (auto it = params.find(key); it != params.end()) a(i, j) = it->second;
    }
  check_keys("linear", params, allowed);
  MappingSpec m = base_spec("linear", n, params);
  m.evaluate = [a](std::span<const double> x) { return a.apply(x); };
  m.exact_differential = [a](std::span<const double>) { return a; };
  const double norm_n = std::pow(operator_norm(a), static_cast<double>(n));
  const double det = std::abs(jacobian_det(a));
  if (det > 0.0) {
    m.declared_distortion = DistortionPair(norm_n / det, 0.0);
  } else {
    m.declared_distortion = DistortionPair(1.0, norm_n);
  }
  m.declared_holder = 1.0;
  return m;
}

MappingSpec make_radial_stretch(const ParamMap& params) {
  check_keys("radial_stretch", params, {"n", "alpha"});
  const auto it = params.find("alpha");
  if (it == params.end()) throw InvalidArgument("radial_stretch requires parameter alpha");
  const double alpha = it->second;
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("radial_stretch requires alpha in (0, 1)");
  const std::size_t n = dimension_param(params);
  MappingSpec m = base_spec("radial_stretch", n, params);
  m.evaluate = [alpha](std::span<const double> x) {
    Vec y(x.begin(), x.end());
    const double r = norm(x);
    if (r == 0.0) return y;
    const double scale = std::pow(r, alpha - 1.0);
    for (double& v : y) v *= scale;
    return y;
  };
  // Df = |x|^{alpha-1} (I + (alpha - 1) xhat xhat^T)
  m.exact_differential = [alpha, n](std::span<const double> x) {
    const double r = norm(x);
    if (r == 0.0) throw SingularPointError("radial_stretch is not differentiable at the origin");
    const double scale = std::pow(r, alpha - 1.0);
    SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double outer = (x[i] / r) * (x[j] / r);
        d(i, j) = scale * ((i == j ? 1.0 : 0.0) + (alpha - 1.0) * outer);
      }
    return d;
  };
  m.declared_distortion = DistortionPair(1.0 / alpha, 0.0);
  m.declared_holder = alpha;
  m.singular_points.push_back(Vec(n, 0.0));
  return m;
}

MappingSpec make_winding(const ParamMap& params) {
  check_keys("winding", params, {"n", "k"});
  if (dimension_param(params) != 2) throw InvalidArgument("winding is defined only for n = 2");
  const auto it = params.find("k");
  if (it == params.end()) throw InvalidArgument("winding requires parameter k");
  const double k = it->second;
  if (k < 2.0 || k != std::floor(k)) throw InvalidArgument("winding requires an integer k >= 2");
  MappingSpec m = base_spec("winding", 2, params);
  m.evaluate = [k](std::span<const double> x) {
    const double r = std::hypot(x[0], x[1]);
    if (r == 0.0) return Vec{0.0, 0.0};
    const double theta = std::atan2(x[1], x[0]);
    return Vec{r * std::cos(k * theta), r * std::sin(k * theta)};
  };
  // Df = u_r rhat^T + k u_theta thetahat^T with u_r, u_theta the image frame.
  m.exact_differential = [k](std::span<const double> x) {
    const double r = std::hypot(x[0], x[1]);
    if (r == 0.0) throw SingularPointError("winding is not differentiable at the origin");
    const double theta = std::atan2(x[1], x[0]);
    const double c = std::cos(theta), s = std::sin(theta);
    const double ck = std::cos(k * theta), sk = std::sin(k * theta);
    SquareMatrix d(2);
    d(0, 0) = ck * c + k * sk * s;
    d(0, 1) = ck * s - k * sk * c;
    d(1, 0) = sk * c - k * ck * s;
    d(1, 1) = sk * s + k * ck * c;
    return d;
  };
  m.declared_distortion = DistortionPair(k, 0.0);
  m.declared_holder = 1.0;
  m.singular_points.push_back(Vec{0.0, 0.0});
  return m;
}

MappingSpec make_rank_deficient(const ParamMap& params) {
  check_keys("rank_deficient", params, {"n"});
  if (dimension_param(params) != 2) throw InvalidArgument("rank_deficient is defined only for n = 2");
  MappingSpec m = base_spec("rank_deficient", 2, params);
  m.evaluate = [](std::span<const double> x) { return Vec{std::sin(x[0]), 0.0}; };
  m.exact_differential = [](std::span<const double> x) {
    SquareMatrix d(2);
    d(0, 0) = std::cos(x[0]);
    return d;
  };
  m.declared_distortion = DistortionPair(1.0, 1.0);
  m.declared_holder = 1.0;
  return m;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"identity", "f(x) = x", {{"n", "dimension (default 2)", false}}, "K1 = 1, K2 = 0", "1", std::nullopt},
      {"translate",
       "f(x) = x + b",
       {{"n", "dimension (default 2)", false}, {"b1..bn", "offset components (default 0)", false}},
       "K1 = 1, K2 = 0",
       "1",
       std::nullopt},
      {"linear",
       "f(x) = A x",
       {{"n", "dimension (default 2)", false},
        {"a11..ann", "matrix entries, row-major (default identity)", false}},
       "K1 = |A|^n / |det A|, K2 = 0 (K1 = 1, K2 = |A|^n when det A = 0)",
       "1",
       std::nullopt},
      {"radial_stretch",
       "f(x) = x |x|^(alpha - 1), f(0) = 0",
       {{"alpha", "exponent in (0, 1)", true}, {"n", "dimension (default 2)", false}},
       "K1 = 1/alpha, K2 = 0",
       "alpha",
       std::nullopt},
      {"winding",
       "(r, theta) -> (r, k theta)",
       {{"k", "integer turn count >= 2", true}},
       "K1 = k, K2 = 0",
       "1",
       std::size_t{2}},
      {"rank_deficient",
       "f(x1, x2) = (sin x1, 0)",
       {},
       "K1 = 1, K2 = 1",
       "1",
       std::size_t{2}},
  };
  return entries;
}

MappingSpec catalog_lookup(std::string_view name, const ParamMap& params) {
  if (name == "identity") return make_identity(params);
  if (name == "translate") return make_translate(params);
  if (name == "linear") return make_linear(params);
  if (name == "radial_stretch") return make_radial_stretch(params);
  if (name == "winding") return make_winding(params);
  if (name == "rank_deficient") return make_rank_deficient(params);
  throw InvalidArgument("unknown catalog entry '" + std::string(name) + "'");
}

std::pair<std::string, ParamMap> parse_map_selector(std::string_view selector) {
  const auto colon = selector.find(':');
  std::string name(selector.substr(0, colon));
  if (name.empty()) throw InvalidArgument("empty map selector");
  ParamMap params;
  if (colon == std::string_view::npos) return {name, params};
  std::string_view rest = selector.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw InvalidArgument("malformed parameter '" + std::string(item) + "' (expected key=value)");
    const std::string key(item.substr(0, eq));
    const std::string_view text = item.substr(eq + 1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
      throw InvalidArgument("parameter '" + key + "' is not a number");
    params[key] = value;
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return {name, params};
}

std::string map_selector(const MappingSpec& map) {
  std::string out = map.name;
  char sep = ':';
  for (const auto& [key, value] : map.params) {
    out += sep;
    out += key + "=" + format_number(value);
    sep = ',';
  }
  return out;
}

}  // namespace qrlab
