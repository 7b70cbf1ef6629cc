#include "qrlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qrlab/error.hpp"
#include "qrlab/quadrature.hpp"

namespace qrlab {

namespace {

constexpr double kBoundarySlack = 1e-12;

void require_dimension(std::size_t n) {
  if (n < 2) throw InvalidArgument("domain dimension must be at least 2, got " + std::to_string(n));
}

}  // namespace

DomainRegion::DomainRegion(Kind kind, Vec a, Vec b, double radius)
    : kind_(kind), a_(std::move(a)), b_(std::move(b)), radius_(radius) {}

DomainRegion DomainRegion::ball(Vec center, double radius) {
  require_dimension(center.size());
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("ball radius must be positive and finite");
  if (!all_finite(center)) throw InvalidArgument("ball center must be finite");
  return DomainRegion(Kind::ball, std::move(center), {}, radius);
}

DomainRegion DomainRegion::box(Vec low, Vec high) {
  require_dimension(low.size());
  if (low.size() != high.size()) throw InvalidArgument("box corners differ in dimension");
  if (!all_finite(low) || !all_finite(high)) throw InvalidArgument("box corners must be finite");
  for (std::size_t i = 0; i < low.size(); ++i)
    if (!(low[i] < high[i])) throw InvalidArgument("box requires low < high componentwise");
  return DomainRegion(Kind::box, std::move(low), std::move(high), 0.0);
}

const Vec& DomainRegion::center() const {
  if (kind_ != Kind::ball) throw InvalidArgument("center() on a box region");
  return a_;
}

double DomainRegion::radius() const {
  if (kind_ != Kind::ball) throw InvalidArgument("radius() on a box region");
  return radius_;
}

const Vec& DomainRegion::low() const {
  if (kind_ != Kind::box) throw InvalidArgument("low() on a ball region");
  return a_;
}

const Vec& DomainRegion::high() const {
  if (kind_ != Kind::box) throw InvalidArgument("high() on a ball region");
  return b_;
}

Vec DomainRegion::midpoint() const {
  if (kind_ == Kind::ball) return a_;
  Vec m(a_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (a_[i] + b_[i]);
  return m;
}

double DomainRegion::diameter() const {
  if (kind_ == Kind::ball) return 2.0 * radius_;
  return distance(a_, b_);
}

double DomainRegion::volume() const {
  if (kind_ == Kind::ball)
    return unit_ball_volume(static_cast<int>(dim())) * std::pow(radius_, static_cast<double>(dim()));
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= b_[i] - a_[i];
  return v;
}

bool DomainRegion::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  if (kind_ == Kind::ball) return distance(x, a_) <= radius_ * (1.0 + kBoundarySlack);
  for (std::size_t i = 0; i < dim(); ++i) {
    const double slack = kBoundarySlack * std::max(1.0, b_[i] - a_[i]);
    if (x[i] < a_[i] - slack || x[i] > b_[i] + slack) return false;
  }
  return true;
}

double DomainRegion::boundary_distance(std::span<const double> x) const {
  if (!contains(x)) throw DomainError("point lies outside the region");
  if (kind_ == Kind::ball) return std::max(0.0, radius_ - distance(x, a_));
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dim(); ++i) d = std::min({d, x[i] - a_[i], b_[i] - x[i]});
  return std::max(0.0, d);
}

Vec DomainRegion::sample_uniform(CounterRng& rng) const {
  const std::size_t n = dim();
  if (kind_ == Kind::box) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(a_[i], b_[i]);
    return x;
  }
  Vec u = rng.unit_vector(n);
  const double t = radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) u[i] = a_[i] + t * u[i];
  return u;
}

double inset_distance(const DomainRegion& inner, const DomainRegion& omega) {
  if (inner.dim() != omega.dim()) throw InvalidArgument("regions differ in dimension");
  const std::size_t n = inner.dim();
  double d = std::numeric_limits<double>::infinity();
  if (omega.kind() == DomainRegion::Kind::ball) {
    // rho is R - |x - c|; the minimum over a convex set sits at the farthest point.
    double far = 0.0;
    if (inner.kind() == DomainRegion::Kind::ball) {
      far = distance(inner.center(), omega.center()) + inner.radius();
    } else {
      Vec corner(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double lo = inner.low()[i] - omega.center()[i];
        const double hi = inner.high()[i] - omega.center()[i];
        corner[i] = std::max(std::abs(lo), std::abs(hi));
      }
      far = norm(corner);
    }
    d = omega.radius() - far;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double lo_reach = 0.0;
      double hi_reach = 0.0;
      if (inner.kind() == DomainRegion::Kind::ball) {
        lo_reach = inner.center()[i] - inner.radius();
        hi_reach = inner.center()[i] + inner.radius();
      } else {
        lo_reach = inner.low()[i];
        hi_reach = inner.high()[i];
      }
      d = std::min({d, lo_reach - omega.low()[i], omega.high()[i] - hi_reach});
    }
  }
  if (!(d > 0.0)) throw DomainError("compact set is not strictly inside the domain");
  return d;
}

}  // namespace qrlab
