#pragma once

#include <cstddef>
#include <span>

#include "qrlab/linalg.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

// An open ball or an axis-aligned box in R^n, n >= 2.
class DomainRegion {
 public:
  enum class Kind { ball, box };

  static DomainRegion ball(Vec center, double radius);
  static DomainRegion box(Vec low, Vec high);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return a_.size(); }

  // Ball accessors.
  const Vec& center() const;
  double radius() const;
  // Box accessors.
  const Vec& low() const;
  const Vec& high() const;

  // Ball center, or box midpoint.
  Vec midpoint() const;
  double diameter() const;
  double volume() const;

  // Closed containment with a 1e-12 relative slack on the boundary.
  bool contains(std::span<const double> x) const;

  // rho(x) = dist(x, boundary). Throws DomainError when x lies outside
  // the closed region.
  double boundary_distance(std::span<const double> x) const;

  // Uniform sample from the region.
  Vec sample_uniform(CounterRng& rng) const;

 private:
  DomainRegion(Kind kind, Vec a, Vec b, double radius);

  Kind kind_;
  Vec a_;  // ball center or box low
  Vec b_;  // box high (empty for balls)
  double radius_ = 0.0;
};

// dist(V, boundary of omega) for V contained in omega. Throws DomainError
// when V is not strictly inside omega.
double inset_distance(const DomainRegion& inner, const DomainRegion& omega);

}  // namespace qrlab
