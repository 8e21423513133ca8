#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/polynomial.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

/// Open interval (lo, hi) with rational endpoints.
struct Interval {
  Rational lo;
  Rational hi;
};

/// Omega as an open box in R^r, together with the finite sample set on which
/// pointwise identities are checked.
class Domain {
 public:
  static constexpr std::size_t kMinSamples = 8;
  static constexpr double kDefaultTolerance = 1e-9;

  /// Validates: non-degenerate intervals, >= kMinSamples points, each strictly inside.
  Domain(std::vector<Interval> box, std::vector<RationalPoint> samples,
         double tolerance = kDefaultTolerance);

  /// `count` seeded sample points on a 1/64 grid strictly inside the box.
  static Domain sampled(std::vector<Interval> box, std::size_t count, std::uint64_t seed,
                        double tolerance = kDefaultTolerance);
  /// (0,1)^rank.
  static Domain unit_box(std::size_t rank, std::size_t count, std::uint64_t seed,
                         double tolerance = kDefaultTolerance);

  std::size_t dimension() const noexcept { return box_.size(); }
  const std::vector<Interval>& box() const noexcept { return box_; }
  const std::vector<RationalPoint>& samples() const noexcept { return samples_; }
  double tolerance() const noexcept { return tolerance_; }

  /// Strict membership in the open box.
  bool contains(const RationalPoint& x) const;

 private:
  std::vector<Interval> box_;
  std::vector<RationalPoint> samples_;
  double tolerance_;
};

void to_json(nlohmann::json& j, const Domain& d);
Domain domain_from_json(const nlohmann::json& j);

/// A closed-form reparametrization tau: each output coordinate is an exact
/// polynomial in the input coordinates.
class CoordinateMap {
 public:
  explicit CoordinateMap(std::vector<Polynomial> components);

  static CoordinateMap identity(std::size_t rank);

  std::size_t dimension() const noexcept { return components_.size(); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  RationalPoint apply(const RationalPoint& x) const;
  bool is_identity() const;

  friend bool operator==(const CoordinateMap&, const CoordinateMap&) = default;

 private:
  std::vector<Polynomial> components_;
};

void to_json(nlohmann::json& j, const CoordinateMap& m);
CoordinateMap coordinate_map_from_json(const nlohmann::json& j);

/// x |-> M x + b with rational entries.
struct AffineMap {
  std::vector<std::vector<Rational>> matrix;
  std::vector<Rational> offset;

  std::size_t dimension() const noexcept { return offset.size(); }
  CoordinateMap to_coordinate_map() const;
  /// Exact inverse; throws InvalidArgument if M is singular.
  AffineMap inverse() const;
};

}  // namespace momentkit
