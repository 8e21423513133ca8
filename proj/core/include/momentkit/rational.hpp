#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace momentkit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q" (no decimals); the result is canonicalized.
Rational parse_rational(std::string_view text);
/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rational_to_string(const Rational& q);

/// A point of Omega with exact coordinates.
struct RationalPoint {
  std::vector<Rational> coords;

  RationalPoint() = default;
  explicit RationalPoint(std::vector<Rational> c) : coords(std::move(c)) {}

  std::size_t dimension() const noexcept { return coords.size(); }
  const Rational& operator[](std::size_t i) const { return coords[i]; }
  std::vector<double> to_doubles() const;

  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

void to_json(nlohmann::json& j, const RationalPoint& p);
void from_json(const nlohmann::json& j, RationalPoint& p);

/// Rational <-> "p/q" string adapters for JSON fields.
nlohmann::json rational_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

}  // namespace momentkit
