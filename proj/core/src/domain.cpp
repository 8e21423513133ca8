#include "momentkit/domain.hpp"

#include <random>

#include "momentkit/error.hpp"

namespace momentkit {

Domain::Domain(std::vector<Interval> box, std::vector<RationalPoint> samples, double tolerance)
    : box_(std::move(box)), samples_(std::move(samples)), tolerance_(tolerance) {
  if (box_.empty()) throw InvalidArgument("Domain: dimension must be at least 1");
  for (const auto& iv : box_)
    if (!(iv.lo < iv.hi)) throw InvalidArgument("Domain: empty interval in box");
  if (!(tolerance_ > 0)) throw InvalidArgument("Domain: tolerance must be positive");
  if (samples_.size() < kMinSamples)
    throw InvalidArgument("Domain: need at least " + std::to_string(kMinSamples) + " sample points");
  for (const auto& x : samples_)
    if (!contains(x)) throw InvalidArgument("Domain: sample point outside the open box");
}

Domain Domain::sampled(std::vector<Interval> box, std::size_t count, std::uint64_t seed,
                       double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grid(1, 63);
  std::vector<RationalPoint> pts;
  pts.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<Rational> c;
    c.reserve(box.size());
    for (const auto& iv : box) {
      Rational t(mpz_class(grid(rng)), mpz_class(64));
      t.canonicalize();
      c.push_back(iv.lo + (iv.hi - iv.lo) * t);
    }
    pts.emplace_back(std::move(c));
  }
  return Domain(std::move(box), std::move(pts), tolerance);
}

Domain Domain::unit_box(std::size_t rank, std::size_t count, std::uint64_t seed, double tolerance) {
  return sampled(std::vector<Interval>(rank, Interval{Rational(0), Rational(1)}), count, seed, tolerance);
}

bool Domain::contains(const RationalPoint& x) const {
  if (x.dimension() != box_.size()) throw DimensionMismatch(x.dimension(), box_.size(), "Domain::contains");
  for (std::size_t i = 0; i < box_.size(); ++i)
    if (!(box_[i].lo < x[i] && x[i] < box_[i].hi)) return false;
  return true;
}

void to_json(nlohmann::json& j, const Domain& d) {
  nlohmann::json box = nlohmann::json::array();
  for (const auto& iv : d.box()) box.push_back({rational_json(iv.lo), rational_json(iv.hi)});
  j = {{"box", box}, {"samples", d.samples()}, {"tolerance", d.tolerance()}};
}

Domain domain_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("box") || !j.contains("samples"))
    throw InvalidArgument("domain JSON needs \"box\" and \"samples\"");
  std::vector<Interval> box;
  for (const auto& iv : j.at("box")) {
    if (!iv.is_array() || iv.size() != 2) throw InvalidArgument("box interval must be [lo, hi]");
    box.push_back({rational_from_json(iv[0]), rational_from_json(iv[1])});
  }
  auto samples = j.at("samples").get<std::vector<RationalPoint>>();
  return Domain(std::move(box), std::move(samples), j.value("tolerance", Domain::kDefaultTolerance));
}

CoordinateMap::CoordinateMap(std::vector<Polynomial> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("CoordinateMap: needs at least one component");
  for (const auto& c : components_)
    if (c.rank() != components_.size())
      throw DimensionMismatch(c.rank(), components_.size(), "CoordinateMap component");
}

CoordinateMap CoordinateMap::identity(std::size_t rank) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < rank; ++i) comps.push_back(Polynomial::variable(rank, i));
  return CoordinateMap(std::move(comps));
}

RationalPoint CoordinateMap::apply(const RationalPoint& x) const {
  if (x.dimension() != dimension()) throw DimensionMismatch(x.dimension(), dimension(), "CoordinateMap::apply");
  std::vector<Rational> out;
  out.reserve(dimension());
  for (const auto& c : components_) out.push_back(eval(c, x));
  return RationalPoint(std::move(out));
}

bool CoordinateMap::is_identity() const { return *this == identity(dimension()); }

void to_json(nlohmann::json& j, const CoordinateMap& m) {
  j = nlohmann::json::array();
  for (const auto& c : m.components()) j.push_back(c);
}

CoordinateMap coordinate_map_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("coordinate map JSON must be a non-empty list");
  std::vector<Polynomial> comps;
  for (const auto& c : j) comps.push_back(polynomial_from_json(c, j.size()));
  return CoordinateMap(std::move(comps));
}

CoordinateMap AffineMap::to_coordinate_map() const {
  const std::size_t r = dimension();
  if (matrix.size() != r) throw DimensionMismatch(matrix.size(), r, "AffineMap");
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < r; ++i) {
    if (matrix[i].size() != r) throw DimensionMismatch(matrix[i].size(), r, "AffineMap row");
    Polynomial p = Polynomial::constant(r, offset[i]);
    for (std::size_t k = 0; k < r; ++k) p += Polynomial::variable(r, k) * matrix[i][k];
    comps.push_back(std::move(p));
  }
  return CoordinateMap(std::move(comps));
}

AffineMap AffineMap::inverse() const {
  const std::size_t r = dimension();
  // Gauss-Jordan on [M | I].
  std::vector<std::vector<Rational>> a(r, std::vector<Rational>(2 * r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k) a[i][k] = matrix.at(i).at(k);
    a[i][r + i] = 1;
  }
  for (std::size_t col = 0; col < r; ++col) {
    std::size_t piv = col;
    while (piv < r && a[piv][col] == 0) ++piv;
    if (piv == r) throw InvalidArgument("AffineMap::inverse: singular matrix");
    std::swap(a[piv], a[col]);
    Rational inv = 1 / a[col][col];
    for (auto& v : a[col]) v *= inv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t k = 0; k < 2 * r; ++k) a[i][k] -= f * a[col][k];
    }
  }
  AffineMap out;
  out.matrix.assign(r, std::vector<Rational>(r));
  out.offset.assign(r, Rational(0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) out.matrix[i][k] = a[i][r + k];
  // x = M^{-1}(y - b)
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) out.offset[i] -= out.matrix[i][k] * offset[k];
  return out;
}

}  // namespace momentkit
