#pragma once

#include <map>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "momentkit/multiindex.hpp"
#include "momentkit/rational.hpp"

namespace momentkit {

/// Exact multivariate polynomial over Q in r variables x_1..x_r.
///
/// Terms are keyed by exponent multi-index. Zero coefficients are never
/// stored, so equality is a structural comparison of the term maps.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  explicit Polynomial(std::size_t rank);

  static Polynomial constant(std::size_t rank, const Rational& c);
  /// x_{i+1} (coordinates are 0-based).
  static Polynomial variable(std::size_t rank, std::size_t i);
  static Polynomial monomial(const MultiIndex& exponent, const Rational& coeff);

  std::size_t rank() const noexcept { return rank_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Constant term as rational if the polynomial is constant.
  bool is_constant() const noexcept;
  std::uint64_t total_degree() const noexcept;
  Rational coefficient(const MultiIndex& exponent) const;

  /// Adds c * x^exponent in place.
  void add_term(const MultiIndex& exponent, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  std::size_t rank_;
  TermMap terms_;
};

/// D^alpha f, the exact alpha-fold partial derivative.
Polynomial dalpha(const Polynomial& f, const MultiIndex& alpha);

/// sum_{beta <= alpha} binom(alpha, beta) D^beta f * D^{alpha-beta} g.
Polynomial leibniz_rhs(const Polynomial& f, const Polynomial& g, const MultiIndex& alpha);

/// D^alpha(f g) == leibniz_rhs(f, g, alpha), as canonical polynomials.
bool check_leibniz(const Polynomial& f, const Polynomial& g, const MultiIndex& alpha);

Rational eval(const Polynomial& f, const RationalPoint& x);

struct RandomPolynomialSpec {
  std::uint64_t max_degree = 6;
  std::size_t max_terms = 8;
  /// Coefficients are p/q with |p| <= coeff_bound and 1 <= q <= denominator_bound.
  int coeff_bound = 9;
  int denominator_bound = 3;
};

/// Sparse random polynomial of total degree <= spec.max_degree.
Polynomial random_polynomial(std::mt19937_64& rng, std::size_t rank, const RandomPolynomialSpec& spec = {});

/// JSON list of {"exponent": [...], "coeff": "p/q"}.
void to_json(nlohmann::json& j, const Polynomial& f);
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t rank);

}  // namespace momentkit
