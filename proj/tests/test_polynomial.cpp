#include <random>

#include "doctest.h"
#include "momentkit/error.hpp"
#include "momentkit/polynomial.hpp"

using namespace momentkit;

namespace {

Polynomial x(std::size_t rank, std::size_t i) { return Polynomial::variable(rank, i); }

// Power-rule oracle: differentiate one monomial coordinate at a time.
Polynomial power_rule(const Polynomial& f, const MultiIndex& alpha) {
  Polynomial out(f.rank());
  for (const auto& [e, c] : f.terms()) {
    std::vector<std::uint32_t> ne(e.rank());
    Rational coeff = c;
    bool vanished = false;
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (alpha[i] > e[i]) { vanished = true; break; }
      for (std::uint32_t k = 0; k < alpha[i]; ++k) coeff *= e[i] - k;
      ne[i] = e[i] - alpha[i];
    }
    if (!vanished) out.add_term(MultiIndex(ne), coeff);
  }
  return out;
}

// Expansion oracle for the Leibniz right side, one binomial optionally bumped.
Polynomial expansion(const Polynomial& f, const Polynomial& g, const MultiIndex& alpha,
                     const MultiIndex* bump = nullptr) {
  Polynomial out(f.rank());
  for (const auto& beta : enumerate_below(alpha)) {
    mpz_class b = binom(alpha, beta);
    if (bump && *bump == beta) b += 1;
    out += (power_rule(f, beta) * power_rule(g, alpha - beta)) * Rational(b);
  }
  return out;
}

}  // namespace

TEST_CASE("dalpha examples") {
  const Polynomial f = x(2, 0) * x(2, 0) * x(2, 1);
  CHECK(dalpha(f, MultiIndex{1, 0}) == Polynomial::monomial(MultiIndex{1, 1}, 2));
  CHECK(dalpha(f, MultiIndex{1, 0}) == power_rule(f, MultiIndex{1, 0}));
  CHECK(dalpha(f, MultiIndex{0, 0}) == f);
  CHECK(dalpha(f, MultiIndex{3, 0}).is_zero());
  CHECK_THROWS_AS(dalpha(f, MultiIndex{1}), DimensionMismatch);
}

TEST_CASE("leibniz_rhs examples") {
  const Polynomial f = x(1, 0);
  const Polynomial g = x(1, 0) * x(1, 0);
  CHECK(leibniz_rhs(f, g, MultiIndex{3}) == Polynomial::constant(1, 6));
  CHECK(expansion(f, g, MultiIndex{3}) == Polynomial::constant(1, 6));
  CHECK(leibniz_rhs(f, g, MultiIndex{0}) == f * g);
  CHECK(leibniz_rhs(x(2, 0), x(2, 1), MultiIndex{1, 1}) == Polynomial::constant(2, 1));
}

TEST_CASE("check_leibniz examples") {
  const Polynomial f = x(1, 0);
  const Polynomial g = x(1, 0) * x(1, 0);
  CHECK(check_leibniz(f, g, MultiIndex{3}));
  CHECK(check_leibniz(Polynomial(2), x(2, 1), MultiIndex{2, 1}));

  const MultiIndex bumped{1};
  const Polynomial mutated = expansion(f, g, MultiIndex{3}, &bumped);
  CHECK(mutated == Polynomial::constant(1, 8));
  CHECK_FALSE(dalpha(f * g, MultiIndex{3}) == mutated);
}

TEST_CASE("eval examples") {
  const Polynomial f = x(2, 0) * x(2, 0) * x(2, 1);
  CHECK(eval(f, RationalPoint({2, 3})) == 12);
  CHECK(eval(Polynomial::constant(2, 5), RationalPoint({Rational(1, 3), 7})) == 5);
  CHECK(eval(x(2, 0) - x(2, 0), RationalPoint({1, 1})) == 0);
  CHECK((x(2, 0) - x(2, 0)).is_zero());
  CHECK_THROWS_AS(eval(f, RationalPoint({1})), DimensionMismatch);
}

TEST_CASE("random pairs satisfy the Leibniz rule exactly") {
  std::mt19937_64 rng(20);
  for (std::size_t r = 1; r <= 3; ++r)
    for (int t = 0; t < 15; ++t) {
      const Polynomial f = random_polynomial(rng, r);
      const Polynomial g = random_polynomial(rng, r);
      for (const auto& alpha : enumerate_height_at_most(r, 4)) {
        REQUIRE(check_leibniz(f, g, alpha));
        REQUIRE(leibniz_rhs(f, g, alpha) == expansion(f, g, alpha));
      }
    }
}

TEST_CASE("mixed partials commute and dalpha is linear") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const Polynomial f = random_polynomial(rng, 3);
    const Polynomial g = random_polynomial(rng, 3);
    const Rational a(-2, 3), b(5);
    for (const auto& beta : enumerate_height_at_most(3, 2))
      for (const auto& gamma : enumerate_height_at_most(3, 2)) {
        REQUIRE(dalpha(dalpha(f, beta), gamma) == dalpha(f, beta + gamma));
        REQUIRE(dalpha(dalpha(f, beta), gamma) == power_rule(f, beta + gamma));
      }
    for (const auto& alpha : enumerate_height_at_most(3, 3))
      REQUIRE(dalpha(f * a + g * b, alpha) == dalpha(f, alpha) * a + dalpha(g, alpha) * b);
  }
}

TEST_CASE("eval is multiplicative") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    const Polynomial f = random_polynomial(rng, 2);
    const Polynomial g = random_polynomial(rng, 2);
    Rational a(t % 7, 5), b(-3, t + 1);
    a.canonicalize();
    b.canonicalize();
    const RationalPoint p({a, b});
    REQUIRE(eval(f * g, p) == eval(f, p) * eval(g, p));
  }
}

TEST_CASE("random polynomials respect the spec bounds") {
  std::mt19937_64 rng(23);
  RandomPolynomialSpec spec;
  for (int t = 0; t < 100; ++t) {
    const Polynomial f = random_polynomial(rng, 2, spec);
    REQUIRE(f.total_degree() <= spec.max_degree);
    REQUIRE(f.terms().size() <= spec.max_terms);
    for (const auto& [e, c] : f.terms()) {
      REQUIRE(c != 0);
      REQUIRE(abs(c) <= spec.coeff_bound);
    }
  }
}

TEST_CASE("canonical form drops cancelled terms") {
  Polynomial p(2);
  p.add_term(MultiIndex{1, 0}, Rational(1, 2));
  p.add_term(MultiIndex{1, 0}, Rational(-1, 2));
  CHECK(p.is_zero());
  CHECK(p == Polynomial(2));
  CHECK(Polynomial::constant(2, 0).is_zero());
}

TEST_CASE("rationals parse and print canonically") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(rational_to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(rational_to_string(parse_rational("7")) == "7");
  CHECK_THROWS_AS(parse_rational("0.5"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
}

TEST_CASE("polynomial JSON round trip") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const Polynomial f = random_polynomial(rng, 3);
    nlohmann::json j = f;
    REQUIRE(polynomial_from_json(j, 3) == f);
  }
}
