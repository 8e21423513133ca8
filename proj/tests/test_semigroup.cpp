#include <cmath>

#include "doctest.h"
#include "momentkit/semigroup.hpp"

using namespace momentkit;

namespace {

double choose(int n, int k) {
  double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

TEST_CASE("lambda 0 rank 1 gives powers") {
  const auto seq = make_exponential_moment_seq(1, 4, 0.0, {1.0});
  const MonoidElement x{0.7}, y{-1.3};
  for (std::uint32_t k = 0; k <= 4; ++k) {
    CHECK(seq(MultiIndex{k}, x) == doctest::Approx(std::pow(0.7, k)));
    double rhs = 0;
    for (std::uint32_t j = 0; j <= k; ++j) rhs += choose(k, j) * std::pow(0.7, j) * std::pow(-1.3, k - j);
    CHECK(seq(MultiIndex{k}, {x[0] + y[0]}) == doctest::Approx(rhs));
  }
  CHECK(verify_moment_seq(seq, Monoid::reals().random_pairs(50, 1)).pass);
}

TEST_CASE("first-order term is additive") {
  const auto seq = make_exponential_moment_seq(1, 1, 0.0, {3.0});
  for (const auto& [x, y] : Monoid::reals().random_pairs(20, 2))
    REQUIRE(seq(MultiIndex{1}, {x[0] + y[0]}) == doctest::Approx(seq(MultiIndex{1}, x) + seq(MultiIndex{1}, y)));
}

TEST_CASE("rank two example at x = 1/2, y = 1/4") {
  const auto seq = make_exponential_moment_seq(2, 2, 1.0, {1.0, 2.0});
  auto f = [](int a1, int a2, double x) { return std::exp(x) * std::pow(x, a1) * std::pow(2 * x, a2); };
  const double x = 0.5, y = 0.25;
  const double lhs = f(1, 1, x + y);
  double rhs = 0;
  for (int b1 = 0; b1 <= 1; ++b1)
    for (int b2 = 0; b2 <= 1; ++b2) rhs += f(b1, b2, x) * f(1 - b1, 1 - b2, y);
  CHECK(std::abs(lhs - rhs) <= 1e-12);
  CHECK(std::abs(seq(MultiIndex{1, 1}, {x + y}) - lhs) <= 1e-12);
}

TEST_CASE("constructor sequences verify") {
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::uint64_t n = 0; n <= 4; ++n)
      for (double lambda : {0.0, 1.0, -1.0}) {
        std::vector<double> c(r);
        for (std::size_t i = 0; i < r; ++i) c[i] = 0.5 * (i + 1);
        const auto rep =
            verify_moment_seq(make_exponential_moment_seq(r, n, lambda, c), Monoid::reals().random_pairs(100, r + n));
        REQUIRE(rep.pass);
        REQUIRE(rep.max_residual <= 1e-10);
        REQUIRE(rep.generator_exponential);
      }
}

TEST_CASE("lattice carrier") {
  const Monoid m = Monoid::lattice(2);
  const auto pairs = m.random_pairs(40, 3);
  std::vector<MonoidElement> elems;
  for (const auto& [x, y] : pairs) {
    elems.push_back(x);
    elems.push_back(y);
  }
  CHECK(m.check_laws(elems));
  const auto seq = make_exponential_moment_seq(m, 2, 3, {0.1, -0.2}, {{1.0, 0.0}, {0.5, 1.0}});
  CHECK(verify_moment_seq(seq, pairs).pass);
}

TEST_CASE("zero sequence and zero-generated collapse") {
  const Monoid m = Monoid::reals();
  const auto pairs = m.random_pairs(30, 4);
  const auto zero = make_zero_moment_seq(m, 2, 3);
  const auto rep = verify_moment_seq(zero, pairs);
  CHECK(rep.pass);
  CHECK_FALSE(rep.generator_exponential);

  const auto bumped = zero.with_function(MultiIndex{1, 0}, [](const MonoidElement& x) { return x[0]; });
  CHECK_FALSE(verify_moment_seq(bumped, pairs).pass);
  const auto constant = zero.with_function(MultiIndex{0, 2}, [](const MonoidElement&) { return 1.0; });
  CHECK_FALSE(verify_moment_seq(constant, pairs).pass);
}

TEST_CASE("tampered second moment fails at alpha 2") {
  const auto seq = make_exponential_moment_seq(1, 3, 0.0, {1.0});
  const auto f2 = seq.function(MultiIndex{2});
  const auto bad = seq.with_function(MultiIndex{2}, [f2](const MonoidElement& x) { return 1.01 * f2(x); });
  const auto rep = verify_moment_seq(bad, Monoid::reals().random_pairs(40, 5));
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.per_alpha.at(MultiIndex{1}) <= 1e-10);
  CHECK(rep.per_alpha.at(MultiIndex{2}) > 1e-10);
}

TEST_CASE("check_exponential examples") {
  const Monoid m = Monoid::reals();
  const auto pairs = m.random_pairs(30, 6);
  CHECK(check_exponential(m, [](const MonoidElement& x) { return std::exp(2 * x[0]); }, pairs));
  CHECK(check_exponential(m, [](const MonoidElement&) { return 1.0; }, pairs));
  CHECK_FALSE(check_exponential(m, [](const MonoidElement& x) { return x[0]; }, pairs));
  CHECK_FALSE(check_exponential(m, [](const MonoidElement&) { return 0.0; }, pairs));
  CHECK_FALSE(check_exponential(m, [](const MonoidElement& x) { return x[0]; }, {{{1.0}, {1.0}}}));
}

TEST_CASE("rank one expansion is the binomial sum term for term") {
  for (std::uint32_t k = 0; k <= 6; ++k) {
    const auto terms = expansion_terms(MultiIndex{k});
    REQUIRE(terms.size() == k + 1);
    for (std::uint32_t j = 0; j <= k; ++j) {
      REQUIRE(terms[j].beta == MultiIndex{j});
      REQUIRE(terms[j].rest == MultiIndex{k - j});
      REQUIRE(terms[j].coefficient.get_d() == choose(k, j));
    }
  }
}
