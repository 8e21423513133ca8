#include <cmath>

#include "doctest.h"
#include "momentkit/error.hpp"
#include "momentkit/momentfam.hpp"

using namespace momentkit;

namespace {

Polynomial var(std::size_t r, std::size_t i) { return Polynomial::variable(r, i); }
Polynomial cst(std::size_t r, const Rational& c) { return Polynomial::constant(r, c); }
FuncExpr fc(std::size_t r, const Rational& c) { return FuncExpr::constant(r, c); }

// T_0 = 1 and T_alpha given by `other` away from zero.
OperatorFamily candidate(std::size_t r, std::uint64_t n, std::function<FuncExpr(const Polynomial&)> other,
                         const MultiIndex& where) {
  return OperatorFamily::custom("candidate", r, n, [=](const MultiIndex& a, const Polynomial& f) {
    if (a.is_zero()) return fc(r, 1);
    if (a == where) return other(f);
    return FuncExpr::zero(r);
  });
}

CoeffFamily r1n3_family() {
  return CoeffFamily(1, 3, {{MultiIndex{2}, fc(1, 1)}, {MultiIndex{3}, FuncExpr::poly(var(1, 0))}});
}

}  // namespace

TEST_CASE("trivial family") {
  const auto t = make_trivial(2, 3);
  const RationalPoint x({Rational(1, 3), Rational(1, 5)});
  const Polynomial f = var(2, 0) + cst(2, 4);
  CHECK(t.apply(MultiIndex{1, 1}, f).eval_exact(x) == Rational(0));
  CHECK(t.apply(MultiIndex{0, 0}, f).eval_exact(x) == Rational(1));
  const Domain d = Domain::unit_box(2, 8, 1);
  const auto rep = verify_moment(t, make_probe_pairs(d, 10, 1), d);
  CHECK(rep.pass);
  CHECK(rep.exact);
  CHECK(rep.max_residual == 0.0);
  CHECK_THROWS_AS(t.apply(MultiIndex{2, 2}, f), InvalidArgument);
  CHECK_THROWS_AS(t.apply(MultiIndex{1}, f), DimensionMismatch);
}

TEST_CASE("assert_trivial_collapse") {
  const Domain d = Domain::unit_box(2, 8, 2);
  const auto probes = make_probe_pairs(d, 12, 2);
  CHECK(assert_trivial_collapse(make_trivial(2, 2), probes, d).pass);

  const auto ident = candidate(2, 2, [](const Polynomial& f) { return FuncExpr::poly(f); }, MultiIndex{1, 0});
  const auto r1 = assert_trivial_collapse(ident, probes, d);
  CHECK_FALSE(r1.pass);
  REQUIRE(r1.witness.has_value());
  CHECK(r1.witness->alpha == MultiIndex{1, 0});
  CHECK(r1.witness->check == "absorb_zero");
  CHECK_FALSE(r1.witness->f.is_zero());
  CHECK(r1.witness->g.is_zero());

  const auto five = candidate(2, 2, [](const Polynomial&) { return fc(2, 5); }, MultiIndex{0, 2});
  const auto r2 = assert_trivial_collapse(five, probes, d);
  CHECK_FALSE(r2.pass);
  REQUIRE(r2.witness.has_value());
  CHECK(r2.witness->check == "zero_fixed_point");
  CHECK(r2.witness->lhs == 5.0);
  CHECK(r2.witness->rhs == 10.0);

  CHECK_THROWS_AS(assert_trivial_collapse(make_derivative(2, 2), probes, d), InvalidArgument);
}

TEST_CASE("derivative family") {
  const auto t = make_derivative(2, 3);
  const RationalPoint x({Rational(1, 4), Rational(2, 3)});
  CHECK(t.apply(MultiIndex{1, 1}, var(2, 0) * var(2, 1)).eval_exact(x) == Rational(1));
  const Polynomial f = var(2, 0) * var(2, 0) + cst(2, Rational(1, 7));
  CHECK(t.apply(MultiIndex{0, 0}, f).eval_exact(x) == eval(f, x));
  CHECK_THROWS_AS(make_derivative(1, 0), InvalidArgument);

  for (std::size_t r = 1; r <= 3; ++r) {
    const Domain d = Domain::unit_box(r, 8, r);
    const auto rep = verify_moment(make_derivative(r, 4), make_probe_pairs(d, 50, r), d, r);
    CHECK(rep.pass);
    CHECK(rep.exact);
    CHECK(rep.max_residual == 0.0);
    CHECK(rep.per_alpha.size() == enumerate_height_at_most(r, 4).size());
  }
}

TEST_CASE("identity-generated family example at x = 1/2") {
  const Domain d = Domain::unit_box(1, 8, 0);
  const auto t = make_identity_generated(r1n3_family(), d);
  const RationalPoint x({Rational(1, 2)});
  const Polynomial f = cst(1, 2), g = cst(1, 3);
  const double lhs = t.apply(MultiIndex{2}, f * g).eval(x);
  CHECK(lhs == doctest::Approx(6 * std::log(6.0)));
  CHECK(lhs == doctest::Approx(10.7506).epsilon(1e-5));
  const double rhs = 2 * 3 * std::log(3.0) + 3 * 2 * std::log(2.0);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);
  CHECK(t.apply(MultiIndex{3}, f).eval(x) == doctest::Approx(0.5 * 2 * std::log(2.0)));
  CHECK(t.apply(MultiIndex{1}, f).eval(x) == 0.0);
  CHECK(t.apply(MultiIndex{2}, var(1, 0) - cst(1, Rational(1, 2))).eval(x) == 0.0);
}

TEST_CASE("identity-generated family rejects violated constraint") {
  const Domain d = Domain::unit_box(1, 8, 0);
  const CoeffFamily bad(1, 2, {{MultiIndex{1}, fc(1, 1)}});
  CHECK_THROWS_AS(make_identity_generated(bad, d), ConstraintViolation);
  try {
    make_identity_generated(bad, d);
  } catch (const ConstraintViolation& e) {
    CHECK(e.witness().contains("alpha"));
  }

  const auto unchecked = make_identity_generated_unchecked(bad);
  const auto probes = make_probe_pairs(d, 20, 4);
  const auto rep = verify_moment(unchecked, probes, d, 4);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.witness.has_value());
  const auto& w = *rep.witness;
  CHECK(w.alpha == MultiIndex{2});
  const double fu = eval(w.f, w.x).get_d(), gu = eval(w.g, w.x).get_d();
  CHECK(w.rhs - w.lhs == doctest::Approx(2 * xlogabs(fu) * xlogabs(gu)));
}

TEST_CASE("identity-generated families verify on every valid support") {
  for (std::size_t r = 1; r <= 2; ++r)
    for (std::uint64_t n = 1; n <= 3; ++n) {
      const Domain d = Domain::unit_box(r, 10, 7 * r + n);
      const auto probes = make_probe_pairs(d, 20, n);
      for (const auto& p : enumerate_valid_constant_supports(r, n))
        for (std::uint64_t seed = 0; seed < 2; ++seed) {
          const auto rep = verify_moment(make_identity_generated(random_valid_family(p, seed), d), probes, d, seed);
          REQUIRE(rep.pass);
          REQUIRE(rep.max_residual <= 1e-9);
          REQUIRE(rep.vanishing_points > 0);
          REQUIRE(rep.vanishing_violations == 0);
        }
    }
}

TEST_CASE("first-order Leibniz family") {
  const Domain d = Domain::unit_box(2, 8, 3);
  const auto t = make_first_order_leibniz(FuncExpr::poly(var(2, 0) + cst(2, 1)));
  CHECK(t.order() == 1);
  const auto rep = verify_moment(t, make_probe_pairs(d, 25, 3), d);
  CHECK(rep.pass);
  CHECK_FALSE(rep.exact);
}

TEST_CASE("second-order pair example") {
  const auto pair = make_second_order_leibniz(FuncExpr::zero(1), {FuncExpr::zero(1)}, {fc(1, 1)}, 2);
  CHECK(pair.exact());
  const Polynomial x = var(1, 0);
  const Polynomial f = x * x, g = x * x * x;
  for (const char* s : {"1/3", "2/5", "7/8"}) {
    const RationalPoint p({parse_rational(s)});
    const Rational xv = p[0];
    const auto lhs = pair.apply_t(f * g).eval_exact(p);
    const Rational rhs = *pair.apply_t(f).eval_exact(p) * eval(g, p) + eval(f, p) * *pair.apply_t(g).eval_exact(p) +
                     2 * *pair.apply_a(f).eval_exact(p) * *pair.apply_a(g).eval_exact(p);
    const Rational want = 20 * xv * xv * xv;
    CHECK(lhs == want);
    CHECK(rhs == want);
  }
  const Domain d = Domain::unit_box(1, 8, 5);
  const auto rep = verify_second_order(pair, make_probe_pairs(d, 30, 5), d);
  CHECK(rep.pass);
  CHECK(rep.exact);
  CHECK(rep.max_residual == 0.0);
}

TEST_CASE("second-order pair k clauses") {
  CHECK_THROWS_AS(make_second_order_leibniz(FuncExpr::zero(1), {FuncExpr::zero(1)}, {fc(1, 1)}, 1), InvalidArgument);
  CHECK_THROWS_AS(make_second_order_leibniz(FuncExpr::zero(1), {fc(1, 1)}, {FuncExpr::zero(1)}, 0), InvalidArgument);
  CHECK_THROWS_AS(make_second_order_leibniz(FuncExpr::zero(1), {FuncExpr::zero(1)}, {fc(1, 2)}, 0), InvalidArgument);
  CHECK_NOTHROW(make_second_order_leibniz(FuncExpr::zero(1), {fc(1, 1)}, {FuncExpr::zero(1)}, 1));

  const auto k0 = make_second_order_leibniz(fc(1, 3), {FuncExpr::zero(1)}, {FuncExpr::zero(1)}, 0);
  const Domain d = Domain::unit_box(1, 8, 6);
  const auto probes = make_probe_pairs(d, 20, 6);
  for (const auto& [f, g] : probes)
    for (const auto& x : d.samples()) REQUIRE(k0.apply_a(f).eval(x) == 0.0);
  CHECK(verify_second_order(k0, probes, d).pass);

  const auto r2 = make_second_order_leibniz(FuncExpr::poly(var(2, 1)), {fc(2, 1), FuncExpr::poly(var(2, 0))},
                                            {fc(2, 2), fc(2, Rational(-1, 2))}, 2);
  const Domain d2 = Domain::unit_box(2, 8, 6);
  CHECK(verify_second_order(r2, make_probe_pairs(d2, 20, 6), d2).pass);
}

TEST_CASE("conjugation example on (0,1)") {
  const Domain d = Domain::unit_box(1, 8, 8);
  const CoordinateMap tau({cst(1, 1) - var(1, 0)});
  const auto t = conjugate(make_derivative(1, 1), tau, d);
  const Polynomial f = var(1, 0), g = var(1, 0) * var(1, 0);
  for (const auto& x : d.samples()) {
    const Rational s = 1 - x[0];
    REQUIRE(t.apply(MultiIndex{1}, f * g).eval_exact(x) == 3 * s * s);
    REQUIRE(*t.apply(MultiIndex{1}, f).eval_exact(x) * *t.apply(MultiIndex{0}, g).eval_exact(x) +
                *t.apply(MultiIndex{0}, f).eval_exact(x) * *t.apply(MultiIndex{1}, g).eval_exact(x) ==
            3 * s * s);
  }
  CHECK(verify_moment(t, make_probe_pairs(d, 20, 8), d).max_residual == 0.0);
  CHECK_THROWS_AS(conjugate(make_derivative(1, 1), CoordinateMap({var(1, 0) + cst(1, 1)}), d), InvalidArgument);
}

TEST_CASE("conjugation by identity and by an inverse pair") {
  const Domain d = Domain::unit_box(2, 10, 9);
  const AffineMap rot{{{0, -1}, {1, 0}}, {1, 0}};
  const auto tau = rot.to_coordinate_map();
  const auto inv = rot.inverse().to_coordinate_map();
  const CoeffFamily cf(2, 2, {{MultiIndex{2, 0}, fc(2, 1)}, {MultiIndex{1, 1}, FuncExpr::poly(var(2, 1))}});
  const auto probes = make_probe_pairs(d, 15, 9);
  for (const auto& base : {make_derivative(2, 2), make_identity_generated(cf, d)}) {
    const auto same = conjugate(base, CoordinateMap::identity(2), d);
    const auto there = conjugate(base, tau, d);
    const auto back = conjugate(there, inv, d);
    REQUIRE(verify_moment(there, probes, d).pass);
    for (const auto& a : base.indices())
      for (const auto& [f, g] : probes)
        for (const auto& x : d.samples()) {
          const double v = base.apply(a, f).eval(x);
          REQUIRE(same.apply(a, f).eval(x) == v);
          REQUIRE(std::abs(back.apply(a, f).eval(x) - v) <= 1e-12 * (1 + std::abs(v)));
        }
  }
}

TEST_CASE("T_0 is multiplicative for every family") {
  const Domain d = Domain::unit_box(1, 8, 10);
  const auto probes = make_probe_pairs(d, 20, 10);
  const CoordinateMap tau({cst(1, 1) - var(1, 0)});
  const std::vector<OperatorFamily> fams{
      make_trivial(1, 2), make_derivative(1, 2), make_identity_generated(r1n3_family(), d),
      make_first_order_leibniz(fc(1, 2)), conjugate(make_derivative(1, 2), tau, d),
      make_second_order_leibniz(FuncExpr::zero(1), {FuncExpr::zero(1)}, {fc(1, 1)}, 2).as_family()};
  const MultiIndex zero{0};
  for (const auto& fam : fams)
    for (const auto& [f, g] : probes)
      for (const auto& x : d.samples()) {
        const double l = fam.apply(zero, f * g).eval(x);
        const double r = fam.apply(zero, f).eval(x) * fam.apply(zero, g).eval(x);
        REQUIRE(std::abs(l - r) <= 1e-12 * (1 + std::abs(l)));
      }
}

TEST_CASE("descriptors rebuild equivalent families") {
  const Domain d = Domain::unit_box(2, 8, 11);
  const auto probes = make_probe_pairs(d, 14, 11);
  const CoeffFamily cf(2, 3, {{MultiIndex{2, 0}, fc(2, 1)}, {MultiIndex{0, 3}, FuncExpr::poly(var(2, 0))}});
  const AffineMap rot{{{0, -1}, {1, 0}}, {1, 0}};
  for (const auto& fam : {make_derivative(2, 3), make_trivial(2, 1), make_identity_generated(cf, d),
                          conjugate(make_identity_generated(cf, d), rot.to_coordinate_map(), d)}) {
    const auto back = family_from_json(fam.descriptor(), d);
    REQUIRE(back.kind() == fam.kind());
    REQUIRE(back.exact() == fam.exact());
    for (const auto& a : fam.indices())
      for (const auto& [f, g] : probes)
        for (const auto& x : d.samples()) REQUIRE(back.apply(a, f).eval(x) == fam.apply(a, f).eval(x));
  }
  CHECK(family_from_json({{"kind", "derivative"}, {"r", 2}, {"N", 3}}, d).order() == 3);
  CHECK_THROWS_AS(family_from_json({{"kind", "nope"}}, d), InvalidArgument);
}

TEST_CASE("moment residual normalization") {
  CHECK(moment_residual(1, 1, 5) == 0.0);
  CHECK(moment_residual(3, 1, 1) == doctest::Approx(2.0 / 4.0));
  CHECK(moment_residual(0, 1, 10) == doctest::Approx(1.0 / 11.0));
}
