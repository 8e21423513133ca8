#include "momentkit/power_sign.hpp"

#include <cmath>

#include "momentkit/error.hpp"

namespace momentkit {

void PowerSignMap::validate(const Domain& domain) const {
  if (exponent.rank() != domain.dimension() || tau.dimension() != domain.dimension())
    throw DimensionMismatch(exponent.rank(), domain.dimension(), "PowerSignMap");
  for (const auto& x : domain.samples()) {
    if (!(exponent.eval(x) > 0)) throw InvalidArgument("PowerSignMap: exponent not positive at a sample");
    if (!domain.contains(tau.apply(x))) throw InvalidArgument("PowerSignMap: tau maps a sample outside the box");
  }
}

double power_sign_apply(const PowerSignMap& m, const Polynomial& f, const RationalPoint& x) {
  const Rational v = eval(f, m.tau.apply(x));
  if (v == 0) return 0.0;
  const double mag = std::pow(std::fabs(v.get_d()), m.exponent.eval(x));
  if (m.sign == SignMode::Strip) return mag;
  return v < 0 ? -mag : mag;
}

namespace {

// |v|^p sgn(v) in rationals when p(x) is a small positive integer.
std::optional<Rational> exact_power_sign(const PowerSignMap& m, const Rational& v, const RationalPoint& x) {
  const auto p = m.exponent.eval_exact(x);
  if (!p || p->get_den() != 1 || *p <= 0 || *p > 64) return std::nullopt;
  Rational mag = 1;
  const Rational base = abs(v);
  for (unsigned long k = 0; k < p->get_num().get_ui(); ++k) mag *= base;
  if (m.sign == SignMode::Strip || v >= 0) return mag;
  return Rational(-mag);
}

}  // namespace

MultiplicativityReport assert_sign_preservation(const PowerSignMap& m, const Domain& domain) {
  MultiplicativityReport report;
  const std::size_t r = domain.dimension();
  // x_1 - 1/2 changes sign inside the unit box; constants pin M(-1) = -1.
  const std::vector<Polynomial> probes = {
      Polynomial::constant(r, -1),
      Polynomial::constant(r, -2),
      Polynomial::variable(r, 0) - Polynomial::constant(r, Rational(mpz_class(1), mpz_class(2))),
  };
  for (const auto& f : probes) {
    ++report.probe_count;
    for (const auto& x : domain.samples()) {
      const double got = power_sign_apply(m, f, x);
      const int want_sign = sgn(eval(f, m.tau.apply(x)));
      const int got_sign = got > 0 ? 1 : (got < 0 ? -1 : 0);
      bool ok = got_sign == want_sign;
      double expect = got;
      if (f.is_constant() && f.coefficient(MultiIndex::zero(r)) == -1) {
        expect = -1.0;
        ok = ok && got == -1.0;
      }
      if (!ok) {
        report.pass = false;
        report.sign_preserving = false;
        report.witness = MultiplicativityWitness{f, Polynomial(r), x, got, expect, std::fabs(got - expect), "sign"};
        return report;
      }
    }
  }
  return report;
}

MultiplicativityReport check_multiplicative(const PowerSignMap& m, const std::vector<ProbePair>& probes,
                                            const Domain& domain, std::uint64_t seed) {
  m.validate(domain);
  MultiplicativityReport report;
  report.seed = seed;
  report.probe_count = probes.size();
  const double tol = domain.tolerance();
  for (const auto& [f, g] : probes) {
    const Polynomial fg = f * g;
    for (const auto& x : domain.samples()) {
      const RationalPoint tx = m.tau.apply(x);
      const Rational fv = eval(f, tx), gv = eval(g, tx);
      const auto el = exact_power_sign(m, fv * gv, x);
      if (el) {
        const Rational er = *exact_power_sign(m, fv, x) * *exact_power_sign(m, gv, x);
        const double res = Rational(abs(*el - er) / (1 + abs(*el))).get_d();
        if (res > report.max_residual) report.max_residual = res;
        if (res > tol && report.pass) {
          report.pass = false;
          report.witness = MultiplicativityWitness{f, g, x, el->get_d(), er.get_d(), res, "multiplicative"};
        }
        continue;
      }
      const double lhs = power_sign_apply(m, fg, x);
      const double rhs = power_sign_apply(m, f, x) * power_sign_apply(m, g, x);
      const double res = std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs));
      if (res > report.max_residual) report.max_residual = res;
      if (res > tol && report.pass) {
        report.pass = false;
        report.witness = MultiplicativityWitness{f, g, x, lhs, rhs, res, "multiplicative"};
      }
    }
  }
  auto sign = assert_sign_preservation(m, domain);
  report.probe_count += sign.probe_count;
  if (!sign.pass) {
    report.sign_preserving = false;
    if (report.pass) report.witness = sign.witness;
    report.pass = false;
  }
  return report;
}

void to_json(nlohmann::json& j, const PowerSignMap& m) {
  j = {{"exponent", m.exponent}, {"tau", m.tau}, {"sign", m.sign == SignMode::Preserve ? "preserve" : "strip"}};
}

PowerSignMap power_sign_map_from_json(const nlohmann::json& j) {
  FuncExpr p = funcexpr_from_json(j.at("exponent"));
  CoordinateMap tau = j.contains("tau") ? coordinate_map_from_json(j.at("tau")) : CoordinateMap::identity(p.rank());
  SignMode mode = j.value("sign", std::string("preserve")) == "strip" ? SignMode::Strip : SignMode::Preserve;
  return PowerSignMap{std::move(p), std::move(tau), mode};
}

void to_json(nlohmann::json& j, const MultiplicativityReport& r) {
  j = {{"pass", r.pass},
       {"sign_preserving", r.sign_preserving},
       {"max_residual", r.max_residual},
       {"probe_count", r.probe_count},
       {"seed", r.seed},
       {"witness", nullptr}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"f", w.f}, {"g", w.g},           {"x", w.x},
                    {"lhs", w.lhs}, {"rhs", w.rhs}, {"residual", w.residual}, {"check", w.check}};
  }
}

}  // namespace momentkit
