#include "momentkit/momentfam.hpp"

#include <algorithm>
#include <cmath>

#include "momentkit/error.hpp"

namespace momentkit {

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Trivial: return "trivial";
    case FamilyKind::Derivative: return "derivative";
    case FamilyKind::IdentityGenerated: return "identity_generated";
    case FamilyKind::Conjugated: return "conjugated";
    case FamilyKind::FirstOrderLeibniz: return "first_order_leibniz";
    case FamilyKind::SecondOrderLeibniz: return "second_order_leibniz";
    case FamilyKind::Custom: return "custom";
  }
  return "?";
}

OperatorFamily::OperatorFamily(FamilyKind kind, std::size_t rank, std::size_t dim, std::uint64_t order, bool exact,
                               bool vanishes, nlohmann::json descriptor, Rule rule)
    : kind_(kind),
      rank_(rank),
      dim_(dim),
      order_(order),
      exact_(exact),
      vanishes_(vanishes),
      descriptor_(std::move(descriptor)),
      rule_(std::move(rule)) {
  if (rank_ == 0 || dim_ == 0) throw InvalidArgument("OperatorFamily: rank must be at least 1");
}

FuncExpr OperatorFamily::apply(const MultiIndex& alpha, const Polynomial& f) const {
  if (alpha.rank() != rank_) throw DimensionMismatch(alpha.rank(), rank_, "OperatorFamily::apply index");
  if (f.rank() != dim_) throw DimensionMismatch(f.rank(), dim_, "OperatorFamily::apply argument");
  if (alpha.height() > order_)
    throw InvalidArgument("OperatorFamily::apply: |alpha| = " + std::to_string(alpha.height()) + " exceeds order " +
                          std::to_string(order_));
  return rule_(alpha, f);
}

std::vector<MultiIndex> OperatorFamily::indices() const { return enumerate_height_at_most(rank_, order_); }

OperatorFamily OperatorFamily::custom(std::string name, std::size_t rank, std::uint64_t order, Rule rule,
                                      bool exact) {
  nlohmann::json d = {{"kind", "custom"}, {"name", std::move(name)}, {"rank", rank}, {"order", order}};
  return OperatorFamily(FamilyKind::Custom, rank, rank, order, exact, false, std::move(d), std::move(rule));
}

OperatorFamily make_trivial(std::size_t rank, std::uint64_t order) {
  nlohmann::json d = {{"kind", "trivial"}, {"rank", rank}, {"order", order}};
  auto rule = [rank](const MultiIndex& alpha, const Polynomial&) {
    return FuncExpr::constant(rank, alpha.is_zero() ? 1 : 0);
  };
  return OperatorFamily(FamilyKind::Trivial, rank, rank, order, true, false, std::move(d), rule);
}

OperatorFamily make_derivative(std::size_t rank, std::uint64_t order) {
  if (order < 1) throw InvalidArgument("make_derivative: order must be at least 1");
  nlohmann::json d = {{"kind", "derivative"}, {"rank", rank}, {"order", order}};
  auto rule = [](const MultiIndex& alpha, const Polynomial& f) { return FuncExpr::poly(dalpha(f, alpha)); };
  return OperatorFamily(FamilyKind::Derivative, rank, rank, order, true, false, std::move(d), rule);
}

OperatorFamily make_identity_generated_unchecked(const CoeffFamily& cf) {
  nlohmann::json d = {{"kind", "identity_generated"}, {"coefficients", cf}};
  const std::size_t r = cf.rank();
  auto rule = [cf](const MultiIndex& alpha, const Polynomial& f) {
    if (alpha.is_zero()) return FuncExpr::poly(f);
    const FuncExpr* c = cf.find(alpha);
    if (!c) return FuncExpr::zero(f.rank());
    return FuncExpr::product({*c, FuncExpr::xlogabs(FuncExpr::poly(f))});
  };
  return OperatorFamily(FamilyKind::IdentityGenerated, r, r, cf.order(), false, true, std::move(d), rule);
}

OperatorFamily make_identity_generated(const CoeffFamily& cf, const Domain& domain) {
  const ConstraintReport report = check_constraint(cf, domain);
  if (!report.pass) {
    nlohmann::json w = report;
    throw ConstraintViolation("coefficient constraint violated at alpha = " + report.worst_alpha->to_string(),
                              w.at("witness"));
  }
  return make_identity_generated_unchecked(cf);
}

OperatorFamily make_first_order_leibniz(const FuncExpr& c) {
  const std::size_t r = c.rank();
  nlohmann::json d = {{"kind", "first_order_leibniz"}, {"c", c}};
  auto rule = [c](const MultiIndex& alpha, const Polynomial& f) {
    if (alpha.is_zero()) return FuncExpr::poly(f);
    return FuncExpr::product({c, FuncExpr::xlogabs(FuncExpr::poly(f))});
  };
  return OperatorFamily(FamilyKind::FirstOrderLeibniz, r, r, 1, false, true, std::move(d), rule);
}

OperatorFamily conjugate(const OperatorFamily& family, const CoordinateMap& tau, const Domain& domain) {
  if (tau.dimension() != family.domain_dimension())
    throw DimensionMismatch(tau.dimension(), family.domain_dimension(), "conjugate");
  if (domain.dimension() != family.domain_dimension())
    throw DimensionMismatch(domain.dimension(), family.domain_dimension(), "conjugate domain");
  for (const auto& x : domain.samples())
    if (!domain.contains(tau.apply(x))) throw InvalidArgument("conjugate: tau maps a sample point outside the box");
  nlohmann::json d = {{"kind", "conjugated"}, {"inner", family.descriptor()}, {"tau", tau}};
  auto rule = [family, tau](const MultiIndex& alpha, const Polynomial& f) {
    return FuncExpr::compose(family.apply(alpha, f), tau);
  };
  return OperatorFamily(FamilyKind::Conjugated, family.rank(), family.domain_dimension(), family.order(),
                        family.exact(), family.vanishes_with_argument(), std::move(d), rule);
}

SecondOrderLeibniz::SecondOrderLeibniz(FuncExpr a, std::vector<FuncExpr> b, std::vector<FuncExpr> c, unsigned k)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), k_(k) {}

bool SecondOrderLeibniz::exact() const { return a_.is_structurally_zero(); }

FuncExpr SecondOrderLeibniz::apply_t(const Polynomial& f) const {
  std::vector<FuncExpr> parts = {FuncExpr::hess_quad(f, c_), FuncExpr::grad_dot(f, b_)};
  if (!a_.is_structurally_zero()) parts.push_back(FuncExpr::product({a_, FuncExpr::xlogabs(FuncExpr::poly(f))}));
  return FuncExpr::sum(std::move(parts));
}

FuncExpr SecondOrderLeibniz::apply_a(const Polynomial& f) const { return FuncExpr::grad_dot(f, c_); }

nlohmann::json SecondOrderLeibniz::descriptor() const {
  return {{"kind", "second_order_leibniz"}, {"a", a_}, {"b", b_}, {"c", c_}, {"k", k_}};
}

OperatorFamily SecondOrderLeibniz::as_family() const {
  const SecondOrderLeibniz self = *this;
  auto rule = [self](const MultiIndex& alpha, const Polynomial& f) {
    switch (alpha[0]) {
      case 0: return FuncExpr::poly(f);
      case 1: return self.apply_a(f);
      default: return self.apply_t(f);
    }
  };
  return OperatorFamily(FamilyKind::SecondOrderLeibniz, 1, dimension(), 2, exact(), false, descriptor(), rule);
}

SecondOrderLeibniz make_second_order_leibniz(FuncExpr a, std::vector<FuncExpr> b, std::vector<FuncExpr> c,
                                             unsigned k) {
  const std::size_t r = a.rank();
  if (b.size() != r) throw DimensionMismatch(b.size(), r, "make_second_order_leibniz b");
  if (c.size() != r) throw DimensionMismatch(c.size(), r, "make_second_order_leibniz c");
  for (const auto& e : b)
    if (e.rank() != r) throw DimensionMismatch(e.rank(), r, "make_second_order_leibniz b");
  for (const auto& e : c)
    if (e.rank() != r) throw DimensionMismatch(e.rank(), r, "make_second_order_leibniz c");
  auto all_zero = [](const std::vector<FuncExpr>& v) {
    return std::all_of(v.begin(), v.end(), [](const FuncExpr& e) { return e.is_structurally_zero(); });
  };
  if (k <= 1 && !all_zero(c))
    throw InvalidArgument("make_second_order_leibniz: k = " + std::to_string(k) + " requires c == 0");
  if (k == 0 && !all_zero(b)) throw InvalidArgument("make_second_order_leibniz: k = 0 requires b == 0");
  return SecondOrderLeibniz(std::move(a), std::move(b), std::move(c), k);
}

double moment_residual(double lhs, double rhs, double term_magnitude) {
  return std::fabs(lhs - rhs) / (1.0 + std::max(std::fabs(lhs), term_magnitude));
}

namespace {

struct Expansion {
  std::size_t alpha_pos;
  // (position of beta, position of alpha - beta, binom(alpha, beta))
  std::vector<std::tuple<std::size_t, std::size_t, mpz_class>> terms;
};

std::vector<Expansion> expansions(const std::vector<MultiIndex>& idx) {
  std::map<MultiIndex, std::size_t> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  std::vector<Expansion> out;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    Expansion e{a, {}};
    for (const auto& beta : enumerate_below(idx[a]))
      e.terms.emplace_back(pos.at(beta), pos.at(sub(idx[a], beta)), binom(idx[a], beta));
    out.push_back(std::move(e));
  }
  return out;
}

template <typename T>
using Table = std::vector<std::vector<T>>;  // [index position][sample]

Table<Rational> exact_table(const OperatorFamily& fam, const std::vector<MultiIndex>& idx, const Polynomial& f,
                            const Domain& domain) {
  Table<Rational> t(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const FuncExpr e = fam.apply(idx[i], f);
    t[i].reserve(domain.samples().size());
    for (const auto& x : domain.samples()) {
      auto v = e.eval_exact(x);
      if (!v) throw Error("verify_moment: exact family '" + to_string(fam.kind()) + "' produced a non-rational value");
      t[i].push_back(std::move(*v));
    }
  }
  return t;
}

Table<double> float_table(const OperatorFamily& fam, const std::vector<MultiIndex>& idx, const Polynomial& f,
                          const Domain& domain) {
  Table<double> t(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const FuncExpr e = fam.apply(idx[i], f);
    t[i].reserve(domain.samples().size());
    for (const auto& x : domain.samples()) t[i].push_back(e.eval(x));
  }
  return t;
}

}  // namespace

MomentReport verify_moment(const OperatorFamily& family, const std::vector<ProbePair>& probes, const Domain& domain,
                           std::uint64_t seed) {
  if (domain.dimension() != family.domain_dimension())
    throw DimensionMismatch(domain.dimension(), family.domain_dimension(), "verify_moment");
  MomentReport report;
  report.family = family.descriptor();
  report.probe_count = probes.size();
  report.exact = family.exact();
  report.tolerance = family.exact() ? 0.0 : domain.tolerance();
  report.seed = seed;

  const auto idx = family.indices();
  const auto exps = expansions(idx);
  for (const auto& a : idx) report.per_alpha[a] = 0.0;
  const auto& samples = domain.samples();

  auto record = [&](const Expansion& e, const ProbePair& p, std::size_t s, double lhs, double rhs, double res,
                    bool failed) {
    double& slot = report.per_alpha[idx[e.alpha_pos]];
    slot = std::max(slot, res);
    report.max_residual = std::max(report.max_residual, res);
    if (failed && report.pass) {
      report.pass = false;
      report.witness = MomentWitness{idx[e.alpha_pos], p.first, p.second, samples[s], lhs, rhs, res};
    }
  };

  for (const auto& p : probes) {
    const Polynomial fg = p.first * p.second;
    if (family.exact()) {
      const auto tf = exact_table(family, idx, p.first, domain);
      const auto tg = exact_table(family, idx, p.second, domain);
      const auto tfg = exact_table(family, idx, fg, domain);
      for (const auto& e : exps)
        for (std::size_t s = 0; s < samples.size(); ++s) {
          Rational rhs = 0;
          Rational mag = 0;
          for (const auto& [b, c, k] : e.terms) {
            Rational t = Rational(k) * tf[b][s] * tg[c][s];
            mag += abs(t);
            rhs += t;
          }
          const Rational& lhs = tfg[e.alpha_pos][s];
          const bool equal = lhs == rhs;
          const double res = equal ? 0.0 : moment_residual(lhs.get_d(), rhs.get_d(), mag.get_d());
          record(e, p, s, lhs.get_d(), rhs.get_d(), res, !equal);
        }
      continue;
    }

    const auto tf = float_table(family, idx, p.first, domain);
    const auto tg = float_table(family, idx, p.second, domain);
    const auto tfg = float_table(family, idx, fg, domain);
    std::vector<bool> vanishing(samples.size(), false);
    if (family.vanishes_with_argument()) {
      const FuncExpr gen = family.apply(MultiIndex::zero(family.rank()), fg);
      for (std::size_t s = 0; s < samples.size(); ++s) {
        auto v = gen.eval_exact(samples[s]);
        vanishing[s] = v && *v == 0;
      }
    }
    std::vector<bool> vanish_bad(samples.size(), false);
    for (const auto& e : exps)
      for (std::size_t s = 0; s < samples.size(); ++s) {
        double rhs = 0;
        double mag = 0;
        bool all_terms_zero = true;
        for (const auto& [b, c, k] : e.terms) {
          const double t = k.get_d() * tf[b][s] * tg[c][s];
          all_terms_zero = all_terms_zero && t == 0.0;
          mag += std::fabs(t);
          rhs += t;
        }
        const double lhs = tfg[e.alpha_pos][s];
        const double res = moment_residual(lhs, rhs, mag);
        bool failed = res > domain.tolerance();
        if (vanishing[s] && !(lhs == 0.0 && all_terms_zero)) {
          vanish_bad[s] = true;
          failed = true;
        }
        record(e, p, s, lhs, rhs, res, failed);
      }
    for (std::size_t s = 0; s < samples.size(); ++s) {
      report.vanishing_points += vanishing[s] ? 1 : 0;
      report.vanishing_violations += vanish_bad[s] ? 1 : 0;
    }
  }
  return report;
}

MomentReport verify_second_order(const SecondOrderLeibniz& pair, const std::vector<ProbePair>& probes,
                                 const Domain& domain, std::uint64_t seed) {
  return verify_moment(pair.as_family(), probes, domain, seed);
}

void to_json(nlohmann::json& j, const MomentReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [a, v] : r.per_alpha) per.push_back({{"alpha", a}, {"max_residual", v}});
  j = {{"family", r.family},
       {"probe_count", r.probe_count},
       {"per_alpha", per},
       {"max_residual", r.max_residual},
       {"pass", r.pass},
       {"exact", r.exact},
       {"tolerance", r.tolerance},
       {"seed", r.seed},
       {"vanishing_points", r.vanishing_points},
       {"vanishing_violations", r.vanishing_violations},
       {"witness", nullptr}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"alpha", w.alpha}, {"f", w.f},     {"g", w.g},
                    {"x", w.x},         {"lhs", w.lhs}, {"rhs", w.rhs}, {"residual", w.residual}};
  }
}

CollapseReport assert_trivial_collapse(const OperatorFamily& candidate, const std::vector<ProbePair>& probes,
                                       const Domain& domain) {
  if (domain.dimension() != candidate.domain_dimension())
    throw DimensionMismatch(domain.dimension(), candidate.domain_dimension(), "assert_trivial_collapse");
  const std::size_t r = candidate.domain_dimension();
  const double tol = domain.tolerance();
  const MultiIndex zero_index = MultiIndex::zero(candidate.rank());

  std::vector<Polynomial> fs;
  for (const auto& [f, g] : probes) {
    fs.push_back(f);
    fs.push_back(g);
  }
  for (const auto& f : fs) {
    const FuncExpr t0 = candidate.apply(zero_index, f);
    for (const auto& x : domain.samples())
      if (t0.eval(x) != 1.0) throw InvalidArgument("assert_trivial_collapse: T_0 is not identically 1 on the probes");
  }

  CollapseReport report;
  const Polynomial zero(r);
  for (const auto& alpha : candidate.indices()) {
    if (alpha.is_zero()) continue;
    const FuncExpr t_zero = candidate.apply(alpha, zero);
    std::vector<double> z;
    for (const auto& x : domain.samples()) z.push_back(t_zero.eval(x));

    // T_alpha(0 * 0) = T_alpha(0) + T_alpha(0)
    for (std::size_t s = 0; s < z.size(); ++s) {
      ++report.checked;
      if (std::fabs(z[s] - 2 * z[s]) > tol * (1 + std::fabs(z[s]))) {
        report.pass = false;
        report.witness = CollapseWitness{alpha, zero, zero, domain.samples()[s], z[s], 2 * z[s], "zero_fixed_point"};
        return report;
      }
    }
    // T_alpha(f * 0) = T_alpha(f) + T_alpha(0)
    for (const auto& f : fs) {
      const FuncExpr tf = candidate.apply(alpha, f);
      for (std::size_t s = 0; s < z.size(); ++s) {
        ++report.checked;
        const double lhs = z[s];
        const double rhs = tf.eval(domain.samples()[s]) + z[s];
        if (std::fabs(lhs - rhs) > tol * (1 + std::fabs(lhs))) {
          report.pass = false;
          report.witness = CollapseWitness{alpha, f, zero, domain.samples()[s], lhs, rhs, "absorb_zero"};
          return report;
        }
      }
    }
  }
  return report;
}

void to_json(nlohmann::json& j, const CollapseReport& r) {
  j = {{"pass", r.pass}, {"checked", r.checked}, {"witness", nullptr}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"alpha", w.alpha}, {"f", w.f},     {"g", w.g},         {"x", w.x},
                    {"lhs", w.lhs},     {"rhs", w.rhs}, {"check", w.check}};
  }
}

namespace {

std::vector<FuncExpr> field_from_json(const nlohmann::json& j) {
  std::vector<FuncExpr> out;
  for (const auto& e : j) out.push_back(funcexpr_from_json(e));
  return out;
}

}  // namespace

OperatorFamily family_from_json(const nlohmann::json& j, const Domain& domain) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("family descriptor needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  // "r"/"N" are accepted as short aliases for "rank"/"order".
  auto field = [&](const char* name, const char* alias) -> const nlohmann::json& {
    if (j.contains(name)) return j.at(name);
    if (j.contains(alias)) return j.at(alias);
    throw InvalidArgument(kind + " descriptor needs \"" + name + "\"");
  };
  if (kind == "trivial" || kind == "derivative") {
    const auto rank = field("rank", "r").get<std::size_t>();
    const auto order = field("order", "N").get<std::uint64_t>();
    return kind == "trivial" ? make_trivial(rank, order) : make_derivative(rank, order);
  }
  if (kind == "identity_generated") return make_identity_generated(coeff_family_from_json(j.at("coefficients")), domain);
  if (kind == "first_order_leibniz") return make_first_order_leibniz(funcexpr_from_json(j.at("c")));
  if (kind == "second_order_leibniz")
    return make_second_order_leibniz(funcexpr_from_json(j.at("a")), field_from_json(j.at("b")),
                                     field_from_json(j.at("c")), j.at("k").get<unsigned>())
        .as_family();
  if (kind == "conjugated")
    return conjugate(family_from_json(j.at("inner"), domain), coordinate_map_from_json(j.at("tau")), domain);
  throw InvalidArgument("unknown family kind '" + kind + "'");
}

}  // namespace momentkit
