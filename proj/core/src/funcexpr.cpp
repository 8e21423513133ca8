#include "momentkit/funcexpr.hpp"

#include <cmath>

#include "momentkit/error.hpp"

namespace momentkit {

struct FuncExpr::Node {
  Kind kind;
  std::size_t rank;
  std::optional<Polynomial> poly;
  std::vector<FuncExpr> children;
  Rational factor;
  std::optional<CoordinateMap> map;
};

namespace {

const char* kind_name(FuncExpr::Kind k) {
  switch (k) {
    case FuncExpr::Kind::Poly: return "poly";
    case FuncExpr::Kind::Sum: return "sum";
    case FuncExpr::Kind::Product: return "product";
    case FuncExpr::Kind::Scale: return "scale";
    case FuncExpr::Kind::XLogAbs: return "xlogabs";
    case FuncExpr::Kind::GradDot: return "grad_dot";
    case FuncExpr::Kind::HessQuad: return "hess_quad";
    case FuncExpr::Kind::Compose: return "compose";
  }
  return "?";
}

std::size_t common_rank(const std::vector<FuncExpr>& xs, const char* where) {
  if (xs.empty()) throw InvalidArgument(std::string(where) + ": needs at least one argument");
  const std::size_t r = xs.front().rank();
  for (const auto& x : xs)
    if (x.rank() != r) throw DimensionMismatch(x.rank(), r, where);
  return r;
}

void require_field(const Polynomial& f, const std::vector<FuncExpr>& field, const char* where) {
  if (field.size() != f.rank()) throw DimensionMismatch(field.size(), f.rank(), where);
  for (const auto& b : field)
    if (b.rank() != f.rank()) throw DimensionMismatch(b.rank(), f.rank(), where);
}

double checked(double v, const std::string& path) {
  if (!std::isfinite(v)) throw EvalError(path);
  return v;
}

}  // namespace

double xlogabs(double t) noexcept { return t == 0.0 ? 0.0 : t * std::log(std::fabs(t)); }

FuncExpr FuncExpr::poly(Polynomial p) {
  const std::size_t r = p.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::Poly, r, std::move(p), {}, 0, std::nullopt}));
}

FuncExpr FuncExpr::constant(std::size_t rank, const Rational& c) {
  return poly(Polynomial::constant(rank, c));
}

FuncExpr FuncExpr::sum(std::vector<FuncExpr> terms) {
  const std::size_t r = common_rank(terms, "FuncExpr::sum");
  return FuncExpr(std::make_shared<const Node>(Node{Kind::Sum, r, std::nullopt, std::move(terms), 0, std::nullopt}));
}

FuncExpr FuncExpr::product(std::vector<FuncExpr> factors) {
  const std::size_t r = common_rank(factors, "FuncExpr::product");
  return FuncExpr(
      std::make_shared<const Node>(Node{Kind::Product, r, std::nullopt, std::move(factors), 0, std::nullopt}));
}

FuncExpr FuncExpr::scale(const Rational& factor, FuncExpr child) {
  const std::size_t r = child.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::Scale, r, std::nullopt, {std::move(child)}, factor, std::nullopt}));
}

FuncExpr FuncExpr::xlogabs(FuncExpr child) {
  const std::size_t r = child.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::XLogAbs, r, std::nullopt, {std::move(child)}, 0, std::nullopt}));
}

FuncExpr FuncExpr::grad_dot(Polynomial f, std::vector<FuncExpr> field) {
  require_field(f, field, "FuncExpr::grad_dot");
  const std::size_t r = f.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::GradDot, r, std::move(f), std::move(field), 0, std::nullopt}));
}

FuncExpr FuncExpr::hess_quad(Polynomial f, std::vector<FuncExpr> field) {
  require_field(f, field, "FuncExpr::hess_quad");
  const std::size_t r = f.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::HessQuad, r, std::move(f), std::move(field), 0, std::nullopt}));
}

FuncExpr FuncExpr::compose(FuncExpr child, CoordinateMap tau) {
  if (child.rank() != tau.dimension()) throw DimensionMismatch(child.rank(), tau.dimension(), "FuncExpr::compose");
  const std::size_t r = child.rank();
  return FuncExpr(std::make_shared<const Node>(Node{Kind::Compose, r, std::nullopt, {std::move(child)}, 0, std::move(tau)}));
}

FuncExpr::Kind FuncExpr::kind() const noexcept { return node_->kind; }
std::size_t FuncExpr::rank() const noexcept { return node_->rank; }

const Polynomial& FuncExpr::polynomial() const {
  if (!node_->poly) throw InvalidArgument("FuncExpr: node has no polynomial");
  return *node_->poly;
}
const std::vector<FuncExpr>& FuncExpr::children() const { return node_->children; }
const Rational& FuncExpr::factor() const { return node_->factor; }
const CoordinateMap& FuncExpr::map() const {
  if (!node_->map) throw InvalidArgument("FuncExpr: node has no coordinate map");
  return *node_->map;
}

double FuncExpr::eval(const RationalPoint& x) const {
  if (x.dimension() != rank()) throw DimensionMismatch(x.dimension(), rank(), "FuncExpr::eval");
  return eval_at(x, kind_name(kind()));
}

double FuncExpr::eval_at(const RationalPoint& x, const std::string& path) const {
  const Node& n = *node_;
  auto child_path = [&](std::size_t i) {
    return path + "[" + std::to_string(i) + "]/" + kind_name(n.children[i].kind());
  };
  switch (n.kind) {
    case Kind::Poly:
      return checked(momentkit::eval(*n.poly, x).get_d(), path);
    case Kind::Sum: {
      double s = 0;
      for (std::size_t i = 0; i < n.children.size(); ++i) s += n.children[i].eval_at(x, child_path(i));
      return checked(s, path);
    }
    case Kind::Product: {
      double p = 1;
      for (std::size_t i = 0; i < n.children.size(); ++i) p *= n.children[i].eval_at(x, child_path(i));
      return checked(p, path);
    }
    case Kind::Scale:
      return checked(n.factor.get_d() * n.children[0].eval_at(x, child_path(0)), path);
    case Kind::XLogAbs:
      return checked(momentkit::xlogabs(n.children[0].eval_at(x, child_path(0))), path);
    case Kind::GradDot: {
      double s = 0;
      for (std::size_t i = 0; i < n.rank; ++i) {
        double b = n.children[i].eval_at(x, child_path(i));
        if (b == 0.0) continue;
        s += momentkit::eval(dalpha(*n.poly, MultiIndex::unit(n.rank, i)), x).get_d() * b;
      }
      return checked(s, path);
    }
    case Kind::HessQuad: {
      std::vector<double> c(n.rank);
      for (std::size_t i = 0; i < n.rank; ++i) c[i] = n.children[i].eval_at(x, child_path(i));
      double s = 0;
      for (std::size_t i = 0; i < n.rank; ++i)
        for (std::size_t k = 0; k < n.rank; ++k) {
          if (c[i] == 0.0 || c[k] == 0.0) continue;
          MultiIndex a = add(MultiIndex::unit(n.rank, i), MultiIndex::unit(n.rank, k));
          s += momentkit::eval(dalpha(*n.poly, a), x).get_d() * c[i] * c[k];
        }
      return checked(s, path);
    }
    case Kind::Compose:
      return n.children[0].eval_at(n.map->apply(x), child_path(0));
  }
  throw Error("FuncExpr: unknown node kind");
}

std::optional<Rational> FuncExpr::eval_exact(const RationalPoint& x) const {
  if (x.dimension() != rank()) throw DimensionMismatch(x.dimension(), rank(), "FuncExpr::eval_exact");
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Poly:
      return momentkit::eval(*n.poly, x);
    case Kind::Sum: {
      Rational s = 0;
      for (const auto& c : n.children) {
        auto v = c.eval_exact(x);
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case Kind::Product: {
      // An exact zero factor decides the product even next to a transcendental one.
      Rational p = 1;
      bool rational = true;
      for (const auto& c : n.children) {
        auto v = c.eval_exact(x);
        if (v && *v == 0) return Rational(0);
        if (!v) rational = false;
        else p *= *v;
      }
      if (!rational) return std::nullopt;
      return p;
    }
    case Kind::Scale: {
      auto v = n.children[0].eval_exact(x);
      if (!v) return std::nullopt;
      return n.factor * *v;
    }
    case Kind::XLogAbs: {
      auto v = n.children[0].eval_exact(x);
      if (v && (*v == 0 || abs(*v) == 1)) return Rational(0);
      return std::nullopt;
    }
    case Kind::GradDot: {
      Rational s = 0;
      for (std::size_t i = 0; i < n.rank; ++i) {
        auto b = n.children[i].eval_exact(x);
        if (!b) return std::nullopt;
        if (*b == 0) continue;
        s += momentkit::eval(dalpha(*n.poly, MultiIndex::unit(n.rank, i)), x) * *b;
      }
      return s;
    }
    case Kind::HessQuad: {
      std::vector<Rational> c(n.rank);
      for (std::size_t i = 0; i < n.rank; ++i) {
        auto v = n.children[i].eval_exact(x);
        if (!v) return std::nullopt;
        c[i] = *v;
      }
      Rational s = 0;
      for (std::size_t i = 0; i < n.rank; ++i)
        for (std::size_t k = 0; k < n.rank; ++k) {
          if (c[i] == 0 || c[k] == 0) continue;
          MultiIndex a = add(MultiIndex::unit(n.rank, i), MultiIndex::unit(n.rank, k));
          s += momentkit::eval(dalpha(*n.poly, a), x) * c[i] * c[k];
        }
      return s;
    }
    case Kind::Compose:
      return n.children[0].eval_exact(n.map->apply(x));
  }
  return std::nullopt;
}

bool FuncExpr::is_structurally_zero() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Poly:
      return n.poly->is_zero();
    case Kind::Sum: {
      bool all_poly = true;
      for (const auto& c : n.children) all_poly = all_poly && c.kind() == Kind::Poly;
      if (all_poly) {
        Polynomial s(n.rank);
        for (const auto& c : n.children) s += c.polynomial();
        return s.is_zero();
      }
      for (const auto& c : n.children)
        if (!c.is_structurally_zero()) return false;
      return true;
    }
    case Kind::Product:
      for (const auto& c : n.children)
        if (c.is_structurally_zero()) return true;
      return false;
    case Kind::Scale:
      return n.factor == 0 || n.children[0].is_structurally_zero();
    case Kind::XLogAbs:
    case Kind::Compose:
      return n.children[0].is_structurally_zero();
    case Kind::GradDot:
    case Kind::HessQuad: {
      if (n.poly->total_degree() < (n.kind == Kind::GradDot ? 1u : 2u)) return true;
      for (const auto& c : n.children)
        if (!c.is_structurally_zero()) return false;
      return true;
    }
  }
  return false;
}

std::string FuncExpr::to_string() const {
  const Node& n = *node_;
  auto join = [&](const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) s += sep;
      s += "(" + n.children[i].to_string() + ")";
    }
    return s;
  };
  switch (n.kind) {
    case Kind::Poly: return n.poly->to_string();
    case Kind::Sum: return join(" + ");
    case Kind::Product: return join(" * ");
    case Kind::Scale: return rational_to_string(n.factor) + "*" + join("");
    case Kind::XLogAbs: return "xlogabs" + join("");
    case Kind::GradDot: return "<grad(" + n.poly->to_string() + "), [" + join(", ") + "]>";
    case Kind::HessQuad: return "<hess(" + n.poly->to_string() + ") c, c>, c=[" + join(", ") + "]";
    case Kind::Compose: return join("") + " o tau";
  }
  return "?";
}

double eval_expr(const FuncExpr& e, const RationalPoint& x) { return e.eval(x); }

void to_json(nlohmann::json& j, const FuncExpr& e) {
  using Kind = FuncExpr::Kind;
  j = {{"kind", kind_name(e.kind())}};
  switch (e.kind()) {
    case Kind::Poly:
      j["rank"] = e.rank();
      j["terms"] = e.polynomial();
      break;
    case Kind::Sum:
    case Kind::Product:
      j["args"] = e.children();
      break;
    case Kind::Scale:
      j["factor"] = rational_json(e.factor());
      j["arg"] = e.children()[0];
      break;
    case Kind::XLogAbs:
      j["arg"] = e.children()[0];
      break;
    case Kind::GradDot:
    case Kind::HessQuad:
      j["rank"] = e.rank();
      j["f"] = e.polynomial();
      j["field"] = e.children();
      break;
    case Kind::Compose:
      j["arg"] = e.children()[0];
      j["map"] = e.map();
      break;
  }
}

FuncExpr funcexpr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("FuncExpr JSON needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto args = [&] {
    std::vector<FuncExpr> out;
    for (const auto& a : j.at("args")) out.push_back(funcexpr_from_json(a));
    return out;
  };
  auto field = [&] {
    std::vector<FuncExpr> out;
    for (const auto& a : j.at("field")) out.push_back(funcexpr_from_json(a));
    return out;
  };
  if (kind == "poly") return FuncExpr::poly(polynomial_from_json(j.at("terms"), j.at("rank").get<std::size_t>()));
  if (kind == "constant")
    return FuncExpr::constant(j.at("rank").get<std::size_t>(), rational_from_json(j.at("value")));
  if (kind == "sum") return FuncExpr::sum(args());
  if (kind == "product") return FuncExpr::product(args());
  if (kind == "scale") return FuncExpr::scale(rational_from_json(j.at("factor")), funcexpr_from_json(j.at("arg")));
  if (kind == "xlogabs") return FuncExpr::xlogabs(funcexpr_from_json(j.at("arg")));
  if (kind == "grad_dot" || kind == "hess_quad") {
    const auto r = j.at("rank").get<std::size_t>();
    Polynomial f = polynomial_from_json(j.at("f"), r);
    return kind == "grad_dot" ? FuncExpr::grad_dot(std::move(f), field()) : FuncExpr::hess_quad(std::move(f), field());
  }
  if (kind == "compose") return FuncExpr::compose(funcexpr_from_json(j.at("arg")), coordinate_map_from_json(j.at("map")));
  throw InvalidArgument("unknown FuncExpr kind '" + kind + "'");
}

}  // namespace momentkit
