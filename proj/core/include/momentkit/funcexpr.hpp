#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/domain.hpp"
#include "momentkit/polynomial.hpp"

namespace momentkit {

/// Immutable expression tree for functions Omega -> R, evaluated pointwise.
///
/// Leaves are exact polynomials. Derivative-bearing nodes (GradDot, HessQuad)
/// hold their differentiated function as a polynomial, so every derivative is
/// exact and only the final contraction is floating.
class FuncExpr {
 public:
  enum class Kind {
    Poly,      // exact polynomial leaf
    Sum,       // sum of children
    Product,   // product of children
    Scale,     // rational factor times child
    XLogAbs,   // t ln|t| of child, 0 where the child is 0
    GradDot,   // <grad f, b>, b a vector field of r expressions
    HessQuad,  // <f'' c, c>, c a vector field of r expressions
    Compose,   // child evaluated at tau(x)
  };

  static FuncExpr poly(Polynomial p);
  static FuncExpr constant(std::size_t rank, const Rational& c);
  static FuncExpr zero(std::size_t rank) { return constant(rank, Rational(0)); }
  static FuncExpr sum(std::vector<FuncExpr> terms);
  static FuncExpr product(std::vector<FuncExpr> factors);
  static FuncExpr scale(const Rational& factor, FuncExpr child);
  static FuncExpr xlogabs(FuncExpr child);
  static FuncExpr grad_dot(Polynomial f, std::vector<FuncExpr> field);
  static FuncExpr hess_quad(Polynomial f, std::vector<FuncExpr> field);
  static FuncExpr compose(FuncExpr child, CoordinateMap tau);

  Kind kind() const noexcept;
  /// Dimension of Omega.
  std::size_t rank() const noexcept;

  /// Only valid for Poly, GradDot and HessQuad nodes.
  const Polynomial& polynomial() const;
  const std::vector<FuncExpr>& children() const;
  const Rational& factor() const;
  const CoordinateMap& map() const;

  /// Floating value at x. Throws EvalError naming the node path on inf/nan.
  double eval(const RationalPoint& x) const;

  /// Exact value when every node on the path is rational at x (polynomial
  /// trees; XLogAbs only where its argument is 0 or +-1).
  std::optional<Rational> eval_exact(const RationalPoint& x) const;

  /// Conservative syntactic test for the zero function: true only if the tree
  /// reduces to zero without looking at sample points.
  bool is_structurally_zero() const;

  std::string to_string() const;

 private:
  struct Node;
  explicit FuncExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  double eval_at(const RationalPoint& x, const std::string& path) const;

  std::shared_ptr<const Node> node_;
};

/// Free-function form of FuncExpr::eval.
double eval_expr(const FuncExpr& e, const RationalPoint& x);

/// Tagged JSON objects: {"kind": "poly", "rank": r, "terms": [...]},
/// {"kind": "sum"|"product", "args": [...]}, {"kind": "scale", "factor", "arg"},
/// {"kind": "xlogabs", "arg"}, {"kind": "grad_dot"|"hess_quad", "rank", "f", "field"},
/// {"kind": "compose", "arg", "map"}.
void to_json(nlohmann::json& j, const FuncExpr& e);
FuncExpr funcexpr_from_json(const nlohmann::json& j);

/// t ln|t| extended continuously by 0 at t = 0.
double xlogabs(double t) noexcept;

}  // namespace momentkit
