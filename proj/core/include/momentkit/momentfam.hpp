#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/coeffsolve.hpp"
#include "momentkit/domain.hpp"
#include "momentkit/funcexpr.hpp"
#include "momentkit/probes.hpp"

namespace momentkit {

enum class FamilyKind {
  Trivial,
  Derivative,
  IdentityGenerated,
  Conjugated,
  FirstOrderLeibniz,
  SecondOrderLeibniz,
  Custom,
};

std::string to_string(FamilyKind k);

/// An indexed family {T_alpha : |alpha| <= N} of maps from polynomials to
/// pointwise functions on Omega.
///
/// Index rank and domain dimension coincide except for the second-order
/// Leibniz pair, which is a rank-1 family over an r-dimensional domain.
class OperatorFamily {
 public:
  using Rule = std::function<FuncExpr(const MultiIndex&, const Polynomial&)>;

  FamilyKind kind() const noexcept { return kind_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t domain_dimension() const noexcept { return dim_; }
  std::uint64_t order() const noexcept { return order_; }
  /// Values are rational at rational points and compared exactly.
  bool exact() const noexcept { return exact_; }
  /// T_alpha(f)(x) = 0 whenever f(x) = 0, for every alpha != 0.
  bool vanishes_with_argument() const noexcept { return vanishes_; }
  const nlohmann::json& descriptor() const noexcept { return descriptor_; }

  /// T_alpha(f). Throws for |alpha| > N or rank mismatches.
  FuncExpr apply(const MultiIndex& alpha, const Polynomial& f) const;

  /// Every alpha with |alpha| <= N, lexicographic.
  std::vector<MultiIndex> indices() const;

  /// A family from an arbitrary rule; used for perturbed candidates.
  static OperatorFamily custom(std::string name, std::size_t rank, std::uint64_t order, Rule rule,
                               bool exact = false);

 private:
  OperatorFamily(FamilyKind kind, std::size_t rank, std::size_t dim, std::uint64_t order, bool exact,
                 bool vanishes, nlohmann::json descriptor, Rule rule);

  friend OperatorFamily make_trivial(std::size_t, std::uint64_t);
  friend OperatorFamily make_derivative(std::size_t, std::uint64_t);
  friend OperatorFamily make_identity_generated_unchecked(const CoeffFamily&);
  friend OperatorFamily make_first_order_leibniz(const FuncExpr&);
  friend OperatorFamily conjugate(const OperatorFamily&, const CoordinateMap&, const Domain&);
  friend class SecondOrderLeibniz;

  FamilyKind kind_;
  std::size_t rank_;
  std::size_t dim_;
  std::uint64_t order_;
  bool exact_;
  bool vanishes_;
  nlohmann::json descriptor_;
  Rule rule_;
};

/// T_0 = 1 and T_alpha = 0 for alpha != 0.
OperatorFamily make_trivial(std::size_t rank, std::uint64_t order);

/// T_alpha = D^alpha. Requires order >= 1.
OperatorFamily make_derivative(std::size_t rank, std::uint64_t order);

/// T_0 = id, T_alpha(f) = c_alpha f ln|f|. Rejects families failing
/// check_constraint on `domain` with ConstraintViolation.
OperatorFamily make_identity_generated(const CoeffFamily& cf, const Domain& domain);

/// Same rule without the constraint check.
OperatorFamily make_identity_generated_unchecked(const CoeffFamily& cf);

/// Order-1 family with T_0 = id and T_{e_i}(f) = c f ln|f| for every unit e_i.
OperatorFamily make_first_order_leibniz(const FuncExpr& c);

/// T~_alpha(f)(x) = T_alpha(f)(tau(x)). Throws InvalidArgument when tau maps a
/// sample of `domain` outside the box.
OperatorFamily conjugate(const OperatorFamily& family, const CoordinateMap& tau, const Domain& domain);

/// The pair T(f) = <f'' c, c> + <f', b> + a f ln|f|, A(f) = <f', c>, which
/// satisfies T(fg) = T(f) g + f T(g) + 2 A(f) A(g).
class SecondOrderLeibniz {
 public:
  std::size_t dimension() const noexcept { return a_.rank(); }
  unsigned smoothness() const noexcept { return k_; }
  /// True when a is identically zero, so T and A are polynomial in f.
  bool exact() const;

  FuncExpr apply_t(const Polynomial& f) const;
  FuncExpr apply_a(const Polynomial& f) const;

  /// Rank-1, order-2 family T_0 = id, T_1 = A, T_2 = T; its alpha = 2 identity
  /// is the second-order rule.
  OperatorFamily as_family() const;

  nlohmann::json descriptor() const;

 private:
  SecondOrderLeibniz(FuncExpr a, std::vector<FuncExpr> b, std::vector<FuncExpr> c, unsigned k);
  friend SecondOrderLeibniz make_second_order_leibniz(FuncExpr, std::vector<FuncExpr>, std::vector<FuncExpr>,
                                                      unsigned);

  FuncExpr a_;
  std::vector<FuncExpr> b_;
  std::vector<FuncExpr> c_;
  unsigned k_;
};

/// Throws InvalidArgument when k = 1 and c is not identically zero, or when
/// k = 0 and b or c is not identically zero.
SecondOrderLeibniz make_second_order_leibniz(FuncExpr a, std::vector<FuncExpr> b, std::vector<FuncExpr> c,
                                             unsigned k);

struct MomentWitness {
  MultiIndex alpha;
  Polynomial f;
  Polynomial g;
  RationalPoint x;
  double lhs;
  double rhs;
  double residual;
};

struct MomentReport {
  nlohmann::json family;
  std::size_t probe_count = 0;
  std::map<MultiIndex, double> per_alpha;
  double max_residual = 0;
  bool pass = true;
  bool exact = false;
  double tolerance = 0;
  std::uint64_t seed = 0;
  /// Points where T_0(f g) vanished exactly (only tracked for families that
  /// vanish with their argument) and how many of those had a nonzero side.
  std::size_t vanishing_points = 0;
  std::size_t vanishing_violations = 0;
  std::optional<MomentWitness> witness;
};

void to_json(nlohmann::json& j, const MomentReport& r);

/// Relative residual |lhs - rhs| / (1 + max(|lhs|, sum |terms|)).
double moment_residual(double lhs, double rhs, double term_magnitude);

/// Checks T_alpha(fg) = sum_{beta <= alpha} binom(alpha, beta) T_beta(f) T_{alpha-beta}(g)
/// for every |alpha| <= N, probe and sample. Exact families are compared in
/// rational arithmetic with zero tolerance; the rest use domain.tolerance().
MomentReport verify_moment(const OperatorFamily& family, const std::vector<ProbePair>& probes,
                           const Domain& domain, std::uint64_t seed = 0);

/// verify_moment on the pair's rank-1 family.
MomentReport verify_second_order(const SecondOrderLeibniz& pair, const std::vector<ProbePair>& probes,
                                 const Domain& domain, std::uint64_t seed = 0);

struct CollapseWitness {
  MultiIndex alpha;
  Polynomial f;
  Polynomial g;
  RationalPoint x;
  double lhs;
  double rhs;
  /// "zero_fixed_point": T_alpha(0) = 2 T_alpha(0) failed;
  /// "absorb_zero": T_alpha(f 0) = T_alpha(f) + T_alpha(0) failed.
  std::string check;
};

struct CollapseReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<CollapseWitness> witness;
};

void to_json(nlohmann::json& j, const CollapseReport& r);

/// For a candidate with T_0 = 1, replays the consequences of the moment
/// identity with a zero factor: T_alpha(0) = 0 and T_alpha(f) = T_alpha(f 0) -
/// T_alpha(0) = 0. Fails with a witness if some T_alpha is nonzero on a probe.
/// Throws InvalidArgument if T_0 is not 1 on the probes.
CollapseReport assert_trivial_collapse(const OperatorFamily& candidate, const std::vector<ProbePair>& probes,
                                       const Domain& domain);

/// Builds a family from a descriptor: {"kind": "trivial"|"derivative", "rank", "order"},
/// {"kind": "identity_generated", "coefficients": CoeffFamily},
/// {"kind": "first_order_leibniz", "c": FuncExpr},
/// {"kind": "second_order_leibniz", "a", "b", "c", "k"},
/// {"kind": "conjugated", "inner": descriptor, "tau": CoordinateMap}.
OperatorFamily family_from_json(const nlohmann::json& j, const Domain& domain);

}  // namespace momentkit
