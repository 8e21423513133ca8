#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/domain.hpp"
#include "momentkit/funcexpr.hpp"
#include "momentkit/multiindex.hpp"

namespace momentkit {

/// Coefficient functions c_alpha for 0 != |alpha| <= N. Missing entries are
/// identically zero.
class CoeffFamily {
 public:
  CoeffFamily(std::size_t rank, std::uint64_t order, std::map<MultiIndex, FuncExpr> coefficients = {});

  std::size_t rank() const noexcept { return rank_; }
  std::uint64_t order() const noexcept { return order_; }
  const std::map<MultiIndex, FuncExpr>& coefficients() const noexcept { return coefficients_; }
  /// nullptr when c_alpha is identically zero by omission.
  const FuncExpr* find(const MultiIndex& alpha) const;
  std::set<MultiIndex> support() const;

 private:
  std::size_t rank_;
  std::uint64_t order_;
  std::map<MultiIndex, FuncExpr> coefficients_;
};

void to_json(nlohmann::json& j, const CoeffFamily& cf);
CoeffFamily coeff_family_from_json(const nlohmann::json& j);

struct ConstraintReport {
  bool pass = true;
  double max_abs = 0;
  std::optional<MultiIndex> worst_alpha;
  std::optional<RationalPoint> worst_point;
  /// max |sum| over samples, per constrained alpha (|alpha| >= 2).
  std::map<MultiIndex, double> per_alpha;
};

void to_json(nlohmann::json& j, const ConstraintReport& r);

/// sum over 0 < beta < alpha of binom(alpha, beta) c_beta(x) c_{alpha-beta}(x),
/// evaluated at x.
double constraint_sum(const CoeffFamily& cf, const MultiIndex& alpha, const RationalPoint& x);

/// |constraint_sum| <= domain.tolerance() for every 2 <= |alpha| <= N at every sample.
ConstraintReport check_constraint(const CoeffFamily& cf, const Domain& domain);

/// Which coefficients may be nonzero, optionally with constant values that
/// satisfy the constraint despite interacting indices.
struct SupportPattern {
  std::size_t rank = 1;
  std::uint64_t order = 0;
  std::set<MultiIndex> support;
  std::optional<std::map<MultiIndex, Rational>> certificate;

  /// Throws InvalidArgument on indices outside 0 < |alpha| <= order.
  void validate() const;
};

void to_json(nlohmann::json& j, const SupportPattern& p);
SupportPattern support_pattern_from_json(const nlohmann::json& j);

/// {alpha in N^rank : 0 < |alpha| <= order}, lexicographic.
std::vector<MultiIndex> nonzero_indices(std::size_t rank, std::uint64_t order);

/// Ordered pairs (beta, alpha - beta) with 0 < beta < alpha and both in `support`.
std::vector<std::pair<MultiIndex, MultiIndex>> decompositions(const MultiIndex& alpha,
                                                              const std::set<MultiIndex>& support);

/// True iff no alpha with |alpha| <= order splits into two support elements.
bool is_structure_valid(const SupportPattern& pattern);

/// Indices whose coefficient must vanish: gamma is flagged when |2 gamma| <= N
/// and (gamma, gamma) is the only decomposition of 2 gamma inside the current
/// support, so the 2 gamma constraint reads binom(2 gamma, gamma) c_gamma^2 = 0.
/// Flagged indices are removed and the analysis repeats to a fixpoint.
std::set<MultiIndex> forced_zero_analysis(const SupportPattern& pattern);

struct SupportSearchOptions {
  std::size_t max_support_size = static_cast<std::size_t>(-1);
  /// Maximum size of the index set {0 < |alpha| <= N}.
  std::size_t index_budget = 20;
};

/// Constant values tried by the cancellation search: p/q, p in -3..3 \ {0}, q in 1..3.
std::vector<Rational> certificate_values();

/// Searches nonzero constants from certificate_values() on `support` making
/// every constraint sum vanish exactly.
std::optional<std::map<MultiIndex, Rational>> find_certificate(std::size_t rank, std::uint64_t order,
                                                               const std::set<MultiIndex>& support);

/// Every support (up to max_support_size elements) on which nonzero constant
/// coefficients can satisfy the constraint: structure-valid ones, plus ones
/// with a cancellation certificate. Ordered by size, then by index bitmask.
/// Throws BudgetExceeded when the index set exceeds options.index_budget.
std::vector<SupportPattern> enumerate_valid_constant_supports(std::size_t rank, std::uint64_t order,
                                                              const SupportSearchOptions& options = {});

/// Random low-degree polynomial coefficients on the support (scaled by the
/// certificate constants when present). Throws InvalidArgument for a pattern
/// that is neither structure-valid nor certificate-bearing.
CoeffFamily random_valid_family(const SupportPattern& pattern, std::uint64_t seed);

}  // namespace momentkit
