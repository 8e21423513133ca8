#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/domain.hpp"
#include "momentkit/funcexpr.hpp"
#include "momentkit/probes.hpp"

namespace momentkit {

/// Strip drops the sgn factor; it exists so the checker can be shown to
/// reject a map that is multiplicative on magnitudes only.
enum class SignMode { Preserve, Strip };

/// M(f)(x) = |f(tau(x))|^{p(x)} sgn(f(tau(x))).
struct PowerSignMap {
  FuncExpr exponent;
  CoordinateMap tau;
  SignMode sign = SignMode::Preserve;

  /// Throws InvalidArgument unless p(x) > 0 and tau(x) lies in the box at every sample.
  void validate(const Domain& domain) const;
};

double power_sign_apply(const PowerSignMap& m, const Polynomial& f, const RationalPoint& x);

struct MultiplicativityWitness {
  Polynomial f;
  Polynomial g;
  RationalPoint x;
  double lhs;
  double rhs;
  double residual;
  /// "multiplicative" or "sign".
  std::string check;
};

struct MultiplicativityReport {
  bool pass = true;
  bool sign_preserving = true;
  double max_residual = 0;
  std::size_t probe_count = 0;
  std::uint64_t seed = 0;
  std::optional<MultiplicativityWitness> witness;
};

/// sgn(M(f)(x)) == sgn(f(tau(x))) and M(-1) == -1 at every sample, over
/// negative constants and a sign-changing coordinate probe.
MultiplicativityReport assert_sign_preservation(const PowerSignMap& m, const Domain& domain);

/// |M(fg)(x) - M(f)(x)M(g)(x)| <= tol (1 + |M(fg)(x)|) at every sample for every
/// probe, followed by assert_sign_preservation.
MultiplicativityReport check_multiplicative(const PowerSignMap& m, const std::vector<ProbePair>& probes,
                                            const Domain& domain, std::uint64_t seed = 0);

void to_json(nlohmann::json& j, const PowerSignMap& m);
PowerSignMap power_sign_map_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const MultiplicativityReport& r);

}  // namespace momentkit
