#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "momentkit/domain.hpp"
#include "momentkit/polynomial.hpp"

namespace momentkit {

using ProbePair = std::pair<Polynomial, Polynomial>;

/// Seeded probe pairs (f, g) for pointwise identity checks.
///
/// The list always starts with the degenerate inputs: the zero function,
/// constants (including negative ones), coordinate monomials and a function
/// vanishing at the first sample point. Random sparse polynomials fill the
/// rest up to `count` pairs; the degenerate block is kept even when `count`
/// is smaller.
std::vector<ProbePair> make_probe_pairs(const Domain& domain, std::size_t count, std::uint64_t seed,
                                        const RandomPolynomialSpec& spec = {});

/// Only the degenerate block of make_probe_pairs.
std::vector<ProbePair> degenerate_probe_pairs(const Domain& domain);

}  // namespace momentkit
