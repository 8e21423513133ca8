#include "momentkit/probes.hpp"

#include <random>

namespace momentkit {

std::vector<ProbePair> degenerate_probe_pairs(const Domain& domain) {
  const std::size_t r = domain.dimension();
  const Polynomial zero(r);
  const Polynomial two = Polynomial::constant(r, 2);
  const Polynomial minus_three = Polynomial::constant(r, -3);
  const Polynomial half = Polynomial::constant(r, Rational(mpz_class(1), mpz_class(2)));
  const Polynomial x1 = Polynomial::variable(r, 0);
  const Polynomial xr = Polynomial::variable(r, r - 1);
  // x_1 - s_1 vanishes at the first sample point s.
  const Polynomial vanishing = x1 - Polynomial::constant(r, domain.samples().front()[0]);
  const Polynomial mixed = x1 * xr + Polynomial::constant(r, 1);

  return {
      {zero, zero},      {zero, mixed},     {mixed, zero},           {two, minus_three},
      {minus_three, minus_three}, {half, two}, {x1, xr},              {xr, x1 * x1},
      {vanishing, mixed}, {mixed, vanishing}, {vanishing, vanishing}, {vanishing, minus_three},
  };
}

std::vector<ProbePair> make_probe_pairs(const Domain& domain, std::size_t count, std::uint64_t seed,
                                        const RandomPolynomialSpec& spec) {
  std::vector<ProbePair> out = degenerate_probe_pairs(domain);
  std::mt19937_64 rng(seed);
  while (out.size() < count) {
    Polynomial f = random_polynomial(rng, domain.dimension(), spec);
    Polynomial g = random_polynomial(rng, domain.dimension(), spec);
    out.emplace_back(std::move(f), std::move(g));
  }
  return out;
}

}  // namespace momentkit
