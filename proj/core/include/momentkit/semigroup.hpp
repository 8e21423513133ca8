#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentkit/multiindex.hpp"

namespace momentkit {

/// Element of a carrier: one real for (R,+), d nonnegative integers for (N^d,+).
using MonoidElement = std::vector<double>;

/// Commutative monoid under coordinatewise addition.
class Monoid {
 public:
  enum class Carrier { RealAdd, NatVecAdd };

  static Monoid reals() { return Monoid(Carrier::RealAdd, 1); }
  static Monoid lattice(std::size_t d);

  Carrier carrier() const noexcept { return carrier_; }
  std::size_t dimension() const noexcept { return dim_; }

  MonoidElement op(const MonoidElement& a, const MonoidElement& b) const;
  MonoidElement neutral() const { return MonoidElement(dim_, 0.0); }

  /// Reals uniform in [-2, 2]; lattice points with entries in 0..5.
  std::vector<std::pair<MonoidElement, MonoidElement>> random_pairs(std::size_t count, std::uint64_t seed) const;

  /// Associativity, commutativity and the neutral element on the given elements.
  bool check_laws(const std::vector<MonoidElement>& probes) const;

  std::string name() const;

 private:
  Monoid(Carrier c, std::size_t d) : carrier_(c), dim_(d) {}

  Carrier carrier_;
  std::size_t dim_;
};

using SeqFunction = std::function<double(const MonoidElement&)>;

/// Functions f_alpha (|alpha| <= N) on a monoid, meant to satisfy
/// f_alpha(x y) = sum_{beta <= alpha} binom(alpha, beta) f_beta(x) f_{alpha-beta}(y).
class MomentSeq {
 public:
  MomentSeq(Monoid monoid, std::size_t rank, std::uint64_t order, std::map<MultiIndex, SeqFunction> functions,
            nlohmann::json params = nullptr);

  const Monoid& monoid() const noexcept { return monoid_; }
  std::size_t rank() const noexcept { return rank_; }
  std::uint64_t order() const noexcept { return order_; }
  const nlohmann::json& params() const noexcept { return params_; }

  const SeqFunction& function(const MultiIndex& alpha) const;
  double operator()(const MultiIndex& alpha, const MonoidElement& x) const { return function(alpha)(x); }

  /// Copy with f_alpha replaced.
  MomentSeq with_function(const MultiIndex& alpha, SeqFunction f) const;

 private:
  Monoid monoid_;
  std::size_t rank_;
  std::uint64_t order_;
  std::map<MultiIndex, SeqFunction> functions_;
  nlohmann::json params_;
};

/// f_alpha(x) = e^{<lambda, x>} prod_i <c_i, x>^{alpha_i} on a monoid of
/// dimension d (lambda and each c_i have d entries).
MomentSeq make_exponential_moment_seq(const Monoid& monoid, std::size_t rank, std::uint64_t order,
                                      std::vector<double> lambda, std::vector<std::vector<double>> c);

/// (R,+) case: f_alpha(x) = e^{lambda x} prod_i (c_i x)^{alpha_i}.
MomentSeq make_exponential_moment_seq(std::size_t rank, std::uint64_t order, double lambda, std::vector<double> c);

/// Every f_alpha identically zero.
MomentSeq make_zero_moment_seq(const Monoid& monoid, std::size_t rank, std::uint64_t order);

struct ExpansionTerm {
  MultiIndex beta;
  MultiIndex rest;
  mpz_class coefficient;
};

/// Right-hand side terms of the identity at alpha, beta ascending.
std::vector<ExpansionTerm> expansion_terms(const MultiIndex& alpha);

struct SeqWitness {
  MultiIndex alpha;
  MonoidElement x;
  MonoidElement y;
  double lhs;
  double rhs;
  double residual;
};

struct SeqReport {
  bool pass = true;
  double max_residual = 0;
  std::size_t probe_count = 0;
  std::map<MultiIndex, double> per_alpha;
  /// f_0 is multiplicative and not identically zero on the probes.
  bool generator_exponential = false;
  std::optional<SeqWitness> witness;
};

void to_json(nlohmann::json& j, const SeqReport& r);

inline constexpr double kSeqTolerance = 1e-10;

/// Checks the identity for every |alpha| <= N (alpha = 0 is multiplicativity
/// of f_0) on every probe pair, relative residual <= tol.
SeqReport verify_moment_seq(const MomentSeq& seq, const std::vector<std::pair<MonoidElement, MonoidElement>>& probes,
                            double tol = kSeqTolerance);

/// f0(x y) = f0(x) f0(y) within tol on every probe and f0 nonzero somewhere on them.
bool check_exponential(const Monoid& monoid, const SeqFunction& f0,
                       const std::vector<std::pair<MonoidElement, MonoidElement>>& probes,
                       double tol = kSeqTolerance);

}  // namespace momentkit
