#include "momentkit/polynomial.hpp"

#include <algorithm>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

void require_rank(std::size_t a, std::size_t b, const char* where) {
  if (a != b) throw DimensionMismatch(a, b, where);
}

}  // namespace

Polynomial::Polynomial(std::size_t rank) : rank_(rank) {
  if (rank == 0) throw InvalidArgument("Polynomial: rank must be at least 1");
}

Polynomial Polynomial::constant(std::size_t rank, const Rational& c) {
  Polynomial p(rank);
  p.add_term(MultiIndex::zero(rank), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t rank, std::size_t i) {
  return monomial(MultiIndex::unit(rank, i), Rational(1));
}

Polynomial Polynomial::monomial(const MultiIndex& exponent, const Rational& coeff) {
  Polynomial p(exponent.rank());
  p.add_term(exponent, coeff);
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

std::uint64_t Polynomial::total_degree() const noexcept {
  std::uint64_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.height());
  return d;
}

Rational Polynomial::coefficient(const MultiIndex& exponent) const {
  require_rank(rank_, exponent.rank(), "Polynomial::coefficient");
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const MultiIndex& exponent, const Rational& c) {
  require_rank(rank_, exponent.rank(), "Polynomial::add_term");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  require_rank(rank_, o.rank_, "Polynomial +");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  require_rank(rank_, o.rank_, "Polynomial -");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_rank(a.rank_, b.rank_, "Polynomial *");
  Polynomial out(a.rank_);
  Rational prod;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      prod = ca * cb;
      out.add_term(add(ea, eb), prod);
    }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  // Highest exponents first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (!first) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    first = false;
    bool unit = mag == 1 && !e.is_zero();
    if (!unit) s += rational_to_string(mag);
    bool need_star = !unit;
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) s += "*";
      need_star = true;
      s += "x" + std::to_string(i + 1);
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
  }
  return s;
}

Polynomial dalpha(const Polynomial& f, const MultiIndex& alpha) {
  require_rank(f.rank(), alpha.rank(), "dalpha");
  if (alpha.is_zero()) return f;
  Polynomial out(f.rank());
  mpz_class factor;
  mpz_class ff;
  for (const auto& [e, c] : f.terms()) {
    if (!leq(alpha, e)) continue;
    factor = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) {
      // falling factorial e_i (e_i - 1) ... (e_i - alpha_i + 1)
      for (std::uint32_t k = 0; k < alpha[i]; ++k) factor *= (e[i] - k);
    }
    out.add_term(sub(e, alpha), c * Rational(factor));
  }
  return out;
}

Polynomial leibniz_rhs(const Polynomial& f, const Polynomial& g, const MultiIndex& alpha) {
  require_rank(f.rank(), g.rank(), "leibniz_rhs");
  require_rank(f.rank(), alpha.rank(), "leibniz_rhs");
  Polynomial out(f.rank());
  for (const auto& beta : enumerate_below(alpha)) {
    Polynomial df = dalpha(f, beta);
    if (df.is_zero()) continue;
    Polynomial dg = dalpha(g, sub(alpha, beta));
    if (dg.is_zero()) continue;
    out += (df * dg) * Rational(binom(alpha, beta));
  }
  return out;
}

bool check_leibniz(const Polynomial& f, const Polynomial& g, const MultiIndex& alpha) {
  return dalpha(f * g, alpha) == leibniz_rhs(f, g, alpha);
}

Rational eval(const Polynomial& f, const RationalPoint& x) {
  require_rank(f.rank(), x.dimension(), "eval");
  if (f.is_zero()) return 0;
  // Power tables per coordinate, then one pass over the terms.
  std::vector<std::uint32_t> max_exp(f.rank(), 0);
  for (const auto& [e, c] : f.terms())
    for (std::size_t i = 0; i < f.rank(); ++i) max_exp[i] = std::max(max_exp[i], e[i]);
  std::vector<std::vector<Rational>> powers(f.rank());
  for (std::size_t i = 0; i < f.rank(); ++i) {
    powers[i].resize(max_exp[i] + 1);
    powers[i][0] = 1;
    for (std::uint32_t k = 1; k <= max_exp[i]; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  }
  Rational sum = 0;
  Rational term;
  for (const auto& [e, c] : f.terms()) {
    term = c;
    for (std::size_t i = 0; i < f.rank(); ++i)
      if (e[i]) term *= powers[i][e[i]];
    sum += term;
  }
  return sum;
}

Polynomial random_polynomial(std::mt19937_64& rng, std::size_t rank, const RandomPolynomialSpec& spec) {
  Polynomial out(rank);
  std::uniform_int_distribution<std::size_t> nterms(1, std::max<std::size_t>(1, spec.max_terms));
  std::uniform_int_distribution<std::uint64_t> degree(0, spec.max_degree);
  std::uniform_int_distribution<std::size_t> coord(0, rank - 1);
  std::uniform_int_distribution<int> numer(-spec.coeff_bound, spec.coeff_bound);
  std::uniform_int_distribution<int> denom(1, std::max(1, spec.denominator_bound));
  const std::size_t n = nterms(rng);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<MultiIndex::value_type> e(rank, 0);
    const auto d = degree(rng);
    for (std::uint64_t k = 0; k < d; ++k) ++e[coord(rng)];
    int p = numer(rng);
    int q = denom(rng);
    Rational c{mpz_class(p), mpz_class(q)};
    c.canonicalize();
    MultiIndex exponent(std::move(e));
    // A repeated exponent would add coefficients past the bound.
    if (out.terms().count(exponent)) continue;
    out.add_term(exponent, c);
  }
  return out;
}

void to_json(nlohmann::json& j, const Polynomial& f) {
  j = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) j.push_back({{"exponent", e}, {"coeff", rational_json(c)}});
}

Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t rank) {
  if (!j.is_array()) throw InvalidArgument("polynomial JSON must be a list of terms");
  Polynomial out(rank);
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("exponent") || !t.contains("coeff"))
      throw InvalidArgument("polynomial term needs \"exponent\" and \"coeff\"");
    out.add_term(t.at("exponent").get<MultiIndex>(), rational_from_json(t.at("coeff")));
  }
  return out;
}

}  // namespace momentkit
