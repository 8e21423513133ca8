#include "momentkit/coeffsolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

void require_index(const MultiIndex& a, std::size_t rank, std::uint64_t order, const char* where) {
  if (a.rank() != rank) throw DimensionMismatch(a.rank(), rank, where);
  if (a.is_zero() || a.height() > order)
    throw InvalidArgument(std::string(where) + ": index " + a.to_string() + " outside 0 < |alpha| <= " +
                          std::to_string(order));
}

}  // namespace

CoeffFamily::CoeffFamily(std::size_t rank, std::uint64_t order, std::map<MultiIndex, FuncExpr> coefficients)
    : rank_(rank), order_(order), coefficients_(std::move(coefficients)) {
  if (rank_ == 0) throw InvalidArgument("CoeffFamily: rank must be at least 1");
  for (const auto& [a, c] : coefficients_) {
    require_index(a, rank_, order_, "CoeffFamily");
    if (c.rank() != rank_) throw DimensionMismatch(c.rank(), rank_, "CoeffFamily coefficient");
  }
}

const FuncExpr* CoeffFamily::find(const MultiIndex& alpha) const {
  auto it = coefficients_.find(alpha);
  return it == coefficients_.end() ? nullptr : &it->second;
}

std::set<MultiIndex> CoeffFamily::support() const {
  std::set<MultiIndex> s;
  for (const auto& [a, c] : coefficients_) s.insert(a);
  return s;
}

void to_json(nlohmann::json& j, const CoeffFamily& cf) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [a, c] : cf.coefficients()) coeffs.push_back({{"alpha", a}, {"c", c}});
  j = {{"rank", cf.rank()}, {"order", cf.order()}, {"coefficients", coeffs}};
}

CoeffFamily coeff_family_from_json(const nlohmann::json& j) {
  const auto rank = j.at("rank").get<std::size_t>();
  const auto order = j.at("order").get<std::uint64_t>();
  std::map<MultiIndex, FuncExpr> coeffs;
  for (const auto& e : j.value("coefficients", nlohmann::json::array())) {
    auto a = e.at("alpha").get<MultiIndex>();
    if (!coeffs.emplace(a, funcexpr_from_json(e.at("c"))).second)
      throw InvalidArgument("CoeffFamily JSON: duplicate index " + a.to_string());
  }
  return CoeffFamily(rank, order, std::move(coeffs));
}

double constraint_sum(const CoeffFamily& cf, const MultiIndex& alpha, const RationalPoint& x) {
  double s = 0;
  for (const auto& beta : enumerate_below(alpha)) {
    if (beta.is_zero() || beta == alpha) continue;
    const FuncExpr* cb = cf.find(beta);
    if (!cb) continue;
    const FuncExpr* cr = cf.find(sub(alpha, beta));
    if (!cr) continue;
    // Binomials are exact integers; only the pointwise values are floating.
    s += binom(alpha, beta).get_d() * cb->eval(x) * cr->eval(x);
  }
  return s;
}

ConstraintReport check_constraint(const CoeffFamily& cf, const Domain& domain) {
  if (domain.dimension() != cf.rank()) throw DimensionMismatch(domain.dimension(), cf.rank(), "check_constraint");
  ConstraintReport report;
  for (const auto& alpha : nonzero_indices(cf.rank(), cf.order())) {
    if (alpha.height() < 2) continue;
    double worst = 0;
    for (const auto& x : domain.samples()) {
      const double v = std::fabs(constraint_sum(cf, alpha, x));
      worst = std::max(worst, v);
      if (!report.worst_alpha || v > report.max_abs) {
        report.max_abs = v;
        report.worst_alpha = alpha;
        report.worst_point = x;
      }
    }
    report.per_alpha[alpha] = worst;
  }
  report.pass = report.max_abs <= domain.tolerance();
  return report;
}

void to_json(nlohmann::json& j, const ConstraintReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [a, v] : r.per_alpha) per.push_back({{"alpha", a}, {"max_abs", v}});
  j = {{"pass", r.pass}, {"max_abs", r.max_abs}, {"per_alpha", per}, {"witness", nullptr}};
  if (r.worst_alpha && !r.pass) j["witness"] = {{"alpha", *r.worst_alpha}, {"x", *r.worst_point}, {"value", r.max_abs}};
}

void SupportPattern::validate() const {
  if (rank == 0) throw InvalidArgument("SupportPattern: rank must be at least 1");
  for (const auto& a : support) require_index(a, rank, order, "SupportPattern");
  if (certificate) {
    for (const auto& [a, v] : *certificate) {
      if (!support.contains(a)) throw InvalidArgument("SupportPattern: certificate index outside support");
      if (v == 0) throw InvalidArgument("SupportPattern: certificate values must be nonzero");
    }
    if (certificate->size() != support.size())
      throw InvalidArgument("SupportPattern: certificate must cover the whole support");
  }
}

void to_json(nlohmann::json& j, const SupportPattern& p) {
  nlohmann::json support = nlohmann::json::array();
  for (const auto& a : p.support) support.push_back(a);
  j = {{"rank", p.rank}, {"order", p.order}, {"support", support}, {"certificate", nullptr}};
  if (p.certificate) {
    nlohmann::json cert = nlohmann::json::array();
    for (const auto& [a, v] : *p.certificate) cert.push_back({{"alpha", a}, {"value", rational_json(v)}});
    j["certificate"] = cert;
  }
}

SupportPattern support_pattern_from_json(const nlohmann::json& j) {
  SupportPattern p;
  p.rank = j.at("rank").get<std::size_t>();
  p.order = j.at("order").get<std::uint64_t>();
  for (const auto& a : j.at("support")) p.support.insert(a.get<MultiIndex>());
  if (j.contains("certificate") && !j.at("certificate").is_null()) {
    std::map<MultiIndex, Rational> cert;
    for (const auto& e : j.at("certificate")) cert[e.at("alpha").get<MultiIndex>()] = rational_from_json(e.at("value"));
    p.certificate = std::move(cert);
  }
  p.validate();
  return p;
}

std::vector<MultiIndex> nonzero_indices(std::size_t rank, std::uint64_t order) {
  auto all = enumerate_height_at_most(rank, order);
  all.erase(all.begin());  // the zero index sorts first
  return all;
}

std::vector<std::pair<MultiIndex, MultiIndex>> decompositions(const MultiIndex& alpha,
                                                              const std::set<MultiIndex>& support) {
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  for (const auto& beta : support) {
    if (beta.rank() != alpha.rank() || !strictly_below(beta, alpha)) continue;
    MultiIndex rest = sub(alpha, beta);
    if (!rest.is_zero() && support.contains(rest)) out.emplace_back(beta, std::move(rest));
  }
  return out;
}

bool is_structure_valid(const SupportPattern& pattern) {
  for (const auto& b : pattern.support)
    for (const auto& c : pattern.support)
      if (b.height() + c.height() <= pattern.order) return false;
  return true;
}

std::set<MultiIndex> forced_zero_analysis(const SupportPattern& pattern) {
  pattern.validate();
  std::set<MultiIndex> live = pattern.support;
  std::set<MultiIndex> forced;
  while (true) {
    std::vector<MultiIndex> round;
    for (const auto& gamma : live) {
      if (2 * gamma.height() > pattern.order) continue;
      const auto ds = decompositions(add(gamma, gamma), live);
      if (ds.size() == 1) round.push_back(gamma);  // necessarily (gamma, gamma)
    }
    if (round.empty()) return forced;
    for (const auto& g : round) {
      live.erase(g);
      forced.insert(g);
    }
  }
}

std::vector<Rational> certificate_values() {
  std::set<Rational> vals;
  for (int p = -3; p <= 3; ++p) {
    if (p == 0) continue;
    for (int q = 1; q <= 3; ++q) {
      Rational v{mpz_class(p), mpz_class(q)};
      v.canonicalize();
      vals.insert(v);
    }
  }
  return {vals.begin(), vals.end()};
}

std::optional<std::map<MultiIndex, Rational>> find_certificate(std::size_t rank, std::uint64_t order,
                                                               const std::set<MultiIndex>& support) {
  // Elements appearing in no decomposition are unconstrained and get 1.
  std::set<MultiIndex> involved;
  std::vector<std::pair<MultiIndex, std::vector<std::pair<MultiIndex, MultiIndex>>>> constraints;
  for (const auto& alpha : nonzero_indices(rank, order)) {
    auto ds = decompositions(alpha, support);
    if (ds.empty()) continue;
    for (const auto& [b, c] : ds) {
      involved.insert(b);
      involved.insert(c);
    }
    constraints.emplace_back(alpha, std::move(ds));
  }

  std::vector<MultiIndex> order_vars(involved.begin(), involved.end());
  std::stable_sort(order_vars.begin(), order_vars.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return a.height() < b.height(); });
  std::map<MultiIndex, std::size_t> position;
  for (std::size_t i = 0; i < order_vars.size(); ++i) position[order_vars[i]] = i;

  // Each constraint is checked once its last variable is assigned.
  std::vector<std::vector<std::size_t>> due(order_vars.size());
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    std::size_t last = 0;
    for (const auto& [b, c] : constraints[k].second) last = std::max({last, position[b], position[c]});
    due[last].push_back(k);
  }

  const auto values = certificate_values();
  std::vector<Rational> assign(order_vars.size());

  auto satisfied = [&](std::size_t k) {
    Rational s = 0;
    for (const auto& [b, c] : constraints[k].second)
      s += Rational(binom(constraints[k].first, b)) * assign[position[b]] * assign[position[c]];
    return s == 0;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == order_vars.size()) return true;
    for (const auto& v : values) {
      assign[i] = v;
      bool ok = true;
      for (auto k : due[i])
        if (!satisfied(k)) {
          ok = false;
          break;
        }
      if (ok && search(i + 1)) return true;
    }
    return false;
  };

  if (!search(0)) return std::nullopt;
  std::map<MultiIndex, Rational> cert;
  for (const auto& a : support) cert[a] = involved.contains(a) ? assign[position[a]] : Rational(1);
  return cert;
}

std::vector<SupportPattern> enumerate_valid_constant_supports(std::size_t rank, std::uint64_t order,
                                                              const SupportSearchOptions& options) {
  if (rank == 0) throw InvalidArgument("enumerate_valid_constant_supports: rank must be at least 1");
  const auto indices = nonzero_indices(rank, order);
  if (indices.size() > options.index_budget || indices.size() >= 63)
    throw BudgetExceeded("support search: " + std::to_string(indices.size()) + " indices exceed the budget of " +
                         std::to_string(options.index_budget));
  const std::uint64_t n = indices.size();
  const std::size_t max_size = std::min<std::size_t>(options.max_support_size, n);

  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
    if (static_cast<std::size_t>(std::popcount(m)) <= max_size) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });

  std::vector<SupportPattern> out;
  for (auto m : masks) {
    SupportPattern p{rank, order, {}, std::nullopt};
    for (std::uint64_t i = 0; i < n; ++i)
      if (m >> i & 1u) p.support.insert(indices[i]);
    if (is_structure_valid(p)) {
      out.push_back(std::move(p));
      continue;
    }
    // A square forced to vanish contradicts a nonzero constant on that index.
    if (!forced_zero_analysis(p).empty()) continue;
    if (auto cert = find_certificate(rank, order, p.support)) {
      p.certificate = std::move(cert);
      out.push_back(std::move(p));
    }
  }
  return out;
}

CoeffFamily random_valid_family(const SupportPattern& pattern, std::uint64_t seed) {
  pattern.validate();
  const bool structural = is_structure_valid(pattern);
  if (!structural && !pattern.certificate)
    throw InvalidArgument("random_valid_family: pattern is neither structure-valid nor certificate-bearing");

  std::mt19937_64 rng(seed);
  RandomPolynomialSpec spec;
  spec.max_degree = 2;
  spec.max_terms = 3;
  spec.coeff_bound = 3;
  auto nonzero_poly = [&] {
    Polynomial p(pattern.rank);
    while (p.is_zero()) p = random_polynomial(rng, pattern.rank, spec);
    return p;
  };

  std::map<MultiIndex, FuncExpr> coeffs;
  if (structural) {
    for (const auto& a : pattern.support) coeffs.emplace(a, FuncExpr::poly(nonzero_poly()));
  } else {
    // A common factor q keeps every constraint sum at q^2 * 0.
    const Polynomial q = nonzero_poly();
    for (const auto& a : pattern.support) coeffs.emplace(a, FuncExpr::poly(q * pattern.certificate->at(a)));
  }
  return CoeffFamily(pattern.rank, pattern.order, std::move(coeffs));
}

}  // namespace momentkit
