#include "momentkit/semigroup.hpp"

#include <cmath>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

double rel_residual(double lhs, double rhs, double mag) {
  return std::fabs(lhs - rhs) / (1.0 + std::max(std::fabs(lhs), mag));
}

double dot(const std::vector<double>& a, const MonoidElement& x) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

}  // namespace

Monoid Monoid::lattice(std::size_t d) {
  if (d == 0) throw InvalidArgument("Monoid::lattice: dimension must be at least 1");
  return Monoid(Carrier::NatVecAdd, d);
}

MonoidElement Monoid::op(const MonoidElement& a, const MonoidElement& b) const {
  if (a.size() != dim_) throw DimensionMismatch(a.size(), dim_, "Monoid::op");
  if (b.size() != dim_) throw DimensionMismatch(b.size(), dim_, "Monoid::op");
  MonoidElement out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<std::pair<MonoidElement, MonoidElement>> Monoid::random_pairs(std::size_t count,
                                                                          std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  std::uniform_int_distribution<int> nat(0, 5);
  auto draw = [&] {
    MonoidElement e(dim_);
    for (auto& v : e) v = carrier_ == Carrier::RealAdd ? real(rng) : nat(rng);
    return e;
  };
  std::vector<std::pair<MonoidElement, MonoidElement>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto x = draw();
    auto y = draw();
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

bool Monoid::check_laws(const std::vector<MonoidElement>& probes) const {
  const auto e = neutral();
  for (const auto& a : probes) {
    if (op(a, e) != a || op(e, a) != a) return false;
    for (const auto& b : probes) {
      if (op(a, b) != op(b, a)) return false;
      for (const auto& c : probes)
        if (op(op(a, b), c) != op(a, op(b, c))) {
          // Floating addition is only approximately associative on reals.
          if (carrier_ == Carrier::NatVecAdd) return false;
          const auto l = op(op(a, b), c);
          const auto r = op(a, op(b, c));
          for (std::size_t i = 0; i < dim_; ++i)
            if (std::fabs(l[i] - r[i]) > 1e-12 * (1 + std::fabs(l[i]))) return false;
        }
    }
  }
  return true;
}

std::string Monoid::name() const {
  return carrier_ == Carrier::RealAdd ? "reals" : "lattice" + std::to_string(dim_);
}

MomentSeq::MomentSeq(Monoid monoid, std::size_t rank, std::uint64_t order,
                     std::map<MultiIndex, SeqFunction> functions, nlohmann::json params)
    : monoid_(std::move(monoid)),
      rank_(rank),
      order_(order),
      functions_(std::move(functions)),
      params_(std::move(params)) {
  if (rank_ == 0) throw InvalidArgument("MomentSeq: rank must be at least 1");
  for (const auto& a : enumerate_height_at_most(rank_, order_))
    if (!functions_.contains(a)) throw InvalidArgument("MomentSeq: missing f_" + a.to_string());
}

const SeqFunction& MomentSeq::function(const MultiIndex& alpha) const {
  auto it = functions_.find(alpha);
  if (it == functions_.end()) throw InvalidArgument("MomentSeq: no function for " + alpha.to_string());
  return it->second;
}

MomentSeq MomentSeq::with_function(const MultiIndex& alpha, SeqFunction f) const {
  MomentSeq out = *this;
  if (!out.functions_.contains(alpha)) throw InvalidArgument("MomentSeq: no function for " + alpha.to_string());
  out.functions_[alpha] = std::move(f);
  out.params_ = {{"base", params_}, {"overridden", alpha}};
  return out;
}

MomentSeq make_exponential_moment_seq(const Monoid& monoid, std::size_t rank, std::uint64_t order,
                                      std::vector<double> lambda, std::vector<std::vector<double>> c) {
  const std::size_t d = monoid.dimension();
  if (lambda.size() != d) throw DimensionMismatch(lambda.size(), d, "make_exponential_moment_seq lambda");
  if (c.size() != rank) throw DimensionMismatch(c.size(), rank, "make_exponential_moment_seq c");
  for (const auto& ci : c)
    if (ci.size() != d) throw DimensionMismatch(ci.size(), d, "make_exponential_moment_seq c_i");

  std::map<MultiIndex, SeqFunction> fs;
  for (const auto& alpha : enumerate_height_at_most(rank, order)) {
    fs.emplace(alpha, [lambda, c, alpha](const MonoidElement& x) {
      double v = std::exp(dot(lambda, x));
      for (std::size_t i = 0; i < alpha.rank(); ++i)
        if (alpha[i]) v *= std::pow(dot(c[i], x), static_cast<double>(alpha[i]));
      return v;
    });
  }
  nlohmann::json params = {{"constructor", "exponential"}, {"carrier", monoid.name()}, {"rank", rank},
                           {"order", order},               {"lambda", lambda},         {"c", c}};
  return MomentSeq(monoid, rank, order, std::move(fs), std::move(params));
}

MomentSeq make_exponential_moment_seq(std::size_t rank, std::uint64_t order, double lambda, std::vector<double> c) {
  std::vector<std::vector<double>> cs;
  for (double ci : c) cs.push_back({ci});
  return make_exponential_moment_seq(Monoid::reals(), rank, order, {lambda}, std::move(cs));
}

MomentSeq make_zero_moment_seq(const Monoid& monoid, std::size_t rank, std::uint64_t order) {
  std::map<MultiIndex, SeqFunction> fs;
  for (const auto& alpha : enumerate_height_at_most(rank, order))
    fs.emplace(alpha, [](const MonoidElement&) { return 0.0; });
  return MomentSeq(monoid, rank, order, std::move(fs), {{"constructor", "zero"}, {"carrier", monoid.name()}});
}

std::vector<ExpansionTerm> expansion_terms(const MultiIndex& alpha) {
  std::vector<ExpansionTerm> out;
  for (auto& beta : enumerate_below(alpha)) {
    MultiIndex rest = sub(alpha, beta);
    mpz_class k = binom(alpha, beta);
    out.push_back({std::move(beta), std::move(rest), std::move(k)});
  }
  return out;
}

SeqReport verify_moment_seq(const MomentSeq& seq, const std::vector<std::pair<MonoidElement, MonoidElement>>& probes,
                            double tol) {
  SeqReport report;
  report.probe_count = probes.size();
  report.generator_exponential = check_exponential(seq.monoid(), seq.function(MultiIndex::zero(seq.rank())), probes, tol);
  for (const auto& alpha : enumerate_height_at_most(seq.rank(), seq.order())) {
    const auto terms = expansion_terms(alpha);
    double worst = 0;
    for (const auto& [x, y] : probes) {
      const double lhs = seq(alpha, seq.monoid().op(x, y));
      double rhs = 0;
      double mag = 0;
      for (const auto& t : terms) {
        const double v = t.coefficient.get_d() * seq(t.beta, x) * seq(t.rest, y);
        rhs += v;
        mag += std::fabs(v);
      }
      const double res = rel_residual(lhs, rhs, mag);
      worst = std::max(worst, res);
      if (!(res <= tol) && report.pass) {
        report.pass = false;
        report.witness = SeqWitness{alpha, x, y, lhs, rhs, res};
      }
    }
    report.per_alpha[alpha] = worst;
    report.max_residual = std::max(report.max_residual, worst);
  }
  return report;
}

bool check_exponential(const Monoid& monoid, const SeqFunction& f0,
                       const std::vector<std::pair<MonoidElement, MonoidElement>>& probes, double tol) {
  bool nonzero = false;
  for (const auto& [x, y] : probes) {
    const double fx = f0(x);
    const double fy = f0(y);
    nonzero = nonzero || fx != 0.0 || fy != 0.0;
    const double lhs = f0(monoid.op(x, y));
    if (!(rel_residual(lhs, fx * fy, std::fabs(fx * fy)) <= tol)) return false;
  }
  return nonzero;
}

void to_json(nlohmann::json& j, const SeqReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [a, v] : r.per_alpha) per.push_back({{"alpha", a}, {"max_residual", v}});
  j = {{"pass", r.pass},
       {"max_residual", r.max_residual},
       {"probe_count", r.probe_count},
       {"per_alpha", per},
       {"generator_exponential", r.generator_exponential},
       {"witness", nullptr}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"alpha", w.alpha}, {"x", w.x}, {"y", w.y}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"residual", w.residual}};
  }
}

}  // namespace momentkit
