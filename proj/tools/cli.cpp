#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "momentkit/momentkit.hpp"

namespace momentkit::cli {

namespace {

Domain make_domain(const RunConfig& c, std::size_t dim) {
  std::vector<Interval> box = c.box;
  if (box.empty()) box.assign(dim, Interval{Rational(0), Rational(1)});
  if (box.size() != dim) throw DimensionMismatch(box.size(), dim, "domain box");
  return Domain::sampled(std::move(box), static_cast<std::size_t>(c.samples), c.seed, c.tol);
}

nlohmann::json base_report(const std::string& command, const RunConfig& c) {
  return {{"command", command},        {"config", config_json(c)}, {"config_hash", config_hash(c)},
          {"seed", c.seed},            {"failures", nlohmann::json::array()},
          {"max_residual", 0.0},       {"pass", true}};
}

CommandResult input_error(nlohmann::json report, const std::string& message,
                          nlohmann::json witness = nullptr) {
  report["pass"] = false;
  report["error"] = message;
  if (!witness.is_null()) report["failures"].push_back({{"kind", "constraint"}, {"witness", witness}});
  return {kInputError, std::move(report)};
}

/// Dimension of Omega implied by a family descriptor.
std::size_t descriptor_dimension(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "trivial" || kind == "derivative") return j.contains("rank") ? j.at("rank").get<std::size_t>() : j.at("r").get<std::size_t>();
  if (kind == "identity_generated") return j.at("coefficients").at("rank").get<std::size_t>();
  if (kind == "first_order_leibniz") return funcexpr_from_json(j.at("c")).rank();
  if (kind == "second_order_leibniz") return funcexpr_from_json(j.at("a")).rank();
  if (kind == "conjugated") return descriptor_dimension(j.at("inner"));
  throw InvalidArgument("unknown family kind '" + kind + "'");
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.rank < 1) throw InvalidArgument("--rank must be at least 1");
  if (c.order < 0) throw InvalidArgument("--order must be nonnegative");
  if (!(c.tol > 0)) throw InvalidArgument("--tol must be positive");
  if (c.samples < static_cast<long long>(Domain::kMinSamples)) throw InvalidArgument("--samples must be at least 8");
  if (c.probes < 1) throw InvalidArgument("--probes must be at least 1");
  if (c.budget < 1) throw InvalidArgument("--budget must be at least 1");
  if (!c.box.empty() && c.box.size() != static_cast<std::size_t>(c.rank))
    throw InvalidArgument("--box must list one interval per coordinate");
}

bool apply_env_overrides(RunConfig& c) {
  const char* env = std::getenv("MOMENT_LEIBNIZ_SEED");
  if (!env) return true;
  std::string s(env);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return false;
  try {
    c.seed = std::stoull(s);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json box = nlohmann::json::array();
  for (const auto& iv : c.box) box.push_back({rational_json(iv.lo), rational_json(iv.hi)});
  return {{"rank", c.rank},     {"order", c.order},   {"box", box},
          {"samples", c.samples}, {"seed", c.seed},   {"tol", c.tol},
          {"budget", c.budget}, {"probes", c.probes}, {"max_support", c.max_support}};
}

std::string config_hash(const RunConfig& c) {
  const std::string s = config_json(c).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

CommandResult cmd_verify_leibniz(const RunConfig& c) {
  auto report = base_report("verify-leibniz", c);
  try {
    validate(c);
  } catch (const Error& e) {
    return input_error(std::move(report), e.what());
  }
  const auto r = static_cast<std::size_t>(c.rank);
  const auto indices = enumerate_height_at_most(r, static_cast<std::uint64_t>(c.order));
  std::mt19937_64 rng(c.seed);
  std::size_t checks = 0;
  for (long long p = 0; p < c.probes; ++p) {
    const Polynomial f = random_polynomial(rng, r);
    const Polynomial g = random_polynomial(rng, r);
    for (const auto& alpha : indices) {
      ++checks;
      if (!check_leibniz(f, g, alpha)) report["failures"].push_back({{"f", f}, {"g", g}, {"alpha", alpha}});
    }
  }
  report["checks"] = checks;
  report["exact"] = true;
  report["pass"] = report["failures"].empty();
  return {report["pass"].get<bool>() ? kPass : kMathFailure, std::move(report)};
}

CommandResult cmd_verify_family(const RunConfig& c, const nlohmann::json& descriptor) {
  auto report = base_report("verify-family", c);
  report["descriptor"] = descriptor;
  try {
    validate(c);
    const std::size_t dim = descriptor_dimension(descriptor);
    const Domain domain = descriptor.contains("domain") ? domain_from_json(descriptor.at("domain"))
                                                        : make_domain(c, dim);
    const OperatorFamily family = family_from_json(descriptor, domain);
    const auto probes = make_probe_pairs(domain, static_cast<std::size_t>(c.probes), c.seed);
    const MomentReport mr = verify_moment(family, probes, domain, c.seed);
    report["moment_report"] = mr;
    report["max_residual"] = mr.max_residual;
    report["pass"] = mr.pass;
    if (!mr.pass) report["failures"].push_back(nlohmann::json(mr).at("witness"));
    return {mr.pass ? kPass : kMathFailure, std::move(report)};
  } catch (const ConstraintViolation& e) {
    return input_error(std::move(report), e.what(), e.witness());
  } catch (const Error& e) {
    return input_error(std::move(report), e.what());
  } catch (const nlohmann::json::exception& e) {
    return input_error(std::move(report), std::string("malformed descriptor: ") + e.what());
  }
}

CommandResult cmd_search_supports(const RunConfig& c) {
  auto report = base_report("search-supports", c);
  try {
    validate(c);
    SupportSearchOptions opts;
    opts.index_budget = static_cast<std::size_t>(c.budget);
    if (c.max_support >= 0) opts.max_support_size = static_cast<std::size_t>(c.max_support);
    const auto supports =
        enumerate_valid_constant_supports(static_cast<std::size_t>(c.rank), static_cast<std::uint64_t>(c.order), opts);
    report["supports"] = supports;
    report["count"] = supports.size();
    return {kPass, std::move(report)};
  } catch (const BudgetExceeded& e) {
    report["pass"] = false;
    report["error"] = e.what();
    return {kBudgetExceeded, std::move(report)};
  } catch (const Error& e) {
    return input_error(std::move(report), e.what());
  }
}

CommandResult cmd_verify_semigroup(const RunConfig& c, const SemigroupOptions& o) {
  auto report = base_report("verify-semigroup", c);
  report["lambdas"] = o.lambdas;
  report["sweep"] = o.sweep;
  report["tamper"] = o.tamper;
  try {
    validate(c);
    if (o.sweep < 1) throw InvalidArgument("--sweep must be at least 1");
  } catch (const Error& e) {
    return input_error(std::move(report), e.what());
  }
  const auto r = static_cast<std::size_t>(c.rank);
  const auto n = static_cast<std::uint64_t>(c.order);
  nlohmann::json runs = nlohmann::json::array();
  double worst = 0;
  for (long long s = 0; s < o.sweep; ++s) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    std::bernoulli_distribution flip(0.5);
    std::vector<double> cs(r);
    for (auto& v : cs) v = flip(rng) ? -scale(rng) : scale(rng);
    for (double lambda : o.lambdas) {
      MomentSeq seq = make_exponential_moment_seq(r, n, lambda, cs);
      if (o.tamper) {
        // 1.01 f + 0.01 breaks the identity at every order, including the linear f_1.
        std::vector<MultiIndex::value_type> e(r, 0);
        e[0] = static_cast<MultiIndex::value_type>(std::min<std::uint64_t>(n, 2));
        const MultiIndex target(std::move(e));
        SeqFunction orig = seq.function(target);
        seq = seq.with_function(target, [orig](const MonoidElement& x) { return 1.01 * orig(x) + 0.01; });
      }
      const auto probes = Monoid::reals().random_pairs(static_cast<std::size_t>(c.probes), seed);
      const SeqReport sr = verify_moment_seq(seq, probes, std::min(c.tol, kSeqTolerance));
      worst = std::max(worst, sr.max_residual);
      runs.push_back({{"seed", seed}, {"lambda", lambda}, {"params", seq.params()}, {"report", sr}});
      if (!sr.pass) report["failures"].push_back(nlohmann::json(sr).at("witness"));
    }
  }
  report["runs"] = runs;
  report["max_residual"] = worst;
  report["pass"] = report["failures"].empty();
  return {report["pass"].get<bool>() ? kPass : kMathFailure, std::move(report)};
}

CommandResult cmd_gen_family(const RunConfig& c, const std::optional<nlohmann::json>& support) {
  auto report = base_report("gen-family", c);
  try {
    validate(c);
    SupportPattern pattern;
    pattern.rank = static_cast<std::size_t>(c.rank);
    pattern.order = static_cast<std::uint64_t>(c.order);
    if (support) {
      if (support->is_object()) {
        pattern = support_pattern_from_json(*support);
      } else {
        for (const auto& a : *support) pattern.support.insert(a.get<MultiIndex>());
      }
    } else {
      for (const auto& a : nonzero_indices(pattern.rank, pattern.order))
        if (2 * a.height() > pattern.order) pattern.support.insert(a);
    }
    pattern.validate();
    const CoeffFamily cf = random_valid_family(pattern, c.seed);
    const Domain domain = make_domain(c, cf.rank());
    const ConstraintReport cr = check_constraint(cf, domain);
    report["pattern"] = pattern;
    report["descriptor"] = {{"kind", "identity_generated"}, {"coefficients", cf}};
    report["constraint"] = cr;
    report["max_residual"] = cr.max_abs;
    report["pass"] = cr.pass;
    if (!cr.pass) report["failures"].push_back(nlohmann::json(cr).at("witness"));
    return {cr.pass ? kPass : kMathFailure, std::move(report)};
  } catch (const Error& e) {
    return input_error(std::move(report), e.what());
  } catch (const nlohmann::json::exception& e) {
    return input_error(std::move(report), std::string("malformed support: ") + e.what());
  }
}

nlohmann::json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return nlohmann::json::parse(text);
  std::ifstream in(text);
  if (!in) throw InvalidArgument("cannot open '" + text + "'");
  return nlohmann::json::parse(in);
}

std::string render(const nlohmann::json& report) { return report.dump(2) + "\n"; }

}  // namespace momentkit::cli
