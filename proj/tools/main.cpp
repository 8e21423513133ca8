#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "momentkit/momentkit.hpp"

namespace mk = momentkit;
namespace cli = momentkit::cli;

namespace {

struct BoxOption {
  std::string text;

  void apply(cli::RunConfig& c) const {
    if (text.empty()) return;
    c.box.clear();
    for (const auto& iv : nlohmann::json::parse(text)) {
      if (!iv.is_array() || iv.size() != 2) throw mk::InvalidArgument("--box entries must be [lo, hi]");
      c.box.push_back({mk::rational_from_json(iv[0]), mk::rational_from_json(iv[1])});
    }
  }
};

void add_common(CLI::App* sub, cli::RunConfig& c, BoxOption& box, std::string& out) {
  sub->add_option("--rank", c.rank, "Rank r (dimension of the multi-indices and of Omega)");
  sub->add_option("--order", c.order, "Order N (largest |alpha|)");
  sub->add_option("--seed", c.seed, "Seed for every random choice (MOMENT_LEIBNIZ_SEED overrides)");
  sub->add_option("--samples", c.samples, "Number of sample points in Omega (>= 8)");
  sub->add_option("--tol", c.tol, "Relative tolerance for floating comparisons");
  sub->add_option("--budget", c.budget, "Largest index set the support search may enumerate");
  sub->add_option("--probes", c.probes, "Number of probe pairs");
  sub->add_option("--box", box.text, "Omega as JSON, e.g. [[\"0\",\"1\"],[\"0\",\"2\"]]");
  sub->add_option("--out", out, "Write the JSON report to this path instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"momentkit: verification of moment-sequence identities for differential operators"};
  app.require_subcommand(1);

  cli::RunConfig config;
  BoxOption box;
  std::string out;
  std::string family_arg;
  std::string support_arg;
  cli::SemigroupOptions semigroup;

  auto* leibniz = app.add_subcommand("verify-leibniz", "Exact check of the generalized Leibniz rule on random polynomials");
  add_common(leibniz, config, box, out);

  auto* family = app.add_subcommand("verify-family", "Check the moment identity for an operator family descriptor");
  add_common(family, config, box, out);
  family->add_option("--family", family_arg, "Family descriptor: inline JSON or a file path")->required();

  auto* search = app.add_subcommand("search-supports", "Enumerate coefficient supports admitting constant solutions");
  add_common(search, config, box, out);
  search->add_option("--max-support", config.max_support, "Largest support size to try");

  auto* semi = app.add_subcommand("verify-semigroup", "Check exponential moment sequences on (R,+)");
  add_common(semi, config, box, out);
  semi->add_option("--lambda", semigroup.lambdas, "Exponential rates to sweep");
  semi->add_option("--sweep", semigroup.sweep, "Number of consecutive seeds");
  semi->add_flag("--tamper", semigroup.tamper, "Perturb one function to exercise failure reporting");

  auto* gen = app.add_subcommand("gen-family", "Emit a random coefficient family for a valid support");
  add_common(gen, config, box, out);
  gen->add_option("--support", support_arg, "Support as a JSON list of indices, or a SupportPattern object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  cli::CommandResult result;
  try {
    box.apply(config);
    if (!cli::apply_env_overrides(config)) {
      std::cerr << "MOMENT_LEIBNIZ_SEED must be an unsigned integer\n";
      return cli::kInputError;
    }
    if (*leibniz) {
      result = cli::cmd_verify_leibniz(config);
    } else if (*family) {
      result = cli::cmd_verify_family(config, cli::load_json_argument(family_arg));
    } else if (*search) {
      result = cli::cmd_search_supports(config);
    } else if (*semi) {
      result = cli::cmd_verify_semigroup(config, semigroup);
    } else {
      std::optional<nlohmann::json> support;
      if (!support_arg.empty()) support = cli::load_json_argument(support_arg);
      result = cli::cmd_gen_family(config, support);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }

  const std::string text = cli::render(result.report);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write '" << out << "'\n";
      return cli::kInputError;
    }
    f << text;
  }
  return result.exit_code;
}
