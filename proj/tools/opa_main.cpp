#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "opa/cli.hpp"

namespace {

void add_common(CLI::App* cmd, opa::cli::RunConfig& cfg, std::string& p_text) {
  cmd->add_option("--f", cfg.f_exprs, "function expression in z");
  cmd->add_option("--n", cfg.n, "polynomial degree")->check(CLI::NonNegativeNumber);
  cmd->add_option("--p", p_text, "exponent p > 1");
  cmd->add_option("--grid-log2", cfg.grid_log2, "log2 of the grid size (4..20)");
  cmd->add_option("--output", cfg.output, "json or csv");
  cmd->add_option("--method", cfg.method, "auto, gram2, convex or fixed-point");
  cmd->add_option("--tol", cfg.tol, "orthogonality residual tolerance");
  cmd->add_option("--seed", cfg.seed, "seed for randomized checks");
  cmd->add_option("--suite", cfg.suite, "pythagorean, orthogonality, sandwich, rotation or all");
  cmd->add_option("--p-list", cfg.p_list, "exponents for sweep-p")->delimiter(',');
  cmd->add_option("--n-max", cfg.n_max, "largest degree for sweep-n");
  cmd->add_option_function<std::string>(
      "--damping",
      [&cfg](const std::string& v) {
        if (v == "auto") {
          cfg.damping.reset();
        } else {
          cfg.damping = std::stod(v);
        }
      },
      "fixed-point relaxation in (0, 1], or auto");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal polynomial approximants in Hardy spaces"};
  app.require_subcommand(1);
  opa::cli::RunConfig cfg;
  std::string p_text;
  for (const char* name : {"solve", "bounds", "sweep-p", "sweep-n", "sweep-f", "roots", "check"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd, cfg, p_text);
    cmd->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : opa::cli::kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return opa::cli::kInvalidInput;
  }

  bool grid_given = false;
  for (const CLI::App* sub : app.get_subcommands()) grid_given = grid_given || sub->count("--grid-log2") > 0;
  if (!grid_given) {
    if (const char* env = std::getenv("OPA_GRID_LOG2")) {
      try {
        cfg.grid_log2 = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << "error: OPA_GRID_LOG2 is not an integer\n";
        return opa::cli::kInvalidInput;
      }
    }
  }
  if (!p_text.empty()) {
    try {
      std::size_t used = 0;
      cfg.p = std::stod(p_text, &used);
      if (used != p_text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      std::cerr << "error: --p expects a number\n";
      return opa::cli::kInvalidInput;
    }
  }
  if (cfg.damping && !(*cfg.damping > 0.0 && *cfg.damping <= 1.0)) {
    std::cerr << "error: --damping must lie in (0, 1]\n";
    return opa::cli::kInvalidInput;
  }
  return opa::cli::run(cfg, {std::cout, std::cerr});
}
