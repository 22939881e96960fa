#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "altsum/report.hpp"

namespace {

std::string shell_quote(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t\n'\"\\$`*?;&|<>()") == std::string::npos) return s;
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string echo(int argc, char** argv) {
  std::string out = "altsum";
  for (int i = 1; i < argc; ++i) out += " " + shell_quote(argv[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  altsum::CommandOptions opts;
  opts.command_echo = echo(argc, argv);
  std::string json_path;

  CLI::App app{"Checks alternating-sum inequalities and searches for counterexamples."};
  app.require_subcommand(1);
  app.set_version_flag("--version", altsum::kToolVersion);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");
    sub->add_option("--seed", opts.seed, "Random seed (default: $ALTSUM_SEED, else 0)");
    sub->add_option("--tol", opts.rel_tol, "Relative tolerance")->capture_default_str();
    sub->add_option("--workers", opts.workers, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto sequences = [&](CLI::App* sub) {
    sub->add_option("--seq", opts.seqs, "Comma-separated nonincreasing sequence (repeatable)")
        ->allow_extra_args(false);
    sub->add_option("--seq-file", opts.seq_file, "File with one sequence per line");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--bound", opts.bound, "Domain bound A")->capture_default_str();
    sub->add_option("--grid-n", opts.grid_n, "Grid points")->capture_default_str();
    sub->add_option("--grid-layout", opts.grid_layout, "uniform | geometric | mixed")
        ->capture_default_str();
    sub->add_flag("--force-grid", opts.force_grid, "Grid-test properties already proven");
  };

  auto* classify = app.add_subcommand("classify", "Classify an expression");
  classify->add_option("--expr", opts.expr_text, "Function expression")->required();
  grid(classify);
  common(classify);

  auto* check = app.add_subcommand("check", "Check the generalized inequality");
  check->add_option("--expr", opts.expr_text, "Function expression")->required();
  sequences(check);
  common(check);

  auto* szego = app.add_subcommand("szego", "Check Szego's inequality (odd length)");
  szego->add_option("--expr", opts.expr_text, "Function expression")->required();
  sequences(szego);
  common(szego);

  auto* weinberger = app.add_subcommand("weinberger", "Check Weinberger's inequality for x^r");
  weinberger->add_option("--r", opts.exponent, "Exponent r > 1")->required();
  sequences(weinberger);
  common(weinberger);

  auto* search = app.add_subcommand("search", "Search for a violating sequence");
  search->add_option("--expr", opts.expr_text, "Function expression")->required();
  search->add_option("-m,--m", opts.m, "Sequence length")->capture_default_str();
  search->add_option("--budget", opts.budget, "Evaluation budget")->capture_default_str();
  search->add_option("--bound", opts.bound, "Domain bound A")->capture_default_str();
  search->add_option("--strategy", opts.strategy, "pattern | random | grid")
      ->capture_default_str();
  common(search);

  auto* replicate = app.add_subcommand("replicate", "Re-run the published numeric examples");
  replicate->add_option("--bound", opts.bound, "Domain bound A")->capture_default_str();
  replicate->add_option("--grid-n", opts.grid_n, "Grid points")->capture_default_str();
  common(replicate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? altsum::kExitOk : altsum::kExitInputError;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return altsum::kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return altsum::kExitInputError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  altsum::CommandResult result = altsum::run_command(name, opts);

  if (result.exit_code == altsum::kExitInputError)
    std::cerr << result.table;
  else
    std::cout << result.table;

  if (!json_path.empty()) {
    const std::string text = result.report.dump(2) + "\n";
    if (json_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(json_path, std::ios::binary);
      if (!out || !(out << text)) {
        std::cerr << "error: cannot write report to '" << json_path << "'\n";
        return altsum::kExitInputError;
      }
    }
  }
  return result.exit_code;
}
