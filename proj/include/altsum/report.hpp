#pragma once

// Command implementations behind the altsum CLI. Each returns the JSON report,
// a human-readable table and the process exit code (0 all hold / match,
// 1 violation or mismatch, 2 input error).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "altsum/properties.hpp"
#include "altsum/search.hpp"
#include "altsum/sequence.hpp"
#include "json.hpp"

namespace altsum {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitInputError = 2 };

struct CommandOptions {
  std::string command_echo;
  std::string expr_text;
  std::vector<std::string> seqs;  // each "a1,a2,..."
  std::string seq_file;
  std::optional<double> exponent;  // weinberger r
  int m = 2;
  long budget = 10'000;
  std::optional<std::uint64_t> seed;  // falls back to ALTSUM_SEED, then 0
  double bound = 10.0;
  int grid_n = 200;
  std::string grid_layout = "mixed";
  std::string strategy = "pattern";
  unsigned workers = 1;
  bool force_grid = false;
  double rel_tol = kDefaultRelTol;
};

struct CommandResult {
  nlohmann::ordered_json report;
  std::string table;
  int exit_code = kExitOk;
};

/// Seed from the options, else ALTSUM_SEED, else 0. Throws on a malformed
/// environment value.
std::uint64_t resolve_seed(const CommandOptions& opts);

/// One sequence per line, comma separated; '#' starts a comment.
std::vector<AltSequence> read_sequence_file(const std::string& path);
std::vector<AltSequence> parse_sequence_lines(std::string_view text);

nlohmann::ordered_json to_json(const Witness& w);
nlohmann::ordered_json to_json(const PropertyStatus& s);
nlohmann::ordered_json to_json(const PropertySet& p);
nlohmann::ordered_json to_json(const CheckResult& c);
nlohmann::ordered_json to_json(const SearchOutcome& o);
nlohmann::ordered_json to_json(const Classification& c);

CommandResult run_classify(const CommandOptions& opts);
CommandResult run_check(const CommandOptions& opts, CheckKind kind);
CommandResult run_search(const CommandOptions& opts);
CommandResult run_replicate(const CommandOptions& opts);

/// Dispatches by subcommand name and converts library errors into exit code 2
/// with an "error" field in the report.
CommandResult run_command(const std::string& subcommand, const CommandOptions& opts);

}  // namespace altsum
