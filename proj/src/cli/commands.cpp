#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "altsum/error.hpp"
#include "altsum/report.hpp"

namespace altsum {

using nlohmann::ordered_json;

std::uint64_t resolve_seed(const CommandOptions& opts) {
  if (opts.seed) return *opts.seed;
  const char* env = std::getenv("ALTSUM_SEED");
  if (!env || !*env) return 0;
  std::string_view v(env);
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ArgumentError("ALTSUM_SEED is not an unsigned integer: '" + std::string(v) + "'");
  return seed;
}

std::vector<AltSequence> parse_sequence_lines(std::string_view text) {
  std::vector<AltSequence> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != line.npos) {
      try {
        out.push_back(parse_sequence(line));
      } catch (const Error& e) {
        throw Error("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == text.npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<AltSequence> read_sequence_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open sequence file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sequence_lines(buf.str());
}

namespace {

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string fixed(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

ordered_json to_json(const Witness& w) {
  ordered_json j;
  j["form"] = to_string(w.form);
  j["x"] = number(w.x);
  switch (w.form) {
    case WitnessForm::Negativity:
    case WitnessForm::PositiveOrigin: break;
    default: j["y"] = number(w.y);
  }
  j["violation"] = number(w.violation);
  return j;
}

ordered_json to_json(const PropertyStatus& s) {
  ordered_json j;
  j["status"] = to_string(s.value);
  j["rules"] = s.rules;
  j["witness"] = s.witness ? to_json(*s.witness) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const PropertySet& p) {
  ordered_json j;
  for (Property prop : kAllProperties) j[to_string(prop)] = to_json(p[prop]);
  return j;
}

ordered_json to_json(const CheckResult& c) {
  ordered_json j;
  j["kind"] = to_string(c.kind);
  j["sequence"] = c.sequence;
  j["lhs"] = number(c.lhs);
  j["rhs"] = number(c.rhs);
  j["margin"] = number(c.margin);
  j["tolerance"] = number(c.tolerance);
  j["holds"] = c.holds;
  return j;
}

ordered_json to_json(const SearchOutcome& o) {
  ordered_json j;
  if (o.best_seq) {
    j["best_seq"] = std::vector<double>(o.best_seq->values().begin(), o.best_seq->values().end());
  } else {
    j["best_seq"] = nullptr;
  }
  j["best_margin"] = number(o.best_margin);
  j["best_tolerance"] = number(o.best_tolerance);
  j["evaluations"] = o.evaluations;
  j["seed"] = o.seed;
  j["violated"] = o.violated;
  return j;
}

ordered_json to_json(const Classification& c) {
  ordered_json j;
  j["propagated"] = to_json(c.propagated);
  ordered_json grid;
  grid["bound"] = c.grid.bound;
  grid["points"] = c.grid.points;
  grid["layout"] = to_string(c.grid.layout);
  grid["seed"] = c.grid.seed;
  grid["results"] = ordered_json::array();
  for (const GridResult& r : c.grid_results) {
    ordered_json g;
    g["property"] = to_string(r.property);
    g["status"] = to_string(r.verdict.status.value);
    g["witness"] = r.verdict.witness ? to_json(*r.verdict.witness) : ordered_json(nullptr);
    g["pairs_tested"] = r.verdict.pairs_tested;
    grid["results"].push_back(std::move(g));
  }
  j["grid"] = std::move(grid);
  j["combined"] = to_json(c.combined);
  j["conflicts"] = ordered_json::array();
  for (Property p : c.conflicts) j["conflicts"].push_back(to_string(p));
  return j;
}

namespace {

ordered_json skeleton(const CommandOptions& opts, const std::string& expression,
                      std::uint64_t seed) {
  ordered_json j;
  j["tool"] = "altsum";
  j["version"] = kToolVersion;
  j["command"] = opts.command_echo;
  j["expression"] = expression;
  j["properties"] = nullptr;
  j["checks"] = ordered_json::array();
  j["search"] = nullptr;
  j["timing_ms"] = 0.0;
  j["seed"] = seed;
  j["tolerance"] = opts.rel_tol;
  return j;
}

GridLayout parse_layout(const std::string& s) {
  if (s == "uniform") return GridLayout::Uniform;
  if (s == "geometric") return GridLayout::Geometric;
  if (s == "mixed") return GridLayout::Mixed;
  throw ArgumentError("unknown grid layout '" + s + "'");
}

void check_tolerance(const CommandOptions& opts) {
  if (!(opts.rel_tol >= 0.0) || !std::isfinite(opts.rel_tol))
    throw ArgumentError("tolerance must be a finite value >= 0");
}

Expr require_expr(const CommandOptions& opts) {
  if (opts.expr_text.empty()) throw ArgumentError("--expr is required");
  return parse(opts.expr_text);
}

std::vector<AltSequence> gather_sequences(const CommandOptions& opts) {
  std::vector<AltSequence> seqs;
  for (const std::string& s : opts.seqs) seqs.push_back(parse_sequence(s));
  if (!opts.seq_file.empty()) {
    auto more = read_sequence_file(opts.seq_file);
    seqs.insert(seqs.end(), more.begin(), more.end());
  }
  if (seqs.empty()) throw ArgumentError("no sequences given (use --seq or --seq-file)");
  return seqs;
}

std::string property_table(const Classification& c) {
  std::ostringstream os;
  os << pad("property", 16) << pad("propagated", 12) << pad("grid", 10) << "combined\n";
  for (Property p : kAllProperties) {
    std::string grid = "-";
    for (const GridResult& r : c.grid_results)
      if (r.property == p) grid = to_string(r.verdict.status.value);
    os << pad(to_string(p), 16) << pad(to_string(c.propagated[p].value), 12) << pad(grid, 10)
       << to_string(c.combined[p].value);
    if (const auto& w = c.combined[p].witness) {
      os << "  witness " << to_string(w->form) << " x=" << fixed(w->x);
      if (w->form != WitnessForm::Negativity && w->form != WitnessForm::PositiveOrigin)
        os << " y=" << fixed(w->y);
      os << " violation=" << fixed(w->violation);
    }
    os << "\n";
  }
  return os.str();
}

std::string check_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  os << pad("sequence", 32) << pad("lhs", 14) << pad("rhs", 14) << pad("margin", 14) << "verdict\n";
  for (const CheckResult& r : results) {
    std::string seq;
    for (std::size_t i = 0; i < r.sequence.size(); ++i)
      seq += (i ? "," : "") + format_number(r.sequence[i]);
    os << pad(seq + " ", 32) << pad(fixed(r.lhs), 14) << pad(fixed(r.rhs), 14)
       << pad(fixed(r.margin), 14) << (r.holds ? "holds" : "VIOLATED") << "\n";
  }
  return os.str();
}

int series_truncation(const Expr& e) {
  if (e.kind() == NodeKind::Series) return e.truncation();
  for (const Expr& c : e.children())
    if (int n = series_truncation(c)) return n;
  return 0;
}

std::string notes(const Expr& e, CheckKind kind) {
  std::string out;
  if (int n = series_truncation(e))
    out += "note: series are finite sums (first truncation found: " + std::to_string(n) +
           " terms)\n";
  if (kind == CheckKind::Szego)
    out += "note: ordering is tested non-strictly; equal neighbours are accepted\n";
  return out;
}

}  // namespace

CommandResult run_classify(const CommandOptions& opts) {
  check_tolerance(opts);
  const std::uint64_t seed = resolve_seed(opts);
  Expr expr = require_expr(opts);
  GridSpec grid{opts.bound, opts.grid_n, parse_layout(opts.grid_layout), seed};
  Classification c = classify(expr, grid, opts.force_grid, {opts.rel_tol, opts.workers});

  CommandResult out;
  out.report = skeleton(opts, print(expr), seed);
  out.report["properties"] = to_json(c);
  out.table = "expression: " + print(expr) + "\n" + property_table(c) +
              notes(expr, CheckKind::Generalized);
  out.exit_code = c.conflicts.empty() ? kExitOk : kExitViolation;
  return out;
}

CommandResult run_check(const CommandOptions& opts, CheckKind kind) {
  check_tolerance(opts);
  const std::uint64_t seed = resolve_seed(opts);
  Expr expr = identity();
  if (kind == CheckKind::Weinberger) {
    if (!opts.exponent) throw ArgumentError("--r is required for weinberger");
    const double r = *opts.exponent;
    if (!(r > 1.0) || !std::isfinite(r))
      throw ArgumentError("InvalidExponent: Weinberger's inequality needs r > 1, got " +
                          format_number(r));
    expr = power(r);
  } else {
    expr = require_expr(opts);
  }
  std::vector<AltSequence> seqs = gather_sequences(opts);
  std::vector<CheckResult> results = check_batch(expr, seqs, kind, opts.rel_tol, opts.workers);

  CommandResult out;
  out.report = skeleton(opts, print(expr), seed);
  out.report["properties"] = {{"propagated", to_json(propagate(expr, opts.rel_tol))}};
  bool all_hold = true;
  for (const CheckResult& r : results) {
    out.report["checks"].push_back(to_json(r));
    all_hold = all_hold && r.holds;
  }
  out.table = "expression: " + print(expr) + " (" + to_string(kind) + ")\n" +
              check_table(results) + notes(expr, kind);
  out.exit_code = all_hold ? kExitOk : kExitViolation;
  return out;
}

CommandResult run_search(const CommandOptions& opts) {
  check_tolerance(opts);
  SearchConfig cfg;
  cfg.m = opts.m;
  cfg.bound = opts.bound;
  cfg.budget = opts.budget;
  cfg.seed = resolve_seed(opts);
  cfg.strategy = parse_strategy(opts.strategy);
  cfg.rel_tol = opts.rel_tol;
  cfg.workers = opts.workers;
  Expr expr = require_expr(opts);
  SearchOutcome o = search_violation(expr, cfg);

  CommandResult out;
  out.report = skeleton(opts, print(expr), cfg.seed);
  out.report["properties"] = {{"propagated", to_json(propagate(expr, opts.rel_tol))}};
  ordered_json search = to_json(o);
  search["m"] = cfg.m;
  search["bound"] = cfg.bound;
  search["budget"] = cfg.budget;
  search["strategy"] = to_string(cfg.strategy);
  out.report["search"] = std::move(search);
  std::vector<CheckResult> rows;
  if (o.best_seq) {
    rows.push_back(check_generalized(expr, *o.best_seq, opts.rel_tol));
    out.report["checks"].push_back(to_json(rows.back()));
  }
  std::ostringstream os;
  os << "expression: " << print(expr) << "  m=" << cfg.m << " budget=" << cfg.budget
     << " seed=" << cfg.seed << " strategy=" << to_string(cfg.strategy) << "\n"
     << "evaluations: " << o.evaluations << "  best margin: " << fixed(o.best_margin)
     << "  " << (o.violated ? "VIOLATED" : "no violation found") << "\n";
  if (!rows.empty()) os << check_table(rows);
  out.table = os.str();
  out.exit_code = o.violated ? kExitViolation : kExitOk;
  return out;
}

namespace {

struct Replication {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass;
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace

CommandResult run_replicate(const CommandOptions& opts) {
  check_tolerance(opts);
  const std::uint64_t seed = resolve_seed(opts);
  const double rel = opts.rel_tol;
  CommandResult out;
  out.report = skeleton(opts, "", seed);
  std::vector<Replication> items;
  std::vector<CheckResult> checks;

  auto check = [&](const Expr& e, std::vector<double> seq) {
    checks.push_back(check_generalized(e, validate_sequence(std::move(seq)), rel));
    return checks.back();
  };

  {
    CheckResult r = check(exp_fn(), {1.0, 0.1});
    bool pass = near(r.lhs, 2.4596, 1e-3) && near(r.rhs, 1.61311, 1e-3) && !r.holds;
    items.push_back({"exp on (1, 0.1) violates the inequality",
                     "lhs 2.4596 +- 1e-3, rhs 1.61311 +- 1e-3, violated",
                     "lhs " + fixed(r.lhs) + ", rhs " + fixed(r.rhs) +
                         (r.holds ? ", holds" : ", violated"),
                     pass});
  }
  {
    CheckResult r = check(floor_fn(), {4.6, 3.1, 2.8, 1.2});
    bool pass = r.lhs == 3.0 && r.rhs == 2.0 && r.margin == -1.0 && !r.holds;
    items.push_back({"floor on (4.6, 3.1, 2.8, 1.2) fails with four terms",
                     "lhs 3, rhs 2, margin -1, violated",
                     "lhs " + fixed(r.lhs) + ", rhs " + fixed(r.rhs) + ", margin " +
                         fixed(r.margin) + (r.holds ? ", holds" : ", violated"),
                     pass});
  }
  {
    CheckResult r = check(power(2), {3, 2, 1});
    items.push_back({"x^2 on (3, 2, 1)", "lhs 4, rhs 6, holds",
                     "lhs " + fixed(r.lhs) + ", rhs " + fixed(r.rhs) +
                         (r.holds ? ", holds" : ", violated"),
                     r.lhs == 4.0 && r.rhs == 6.0 && r.holds});
  }
  {
    int failures = 0, total = 0;
    for (double r : {1.5, 2.0, 3.0}) {
      for (int m = 1; m <= 9; ++m) {
        for (const AltSequence& s : sample_sequences(m, 20, 10.0, seed + m)) {
          ++total;
          if (!check_weinberger(r, s, rel).holds) ++failures;
        }
      }
    }
    items.push_back({"x^r, r in {1.5, 2, 3}, random sequences m = 1..9",
                     "all hold", std::to_string(total - failures) + "/" + std::to_string(total) +
                                     " hold",
                     failures == 0});
  }
  {
    CheckResult r = check(exp_fn(), {1.0, 0.5, 0.2});
    items.push_back({"exp on the odd-length sequence (1, 0.5, 0.2)", "holds",
                     r.holds ? "holds" : "violated", r.holds});
  }
  {
    CheckResult r = check(parse("pow(2) + pow(4) + pow(6)"), {1.0, 0.1});
    items.push_back({"x^2 + x^4 + x^6 on the even-length sequence (1, 0.1)", "holds",
                     r.holds ? "holds" : "violated", r.holds});
  }
  {
    Expr tail = exp_taylor_tail();
    Expr closed = parse("exp() - id() - 1");
    PropertySet p = propagate(tail, rel);
    double diff = std::fabs(eval(tail, 1.0) - eval(closed, 1.0));
    items.push_back({"Taylor tail of e^x - x - 1 is in W and matches the closed form",
                     "in_W Proven, |difference at 1| < 1e-12",
                     std::string("in_W ") + to_string(p.in_w.value) + ", difference " + fixed(diff),
                     p.in_w.proven() && diff < 1e-12});
  }

  struct Expected {
    const char* text;
    Property prop;
    Status status;
  };
  const Expected classes[] = {
      {"floor()", Property::InW, Status::Proven},
      {"floor()", Property::Convex, Status::Refuted},
      {"xlogx()", Property::Convex, Status::Proven},
      {"xlogx()", Property::InW, Status::Proven},
      {"exp()", Property::Convex, Status::Proven},
      {"exp()", Property::InW, Status::Refuted},
  };
  GridSpec grid{opts.bound, opts.grid_n, GridLayout::Mixed, 0};
  for (const Expected& e : classes) {
    Classification c = classify(parse(e.text), grid, false, {rel, opts.workers});
    const PropertyStatus& s = c.combined[e.prop];
    bool pass = s.value == e.status && c.conflicts.empty() &&
                (!s.refuted() || (s.witness && reverifies(parse(e.text), *s.witness, rel)));
    items.push_back({std::string("classify ") + e.text + " " + to_string(e.prop),
                     to_string(e.status), to_string(s.value), pass});
  }

  bool all = true;
  out.report["replications"] = ordered_json::array();
  std::ostringstream os;
  for (const Replication& r : items) {
    all = all && r.pass;
    out.report["replications"].push_back(
        {{"name", r.name}, {"expected", r.expected}, {"observed", r.observed}, {"pass", r.pass}});
    os << (r.pass ? "[MATCH]    " : "[MISMATCH] ") << r.name << ": " << r.observed
       << (r.pass ? "" : "  (expected " + r.expected + ")") << "\n";
  }
  for (const CheckResult& c : checks) out.report["checks"].push_back(to_json(c));
  os << (all ? "all replications match\n" : "replication mismatch\n");
  out.table = os.str();
  out.exit_code = all ? kExitOk : kExitViolation;
  return out;
}

CommandResult run_command(const std::string& subcommand, const CommandOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  CommandResult out;
  try {
    if (subcommand == "classify") out = run_classify(opts);
    else if (subcommand == "check") out = run_check(opts, CheckKind::Generalized);
    else if (subcommand == "szego") out = run_check(opts, CheckKind::Szego);
    else if (subcommand == "weinberger") out = run_check(opts, CheckKind::Weinberger);
    else if (subcommand == "search") out = run_search(opts);
    else if (subcommand == "replicate") out = run_replicate(opts);
    else throw ArgumentError("unknown subcommand '" + subcommand + "'");
  } catch (const std::exception& e) {
    std::uint64_t seed = 0;
    try {
      seed = resolve_seed(opts);
    } catch (const Error&) {
    }
    out = CommandResult{};
    out.report = skeleton(opts, opts.expr_text, seed);
    out.report["error"] = e.what();
    out.table = std::string("error: ") + e.what() + "\n";
    out.exit_code = kExitInputError;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  out.report["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  out.report["exit_code"] = out.exit_code;
  return out;
}

}  // namespace altsum
