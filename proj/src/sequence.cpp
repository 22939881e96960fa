#include "altsum/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "altsum/error.hpp"

namespace altsum {

const char* to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Generalized: return "generalized";
    case CheckKind::Weinberger: return "weinberger";
    case CheckKind::Szego: return "szego";
  }
  return "?";
}

AltSequence validate_sequence(std::vector<double> values) {
  using K = SequenceError::Kind;
  if (values.empty()) throw SequenceError(K::Empty, 0);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw SequenceError(K::NonFinite, i);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i] < values[i + 1]) throw SequenceError(K::OrderViolation, i);
  if (values.back() < 0.0) throw SequenceError(K::NegativeEntry, values.size() - 1);
  return AltSequence(std::move(values));
}

AltSequence parse_sequence(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!field.empty() && is_space(field.front())) field.remove_prefix(1);
    while (!field.empty() && is_space(field.back())) field.remove_suffix(1);
    if (field.empty()) {
      if (comma == std::string_view::npos && values.empty()) break;
      throw Error("empty entry in sequence '" + std::string(text) + "'");
    }
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      throw Error("not a number: '" + std::string(field) + "'");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return validate_sequence(std::move(values));
}

double alt_sum(const AltSequence& seq) {
  double s = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) s = (i % 2 == 0) ? s + seq[i] : s - seq[i];
  return std::clamp(s, 0.0, seq.front());
}

std::vector<double> partial_alt_sums(const AltSequence& seq) {
  std::vector<double> out;
  double s = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    s = (i % 2 == 0) ? s + seq[i] : s - seq[i];
    out.push_back(s);
  }
  return out;
}

double alt_f_sum(const Expr& expr, const AltSequence& seq) {
  double s = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    double fi = 0.0;
    try {
      fi = eval(expr, seq[i]);
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " at sequence index " + std::to_string(i),
                      e.point());
    }
    s = (i % 2 == 0) ? s + fi : s - fi;
  }
  return s;
}

CheckResult check_generalized(const Expr& expr, const AltSequence& seq, double rel_tol) {
  CheckResult r;
  r.kind = CheckKind::Generalized;
  r.lhs = eval(expr, alt_sum(seq));
  r.rhs = alt_f_sum(expr, seq);
  if (!std::isfinite(r.rhs)) throw EvalError("non-finite alternating sum", seq.front());
  r.margin = r.rhs - r.lhs;
  r.tolerance = hybrid_tolerance(r.lhs, r.rhs, rel_tol);
  r.holds = r.margin >= -r.tolerance;
  r.sequence.assign(seq.values().begin(), seq.values().end());
  return r;
}

CheckResult check_weinberger(double r, const AltSequence& seq, double rel_tol) {
  if (!(r > 1.0) || !std::isfinite(r))
    throw ArgumentError("InvalidExponent: Weinberger's inequality needs r > 1, got " +
                        format_number(r));
  CheckResult res = check_generalized(power(r), seq, rel_tol);
  res.kind = CheckKind::Weinberger;
  return res;
}

CheckResult check_szego(const Expr& expr, const AltSequence& seq, double rel_tol) {
  if (seq.size() % 2 == 0)
    throw ArgumentError("EvenLength: Szego's inequality needs an odd number of terms, got " +
                        std::to_string(seq.size()));
  CheckResult res = check_generalized(expr, seq, rel_tol);
  res.kind = CheckKind::Szego;
  return res;
}

namespace {

CheckResult check_one(const Expr& expr, const AltSequence& seq, CheckKind kind, double rel) {
  switch (kind) {
    case CheckKind::Szego: return check_szego(expr, seq, rel);
    case CheckKind::Weinberger: {
      if (expr.kind() != NodeKind::Power)
        throw ArgumentError("Weinberger check needs a pow(r) expression");
      return check_weinberger(expr.param(), seq, rel);
    }
    case CheckKind::Generalized: break;
  }
  return check_generalized(expr, seq, rel);
}

}  // namespace

std::vector<CheckResult> check_batch(const Expr& expr, std::span<const AltSequence> seqs,
                                     CheckKind kind, double rel_tol, unsigned workers) {
  std::vector<CheckResult> out(seqs.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t w = std::min<std::size_t>(workers, std::max<std::size_t>(seqs.size(), 1));
  std::vector<std::exception_ptr> errors(w);
  auto run = [&](std::size_t chunk) {
    std::size_t begin = seqs.size() * chunk / w, end = seqs.size() * (chunk + 1) / w;
    try {
      for (std::size_t i = begin; i < end; ++i) out[i] = check_one(expr, seqs[i], kind, rel_tol);
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t c = 0; c < w; ++c) threads.emplace_back(run, c);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace altsum
