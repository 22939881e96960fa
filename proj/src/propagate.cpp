#include <algorithm>
#include <initializer_list>
#include <string>

#include "altsum/error.hpp"
#include "altsum/properties.hpp"

namespace altsum {

const char* to_string(Status s) {
  switch (s) {
    case Status::Proven: return "Proven";
    case Status::Refuted: return "Refuted";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

const char* to_string(Property p) {
  switch (p) {
    case Property::InW: return "in_W";
    case Property::Convex: return "convex";
    case Property::Nonnegative: return "nonnegative";
    case Property::Nondecreasing: return "nondecreasing";
    case Property::F0Nonpositive: return "f0_nonpositive";
  }
  return "?";
}

PropertyStatus& PropertySet::operator[](Property p) {
  switch (p) {
    case Property::InW: return in_w;
    case Property::Convex: return convex;
    case Property::Nonnegative: return nonnegative;
    case Property::Nondecreasing: return nondecreasing;
    case Property::F0Nonpositive: return f0_nonpositive;
  }
  return in_w;
}

const PropertyStatus& PropertySet::operator[](Property p) const {
  return const_cast<PropertySet&>(*this)[p];
}

namespace {

PropertyStatus proven_from(std::string rule, const std::vector<const PropertyStatus*>& premises) {
  PropertyStatus s;
  s.value = Status::Proven;
  for (const PropertyStatus* p : premises)
    for (const std::string& r : p->rules)
      if (std::ranges::find(s.rules, r) == s.rules.end()) s.rules.push_back(r);
  s.rules.push_back(std::move(rule));
  return s;
}

PropertyStatus proven(std::string rule, std::initializer_list<const PropertyStatus*> premises = {}) {
  return proven_from(std::move(rule), std::vector<const PropertyStatus*>(premises));
}

// Refuted only if the witness reproduces a violation beyond tolerance.
PropertyStatus refute(const Expr& e, Witness w, std::string rule, double rel) {
  try {
    w.violation = recompute_violation(e, w);
    if (!(w.violation > witness_tolerance(e, w, rel))) return {};
  } catch (const EvalError&) {
    return {};
  }
  PropertyStatus s;
  s.value = Status::Refuted;
  s.rules.push_back(std::move(rule));
  s.witness = w;
  return s;
}

bool is_affine(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Identity:
    case NodeKind::Constant: return true;
    case NodeKind::Power: return e.param() == 1.0;
    case NodeKind::Scale: return is_affine(e.children()[0]);
    case NodeKind::Sum: return is_affine(e.children()[0]) && is_affine(e.children()[1]);
    case NodeKind::Series:
      return std::ranges::all_of(e.children(), [](const Expr& t) { return is_affine(t); });
    default: return false;
  }
}

PropertyStatus origin_status(const Expr& e, double rel) {
  double f0 = 0.0;
  try {
    f0 = eval(e, 0.0);
  } catch (const EvalError&) {
    return {};
  }
  if (f0 <= 0.0) return proven("f(0) = " + format_number(f0) + " <= 0 by evaluation");
  return refute(e, Witness{WitnessForm::PositiveOrigin, 0.0, 0.0, 0.0}, "f(0) > 0 by evaluation",
                rel);
}

class Propagator {
 public:
  explicit Propagator(double rel) : rel_(rel) {}

  PropertySet run(const Expr& e) {
    PropertySet p = node_rules(e);
    p.f0_nonpositive = origin_status(e, rel_);
    apply_generic_rules(e, p);
    return p;
  }

 private:
  double rel_;

  PropertyStatus refute_here(const Expr& e, WitnessForm form, double x, double y,
                             std::string rule) const {
    return refute(e, Witness{form, x, y, 0.0}, std::move(rule), rel_);
  }

  void apply_generic_rules(const Expr& e, PropertySet& p) const {
    if (p.in_w.unknown() && p.convex.proven() && p.f0_nonpositive.proven())
      p.in_w = proven("convex with f(0) <= 0 is in W", {&p.convex, &p.f0_nonpositive});
    if (p.in_w.unknown() && p.f0_nonpositive.refuted())
      p.in_w = refute_here(e, WitnessForm::Superadditive, 0.0, 0.0,
                           "members of W have f(0) <= 0");
    if (p.nondecreasing.unknown() && p.in_w.proven() && p.nonnegative.proven())
      p.nondecreasing =
          proven("nonnegative member of W is nondecreasing", {&p.in_w, &p.nonnegative});
  }

  PropertySet node_rules(const Expr& e) {
    PropertySet p;
    switch (e.kind()) {
      case NodeKind::Identity:
        p.in_w = proven("identity: equality in the W conditions");
        p.convex = proven("affine functions are convex");
        p.nonnegative = proven("identity is nonnegative on [0, inf)");
        p.nondecreasing = proven("identity is increasing");
        break;

      case NodeKind::Constant: {
        const double c = e.param();
        p.in_w = c <= 0.0 ? proven("constant c <= 0 is in W")
                          : refute_here(e, WitnessForm::Superadditive, 0.0, 0.0,
                                        "constant c > 0 is not in W");
        p.convex = proven("affine functions are convex");
        p.nonnegative = c >= 0.0 ? proven("constant c >= 0 is nonnegative")
                                 : refute_here(e, WitnessForm::Negativity, 0.0, 0.0,
                                               "negative constant");
        p.nondecreasing = proven("constants are nondecreasing");
        break;
      }

      case NodeKind::Power: {
        const double r = e.param();
        p.nonnegative = proven("x^r >= 0 on [0, inf)");
        p.nondecreasing = proven("x^r with r > 0 is increasing");
        if (r > 1.0) {
          p.in_w = proven("x^r with r > 1 is in W");
          p.convex = proven("x^r with r >= 1 is convex");
        } else if (r == 1.0) {
          p.in_w = proven("identity: equality in the W conditions");
          p.convex = proven("affine functions are convex");
        } else {
          p.in_w = refute_here(e, WitnessForm::Superadditive, 1.0, 1.0,
                               "x^r with r < 1 is strictly subadditive");
          p.convex = refute_here(e, WitnessForm::Midpoint, 1.0, 0.0,
                                 "x^r with r < 1 is strictly concave");
        }
        break;
      }

      case NodeKind::Floor:
        p.in_w = proven("floor is in W");
        p.convex = refute_here(e, WitnessForm::Midpoint, 0.9, 1.1, "floor jumps at integers");
        p.nonnegative = proven("floor >= 0 on [0, inf)");
        p.nondecreasing = proven("floor is nondecreasing");
        break;

      case NodeKind::XLogX:
        p.convex = proven("x log x is convex on [0, inf)");
        p.nonnegative = refute_here(e, WitnessForm::Negativity, 0.5, 0.0,
                                    "x log x < 0 on (0, 1)");
        p.nondecreasing = refute_here(e, WitnessForm::Decrease, 0.0, 0.2,
                                      "x log x decreases on (0, 1/e)");
        break;

      case NodeKind::Exp:
        p.convex = proven("exp is convex");
        p.nonnegative = proven("exp > 0");
        p.nondecreasing = proven("exp is increasing");
        break;

      case NodeKind::Scale:
        scale_rules(e, p);
        break;

      case NodeKind::Sum: {
        PropertySet l = run(e.children()[0]);
        PropertySet r = run(e.children()[1]);
        both(p.in_w, l.in_w, r.in_w, "W is closed under addition");
        both(p.convex, l.convex, r.convex, "sum of convex functions is convex");
        both(p.nonnegative, l.nonnegative, r.nonnegative, "sum of nonnegatives is nonnegative");
        both(p.nondecreasing, l.nondecreasing, r.nondecreasing,
             "sum of nondecreasing functions is nondecreasing");
        break;
      }

      case NodeKind::Product: {
        PropertySet l = run(e.children()[0]);
        PropertySet r = run(e.children()[1]);
        const bool nonneg = l.nonnegative.proven() && r.nonnegative.proven();
        if (nonneg && l.in_w.proven() && r.in_w.proven())
          p.in_w = proven_from("product of nonnegative members of W is in W",
                               {&l.in_w, &r.in_w, &l.nonnegative, &r.nonnegative});
        if (nonneg)
          p.nonnegative = proven_from("product of nonnegatives is nonnegative",
                                      {&l.nonnegative, &r.nonnegative});
        if (nonneg && l.nondecreasing.proven() && r.nondecreasing.proven())
          p.nondecreasing =
              proven_from("product of nonnegative nondecreasing functions is nondecreasing",
                          {&l.nondecreasing, &r.nondecreasing, &l.nonnegative, &r.nonnegative});
        break;
      }

      case NodeKind::Compose: {
        PropertySet outer = run(e.children()[0]);
        PropertySet inner = run(e.children()[1]);
        if (outer.in_w.proven() && inner.in_w.proven() && outer.nonnegative.proven() &&
            inner.nonnegative.proven())
          p.in_w = proven_from("composition of nonnegative members of W is in W",
                               {&outer.in_w, &inner.in_w, &outer.nonnegative, &inner.nonnegative});
        if (outer.nonnegative.proven())
          p.nonnegative = proven_from("outer function is nonnegative", {&outer.nonnegative});
        if (outer.nondecreasing.proven() && inner.nondecreasing.proven())
          p.nondecreasing = proven_from("composition of nondecreasing functions is nondecreasing",
                                        {&outer.nondecreasing, &inner.nondecreasing});
        if (outer.convex.proven() && outer.nondecreasing.proven() && inner.convex.proven())
          p.convex = proven_from("convex nondecreasing after convex is convex",
                                 {&outer.convex, &outer.nondecreasing, &inner.convex});
        break;
      }

      case NodeKind::Series:
        series_rules(e, p);
        break;
    }
    return p;
  }

  static void both(PropertyStatus& out, const PropertyStatus& a, const PropertyStatus& b,
                   const char* rule) {
    if (a.proven() && b.proven()) out = proven(rule, {&a, &b});
  }

  void scale_rules(const Expr& e, PropertySet& p) {
    const double alpha = e.param();
    PropertySet c = run(e.children()[0]);
    if (alpha > 0.0) {
      // Positive scaling preserves each property and the sign of each violation.
      for (Property prop : {Property::InW, Property::Convex, Property::Nonnegative,
                            Property::Nondecreasing}) {
        const PropertyStatus& child = c[prop];
        if (child.proven()) {
          p[prop] = proven(std::string("positive scaling preserves ") + to_string(prop), {&child});
        } else if (child.refuted()) {
          const Witness& w = *child.witness;
          p[prop] = refute_here(e, w.form, w.x, w.y,
                                std::string("positive scaling preserves failure of ") +
                                    to_string(prop));
        }
      }
    } else if (is_affine(e.children()[0])) {
      p.convex = proven("negated affine function is convex");
    }
  }

  void series_rules(const Expr& e, PropertySet& p) {
    const bool nonneg_coeffs = std::ranges::all_of(e.coeffs(), [](double c) { return c >= 0.0; });
    if (!nonneg_coeffs) return;
    std::vector<PropertySet> terms;
    for (const Expr& t : e.children()) terms.push_back(run(t));
    auto all_terms = [&](Property prop, const char* rule) {
      std::vector<const PropertyStatus*> premises;
      for (const PropertySet& t : terms) {
        if (!t[prop].proven()) return;
        premises.push_back(&t[prop]);
      }
      p[prop] = proven_from(rule, premises);
    };
    all_terms(Property::InW, "series with c_i >= 0 of members of W is in W");
    all_terms(Property::Convex, "series with c_i >= 0 of convex terms is convex");
    all_terms(Property::Nonnegative, "series with c_i >= 0 of nonnegative terms is nonnegative");
    all_terms(Property::Nondecreasing,
              "series with c_i >= 0 of nondecreasing terms is nondecreasing");
  }
};

}  // namespace

PropertySet propagate(const Expr& expr, double rel_tol) { return Propagator(rel_tol).run(expr); }

}  // namespace altsum
