#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"

namespace alqhd {

/// One univariate building block. The vocabulary is deliberately closed:
/// these five shapes cover polynomial objectives, trig terms after
/// cos(a-b)/sin(a-b) expansion, penalty squares of all of the above, and
/// exponentials, which is everything the encoder has to ingest.
struct Factor {
  enum class Kind { Power, Cos, Sin, ExpAffine, Constant };

  Kind kind = Kind::Constant;
  int exponent = 0;     // Power: x^exponent, exponent >= 0
  double scale = 0.0;   // Cos/Sin/ExpAffine: inner a of (a*x + b); Constant: value
  double offset = 0.0;  // Cos/Sin/ExpAffine: inner b

  static Factor power(int n) { return {Kind::Power, n, 0.0, 0.0}; }
  static Factor cosine(double a, double b = 0.0) { return {Kind::Cos, 0, a, b}; }
  static Factor sine(double a, double b = 0.0) { return {Kind::Sin, 0, a, b}; }
  static Factor exp_affine(double a, double b = 0.0) { return {Kind::ExpAffine, 0, a, b}; }
  static Factor constant(double v) { return {Kind::Constant, 0, v, 0.0}; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Power: {
        double p = 1.0, base = x;
        for (int n = exponent; n > 0; n >>= 1) {
          if (n & 1) p *= base;
          base *= base;
        }
        return p;
      }
      case Kind::Cos:
        return std::cos(scale * x + offset);
      case Kind::Sin:
        return std::sin(scale * x + offset);
      case Kind::ExpAffine:
        return std::exp(scale * x + offset);
      case Kind::Constant:
        return scale;
    }
    return 0.0;  // unreachable
  }

  friend bool operator==(const Factor& a, const Factor& b) = default;
};

/// Factor bound to one variable of the ambient space.
struct TermFactor {
  std::size_t var = 0;
  Factor fn;

  friend bool operator==(const TermFactor&, const TermFactor&) = default;
};

/// coeff * product of factors; factor variables are distinct and strictly
/// increasing, an empty factor list is a constant term.
struct Term {
  double coeff = 0.0;
  std::vector<TermFactor> factors;
};

/// Sum of separable product terms over `dim` variables.
struct SeparableExpr {
  std::size_t dim = 0;
  std::vector<Term> terms;

  SeparableExpr() = default;
  explicit SeparableExpr(std::size_t d) : dim(d) {}

  SeparableExpr& add_constant(double c) {
    terms.push_back({c, {}});
    return *this;
  }

  SeparableExpr& add_term(double coeff, std::vector<TermFactor> factors) {
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
      if (!(factors[i].var < factors[i + 1].var))
        throw DimensionMismatchError("SeparableExpr: term variables must be strictly increasing");
    if (!factors.empty() && factors.back().var >= dim)
      throw DimensionMismatchError("SeparableExpr: term variable out of range");
    terms.push_back({coeff, std::move(factors)});
    return *this;
  }
};

inline double evaluate(const SeparableExpr& e, std::span<const double> x) {
  if (x.size() != e.dim)
    throw DimensionMismatchError("evaluate: point dimension " + std::to_string(x.size()) +
                                 " does not match expression dimension " + std::to_string(e.dim));
  double total = 0.0;
  for (const Term& t : e.terms) {
    double v = t.coeff;
    for (const TermFactor& f : t.factors) v *= f.fn(x[f.var]);
    total += v;
  }
  return total;
}

namespace detail {

/// Product of two factors of the same variable, rewritten back into the
/// closed vocabulary. Trig products split via product-to-sum, so the result
/// is a small list of (multiplier, factor) options; an empty factor slot
/// (nullopt) means the product collapsed to a plain number.
inline std::vector<std::pair<double, std::optional<Factor>>> factor_product(const Factor& a,
                                                                            const Factor& b) {
  using K = Factor::Kind;
  auto norm_trig = [](double mult, Factor f) -> std::pair<double, std::optional<Factor>> {
    // canonicalize: cos(-u) = cos(u), sin(-u) = -sin(u), zero-frequency folds away
    if (f.scale == 0.0) {
      double v = (f.kind == K::Cos) ? std::cos(f.offset) : std::sin(f.offset);
      return {mult * v, std::nullopt};
    }
    if (f.scale < 0.0) {
      f.scale = -f.scale;
      f.offset = -f.offset;
      if (f.kind == K::Sin) mult = -mult;
    }
    return {mult, f};
  };

  if (a.kind == K::Constant) return {{a.scale, b}};
  if (b.kind == K::Constant) return {{b.scale, a}};
  if (a.kind == K::Power && b.kind == K::Power)
    return {{1.0, Factor::power(a.exponent + b.exponent)}};
  if (a.kind == K::ExpAffine && b.kind == K::ExpAffine)
    return {{1.0, Factor::exp_affine(a.scale + b.scale, a.offset + b.offset)}};

  const bool a_trig = a.kind == K::Cos || a.kind == K::Sin;
  const bool b_trig = b.kind == K::Cos || b.kind == K::Sin;
  if (a_trig && b_trig) {
    const double ps = a.scale + b.scale, po = a.offset + b.offset;
    const double ms = a.scale - b.scale, mo = a.offset - b.offset;
    std::vector<std::pair<double, std::optional<Factor>>> out;
    if (a.kind == K::Cos && b.kind == K::Cos) {
      out.push_back(norm_trig(0.5, Factor::cosine(ps, po)));
      out.push_back(norm_trig(0.5, Factor::cosine(ms, mo)));
    } else if (a.kind == K::Sin && b.kind == K::Sin) {
      out.push_back(norm_trig(0.5, Factor::cosine(ms, mo)));
      out.push_back(norm_trig(-0.5, Factor::cosine(ps, po)));
    } else if (a.kind == K::Sin && b.kind == K::Cos) {
      out.push_back(norm_trig(0.5, Factor::sine(ps, po)));
      out.push_back(norm_trig(0.5, Factor::sine(ms, mo)));
    } else {  // cos(u) * sin(v) = (sin(u+v) - sin(u-v)) / 2
      out.push_back(norm_trig(0.5, Factor::sine(ps, po)));
      out.push_back(norm_trig(-0.5, Factor::sine(ms, mo)));
    }
    return out;
  }
  throw TermTooWideError("factor_product: unsupported mixed product of factor kinds");
}

}  // namespace detail

/// Product of two expressions, expanded back into separable form. Same-variable
/// factor pairs are merged through the closed-vocabulary product rules; the
/// width of every resulting term is capped by `max_term_width`.
inline SeparableExpr multiply(const SeparableExpr& a, const SeparableExpr& b,
                              std::size_t max_term_width) {
  if (a.dim != b.dim) throw DimensionMismatchError("multiply: expression dimensions differ");
  SeparableExpr out(a.dim);
  for (const Term& ta : a.terms) {
    for (const Term& tb : b.terms) {
      // merge the two sorted factor lists; same-variable pairs hit the product rules
      struct Slot {
        std::size_t var;
        std::vector<std::pair<double, std::optional<Factor>>> options;
      };
      std::vector<Slot> slots;
      std::size_t ia = 0, ib = 0;
      while (ia < ta.factors.size() || ib < tb.factors.size()) {
        if (ib == tb.factors.size() ||
            (ia < ta.factors.size() && ta.factors[ia].var < tb.factors[ib].var)) {
          slots.push_back({ta.factors[ia].var, {{1.0, ta.factors[ia].fn}}});
          ++ia;
        } else if (ia == ta.factors.size() || tb.factors[ib].var < ta.factors[ia].var) {
          slots.push_back({tb.factors[ib].var, {{1.0, tb.factors[ib].fn}}});
          ++ib;
        } else {
          slots.push_back(
              {ta.factors[ia].var, detail::factor_product(ta.factors[ia].fn, tb.factors[ib].fn)});
          ++ia;
          ++ib;
        }
      }
      // distribute the per-variable options
      std::vector<Term> acc = {{ta.coeff * tb.coeff, {}}};
      for (const Slot& slot : slots) {
        std::vector<Term> next;
        next.reserve(acc.size() * slot.options.size());
        for (const Term& partial : acc)
          for (const auto& [mult, fac] : slot.options) {
            Term t = partial;
            t.coeff *= mult;
            if (fac && fac->kind == Factor::Kind::Constant)
              t.coeff *= fac->scale;  // constant factors fold into the coefficient
            else if (fac && !(fac->kind == Factor::Kind::Power && fac->exponent == 0))
              t.factors.push_back({slot.var, *fac});
            next.push_back(std::move(t));
          }
        acc = std::move(next);
      }
      for (Term& t : acc) {
        if (t.factors.size() > max_term_width)
          throw TermTooWideError("multiply: term touches " + std::to_string(t.factors.size()) +
                                 " variables, cap is " + std::to_string(max_term_width));
        if (t.coeff != 0.0) out.terms.push_back(std::move(t));
      }
    }
  }
  return out;
}

/// Merge terms with identical factor signatures (exact parameter equality).
inline void collect_terms(SeparableExpr& e) {
  using Key = std::vector<std::tuple<std::size_t, int, int, double, double>>;
  std::map<Key, double> merged;
  std::map<Key, std::vector<TermFactor>> shapes;
  for (const Term& t : e.terms) {
    Key key;
    key.reserve(t.factors.size());
    for (const TermFactor& f : t.factors)
      key.emplace_back(f.var, static_cast<int>(f.fn.kind), f.fn.exponent, f.fn.scale, f.fn.offset);
    merged[key] += t.coeff;
    shapes.try_emplace(key, t.factors);
  }
  e.terms.clear();
  for (auto& [key, coeff] : merged)
    if (coeff != 0.0) e.terms.push_back({coeff, shapes[key]});
}

/// Black-box objective with an optional structured (separable) form.
struct ObjectiveFn {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> fn;
  std::optional<SeparableExpr> expr;

  double operator()(std::span<const double> x) const {
    if (x.size() != dim)
      throw DimensionMismatchError("ObjectiveFn: point dimension " + std::to_string(x.size()) +
                                   " does not match objective dimension " + std::to_string(dim));
    return fn(x);
  }

  static ObjectiveFn from_expr(SeparableExpr e) {
    ObjectiveFn f;
    f.dim = e.dim;
    f.expr = std::move(e);
    f.fn = [expr = *f.expr](std::span<const double> x) { return evaluate(expr, x); };
    return f;
  }
};

/// h(x) = 0 equalities and g(x) <= 0 inequalities.
struct ConstraintSet {
  std::vector<ObjectiveFn> equality;
  std::vector<ObjectiveFn> inequality;

  bool empty() const noexcept { return equality.empty() && inequality.empty(); }
  std::size_t size() const noexcept { return equality.size() + inequality.size(); }
};

}  // namespace alqhd
