#pragma once

// Arithmetic expressions in one variable `x`, parsed from text and
// interpreted as derivative towers or power series.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ctower/applications.hpp"
#include "ctower/coefficient.hpp"
#include "ctower/dtower.hpp"
#include "ctower/elementary.hpp"
#include "ctower/errors.hpp"
#include "ctower/series.hpp"

namespace ctower {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { var, int_lit, rat_lit, neg, add, sub, mul, div, pow, call };

  Kind kind = Kind::var;
  Rational value;        // int_lit, rat_lit
  long exponent = 0;     // pow
  Elementary fn = Elementary::exp;  // call
  std::vector<ExprPtr> args;

  static ExprPtr var();
  static ExprPtr integer(Rational v);
  static ExprPtr decimal(Rational v);
  static ExprPtr unary(Kind k, ExprPtr a);
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b);
  static ExprPtr power(ExprPtr base, long exponent);
  static ExprPtr call(Elementary f, ExprPtr a);
};

// Structural equality.
bool operator==(const Expr& a, const Expr& b);

// Precedence, tightest first: unary minus, ^ (one literal integer exponent),
// * and /, + and -. Binary operators associate to the left.
ExprPtr parse_expr(std::string_view src);

// Text that parses back to an equal tree.
std::string render(const Expr& e);

bool uses_transcendental(const Expr& e);

template <class C>
C literal_as(const Rational& v) {
  if constexpr (std::is_same_v<C, double>) {
    return v.to_double();
  } else {
    return v;
  }
}

// Interprets e with x bound to the tower `var`.
template <Field C>
DTower<C> build_tower(const Expr& e, const DTower<C>& var) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::var:
      return var;
    case K::int_lit:
    case K::rat_lit:
      return dcst(literal_as<C>(e.value));
    case K::neg:
      return neg(build_tower(*e.args[0], var));
    case K::add:
      return add(build_tower(*e.args[0], var), build_tower(*e.args[1], var));
    case K::sub:
      return sub(build_tower(*e.args[0], var), build_tower(*e.args[1], var));
    case K::mul:
      return mul(build_tower(*e.args[0], var), build_tower(*e.args[1], var));
    case K::div:
      return div(build_tower(*e.args[0], var), build_tower(*e.args[1], var));
    case K::pow: {
      DTower<C> base = build_tower(*e.args[0], var);
      DTower<C> acc = dcst(one<C>());
      for (long i = 0; i < e.exponent; ++i) acc = i == 0 ? base : mul(acc, base);
      return acc;
    }
    case K::call:
      if constexpr (std::is_same_v<C, double>) {
        return elementary(e.fn, build_tower(*e.args[0], var));
      } else {
        throw FieldMismatch(std::string(elementary_name(e.fn)) + " needs the f64 field for towers");
      }
  }
  throw Error("unreachable expression kind");
}

namespace detail {
template <Field C>
Series<C> exact_call(Elementary f, const Series<C>& u) {
  const C& h = shd(u);
  if (f == Elementary::exp && Coef<C>::is_zero(h)) return exp0(u);
  if (f == Elementary::log && h == one<C>()) return log1(u);
  if (f == Elementary::sqrt && h == one<C>()) return sqrt1(u);
  throw FieldMismatch(std::string(elementary_name(f)) + " over rationals needs exp(0+...), log(1+...) or sqrt(1+...)");
}
}  // namespace detail

// Interprets e with x bound to the series `var`. Over rationals only exp,
// log and sqrt are allowed, at heads 0, 1 and 1.
template <Field C>
Series<C> build_series(const Expr& e, const Series<C>& var) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::var:
      return var;
    case K::int_lit:
    case K::rat_lit:
      return const_series(literal_as<C>(e.value));
    case K::neg:
      return -build_series(*e.args[0], var);
    case K::add:
      return build_series(*e.args[0], var) + build_series(*e.args[1], var);
    case K::sub:
      return build_series(*e.args[0], var) - build_series(*e.args[1], var);
    case K::mul:
      return build_series(*e.args[0], var) * build_series(*e.args[1], var);
    case K::div:
      return build_series(*e.args[0], var) / build_series(*e.args[1], var);
    case K::pow: {
      Series<C> base = build_series(*e.args[0], var);
      Series<C> acc = const_series(one<C>());
      for (long i = 0; i < e.exponent; ++i) acc = i == 0 ? base : acc * base;
      return acc;
    }
    case K::call:
      if constexpr (std::is_same_v<C, double>) {
        return elementary(e.fn, build_series(*e.args[0], var));
      } else {
        return detail::exact_call(e.fn, build_series(*e.args[0], var));
      }
  }
  throw Error("unreachable expression kind");
}

// The series variable about x0: x0 + (x - x0).
template <Field C>
Series<C> series_var(const C& x0) {
  return from_list<C>({x0, one<C>()});
}

template <Field C>
std::vector<C> eval_tower(const Expr& e, const C& x, std::size_t n) {
  return take(n, build_tower(e, dvar(x)));
}

template <Field C>
std::vector<C> eval_series(const Expr& e, const C& x0, std::size_t n) {
  return to_list(build_series(e, series_var(x0)), n);
}

}  // namespace ctower
