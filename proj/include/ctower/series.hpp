#pragma once

// Formal power series sum_k u_k (x - x0)^k as an infinite coefficient stream.
// The center x0 never enters the algebra; only evaluation of a truncated
// series needs it.
//
// Series<C> is itself a Ring coefficient (Coef<Series<C>> below), so series of
// series work for the ring-only operations: +, -, *, formal integration and
// exp0.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctower/coefficient.hpp"
#include "ctower/dtower.hpp"
#include "ctower/elementary.hpp"
#include "ctower/lazy.hpp"

namespace ctower {

template <Ring C>
class Series {
 public:
  explicit Series(Stream<C> coeffs) : coeffs_(std::move(coeffs)) {}

  // head :- tail, with the tail built on first demand.
  static Series cons(C head, std::function<Series()> tail) {
    return Series(Stream<C>::cons(Lazy<C>::ready(std::move(head)),
                                  Lazy<Stream<C>>([tail = std::move(tail)] { return tail().coeffs(); })));
  }

  static Series cons(Lazy<C> head, std::function<Series()> tail) {
    return Series(Stream<C>::cons(std::move(head),
                                  Lazy<Stream<C>>([tail = std::move(tail)] { return tail().coeffs(); })));
  }

  static Series cons_value(C head, Series tail) {
    return Series(ctower::cons_value<C>(std::move(head), tail.coeffs()));
  }

  static Series defer(std::function<Series()> make) {
    return Series(ctower::defer<C>([make = std::move(make)] { return make().coeffs(); }));
  }

  // The series s with s == builder(s); builder must be productive.
  static Series fix(const std::function<Series(const Series&)>& builder) {
    return Series(ctower::fix<C>(
        [&builder](const Stream<C>& self) { return builder(Series(self)).coeffs(); }));
  }

  const Stream<C>& coeffs() const { return coeffs_; }
  const C& head() const { return coeffs_.head(); }
  Series tail() const { return Series(coeffs_.tail()); }

 private:
  Stream<C> coeffs_;
};

template <Ring C>
const C& shd(const Series<C>& s) {
  return s.head();
}

template <Ring C>
Series<C> stl(const Series<C>& s) {
  return s.tail();
}

template <Ring C>
std::vector<C> to_list(const Series<C>& s, std::size_t n) {
  return take(n, s.coeffs());
}

// Coefficient k, forcing the prefix up to k.
template <Ring C>
C coefficient(const Series<C>& s, std::size_t k) {
  return at(s.coeffs(), k);
}

// szero = 0 :- szero; one shared cycle per coefficient type.
template <Ring C>
Series<C> szero() {
  static const Series<C> z(repeat<C>(zero<C>()));
  return z;
}

template <Ring C>
Series<C> const_series(C c) {
  return Series<C>::cons_value(std::move(c), szero<C>());
}

// svar = 0 :- 1
template <Ring C>
Series<C> svar() {
  return Series<C>::cons_value(zero<C>(), const_series(one<C>()));
}

// Finite prefix, then `padding` forever.
template <Ring C>
Series<C> from_list(std::vector<C> prefix, C padding) {
  return Series<C>(prepend<C>(std::move(prefix), repeat<C>(std::move(padding))));
}

template <Ring C>
Series<C> from_list(std::vector<C> prefix) {
  return Series<C>(prepend<C>(std::move(prefix), szero<C>().coeffs()));
}

// nats = nt 1 where nt n = n :- nt (n+1)
inline Stream<long> nats() {
  return iterate<long>([](long n) { return n + 1; }, 1L);
}

// Linear operations -----------------------------------------------------------

template <Ring C>
Series<C> operator+(const Series<C>& a, const Series<C>& b) {
  return Series<C>(zip_with([](const C& x, const C& y) { return C(x + y); }, a.coeffs(), b.coeffs()));
}

template <Ring C>
Series<C> operator-(const Series<C>& a, const Series<C>& b) {
  return Series<C>(zip_with([](const C& x, const C& y) { return C(x - y); }, a.coeffs(), b.coeffs()));
}

template <Ring C>
Series<C> operator-(const Series<C>& a) {
  return Series<C>(map_stream([](const C& x) { return C(-x); }, a.coeffs()));
}

// c *- s
template <Ring C>
Series<C> scale(const C& c, const Series<C>& s) {
  return Series<C>(map_stream([c](const C& x) { return C(c * x); }, s.coeffs()));
}

// Products --------------------------------------------------------------------

// Cauchy product: coefficient n is sum_k u_k v_{n-k}. O(n^2) coefficient
// products for n coefficients. Coefficient n reads u and v only up to index n.
template <Ring C>
Series<C> operator*(const Series<C>& u, const Series<C>& v) {
  struct Operands {
    Indexed<C> u;
    Indexed<C> v;
  };
  auto ops = std::make_shared<Operands>(Operands{Indexed<C>(u.coeffs()), Indexed<C>(v.coeffs())});
  return Series<C>(generate<C>([ops](std::size_t n) {
    C acc = ops->u[0] * ops->v[n];
    for (std::size_t k = 1; k <= n; ++k) acc = acc + ops->u[k] * ops->v[n - k];
    return acc;
  }));
}

// w = u / v with w_n = (u_n - sum_{k=1..n} v_k w_{n-k}) / v_0, reading back
// the quotient's own earlier coefficients. v_0 = 0 raises SingularDivision for
// exact coefficients and yields inf/NaN for binary64.
template <Field C>
Series<C> operator/(const Series<C>& u, const Series<C>& v) {
  struct Operands {
    Indexed<C> u;
    Indexed<C> v;
    std::optional<Indexed<C>> w;
  };
  auto ops = std::make_shared<Operands>(Operands{Indexed<C>(u.coeffs()), Indexed<C>(v.coeffs()), std::nullopt});
  Series<C> w(generate<C>([ops](std::size_t n) {
    C acc = ops->u[n];
    for (std::size_t k = 1; k <= n; ++k) acc = acc - ops->v[k] * (*ops->w)[n - k];
    return C(acc / ops->v[0]);
  }));
  ops->w.emplace(w.coeffs());
  return w;
}

template <Ring C>
Series<C> operator+(const std::type_identity_t<C>& c, const Series<C>& s) {
  return const_series<C>(c) + s;
}
template <Ring C>
Series<C> operator+(const Series<C>& s, const std::type_identity_t<C>& c) {
  return s + const_series<C>(c);
}
template <Ring C>
Series<C> operator-(const std::type_identity_t<C>& c, const Series<C>& s) {
  return const_series<C>(c) - s;
}
template <Ring C>
Series<C> operator-(const Series<C>& s, const std::type_identity_t<C>& c) {
  return s - const_series<C>(c);
}
template <Ring C>
Series<C> operator*(const std::type_identity_t<C>& c, const Series<C>& s) {
  return scale(c, s);
}
template <Ring C>
Series<C> operator*(const Series<C>& s, const std::type_identity_t<C>& c) {
  return scale(c, s);
}
template <Field C>
Series<C> operator/(const Series<C>& s, const std::type_identity_t<C>& c) {
  return Series<C>(map_stream([c](const C& x) { return C(x / c); }, s.coeffs()));
}
template <Field C>
Series<C> operator/(const std::type_identity_t<C>& c, const Series<C>& s) {
  return const_series<C>(c) / s;
}

// Formal calculus -------------------------------------------------------------

// sdif (_:-sq) = sZip (*) sq nats
template <Ring C>
Series<C> sdif(const Series<C>& s) {
  return Series<C>(defer<C>([s] {
    return zip_with([](const C& c, const long& n) { return C(Coef<C>::times_integer(c, n)); },
                    s.coeffs().tail(), nats());
  }));
}

// sint c ss = c :- sZip (/) ss nats. The stream argument is not touched until
// coefficient 1 is demanded, so it may be the series being defined.
template <Ring C>
Series<C> sint(Lazy<C> c, const Series<C>& s) {
  Stream<C> integrated =
      zip_with([](const C& x, const long& n) { return C(Coef<C>::divide_by_integer(x, n)); }, s.coeffs(), nats());
  return Series<C>(Stream<C>::cons(std::move(c), Lazy<Stream<C>>::ready(integrated)));
}

template <Ring C>
Series<C> sint(C c, const Series<C>& s) {
  return sint<C>(Lazy<C>::ready(std::move(c)), s);
}

// Elementary functions over binary64 ------------------------------------------
//
// Each is the integral of its derivative, with the head taken from the
// ordinary function at u0.

namespace detail {
inline Lazy<double> head_of(const Series<double>& u, double (*f)(double)) {
  return Lazy<double>([u, f] { return f(u.head()); });
}
}  // namespace detail

using SeriesF = Series<double>;

// exp u = w where w = sint (exp u0) (sdif u * w)
inline SeriesF exp(const SeriesF& u) {
  return SeriesF::fix([u](const SeriesF& w) {
    return sint(detail::head_of(u, [](double v) { return std::exp(v); }),
                SeriesF::defer([u, w] { return sdif(u) * w; }));
  });
}

// log u = sint (log u0) (sdif u / u)
inline SeriesF log(const SeriesF& u) {
  return sint(detail::head_of(u, [](double v) { return std::log(v); }),
              SeriesF::defer([u] { return sdif(u) / u; }));
}

// sqrt u = w where w = sint (sqrt u0) ((1/2) *- (sdif u / w))
inline SeriesF sqrt(const SeriesF& u) {
  return SeriesF::fix([u](const SeriesF& w) {
    return sint(detail::head_of(u, [](double v) { return std::sqrt(v); }),
                SeriesF::defer([u, w] { return scale(0.5, sdif(u) / w); }));
  });
}

// sin u = sint (sin u0) (sdif u * cos u), cos u = sint (cos u0) (-(sdif u * sin u))
inline std::pair<SeriesF, SeriesF> sincos(const SeriesF& u) {
  auto pair = std::make_shared<std::optional<std::pair<SeriesF, SeriesF>>>();
  SeriesF s = sint(detail::head_of(u, [](double v) { return std::sin(v); }),
                   SeriesF::defer([u, pair] { return sdif(u) * (*pair)->second; }));
  SeriesF c = sint(detail::head_of(u, [](double v) { return std::cos(v); }),
                   SeriesF::defer([u, pair] { return -(sdif(u) * (*pair)->first); }));
  pair->emplace(s, c);
  return {s, c};
}

inline SeriesF sin(const SeriesF& u) { return sincos(u).first; }
inline SeriesF cos(const SeriesF& u) { return sincos(u).second; }

// tan u = w where w = sint (tan u0) (sdif u * (1 + w*w))
inline SeriesF tan(const SeriesF& u) {
  return SeriesF::fix([u](const SeriesF& w) {
    return sint(detail::head_of(u, [](double v) { return std::tan(v); }),
                SeriesF::defer([u, w] { return sdif(u) * (1.0 + w * w); }));
  });
}

// atan u = sint (atan u0) (sdif u / (1 + u*u))
inline SeriesF atan(const SeriesF& u) {
  return sint(detail::head_of(u, [](double v) { return std::atan(v); }),
              SeriesF::defer([u] { return sdif(u) / (1.0 + u * u); }));
}

inline SeriesF asin(const SeriesF& u) {
  return sint(detail::head_of(u, [](double v) { return std::asin(v); }),
              SeriesF::defer([u] { return sdif(u) / sqrt(1.0 - u * u); }));
}

inline SeriesF acos(const SeriesF& u) {
  return sint(detail::head_of(u, [](double v) { return std::acos(v); }),
              SeriesF::defer([u] { return -(sdif(u) / sqrt(1.0 - u * u)); }));
}

inline SeriesF elementary(Elementary f, const SeriesF& u) {
  switch (f) {
    case Elementary::exp: return exp(u);
    case Elementary::log: return log(u);
    case Elementary::sqrt: return sqrt(u);
    case Elementary::sin: return sin(u);
    case Elementary::cos: return cos(u);
    case Elementary::tan: return tan(u);
    case Elementary::atan: return atan(u);
    case Elementary::asin: return asin(u);
    case Elementary::acos: return acos(u);
  }
  return u;
}

// Restricted variants with an exact zeroth term ---------------------------------
//
// Same recurrences with the transcendental head replaced by its known value,
// so they run over exact rationals and nested series.

// Requires shd(u) == 0; throws BadHead otherwise.
template <Ring C>
Series<C> exp0(const Series<C>& u) {
  if (!Coef<C>::is_zero(u.head())) throw BadHead("exp0 needs a series with zero constant term");
  return Series<C>::fix([u](const Series<C>& w) {
    return sint(one<C>(), Series<C>::defer([u, w] { return sdif(u) * w; }));
  });
}

// Requires shd(u) == 1.
template <Field C>
Series<C> log1(const Series<C>& u) {
  if (!Coef<C>::is_zero(u.head() - one<C>())) throw BadHead("log1 needs a series with constant term 1");
  return sint(zero<C>(), Series<C>::defer([u] { return sdif(u) / u; }));
}

// Requires shd(u) == 1.
template <Field C>
Series<C> sqrt1(const Series<C>& u) {
  if (!Coef<C>::is_zero(u.head() - one<C>())) throw BadHead("sqrt1 needs a series with constant term 1");
  return Series<C>::fix([u](const Series<C>& w) {
    return sint(one<C>(), Series<C>::defer([u, w] {
                  Series<C> q = sdif(u) / w;
                  return Series<C>(map_stream(
                      [](const C& x) { return C(Coef<C>::divide_by_integer(x, 2)); }, q.coeffs()));
                }));
  });
}

// Composition and reversion -----------------------------------------------------

namespace detail {
// cmv (u0:-uq) = u0 :- vq * cmv uq
template <Ring C>
Series<C> compose_horner(const Series<C>& u, const Series<C>& vq) {
  return Series<C>::cons(Lazy<C>([u] { return u.head(); }),
                         [u, vq] { return vq * compose_horner(u.tail(), vq); });
}
}  // namespace detail

// U(V(x)) by the infinite right-nested Horner scheme. Requires shd(v) == 0
// (exact zero for binary64); throws NonzeroInnerConstant otherwise.
template <Ring C>
Series<C> scompose(const Series<C>& u, const Series<C>& v) {
  if (!Coef<C>::is_zero(v.head())) throw NonzeroInnerConstant("composition needs an inner series with zero constant term");
  return detail::compose_horner(u, v.tail());
}

namespace detail {

template <Field C>
void check_reversible(const Series<C>& u) {
  if (!Coef<C>::is_zero(u.head())) throw BadLinearTerm("reversion needs u0 = 0");
  if (Coef<C>::is_zero(u.tail().head())) throw BadLinearTerm("reversion needs u1 != 0");
}

// Reverse of t + t^2 v(t):  t = 0 :- w,  w = 1 :- (-w*w*scompose v t).
template <Field C>
Series<C> reverse_unit(const Series<C>& u) {
  Series<C> v = u.tail().tail();
  Series<C> w = Series<C>::fix([v](const Series<C>& w) {
    Series<C> t = Series<C>::cons_value(zero<C>(), w);
    return Series<C>::cons(one<C>(), [v, w, t] { return -(w * w * scompose(v, t)); });
  });
  return Series<C>::cons_value(zero<C>(), w);
}

}  // namespace detail

// The series g with u(g(z)) = z. Requires u0 = 0 and u1 != 0 (BadLinearTerm).
// For u1 != 1 the reverse of u/u1 is computed and coefficient k of the result
// is scaled by u1^-k.
template <Field C>
Series<C> sreverse(const Series<C>& u) {
  detail::check_reversible(u);
  C u1 = u.tail().head();
  if (Coef<C>::is_zero(u1 - one<C>())) return detail::reverse_unit(u);
  Series<C> unit = detail::reverse_unit(u / u1);
  C inv = one<C>() / u1;
  Stream<C> powers = iterate<C>([inv](const C& p) { return C(p * inv); }, one<C>());
  return Series<C>(zip_with([](const C& a, const C& p) { return C(a * p); }, unit.coeffs(), powers));
}

// Newton iteration t <- t - (f(t) - z) / f'(t) from t0 = z, as the infinite
// sequence of approximants. Approximant k has at least 2^k correct leading
// coefficients when u1 = 1.
template <Field C>
Stream<Series<C>> newtreverse(const Series<C>& f) {
  detail::check_reversible(f);
  Series<C> fp = sdif(f);
  auto next = [f, fp](const Series<C>& t) {
    return t - (scompose(f, t) - svar<C>()) / scompose(fp, t);
  };
  return iterate<Series<C>>(next, svar<C>());
}

// Series <-> tower ---------------------------------------------------------------

namespace detail {
// sdloop (y:-sq) f n = f*y :> sdloop sq (f*n) (n+1)
template <Ring C>
DTower<C> sdloop(Series<C> s, C fact, long n) {
  return DTower<C>::lazy_node([s, fact] { return fact * s.head(); },
                              [s, fact, n] { return sdloop(s.tail(), C(Coef<C>::times_integer(fact, n)), n + 1); });
}

template <Field C>
Stream<C> tsloop(DTower<C> t, C fact, long n) {
  return Stream<C>::cons(Lazy<C>([t, fact] { return C(t.head() / fact); }),
                         Lazy<Stream<C>>([t, fact, n] {
                           return tsloop(t.tail(), C(Coef<C>::times_integer(fact, n)), n + 1);
                         }));
}
}  // namespace detail

// Element k multiplied by k!.
template <Ring C>
DTower<C> ser_to_dtower(const Series<C>& s) {
  return detail::sdloop(s, one<C>(), 1);
}

// Element k divided by k!.
template <Field C>
Series<C> dtower_to_ser(const DTower<C>& t) {
  return Series<C>(detail::tsloop(t, one<C>(), 1));
}

// Evaluates sum_{k<=order} u_k h^k by Horner's rule.
template <Ring C>
C evaluate_truncated(const Series<C>& s, std::size_t order, const C& h) {
  std::vector<C> c = to_list(s, order + 1);
  C acc = c.back();
  for (std::size_t k = order; k-- > 0;) acc = acc * h + c[k];
  return acc;
}

// Series as coefficients ----------------------------------------------------------

// Only a bounded prefix of a series can be inspected, so the zero test used
// by preconditions (exp0, scompose) checks this many leading coefficients.
inline constexpr std::size_t kSeriesZeroCheckTerms = 8;

template <Ring C>
struct Coef<Series<C>> {
  static constexpr bool exact = Coef<C>::exact;
  static Series<C> from_int(long n) { return const_series<C>(Coef<C>::from_int(n)); }
  static Series<C> from_big(const mpz_class& z) { return const_series<C>(Coef<C>::from_big(z)); }
  static Series<C> times_integer(const Series<C>& s, long n) {
    return Series<C>(map_stream([n](const C& x) { return C(Coef<C>::times_integer(x, n)); }, s.coeffs()));
  }
  static Series<C> divide_by_integer(const Series<C>& s, long n) {
    return Series<C>(map_stream([n](const C& x) { return C(Coef<C>::divide_by_integer(x, n)); }, s.coeffs()));
  }
  static bool is_zero(const Series<C>& s) {
    for (const C& c : to_list(s, kSeriesZeroCheckTerms)) {
      if (!Coef<C>::is_zero(c)) return false;
    }
    return true;
  }
};

}  // namespace ctower
