#pragma once

// Worked applications of towers and series: the Lambert W function, Hermite
// functions by differential recurrence, reversion and composition of
// derivative towers, and the Stirling correction series derived twice (by
// back-substitution and by Laplace's method over a series of series).

#include <functional>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "ctower/coefficient.hpp"
#include "ctower/dtower.hpp"
#include "ctower/lazy.hpp"
#include "ctower/series.hpp"

namespace ctower {

// lw0 = 0 :> exp(-lw0) / (1 + lw0). Element n >= 1 is (-n)^(n-1).
Tower lambert_w_tower();

// wlx = sint w0 (exp(-wlx) / (1 + wlx)): Taylor coefficients of W about
// x0 = w0 * e^w0.
SeriesF lambert_w_series(double w0);

// How the 1/sqrt(2n) factor of the Hermite recurrence enters the tower
// arithmetic. `constant` keeps it a Constant tower (division is a scaling);
// `lifted` unrolls it into explicit nodes, forcing full tower division.
enum class HermiteDivisor { constant, lifted };

// H_0 = exp(-x^2/2), H_n = (x H_{n-1} - H'_{n-1}) / sqrt(2n), as towers at x.
// Throws NegativeOrder for n < 0.
Tower hermite_tower(long n, double x, HermiteDivisor divisor = HermiteDivisor::constant);
double hermite_value(long n, double x);

namespace detail {
// revch (h1 :> hq) = h1 :> revch (g1 * hq)
template <Ring C>
DTower<C> revch(const DTower<C>& h, const DTower<C>& g1) {
  return DTower<C>::lazy_node([h] { return h.head(); }, [h, g1] { return revch(mul(g1, h.tail()), g1); });
}
}  // namespace detail

// Derivative tower of the inverse function g of f at y = f(x), by repeated
// change of differentiation variable: g1 = 1 / f'(x) as a tower, and every
// further derivative is g1 times the derivative of the previous one.
// Element 0 is x. f'(x) = 0 raises SingularDivision (exact fields) when
// element 1 is forced.
template <Field C>
DTower<C> revchain(const std::function<DTower<C>(const DTower<C>&)>& f, const C& x) {
  DTower<C> g1 = div(dcst(one<C>()), df(f(dvar(x))));
  return DTower<C>::node(x, [g1] { return detail::revch(g1, g1); });
}

// Derivatives h, h', h'', ... of h(x) = g(f(x)) given the tower g at f(x) and
// the tower f at x.
//
// Stage n keeps a segment [P_1, ..., P_n] of towers with h^(n) = sum_k
// g^(k) P_k. The next stage differentiates each P into [dP, f' P] and fuses
// neighbours that multiply the same derivative of g.
template <Ring C>
Stream<C> compchain(const DTower<C>& g, const DTower<C>& f) {
  using Segment = std::vector<DTower<C>>;
  DTower<C> f1 = df(f);
  auto lgd = std::make_shared<Indexed<C>>(tower_stream(df(g)));

  // fuse . diffg
  auto step = [f1](const Segment& seg) {
    Segment expanded;
    expanded.reserve(2 * seg.size());
    for (const auto& s : seg) {
      expanded.push_back(df(s));
      expanded.push_back(mul(f1, s));
    }
    Segment fused{expanded.front()};
    for (std::size_t i = 1; i < expanded.size(); i += 2) {
      fused.push_back(i + 1 < expanded.size() ? add(expanded[i], expanded[i + 1]) : expanded[i]);
    }
    return fused;
  };
  auto to_scalar = [lgd](const Segment& seg) {
    C acc = zero<C>();
    for (std::size_t i = 0; i < seg.size(); ++i) acc = acc + seg[i].head() * (*lgd)[i];
    return acc;
  };
  Stream<Segment> stages = iterate<Segment>(step, Segment{f1});
  return Stream<C>::cons(Lazy<C>([g] { return g.head(); }),
                         Lazy<Stream<C>>([stages, to_scalar] { return map_stream(to_scalar, stages); }));
}

template <Ring C>
DTower<C> stream_to_tower(const Stream<C>& s) {
  return DTower<C>::lazy_node([s] { return s.head(); }, [s] { return stream_to_tower(s.tail()); });
}

// compchain re-wrapped as a tower.
template <Ring C>
DTower<C> compchain_tower(const DTower<C>& g, const DTower<C>& f) {
  return stream_to_tower(compchain(g, f));
}

// Stirling series, first derivation -------------------------------------------

// G(x) = exp(-1 + lo/2 - lo/x) with lo = log(1 - x), all exact.
Series<Rational> stirling_g();

// G = 1 + x^2 F.
Series<Rational> stirling_f();

// S(x) with S(x/(1-x)) = S(x) G(x), solved by back-substitution on
// R_{m+1} = (R_m + 1)/(1 - x). Coefficients are those of S(1/n).
Series<Rational> stirling_backsub();

// Stirling series, second derivation ------------------------------------------

struct StirlingPipelineState {
  // log z - z about z = 1 with the first three terms removed: 1/3, -1/4, ...
  Series<Rational> w;
  // exp0(0 :- w :- 0) with its constant row dropped; row p (from 1) is w^p/p!.
  Series<Series<Rational>> en;
  // en[p][j] weighted by the double factorial (3p+j-1)!!.
  Stream<Stream<Rational>> tabl;
  Stream<mpz_class> dbfacs;
};

StirlingPipelineState stirling_pipeline();

// Coefficients of n^-1, n^-2, ... of the Stirling series (no leading 1),
// accumulated along the diagonals of tabl.
Stream<Rational> stirling_laplace();

// 0, 1, 2, 3, 8, 15, 48, 105, 384, ...: index k >= 1 holds k!!, index 0 is a
// placeholder.
Stream<mpz_class> double_factorials();

}  // namespace ctower
