#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctower/applications.hpp"
#include "ctower/series.hpp"
#include "oracles.hpp"

using namespace ctower;
using Q = Rational;
using SQ = Series<Q>;
using oracle::Poly;

namespace {

constexpr std::size_t kPrefix = 12;

std::vector<Q> qs(std::initializer_list<Q> v) { return std::vector<Q>(v); }

SQ series_of(const Poly& p) { return from_list(p); }

// A random series whose first kPrefix coefficients are `coeffs` and whose
// remaining coefficients are nonzero, so nothing relies on a zero tail.
SQ random_series(oracle::RandomRationals& rng, Poly& coeffs) {
  coeffs = rng.poly(kPrefix);
  Poly tail = rng.poly(kPrefix);
  Poly all = coeffs;
  all.insert(all.end(), tail.begin(), tail.end());
  return from_list(all, Q(1));
}

bool agree(const std::vector<double>& a, const std::vector<double>& b, double rel) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!oracle::close(a[i], b[i], rel)) return false;
  }
  return true;
}

// Number of leading coefficients on which a and b agree within rel.
std::size_t agreement(const SeriesF& a, const SeriesF& b, std::size_t limit, double rel) {
  std::vector<double> x = to_list(a, limit), y = to_list(b, limit);
  std::size_t k = 0;
  while (k < limit && oracle::close(x[k], y[k], rel)) ++k;
  return k;
}

std::vector<double> factorial_scaled(const std::vector<double>& c) {
  std::vector<double> out(c);
  double f = 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) f *= static_cast<double>(k);
    out[k] *= f;
  }
  return out;
}

}  // namespace

TEST_CASE("basic series") {
  CHECK(to_list(svar<Q>(), 4) == qs({0, 1, 0, 0}));
  CHECK(shd(const_series(Q(5))) == Q(5));
  CHECK(to_list(from_list<Q>({1, 2}, Q(0)), 4) == qs({1, 2, 0, 0}));
  CHECK(to_list(from_list<Q>({1, 2}, Q(7)), 4) == qs({1, 2, 7, 7}));
  CHECK(to_list(szero<Q>(), 3) == qs({0, 0, 0}));
  CHECK(to_list(stl(from_list<Q>({1, 2, 3})), 3) == qs({2, 3, 0}));
  CHECK(take(4, nats()) == std::vector<long>{1, 2, 3, 4});
}

TEST_CASE("arithmetic examples") {
  SQ x = svar<Q>();
  CHECK(to_list(x * x, 4) == qs({0, 0, 1, 0}));
  SQ u = Q(1) + x;
  CHECK(to_list(u / u, 5) == qs({1, 0, 0, 0, 0}));
  SQ ones = from_list<Q>({}, Q(1));
  std::vector<Q> sq = to_list(ones * ones, 6);
  CHECK(sq == oracle::mul(Poly(6, Q(1)), Poly(6, Q(1)), 6));
  CHECK(sq == qs({1, 2, 3, 4, 5, 6}));
  CHECK(to_list(scale(Q(3), u), 3) == qs({3, 3, 0}));
  CHECK(to_list(u - x, 3) == qs({1, 0, 0}));
  CHECK(to_list(-u, 2) == qs({-1, -1}));
  CHECK_THROWS_AS(to_list(Q(1) / x, 3), SingularDivision);
  SeriesF inf = 1.0 / svar<double>();
  CHECK(std::isinf(shd(inf)));
}

TEST_CASE("differentiation and integration") {
  CHECK(to_list(sdif(svar<Q>()), 3) == qs({1, 0, 0}));
  CHECK(to_list(sint(Q(0), const_series(Q(1))), 3) == qs({0, 1, 0}));
  CHECK(to_list(sint(Q(5), svar<Q>()), 4) == std::vector<Q>{Q(5), Q(0), rational(1, 2), Q(0)});
  oracle::RandomRationals rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Poly p;
    SQ s = random_series(rng, p);
    Q c = rng.next();
    REQUIRE(to_list(sdif(sint(c, s)), 20) == to_list(s, 20));
    REQUIRE(shd(sint(c, s)) == c);
  }
}

TEST_CASE("elementary series") {
  SeriesF x = svar<double>();
  CHECK(agree(to_list(exp(x), 5), {1, 1, 0.5, 1.0 / 6, 1.0 / 24}, 1e-15));
  CHECK(agree(to_list(atan(x), 6), {0, 1, 0, -1.0 / 3, 0, 1.0 / 5}, 1e-15));
  CHECK(agree(to_list(log(1.0 + x), 5), {0, 1, -0.5, 1.0 / 3, -0.25}, 1e-15));
  CHECK(agree(to_list(sin(x), 6), {0, 1, 0, -1.0 / 6, 0, 1.0 / 120}, 1e-15));
  CHECK(agree(to_list(cos(x), 5), {1, 0, -0.5, 0, 1.0 / 24}, 1e-15));
  CHECK(agree(to_list(sqrt(1.0 + x), 4), {1, 0.5, -0.125, 0.0625}, 1e-15));
  CHECK(agree(to_list(tan(x), 6), {0, 1, 0, 1.0 / 3, 0, 2.0 / 15}, 1e-15));
  CHECK(agree(to_list(asin(x), 6), {0, 1, 0, 1.0 / 6, 0, 3.0 / 40}, 1e-15));
  CHECK(agree(to_list(acos(x), 4), {std::numbers::pi / 2, -1, 0, -1.0 / 6}, 1e-15));
  // Centered at x0 = 2: the center only enters through the head.
  SeriesF c = from_list<double>({2.0, 1.0});
  CHECK(agree(to_list(exp(c), 3), {std::exp(2.0), std::exp(2.0), std::exp(2.0) / 2}, 1e-14));
  CHECK(agree(to_list(elementary(Elementary::log, c), 3), {std::log(2.0), 0.5, -0.125}, 1e-14));
}

TEST_CASE("restricted exact functions") {
  SQ x = svar<Q>();
  CHECK(to_list(exp0(x), 5) == qs({1, 1, rational(1, 2), rational(1, 6), rational(1, 24)}));
  CHECK(to_list(log1(Q(1) + x), 4) == qs({0, 1, rational(-1, 2), rational(1, 3)}));
  CHECK(to_list(sqrt1(Q(1) + x), 4) == qs({1, rational(1, 2), rational(-1, 8), rational(1, 16)}));
  CHECK_THROWS_AS(exp0(Q(1) + x), BadHead);
  CHECK_THROWS_AS(log1(x), BadHead);
  CHECK_THROWS_AS(sqrt1(Q(2) + x), BadHead);
  // exp0 and log1 are mutually inverse.
  oracle::RandomRationals rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Poly p = rng.poly(kPrefix);
    p[0] = Q(0);
    SQ u = series_of(p);
    REQUIRE(to_list(log1(exp0(u)), kPrefix) == oracle::truncate(p, kPrefix));
    SQ r = sqrt1(Q(1) + u);
    REQUIRE(to_list(r * r, kPrefix) == to_list(Q(1) + u, kPrefix));
  }
}

TEST_CASE("exp0 over nested series") {
  StirlingPipelineState st = stirling_pipeline();
  CHECK(to_list(st.w, 4) == qs({rational(1, 3), rational(-1, 4), rational(1, 5), rational(-1, 6)}));
  CHECK(to_list(coefficient(st.en, 0), 3) == qs({rational(1, 3), rational(-1, 4), rational(1, 5)}));
  CHECK(to_list(coefficient(st.en, 1), 5) ==
        qs({rational(1, 18), rational(-1, 12), rational(47, 480), rational(-19, 180), rational(153, 1400)}));
  // Row p is w^p / p!.
  SQ w2 = st.w * st.w;
  CHECK(to_list(coefficient(st.en, 1), 10) == to_list(w2 / Q(2), 10));
  CHECK(to_list(coefficient(st.en, 2), 10) == to_list(w2 * st.w / Q(6), 10));
}

TEST_CASE("composition") {
  oracle::RandomRationals rng(13);
  Poly p;
  SQ u = random_series(rng, p);
  CHECK(to_list(scompose(u, svar<Q>()), 15) == to_list(u, 15));
  SQ e = exp0(svar<Q>());
  Q k = rational(3, 2);
  CHECK(to_list(scompose(e, scale(k, svar<Q>())), 4) == qs({1, k, k * k / Q(2), k * k * k / Q(6)}));
  SeriesF x = svar<double>();
  std::vector<double> id = to_list(scompose(sin(x), asin(x)), 8);
  CHECK(agree(id, {0, 1, 0, 0, 0, 0, 0, 0}, 1e-15));
  CHECK_THROWS_AS(scompose(u, Q(1) + svar<Q>()), NonzeroInnerConstant);
  CHECK_THROWS_AS(scompose(exp(x), 0.5 + x), NonzeroInnerConstant);
}

TEST_CASE("property: product, quotient and composition agree with the polynomial oracle") {
  oracle::RandomRationals rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a, b, c;
    SQ sa = random_series(rng, a), sb = random_series(rng, b), sc = random_series(rng, c);
    REQUIRE(to_list(sa * sb, kPrefix) == oracle::mul(a, b, kPrefix));
    REQUIRE(to_list(sa + sb, kPrefix) == to_list(sb + sa, kPrefix));
    REQUIRE(to_list((sa * sb) * sc, kPrefix) == to_list(sa * (sb * sc), kPrefix));
    REQUIRE(to_list(sa * (sb + sc), kPrefix) == to_list(sa * sb + sa * sc, kPrefix));
    if (!b[0].is_zero()) {
      REQUIRE(to_list(sa / sb, kPrefix) == oracle::div(a, b, kPrefix));
      REQUIRE(to_list((sa / sb) * sb, kPrefix) == to_list(sa, kPrefix));
    } else {
      REQUIRE_THROWS_AS(shd(sa / sb), SingularDivision);
    }
    Poly c0 = c;
    c0[0] = Q(0);
    SQ inner = SQ::cons_value(Q(0), stl(sc));
    REQUIRE(to_list(scompose(sa, inner), kPrefix) == oracle::compose(a, c0, kPrefix));
  }
}

TEST_CASE("reversion") {
  SQ x = svar<Q>();
  CHECK(to_list(sreverse(x), 8) == to_list(x, 8));
  CHECK(to_list(sreverse(x + x * x), 6) == qs({0, 1, -1, 2, -5, 14}));
  CHECK(to_list(sreverse(x + x * x), 12) == oracle::reverse({0, 1, 1}, 12));
  // x e^x reverses to Lambert W.
  std::vector<Q> w = to_list(sreverse(x * exp0(x)), 9);
  Q fact(1);
  std::vector<Q> scaled;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k > 0) fact *= Q(static_cast<long>(k));
    scaled.push_back(w[k] * fact);
  }
  CHECK(scaled == qs({0, 1, -2, 9, -64, 625, -7776, 117649, -2097152}));
  // Nonunit linear term.
  SQ f = Q(3) * x - Q(2) * x * x + x * x * x;
  CHECK(to_list(sreverse(f), 12) == oracle::reverse({0, 3, -2, 1}, 12));
  CHECK_THROWS_AS(sreverse(Q(1) + x), BadLinearTerm);
  CHECK_THROWS_AS(sreverse(x * x), BadLinearTerm);
}

TEST_CASE("property: reversion round trips") {
  oracle::RandomRationals rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    Poly p = rng.poly(8);
    p[0] = Q(0);
    p[1] = rng.next_nonzero();
    SQ f = series_of(p);
    SQ g = sreverse(f);
    REQUIRE(to_list(g, kPrefix) == oracle::reverse(p, kPrefix));
    if (trial < 40) {
      REQUIRE(to_list(scompose(f, g), 20) == to_list(svar<Q>(), 20));
      REQUIRE(to_list(scompose(g, f), 20) == to_list(svar<Q>(), 20));
    }
  }
}

TEST_CASE("the literal reversion equation is not productive") {
  SQ u = svar<Q>() + svar<Q>() * svar<Q>();
  SQ v = stl(stl(u));
  auto literal = [&] {
    SQ t = SQ::fix([v](const SQ& t) { return svar<Q>() - t * t * scompose(v, t); });
    return to_list(t, 4);
  };
  CHECK_THROWS_AS(literal(), NonProductiveDefinition);
}

TEST_CASE("Newton reversion") {
  SeriesF x = svar<double>();
  SeriesF f = x + x * x;
  Stream<SeriesF> approx = newtreverse(f);
  CHECK(to_list(at(approx, 0), 6) == to_list(x, 6));
  CHECK(agreement(at(approx, 3), sreverse(f), 16, 1e-12) >= 8);
  SeriesF g = x / (1.0 + x);
  Stream<SeriesF> ga = newtreverse(g);
  SeriesF exact = sreverse(g);
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK_MESSAGE(agreement(at(ga, k), exact, std::size_t{1} << (k + 1), 1e-12) >= (std::size_t{1} << k), k);
  }
  // The exact field gives exactly the same doubling.
  SQ gq = svar<Q>() / (Q(1) + svar<Q>());
  Stream<SQ> gqa = newtreverse(gq);
  std::vector<Q> ref = to_list(sreverse(gq), 16);
  std::vector<Q> a4 = to_list(at(gqa, 4), 16);
  CHECK(a4 == ref);
}

TEST_CASE("series and towers") {
  std::vector<double> e = take(5, ser_to_dtower(exp(svar<double>())));
  CHECK(agree(e, {1, 1, 1, 1, 1}, 1e-15));
  std::vector<double> lw = to_list(dtower_to_ser(lambert_w_tower()), 4);
  CHECK(agree(lw, {0, 1, -1, 1.5}, 1e-15));
  oracle::RandomRationals rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    Poly a, b;
    SQ sa = random_series(rng, a), sb = random_series(rng, b);
    REQUIRE(to_list(dtower_to_ser(ser_to_dtower(sa)), 30) == to_list(sa, 30));
    REQUIRE(take(10, ser_to_dtower(sa * sb)) == take(10, mul(ser_to_dtower(sa), ser_to_dtower(sb))));
    REQUIRE(take(10, ser_to_dtower(sdif(sa))) == take(10, df(ser_to_dtower(sa))));
  }
}

TEST_CASE("truncated evaluation") {
  SQ p = from_list<Q>({1, 2, 3});
  CHECK(evaluate_truncated(p, 2, Q(2)) == Q(1 + 4 + 12));
  CHECK(evaluate_truncated(p, 1, Q(2)) == Q(5));
  CHECK(evaluate_truncated(p, 0, Q(2)) == Q(1));
  double v = evaluate_truncated(exp(svar<double>()), 20, 1.0);
  CHECK(v == doctest::Approx(std::numbers::e).epsilon(1e-14));
}

TEST_CASE("series as coefficients") {
  SQ zero_like = szero<Q>();
  CHECK(Coef<SQ>::is_zero(zero_like));
  CHECK_FALSE(Coef<SQ>::is_zero(svar<Q>()));
  CHECK(to_list(Coef<SQ>::divide_by_integer(from_list<Q>({2, 4}), 2), 2) == qs({1, 2}));
  Series<SQ> nested = Series<SQ>::cons_value(szero<Q>(), Series<SQ>::cons_value(svar<Q>(), szero<SQ>()));
  Series<SQ> e = exp0(nested);
  CHECK(to_list(coefficient(e, 0), 3) == qs({1, 0, 0}));
  CHECK(to_list(coefficient(e, 2), 4) == qs({0, 0, rational(1, 2), 0}));
}
