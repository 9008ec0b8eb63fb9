#include "ctower/applications.hpp"

#include <cmath>
#include <utility>

namespace ctower {

using SeriesQ = Series<Rational>;

Tower lambert_w_tower() {
  return Tower::fix([](const Tower& w) {
    return Tower::node(0.0, [w] { return exp(-w) / (1.0 + w); });
  });
}

SeriesF lambert_w_series(double w0) {
  return SeriesF::fix([w0](const SeriesF& w) {
    return sint(w0, SeriesF::defer([w] { return exp(-w) / (1.0 + w); }));
  });
}

Tower hermite_tower(long n, double x, HermiteDivisor divisor) {
  if (n < 0) throw NegativeOrder("Hermite order must be non-negative");
  Tower y = dvar(x);
  Tower h = exp(scalar_mul(-0.5, y * y));
  for (long k = 1; k <= n; ++k) {
    Tower d = dcst(std::sqrt(2.0 * static_cast<double>(k)));
    if (divisor == HermiteDivisor::lifted) d = expand_constants(d);
    h = (y * h - df(h)) / d;
  }
  return h;
}

double hermite_value(long n, double x) { return hd(hermite_tower(n, x)); }

SeriesQ stirling_g() {
  SeriesQ x = svar<Rational>();
  SeriesQ lo = log1(Rational(1) - x);
  return exp0(Rational(-1) + lo / Rational(2) - stl(lo));
}

SeriesQ stirling_f() { return stl(stl(stirling_g())); }

namespace {

// backsub rm rhs = let sm = shd rhs / shd rm
//                  in sm :- backsub ((1+rm)/(1-x)) (stl (rhs - sm*-rm))
SeriesQ backsub(const SeriesQ& rm, const SeriesQ& rhs, const SeriesQ& one_minus_x) {
  Lazy<Rational> sm([rm, rhs] { return rhs.head() / rm.head(); });
  return SeriesQ::cons(sm, [rm, rhs, sm, one_minus_x] {
    return backsub((Rational(1) + rm) / one_minus_x, stl(rhs - sm.force() * rm), one_minus_x);
  });
}

using Row = Stream<Rational>;
using Table = Stream<Row>;

// ccol p j l = dbfacs!!(3p+j-1) * head l : ccol p (j+1) (tail l)
Row ccol(long p, long j, const Row& l, const std::shared_ptr<Indexed<mpz_class>>& dbfacs) {
  return Row::cons(Lazy<Rational>([p, j, l, dbfacs] {
                     return Rational((*dbfacs)[static_cast<std::size_t>(3 * p + j - 1)]) * l.head();
                   }),
                   Lazy<Row>([p, j, l, dbfacs] { return ccol(p, j + 1, l.tail(), dbfacs); }));
}

// crow p ll = ccol p 0 (head ll) : crow (p+1) (tail ll)
Table crow(long p, const Table& ll, const std::shared_ptr<Indexed<mpz_class>>& dbfacs) {
  return Table::cons(Lazy<Row>([p, ll, dbfacs] { return ccol(p, 0, ll.head(), dbfacs); }),
                     Lazy<Table>([p, ll, dbfacs] { return crow(p + 1, ll.tail(), dbfacs); }));
}

// ss m ll = (f, map tail f ++ s) where (f, s) = splitAt m ll
std::pair<std::vector<Row>, Table> split_shifted(std::size_t m, const Table& ll) {
  std::vector<Row> front = take(m, ll);
  std::vector<Row> tails;
  tails.reserve(front.size());
  for (const Row& r : front) tails.push_back(r.tail());
  return {std::move(front), prepend<Row>(std::move(tails), drop(m, ll))};
}

// shift m ll = snd (ss m ll)
Table shift(std::size_t m, const Table& ll) { return split_shifted(m, ll).second; }

// separ m ll = let (f, b) = ss m ll in (map head f, b)
std::pair<std::vector<Rational>, Table> separ(std::size_t m, const Table& ll) {
  auto [front, rest] = split_shifted(m, ll);
  std::vector<Rational> heads;
  heads.reserve(front.size());
  for (const Row& r : front) heads.push_back(r.head());
  return {std::move(heads), std::move(rest)};
}

// diag m tbl = let (d, nxt) = separ (m+1) (shift m tbl) in sum d : diag (m+2) nxt
Stream<Rational> diag(std::size_t m, const Table& tbl) {
  Lazy<std::pair<std::vector<Rational>, Table>> step([m, tbl] { return separ(m + 1, shift(m, tbl)); });
  return Stream<Rational>::cons(Lazy<Rational>([step] {
                                  Rational sum(0);
                                  for (const Rational& r : step.force().first) sum += r;
                                  return sum;
                                }),
                                Lazy<Stream<Rational>>([m, step] { return diag(m + 2, step.force().second); }));
}

// dbf x y (a : b : r) = x : y : dbf (x*a) (y*b) r
Stream<mpz_class> dbf(const mpz_class& x, const mpz_class& y, const Stream<long>& ints) {
  return cons_value<mpz_class>(x, [x, y, ints] {
    return cons_value<mpz_class>(y, [x, y, ints] {
      long a = ints.head();
      long b = ints.tail().head();
      return dbf(x * a, y * b, ints.tail().tail());
    });
  });
}

}  // namespace

SeriesQ stirling_backsub() {
  SeriesQ f = stirling_f();
  SeriesQ one_minus_x = Rational(1) - svar<Rational>();
  return SeriesQ::fix([f, one_minus_x](const SeriesQ& s) {
    return SeriesQ::cons(Rational(1), [f, s, one_minus_x] {
      return backsub(Rational(1) / one_minus_x, f * s, one_minus_x);
    });
  });
}

Stream<mpz_class> double_factorials() {
  Stream<long> from3 = iterate<long>([](long n) { return n + 1; }, 3L);
  return cons_value<mpz_class>(mpz_class(0), [from3] { return dbf(1, 2, from3); });
}

StirlingPipelineState stirling_pipeline() {
  using SeriesQQ = Series<SeriesQ>;
  SeriesQ z = svar<Rational>() + Rational(1);
  SeriesQ w = stl(stl(stl(log1(z) - z)));
  SeriesQQ outer = SeriesQQ::cons_value(szero<Rational>(), SeriesQQ::cons_value(w, szero<SeriesQ>()));
  SeriesQQ en = stl(exp0(outer));
  Table enl = map_stream([](const SeriesQ& row) { return row.coeffs(); }, en.coeffs());
  Stream<mpz_class> dbfacs = double_factorials();
  Table tabl = crow(1, enl, std::make_shared<Indexed<mpz_class>>(dbfacs));
  return StirlingPipelineState{w, en, tabl, dbfacs};
}

Stream<Rational> stirling_laplace() { return diag(1, stirling_pipeline().tabl); }

}  // namespace ctower
