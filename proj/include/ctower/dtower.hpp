#pragma once

// Derivative towers: [f, f', f'', ...] of an expression at one point.
//
// A tower is either Constant(c), which stands for c, 0, 0, ... without
// materializing the zeros, or a lazy node (head, tail) whose tail is the
// tower of the derivative. Arithmetic keeps Constant operands Constant where
// the result is constant and otherwise unrolls them lazily, so every forced
// prefix is the same as with fully unrolled operands.

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ctower/coefficient.hpp"
#include "ctower/elementary.hpp"
#include "ctower/lazy.hpp"
#include "ctower/pascal.hpp"

namespace ctower {

template <Ring C>
class DTower {
 public:
  struct Node;

  DTower() : rep_(zero<C>()) {}

  static DTower constant(C c) {
    DTower t;
    t.rep_ = std::move(c);
    return t;
  }

  static DTower node(Lazy<C> head, Lazy<DTower> tail) {
    DTower t;
    t.rep_ = std::make_shared<Node>(std::move(head), std::move(tail));
    return t;
  }

  static DTower node(C head, std::function<DTower()> tail) {
    return node(Lazy<C>::ready(std::move(head)), Lazy<DTower>(std::move(tail)));
  }

  static DTower lazy_node(std::function<C()> head, std::function<DTower()> tail) {
    return node(Lazy<C>(std::move(head)), Lazy<DTower>(std::move(tail)));
  }

  // Evaluated on first demand of head or tail.
  static DTower defer(std::function<DTower()> make) {
    Lazy<DTower> target(std::move(make));
    return node(Lazy<C>([target] { return target.force().head(); }),
                Lazy<DTower>([target] { return target.force().tail(); }));
  }

  // The tower w with w == builder(w); builder must be productive.
  static DTower fix(const std::function<DTower(const DTower&)>& builder) {
    auto slot = std::make_shared<std::optional<DTower>>();
    DTower self = defer([slot]() -> DTower {
      if (!*slot) throw NonProductiveDefinition("tower fixpoint demanded before its builder returned");
      return **slot;
    });
    *slot = builder(self);
    return **slot;
  }

  bool is_constant() const { return std::holds_alternative<C>(rep_); }

  // The constant value when this is the Constant variant.
  const C* constant_value() const { return std::get_if<C>(&rep_); }

  C head() const {
    if (const C* c = std::get_if<C>(&rep_)) return *c;
    return std::get<NodePtr>(rep_)->head.force();
  }

  DTower tail() const {
    if (is_constant()) return DTower();
    return std::get<NodePtr>(rep_)->tail.force();
  }

 private:
  using NodePtr = std::shared_ptr<const Node>;
  std::variant<C, NodePtr> rep_;
};

template <Ring C>
struct DTower<C>::Node {
  Node(Lazy<C> h, Lazy<DTower<C>> t) : head(std::move(h)), tail(std::move(t)) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  ~Node() {
    std::optional<DTower<C>> next = tail.release_if_unique();
    while (next) {
      auto* ptr = std::get_if<NodePtr>(&next->rep_);
      if (!ptr || ptr->use_count() != 1) break;
      NodePtr owned = std::move(*ptr);
      next = const_cast<Node&>(*owned).tail.release_if_unique();
    }
  }

  Lazy<C> head;
  Lazy<DTower<C>> tail;
};

// Basic constructors and access ----------------------------------------------

template <Ring C>
DTower<C> dcst(C c) {
  return DTower<C>::constant(std::move(c));
}

// x :> dcst 1
template <Ring C>
DTower<C> dvar(C x) {
  return DTower<C>::node(Lazy<C>::ready(std::move(x)), Lazy<DTower<C>>::ready(dcst(one<C>())));
}

template <Ring C>
C hd(const DTower<C>& t) {
  return t.head();
}

template <Ring C>
DTower<C> df(const DTower<C>& t) {
  return t.tail();
}

template <Ring C>
std::vector<C> take(std::size_t n, DTower<C> t) {
  std::vector<C> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (const C* c = t.constant_value()) {
      out.push_back(*c);
      out.resize(n, zero<C>());
      break;
    }
    out.push_back(t.head());
    if (i + 1 < n) t = t.tail();
  }
  return out;
}

// Element n (the n-th derivative).
template <Ring C>
C element(DTower<C> t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (t.is_constant()) return zero<C>();
    t = t.tail();
  }
  return t.head();
}

template <Ring C>
Stream<C> tower_stream(const DTower<C>& t) {
  return Stream<C>::cons(Lazy<C>([t] { return t.head(); }),
                         Lazy<Stream<C>>([t] { return tower_stream(t.tail()); }));
}

// Same observable elements with every Constant replaced by explicit nodes.
template <Ring C>
DTower<C> expand_constants(const DTower<C>& t) {
  return DTower<C>::lazy_node([t] { return t.head(); },
                              [t] { return expand_constants(t.tail()); });
}

// Mapping and folding ---------------------------------------------------------

template <Ring C, class F>
DTower<C> map_tower(F f, const DTower<C>& t) {
  if (const C* c = t.constant_value()) return dcst<C>(f(*c));
  return DTower<C>::lazy_node([f, t] { return f(t.head()); },
                              [f, t] { return map_tower<C>(f, t.tail()); });
}

// Right fold over the node prefix and the final Constant value. Walks at most
// `bound` nodes looking for the Constant; throws Unbounded otherwise.
template <Ring C, class Op>
C fold_tower(Op op, C init, DTower<C> t, std::size_t bound) {
  std::vector<C> items;
  for (std::size_t i = 0;; ++i) {
    if (const C* c = t.constant_value()) {
      items.push_back(*c);
      break;
    }
    if (i >= bound) throw Unbounded("tower has no Constant tail within the bound");
    items.push_back(t.head());
    t = t.tail();
  }
  C acc = std::move(init);
  for (auto it = items.rbegin(); it != items.rend(); ++it) acc = op(*it, acc);
  return acc;
}

template <Ring C>
C tower_sum(const DTower<C>& t, std::size_t bound) {
  return fold_tower<C>([](const C& a, const C& b) { return a + b; }, zero<C>(), t, bound);
}

template <Ring C>
C tower_product(const DTower<C>& t, std::size_t bound) {
  return fold_tower<C>([](const C& a, const C& b) { return a * b; }, one<C>(), t, bound);
}

// Linear operations -----------------------------------------------------------

template <Ring C>
DTower<C> add(const DTower<C>& a, const DTower<C>& b) {
  if (a.is_constant() && b.is_constant()) return dcst<C>(*a.constant_value() + *b.constant_value());
  return DTower<C>::lazy_node([a, b] { return a.head() + b.head(); },
                              [a, b] { return add(a.tail(), b.tail()); });
}

template <Ring C>
DTower<C> sub(const DTower<C>& a, const DTower<C>& b) {
  if (a.is_constant() && b.is_constant()) return dcst<C>(*a.constant_value() - *b.constant_value());
  return DTower<C>::lazy_node([a, b] { return a.head() - b.head(); },
                              [a, b] { return sub(a.tail(), b.tail()); });
}

template <Ring C>
DTower<C> neg(const DTower<C>& a) {
  return map_tower<C>([](const C& v) { return -v; }, a);
}

// c *> x
template <Ring C>
DTower<C> scalar_mul(const C& c, const DTower<C>& a) {
  return map_tower<C>([c](const C& v) { return c * v; }, a);
}

// Products --------------------------------------------------------------------

namespace detail {

// Finite list built by consing in front, used for the reversed prefix
// [y_n, ..., y_0] that the convolution loops carry along.
template <class C>
struct RevCell {
  C value;
  std::shared_ptr<const RevCell> next;
};
template <class C>
using RevList = std::shared_ptr<const RevCell<C>>;

template <class C>
RevList<C> rev_cons(C value, RevList<C> rest) {
  return std::make_shared<const RevCell<C>>(RevCell<C>{std::move(value), std::move(rest)});
}

// Weighted triple dot product sum_i row[i] * x_i * rev_i over the length of
// the row. Stops early once x reaches its Constant tail and never forces x
// beyond the last element it needs.
template <Ring C>
C dzip3(const std::vector<C>& row, DTower<C> x, RevList<C> rev) {
  C acc = zero<C>();
  for (std::size_t i = 0; i < row.size() && rev; ++i) {
    if (const C* c = x.constant_value()) {
      acc = acc + row[i] * *c * rev->value;
      break;
    }
    acc = acc + row[i] * x.head() * rev->value;
    rev = rev->next;
    if (i + 1 < row.size() && rev) x = x.tail();
  }
  return acc;
}

// convloop (b:bq) x (y0:>yq) aux = let an = y0:>aux in dzip3 b x an :> convloop bq x yq an
template <Ring C>
DTower<C> convloop(Stream<std::vector<C>> rows, DTower<C> x, DTower<C> y, RevList<C> aux) {
  Lazy<RevList<C>> an([y, aux] { return rev_cons(y.head(), aux); });
  return DTower<C>::node(
      Lazy<C>([rows, x, an] { return dzip3(rows.head(), x, an.force()); }),
      Lazy<DTower<C>>([rows, x, y, an] { return convloop(rows.tail(), x, y.tail(), an.force()); }));
}

// divloop (b:binq) (p1:>pr) (y1:>yr) t =
//   let yt = y1:>t in (p1 - dzip3 b yt w)/y0 :> divloop binq pr yr yt
template <Field C>
DTower<C> divloop(Stream<std::vector<C>> rows, DTower<C> p, DTower<C> yy, RevList<C> t,
                  DTower<C> w, DTower<C> y) {
  Lazy<RevList<C>> yt([yy, t] { return rev_cons(yy.head(), t); });
  return DTower<C>::node(
      Lazy<C>([rows, p, w, y, yt] { return (p.head() - dzip3(rows.head(), w, yt.force())) / y.head(); }),
      Lazy<DTower<C>>([rows, p, yy, w, y, yt] {
        return divloop(rows.tail(), p.tail(), yy.tail(), yt.force(), w, y);
      }));
}

}  // namespace detail

// Element n of the product is sum_k C(n,k) x_k y_{n-k}, computed by walking
// the rows of Pascal's triangle while the reversed prefix of y grows by one
// element per step. O(n^2) coefficient products for n elements.
template <Ring C>
DTower<C> mul(const DTower<C>& x, const DTower<C>& y) {
  const C* cx = x.constant_value();
  const C* cy = y.constant_value();
  if (cx && cy) return dcst<C>(*cx * *cy);
  if (cx) return scalar_mul(*cx, y);
  if (cy) return scalar_mul(*cy, x);
  return detail::convloop<C>(binomial_rows<C>(), x, y, nullptr);
}

// Leibniz rule applied literally: x0 y0 :> x y' + x' y. Exponential cost;
// kept as the reference the optimized product is tested against.
template <Ring C>
DTower<C> naive_mul(const DTower<C>& x, const DTower<C>& y) {
  const C* cx = x.constant_value();
  const C* cy = y.constant_value();
  if (cx && cy) return dcst<C>(*cx * *cy);
  if (cx) return scalar_mul(*cx, y);
  if (cy) return scalar_mul(*cy, x);
  return DTower<C>::lazy_node([x, y] { return x.head() * y.head(); },
                              [x, y] { return add(naive_mul(x, y.tail()), naive_mul(x.tail(), y)); });
}

template <Ring C>
DTower<C> sqr(const DTower<C>& x) {
  return mul(x, x);
}

// Quotient w = x / y with w's own prefix fed back into the convolution
// (bint rows, i.e. Pascal's triangle without its first row and last
// diagonal). A Constant divisor reduces to scaling.
template <Field C>
DTower<C> div(const DTower<C>& x, const DTower<C>& y) {
  if (const C* cy = y.constant_value()) {
    if (const C* cx = x.constant_value()) return dcst<C>(*cx / *cy);
    C d = *cy;
    return map_tower<C>([d](const C& v) { return v / d; }, x);
  }
  return DTower<C>::fix([x, y](const DTower<C>& w) {
    return DTower<C>::node(Lazy<C>([x, y] { return x.head() / y.head(); }),
                           Lazy<DTower<C>>([x, y, w] {
                             return detail::divloop<C>(trimmed_binomial_rows<C>(), x.tail(), y.tail(),
                                                       nullptr, w, y);
                           }));
  });
}

// recip (x0:>x') = ip where ip = recip x0 :> (-x' * sqr ip)
template <Field C>
DTower<C> recip(const DTower<C>& x) {
  if (const C* c = x.constant_value()) return dcst<C>(one<C>() / *c);
  return DTower<C>::fix([x](const DTower<C>& ip) {
    return DTower<C>::node(Lazy<C>([x] { return one<C>() / x.head(); }),
                           Lazy<DTower<C>>([x, ip] { return neg(mul(x.tail(), sqr(ip))); }));
  });
}

// Operators ------------------------------------------------------------------

template <Ring C>
DTower<C> operator+(const DTower<C>& a, const DTower<C>& b) {
  return add(a, b);
}
template <Ring C>
DTower<C> operator-(const DTower<C>& a, const DTower<C>& b) {
  return sub(a, b);
}
template <Ring C>
DTower<C> operator*(const DTower<C>& a, const DTower<C>& b) {
  return mul(a, b);
}
template <Field C>
DTower<C> operator/(const DTower<C>& a, const DTower<C>& b) {
  return div(a, b);
}
template <Ring C>
DTower<C> operator-(const DTower<C>& a) {
  return neg(a);
}

template <Ring C>
DTower<C> operator+(const std::type_identity_t<C>& c, const DTower<C>& b) {
  return add(dcst<C>(c), b);
}
template <Ring C>
DTower<C> operator+(const DTower<C>& a, const std::type_identity_t<C>& c) {
  return add(a, dcst<C>(c));
}
template <Ring C>
DTower<C> operator-(const std::type_identity_t<C>& c, const DTower<C>& b) {
  return sub(dcst<C>(c), b);
}
template <Ring C>
DTower<C> operator-(const DTower<C>& a, const std::type_identity_t<C>& c) {
  return sub(a, dcst<C>(c));
}
template <Ring C>
DTower<C> operator*(const std::type_identity_t<C>& c, const DTower<C>& b) {
  return scalar_mul(c, b);
}
template <Ring C>
DTower<C> operator*(const DTower<C>& a, const std::type_identity_t<C>& c) {
  return scalar_mul(c, a);
}
template <Field C>
DTower<C> operator/(const std::type_identity_t<C>& c, const DTower<C>& b) {
  return div(dcst<C>(c), b);
}
template <Field C>
DTower<C> operator/(const DTower<C>& a, const std::type_identity_t<C>& c) {
  return div(a, dcst<C>(c));
}

// Elementary functions (binary64 only) ------------------------------------------
//
// Each one is the self-referential recurrence of its derivative. Heads outside
// the function's domain give NaN or infinite elements rather than errors.

using Tower = DTower<double>;

inline Tower exp(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::exp(*c));
  return Tower::fix([x](const Tower& w) {
    return Tower::node(Lazy<double>([x] { return std::exp(x.head()); }),
                       Lazy<Tower>([x, w] { return mul(x.tail(), w); }));
  });
}

inline Tower log(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::log(*c));
  return Tower::lazy_node([x] { return std::log(x.head()); }, [x] { return div(x.tail(), x); });
}

inline Tower sqrt(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::sqrt(*c));
  return Tower::fix([x](const Tower& w) {
    return Tower::node(Lazy<double>([x] { return std::sqrt(x.head()); }),
                       Lazy<Tower>([x, w] { return scalar_mul(0.5, div(x.tail(), w)); }));
  });
}

// sin and cos share one mutually recursive pair: a = sin x0 :> x'*b, b = cos x0 :> -x'*a.
inline std::pair<Tower, Tower> sincos(const Tower& x) {
  if (const double* c = x.constant_value()) return {dcst(std::sin(*c)), dcst(std::cos(*c))};
  auto pair = std::make_shared<std::pair<Tower, Tower>>();
  Tower a = Tower::lazy_node([x] { return std::sin(x.head()); },
                             [x, pair] { return mul(x.tail(), pair->second); });
  Tower b = Tower::lazy_node([x] { return std::cos(x.head()); },
                             [x, pair] { return neg(mul(x.tail(), pair->first)); });
  *pair = {a, b};
  return {a, b};
}

inline Tower sin(const Tower& x) { return sincos(x).first; }
inline Tower cos(const Tower& x) { return sincos(x).second; }

inline Tower tan(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::tan(*c));
  return Tower::fix([x](const Tower& w) {
    return Tower::node(Lazy<double>([x] { return std::tan(x.head()); }),
                       Lazy<Tower>([x, w] { return mul(x.tail(), 1.0 + sqr(w)); }));
  });
}

inline Tower atan(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::atan(*c));
  return Tower::lazy_node([x] { return std::atan(x.head()); },
                          [x] { return div(x.tail(), 1.0 + sqr(x)); });
}

inline Tower asin(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::asin(*c));
  return Tower::lazy_node([x] { return std::asin(x.head()); },
                          [x] { return div(x.tail(), sqrt(1.0 - sqr(x))); });
}

inline Tower acos(const Tower& x) {
  if (const double* c = x.constant_value()) return dcst(std::acos(*c));
  return Tower::lazy_node([x] { return std::acos(x.head()); },
                          [x] { return neg(div(x.tail(), sqrt(1.0 - sqr(x)))); });
}

inline Tower elementary(Elementary f, const Tower& x) {
  switch (f) {
    case Elementary::exp: return exp(x);
    case Elementary::log: return log(x);
    case Elementary::sqrt: return sqrt(x);
    case Elementary::sin: return sin(x);
    case Elementary::cos: return cos(x);
    case Elementary::tan: return tan(x);
    case Elementary::atan: return atan(x);
    case Elementary::asin: return asin(x);
    case Elementary::acos: return acos(x);
  }
  return x;
}

}  // namespace ctower
