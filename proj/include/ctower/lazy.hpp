#pragma once

// Memoized lazy cells and infinite streams.
//
// Everything infinite in this library (derivative towers, power series,
// Pascal's triangle, coefficient tables) is built from two pieces:
//
//   Lazy<T>    a write-once suspension. Forcing runs the thunk at most once;
//              forcing a cell that is currently running raises
//              NonProductiveDefinition instead of looping.
//   Stream<T>  a cons cell whose head and tail are both Lazy. There is no
//              empty stream.
//
// Self-referential definitions (fix, defer) keep their unevaluated frontier
// pointing back at the stream itself, so such streams form reference cycles
// and are not reclaimed before process exit. Memory use is linear in the
// longest forced prefix.
//
// take/drop/at and Indexed walk prefixes with a loop, never by recursion on
// the element index. Individual element computations may still recurse as
// deep as the definition nests (e.g. series composition recurses once per
// coefficient); on a default 8 MiB stack that stays well above 10^4 levels
// for the operations shipped here.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ctower/errors.hpp"

namespace ctower {

template <class T>
class Lazy {
 public:
  using Thunk = std::function<T()>;

  explicit Lazy(Thunk thunk) : state_(std::make_shared<State>(std::move(thunk))) {}

  static Lazy ready(T value) {
    Lazy cell;
    cell.state_ = std::make_shared<State>(Evaluated{std::move(value)});
    return cell;
  }

  const T& force() const {
    // Holding our own reference keeps the state alive even if the owner of
    // this cell is released while the thunk runs.
    std::shared_ptr<State> state = state_;
    if (auto* done = std::get_if<Evaluated>(&state->slot)) return done->value;
    if (std::holds_alternative<InProgress>(state->slot)) {
      throw NonProductiveDefinition("lazy cell demanded while it is being evaluated");
    }
    Thunk thunk = std::move(std::get<Thunk>(state->slot));
    state->slot = InProgress{};
    try {
      T value = thunk();
      state->slot = Evaluated{std::move(value)};
    } catch (...) {
      state->slot = std::move(thunk);
      throw;
    }
    return std::get<Evaluated>(state->slot).value;
  }

  bool is_forced() const { return std::holds_alternative<Evaluated>(state_->slot); }

  // Moves the memoized value out when this handle is the only owner of the
  // cell; used to tear down long chains without deep recursion.
  std::optional<T> release_if_unique() {
    if (!state_ || state_.use_count() != 1) return std::nullopt;
    auto* done = std::get_if<Evaluated>(&state_->slot);
    if (!done) return std::nullopt;
    std::optional<T> value(std::move(done->value));
    state_.reset();
    return value;
  }

 private:
  struct InProgress {};
  struct Evaluated {
    T value;
  };
  struct State {
    explicit State(Thunk t) : slot(std::move(t)) {}
    explicit State(Evaluated v) : slot(std::move(v)) {}
    std::variant<Thunk, InProgress, Evaluated> slot;
  };

  Lazy() = default;

  std::shared_ptr<State> state_;
};

template <class T>
class Stream {
 public:
  struct Node;

  static Stream cons(Lazy<T> head, Lazy<Stream> tail) {
    Stream s;
    s.node_ = std::make_shared<Node>(std::move(head), std::move(tail));
    return s;
  }

  const T& head() const { return node_->head.force(); }
  const Stream& tail() const { return node_->tail.force(); }

  bool head_forced() const { return node_->head.is_forced(); }
  bool tail_forced() const { return node_->tail.is_forced(); }

  // Identity of the underlying cell; two handles to the same cell share all
  // memoized work.
  bool same_cell(const Stream& other) const { return node_ == other.node_; }

 private:
  Stream() = default;
  std::shared_ptr<const Node> node_;
};

template <class T>
struct Stream<T>::Node {
  Node(Lazy<T> h, Lazy<Stream<T>> t) : head(std::move(h)), tail(std::move(t)) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  // Unlinks an evaluated, unshared tail chain in a loop; the default
  // destructor would recurse once per node.
  ~Node() {
    std::optional<Stream<T>> next = tail.release_if_unique();
    while (next && next->node_.use_count() == 1) {
      std::shared_ptr<const Node> owned = std::move(next->node_);
      next = const_cast<Node&>(*owned).tail.release_if_unique();
    }
  }

  Lazy<T> head;
  Lazy<Stream<T>> tail;
};

// Construction -------------------------------------------------------------

template <class T>
Stream<T> cons(std::function<T()> head, std::function<Stream<T>()> tail) {
  return Stream<T>::cons(Lazy<T>(std::move(head)), Lazy<Stream<T>>(std::move(tail)));
}

template <class T>
Stream<T> cons_value(T head, std::function<Stream<T>()> tail) {
  return Stream<T>::cons(Lazy<T>::ready(std::move(head)), Lazy<Stream<T>>(std::move(tail)));
}

template <class T>
Stream<T> cons_value(T head, Stream<T> tail) {
  return Stream<T>::cons(Lazy<T>::ready(std::move(head)), Lazy<Stream<T>>::ready(std::move(tail)));
}

// A stream whose definition is computed on first demand of either head or
// tail. The thunk runs once.
template <class T>
Stream<T> defer(std::function<Stream<T>()> make) {
  Lazy<Stream<T>> target(std::move(make));
  return Stream<T>::cons(Lazy<T>([target] { return target.force().head(); }),
                         Lazy<Stream<T>>([target] { return target.force().tail(); }));
}

// The stream s with s == builder(s). builder must be productive: element k of
// its result may only depend on elements < k of its argument.
template <class T>
Stream<T> fix(const std::function<Stream<T>(const Stream<T>&)>& builder) {
  auto slot = std::make_shared<std::optional<Stream<T>>>();
  Stream<T> self = defer<T>([slot]() -> Stream<T> {
    if (!*slot) throw NonProductiveDefinition("fixpoint demanded before its builder returned");
    return **slot;
  });
  *slot = builder(self);
  return **slot;
}

template <class T>
Stream<T> repeat(T value) {
  // A one-cell cycle: the tail is the stream itself.
  return fix<T>([value](const Stream<T>& self) { return cons_value<T>(value, self); });
}

template <class T, class F>
Stream<T> iterate(F step, T seed) {
  return cons_value<T>(seed, [step, seed]() { return iterate<T>(step, step(seed)); });
}

// Finite prefix followed by a stream.
template <class T>
Stream<T> prepend(std::vector<T> prefix, Stream<T> rest, std::size_t from = 0) {
  if (from >= prefix.size()) return rest;
  T head = prefix[from];
  return cons_value<T>(std::move(head), [prefix = std::move(prefix), rest = std::move(rest), from]() {
    return prepend<T>(prefix, rest, from + 1);
  });
}

// Element-wise, lazy in both head and tail.
template <class F, class T, class U = std::invoke_result_t<F, const T&>>
Stream<U> map_stream(F f, const Stream<T>& s) {
  return Stream<U>::cons(Lazy<U>([f, s] { return f(s.head()); }),
                         Lazy<Stream<U>>([f, s] { return map_stream(f, s.tail()); }));
}

template <class F, class A, class B, class U = std::invoke_result_t<F, const A&, const B&>>
Stream<U> zip_with(F f, const Stream<A>& a, const Stream<B>& b) {
  return Stream<U>::cons(Lazy<U>([f, a, b] { return f(a.head(), b.head()); }),
                         Lazy<Stream<U>>([f, a, b] { return zip_with(f, a.tail(), b.tail()); }));
}

// Element k is f(k); all elements share one generator.
template <class T>
Stream<T> generate_from(std::shared_ptr<const std::function<T(std::size_t)>> f, std::size_t from) {
  return Stream<T>::cons(Lazy<T>([f, from] { return (*f)(from); }),
                         Lazy<Stream<T>>([f, from] { return generate_from<T>(f, from + 1); }));
}

template <class T, class F>
Stream<T> generate(F f) {
  return generate_from<T>(std::make_shared<const std::function<T(std::size_t)>>(std::move(f)), 0);
}

// Consumption ---------------------------------------------------------------

// Forces exactly the first n heads (and the n-1 tails between them).
template <class T>
std::vector<T> take(std::size_t n, Stream<T> s) {
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(s.head());
    if (i + 1 < n) {
      Stream<T> next = s.tail();
      s = std::move(next);
    }
  }
  return out;
}

template <class T>
Stream<T> drop(std::size_t n, Stream<T> s) {
  for (std::size_t i = 0; i < n; ++i) {
    Stream<T> next = s.tail();
    s = std::move(next);
  }
  return s;
}

template <class T>
T at(const Stream<T>& s, std::size_t n) {
  return drop(n, s).head();
}

// Random access into a stream with the node chain cached, so repeated index
// lookups cost O(1) after the first walk. Safe against reentrant lookups made
// while an element is being forced.
template <class T>
class Indexed {
 public:
  explicit Indexed(Stream<T> s) { nodes_.push_back(std::move(s)); }

  const T& operator[](std::size_t k) {
    Stream<T> s = node(k);
    return s.head();
  }

  Stream<T> node(std::size_t k) {
    while (nodes_.size() <= k) {
      std::size_t have = nodes_.size();
      Stream<T> last = nodes_[have - 1];
      Stream<T> next = last.tail();
      if (nodes_.size() == have) nodes_.push_back(std::move(next));
    }
    return nodes_[k];
  }

  std::size_t cached() const { return nodes_.size(); }

 private:
  std::vector<Stream<T>> nodes_;
};

}  // namespace ctower
