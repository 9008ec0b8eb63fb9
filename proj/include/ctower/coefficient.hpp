#pragma once

// Coefficient fields for towers and series.
//
// Towers and series are templates over a coefficient type C. What C must
// provide is expressed by Coef<C> (integer embedding and division by a
// nonzero integer) plus the ordinary arithmetic operators, and checked by the
// Ring / Field / Transcendental concepts below.
//
// Shipped instances: Rational (exact, GMP-backed), double, and Series<C>
// itself (see series.hpp), which only reaches Ring.

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ctower/errors.hpp"

namespace ctower {

// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const mpz_class& n) : value_(n) {}
  // Throws ZeroDenominator when den == 0.
  Rational(const mpz_class& num, const mpz_class& den);

  // Accepts "p", "p/q", and decimal literals such as "-0.25" or "1.5e-3".
  // Throws std::invalid_argument on malformed text, ZeroDenominator on "p/0".
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  bool is_zero() const { return sgn(value_) == 0; }
  double to_double() const { return value_.get_d(); }

  // "p/q", or "p" when q == 1.
  std::string to_string() const;

  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  // Throws SingularDivision on division by zero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.value_ = -a.value_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_;
};

// Throws ZeroDenominator when q == 0.
Rational rational(long p, long q);

// Shortest decimal text that reads back to the same double; "nan", "inf",
// "-inf" for non-finite values.
std::string render(double value);
inline std::string render(const Rational& value) { return value.to_string(); }

template <class C>
struct Coef;

template <>
struct Coef<double> {
  static constexpr bool exact = false;
  static double from_int(long n) { return static_cast<double>(n); }
  static double from_big(const mpz_class& z) { return z.get_d(); }
  static double times_integer(double c, long n) { return c * static_cast<double>(n); }
  static double divide_by_integer(double c, long n) { return c / static_cast<double>(n); }
  static bool is_zero(double c) { return c == 0.0; }
};

template <>
struct Coef<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(long n) { return Rational(n); }
  static Rational from_big(const mpz_class& z) { return Rational(z); }
  static Rational times_integer(const Rational& c, long n) { return c * Rational(n); }
  static Rational divide_by_integer(const Rational& c, long n) { return c / Rational(n); }
  static bool is_zero(const Rational& c) { return c.is_zero(); }
};

// Commutative ring with an integer embedding and division by nonzero
// integers (the latter is what formal integration needs).
template <class C>
concept Ring = std::copyable<C> && requires(const C& a, const C& b, long n, const mpz_class& z) {
  { a + b } -> std::convertible_to<C>;
  { a - b } -> std::convertible_to<C>;
  { a * b } -> std::convertible_to<C>;
  { -a } -> std::convertible_to<C>;
  { Coef<C>::from_int(n) } -> std::convertible_to<C>;
  { Coef<C>::from_big(z) } -> std::convertible_to<C>;
  { Coef<C>::times_integer(a, n) } -> std::convertible_to<C>;
  { Coef<C>::divide_by_integer(a, n) } -> std::convertible_to<C>;
  { Coef<C>::is_zero(a) } -> std::convertible_to<bool>;
};

template <class C>
concept Field = Ring<C> && requires(const C& a, const C& b) {
  { a / b } -> std::convertible_to<C>;
};

// Only binary64 carries exp, log, sin and friends.
template <class C>
concept Transcendental = Field<C> && std::same_as<C, double>;

template <Ring C>
C zero() {
  return Coef<C>::from_int(0);
}

template <Ring C>
C one() {
  return Coef<C>::from_int(1);
}

}  // namespace ctower
