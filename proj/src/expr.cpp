#include "ctower/expr.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>

namespace ctower {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error("syntax error at offset " + std::to_string(offset) + ": expected " + join(expected) + ", found " + found),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownFunction::UnknownFunction(std::size_t offset, const std::string& name)
    : Error("unknown function '" + name + "' at offset " + std::to_string(offset)), offset_(offset) {}

ExprPtr Expr::var() { return std::make_shared<Expr>(); }

ExprPtr Expr::integer(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::int_lit;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::decimal(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::rat_lit;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = {std::move(a)};
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::power(ExprPtr base, long exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::pow;
  e->exponent = exponent;
  e->args = {std::move(base)};
  return e;
}

ExprPtr Expr::call(Elementary f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::call;
  e->fn = f;
  e->args = {std::move(a)};
  return e;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::int_lit:
    case Expr::Kind::rat_lit:
      if (a.value != b.value) return false;
      break;
    case Expr::Kind::pow:
      if (a.exponent != b.exponent) return false;
      break;
    case Expr::Kind::call:
      if (a.fn != b.fn) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!(*a.args[i] == *b.args[i])) return false;
  }
  return true;
}

namespace {

const std::vector<std::string> kOperand{"number", "x", "function", "(", "-"};
const std::vector<std::string> kOperator{"+", "-", "*", "/", "^", ")", "end of input"};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr parse() {
    ExprPtr e = sum();
    skip_space();
    if (pos_ < src_.size()) fail({"+", "-", "*", "/", "end of input"});
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  ExprPtr sum() {
    ExprPtr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Expr::Kind::add, lhs, product());
      } else if (accept('-')) {
        lhs = Expr::binary(Expr::Kind::sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr product() {
    ExprPtr lhs = power();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Expr::Kind::mul, lhs, power());
      } else if (accept('/')) {
        lhs = Expr::binary(Expr::Kind::div, lhs, power());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr power() {
    ExprPtr base = unary();
    if (!accept('^')) return base;
    skip_space();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == start) fail({"integer exponent"});
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      fail({"integer exponent"});
    }
    std::string digits(src_.substr(start, pos_ - start));
    if (digits.size() > 9) {
      pos_ = start;
      fail({"integer exponent below 10^9"});
    }
    return Expr::power(base, std::stol(digits));
  }

  ExprPtr unary() {
    if (accept('-')) {
      guard_depth();
      ExprPtr e = Expr::unary(Expr::Kind::neg, unary());
      --depth_;
      return e;
    }
    return primary();
  }

  void guard_depth() {
    if (++depth_ > 1000) fail({"shallower nesting"});
  }

  ExprPtr primary() {
    skip_space();
    if (pos_ >= src_.size()) fail(kOperand);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      guard_depth();
      ExprPtr e = sum();
      if (!accept(')')) fail({"+", "-", "*", "/", ")"});
      --depth_;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(kOperand);
  }

  ExprPtr number() {
    std::size_t start = pos_;
    bool is_decimal = false;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_decimal = true;
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      is_decimal = true;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == digits) fail({"exponent digits"});
    }
    std::string_view text = src_.substr(start, pos_ - start);
    if (text == ".") {
      pos_ = start;
      fail(kOperand);
    }
    Rational v;
    try {
      v = Rational::parse(text);
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail({"number"});
    }
    return is_decimal ? Expr::decimal(v) : Expr::integer(v);
  }

  ExprPtr name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    std::string id(src_.substr(start, pos_ - start));
    if (id == "x") return Expr::var();
    auto f = parse_elementary(id);
    skip_space();
    bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (!f) {
      if (call) throw UnknownFunction(start, id);
      pos_ = start;
      fail(kOperand);
    }
    if (!accept('(')) fail({"("});
    guard_depth();
    ExprPtr arg = sum();
    if (!accept(')')) fail({"+", "-", "*", "/", ")"});
    --depth_;
    return Expr::call(*f, arg);
  }
};

// Exact decimal text of a rational whose denominator divides a power of 10.
std::string decimal_text(const Rational& v) {
  mpz_class num = v.numerator();
  mpz_class den = v.denominator();
  std::size_t places = 0;
  mpz_class scale = 1;
  while (mpz_class(scale % den) != 0) {
    scale *= 10;
    ++places;
  }
  mpz_class scaled = abs(num) * (scale / den);
  std::string digits = scaled.get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  std::string whole = digits.substr(0, digits.size() - places);
  std::string frac = places == 0 ? "0" : digits.substr(digits.size() - places);
  return (num < 0 ? "-" : "") + whole + "." + frac;
}

std::string render_atom(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::var:
    case Expr::Kind::int_lit:
    case Expr::Kind::rat_lit:
    case Expr::Kind::call:
      return render(e);
    default:
      return "(" + render(e) + ")";
  }
}

}  // namespace

ExprPtr parse_expr(std::string_view src) { return Parser(src).parse(); }

std::string render(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::var:
      return "x";
    case K::int_lit:
      return e.value.to_string();
    case K::rat_lit:
      return decimal_text(e.value);
    case K::neg:
      return "-" + render_atom(*e.args[0]);
    case K::add:
      return "(" + render(*e.args[0]) + " + " + render(*e.args[1]) + ")";
    case K::sub:
      return "(" + render(*e.args[0]) + " - " + render(*e.args[1]) + ")";
    case K::mul:
      return "(" + render(*e.args[0]) + " * " + render(*e.args[1]) + ")";
    case K::div:
      return "(" + render(*e.args[0]) + " / " + render(*e.args[1]) + ")";
    case K::pow:
      return render_atom(*e.args[0]) + "^" + std::to_string(e.exponent);
    case K::call:
      return std::string(elementary_name(e.fn)) + "(" + render(*e.args[0]) + ")";
  }
  return "?";
}

bool uses_transcendental(const Expr& e) {
  if (e.kind == Expr::Kind::call) return true;
  for (const auto& a : e.args) {
    if (uses_transcendental(*a)) return true;
  }
  return false;
}

}  // namespace ctower
