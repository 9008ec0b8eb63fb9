#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ctower/cli.hpp"
#include "ctower/expr.hpp"

using namespace ctower;
using Q = Rational;
using K = Expr::Kind;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Random expression over the full grammar.
ExprPtr random_expr(std::mt19937& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<long> small(0, 20);
  switch (pick(gen)) {
    case 0:
      return Expr::var();
    case 1:
      return Expr::integer(Q(small(gen)));
    case 2:
      return Expr::decimal(rational(small(gen), 4));
    case 3:
      return Expr::unary(K::neg, random_expr(gen, depth - 1));
    case 4:
      return Expr::binary(K::add, random_expr(gen, depth - 1), random_expr(gen, depth - 1));
    case 5:
      return Expr::binary(K::sub, random_expr(gen, depth - 1), random_expr(gen, depth - 1));
    case 6:
      return Expr::binary(K::mul, random_expr(gen, depth - 1), random_expr(gen, depth - 1));
    case 7:
      return Expr::binary(K::div, random_expr(gen, depth - 1), random_expr(gen, depth - 1));
    case 8:
      return Expr::power(random_expr(gen, depth - 1), small(gen) % 4);
    default: {
      std::uniform_int_distribution<int> fn(0, 8);
      return Expr::call(static_cast<Elementary>(fn(gen)), random_expr(gen, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("parser shapes") {
  ExprPtr e = parse_expr("x/(1+x)");
  CHECK(*e == *Expr::binary(K::div, Expr::var(), Expr::binary(K::add, Expr::integer(Q(1)), Expr::var())));
  ExprPtr f = parse_expr("exp(-x)*sin(x)");
  CHECK(*f == *Expr::binary(K::mul, Expr::call(Elementary::exp, Expr::unary(K::neg, Expr::var())),
                            Expr::call(Elementary::sin, Expr::var())));
  CHECK(*parse_expr("1 - 2 - x") ==
        *Expr::binary(K::sub, Expr::binary(K::sub, Expr::integer(Q(1)), Expr::integer(Q(2))), Expr::var()));
  CHECK(*parse_expr("x / 2 * 3") ==
        *Expr::binary(K::mul, Expr::binary(K::div, Expr::var(), Expr::integer(Q(2))), Expr::integer(Q(3))));
  CHECK(*parse_expr("1+2*x^3") ==
        *Expr::binary(K::add, Expr::integer(Q(1)),
                      Expr::binary(K::mul, Expr::integer(Q(2)), Expr::power(Expr::var(), 3))));
  // Unary minus binds tighter than ^.
  CHECK(*parse_expr("-x^2") == *Expr::power(Expr::unary(K::neg, Expr::var()), 2));
  CHECK(*parse_expr("0.5") == *Expr::decimal(rational(1, 2)));
  CHECK(*parse_expr("  x\t* 2.5e1 ") == *Expr::binary(K::mul, Expr::var(), Expr::decimal(Q(25))));
}

TEST_CASE("parser errors") {
  try {
    parse_expr("x*(");
    FAIL("no error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_expr(""), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x +"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("(x"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x)"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x^2^3"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x^-1"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x^1.5"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("y"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("exp x"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("2 x"), SyntaxError);
  try {
    parse_expr("1 + foo(x)");
    FAIL("no error");
  } catch (const UnknownFunction& e) {
    CHECK(e.offset() == 4);
  }
  std::string deep(5000, '(');
  CHECK_THROWS_AS(parse_expr(deep + "x" + std::string(5000, ')')), SyntaxError);
}

TEST_CASE("render round trip on a corpus") {
  std::vector<std::string> corpus{
      "x", "1", "0.5", "-x", "x+1", "x-1", "x*x", "x/(1+x)", "exp(-x)*sin(x)", "x^3", "-x^2",
      "(x+1)^2", "1/(1-x)", "sqrt(1+x)", "log(1+x)", "atan(x)", "asin(x)/acos(x)", "tan(x)-x",
      "cos(sin(x)*exp(-x/2))", "x*exp(x)", "2.25*x - 0.125", "1e3*x", "-(-(x))", "x^0", "(x^2)^3",
      "3/4", "x - -x", "exp(exp(exp(x)))", "1 + 2 + 3 + x", "1 - (2 - x)", "x / (2 / x)", "(-x)^3",
      "-(x^3)", "sin(x)^2 + cos(x)^2", "log(x)", "sqrt(x*x+1)", "x^10", "123456789012345678901234567890*x",
      "0.001", "exp(-0.5*x*x)", "x*(x*(x*(x+1)+1)+1)", "atan(1/x)", "1/(1+x^2)", "(1+x)/(1-x)",
      "-1", "-0.5*x", "tan(atan(x))", "x-x", "2^3", "sin(x)/x"};
  REQUIRE(corpus.size() == 50);
  for (const auto& src : corpus) {
    ExprPtr e = parse_expr(src);
    std::string text = render(*e);
    ExprPtr back = parse_expr(text);
    CHECK_MESSAGE(*back == *e, src << " -> " << text);
  }
  std::mt19937 gen(31337);
  for (int trial = 0; trial < 300; ++trial) {
    ExprPtr e = random_expr(gen, 4);
    ExprPtr back = parse_expr(render(*e));
    REQUIRE_MESSAGE(*back == *e, render(*e));
  }
}

TEST_CASE("evaluation") {
  ExprPtr f = parse_expr("x/(1+x)");
  CHECK(eval_tower(*f, rational(3, 4), 4) ==
        std::vector<Q>{rational(3, 7), rational(16, 49), rational(-128, 343), rational(1536, 2401)});
  CHECK(eval_tower(*parse_expr("x*x"), Q(3), 4) == std::vector<Q>{9, 6, 2, 0});
  CHECK(eval_tower(*parse_expr("x^3"), 2.0, 5) == std::vector<double>{8, 12, 12, 6, 0});
  CHECK(eval_tower(*parse_expr("x^0"), Q(5), 2) == std::vector<Q>{1, 0});
  std::vector<double> s = eval_series(*parse_expr("exp(x)"), 0.0, 4);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 1.0);
  CHECK(s[2] == 0.5);
  CHECK(s[3] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(eval_series(*parse_expr("1/(1-x)"), Q(0), 4) == std::vector<Q>{1, 1, 1, 1});
  CHECK(eval_series(*parse_expr("x*x"), Q(2), 4) == std::vector<Q>{4, 4, 1, 0});
  CHECK(eval_series(*parse_expr("exp(x - 1)"), Q(1), 3) == std::vector<Q>{1, 1, rational(1, 2)});
  CHECK(eval_series(*parse_expr("log(x)"), Q(1), 3) == std::vector<Q>{0, 1, rational(-1, 2)});
  CHECK(eval_series(*parse_expr("sqrt(x)"), Q(1), 3) == std::vector<Q>{1, rational(1, 2), rational(-1, 8)});
  CHECK_THROWS_AS(eval_series(*parse_expr("exp(x)"), Q(1), 3), FieldMismatch);
  CHECK_THROWS_AS(eval_series(*parse_expr("sin(x)"), Q(0), 3), FieldMismatch);
  CHECK_THROWS_AS(eval_tower(*parse_expr("exp(x)"), Q(0), 3), FieldMismatch);
  CHECK_THROWS_AS(eval_tower(*parse_expr("1/x"), Q(0), 3), SingularDivision);
  CHECK(uses_transcendental(*parse_expr("1+exp(x)")));
  CHECK_FALSE(uses_transcendental(*parse_expr("1+x")));
}

TEST_CASE("tower and series subcommands") {
  Run r = run({"tower", "--expr", "x/(1+x)", "--at", "3/4", "--field", "rat", "--terms", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\t3/7\n1\t16/49\n2\t-128/343\n3\t1536/2401\n");
  r = run({"tower", "--expr", "x*x", "--at", "3", "--terms", "4", "--field", "rat"});
  CHECK(r.out == "0\t9\n1\t6\n2\t2\n3\t0\n");
  r = run({"tower", "--expr", "x*x", "--at", "3", "--terms", "4"});
  CHECK(r.out == "0\t9\n1\t6\n2\t2\n3\t0\n");
  r = run({"series", "--expr", "exp(x)", "--center", "0", "--terms", "4", "--format", "csv"});
  CHECK(r.out == "k,value\n0,1\n1,1\n2,0.5\n3,0.16666666666666666\n");
  r = run({"series", "--expr", "1/(1-x)", "--field", "rat", "--terms", "2", "--format", "json"});
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.size() == 2);
  CHECK(j[1]["k"] == 1);
  CHECK(j[1]["value"] == "1");
  r = run({"tower", "--expr", "log(x)", "--at", "-1", "--terms", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\tnan\n1\t-1\n");
}

TEST_CASE("revert, compose, lambert, stirling, plot-data") {
  Run r = run({"revert", "--expr", "x/(1+x)", "--at", "3/4", "--field", "rat", "--terms", "4"});
  CHECK(r.out == "0\t3/4\n1\t49/16\n2\t343/32\n3\t7203/128\n");
  // Coefficients of the inverse about f(0) = 0: y/(1-y) = y + y^2 + ...
  for (std::string m : {"series", "newton"}) {
    r = run({"revert", "--expr", "x/(1+x)", "--field", "rat", "--terms", "5", "--method", m});
    CHECK(r.out == "0\t0\n1\t1\n2\t1\n3\t1\n4\t1\n");
  }
  r = run({"revert", "--expr", "x/(1+x)", "--at", "3/4", "--field", "rat", "--terms", "3", "--method", "series"});
  // Taylor coefficients of g(y) = y/(1-y) about 3/7: g' = 49/16, g''/2 = 343/64.
  CHECK(r.out == "0\t3/4\n1\t49/16\n2\t343/64\n");

  r = run({"compose", "--outer", "exp(x)", "--inner", "sin(x)", "--terms", "4"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 4);
  r = run({"compose", "--outer", "1/(1-x)", "--inner", "x*x", "--field", "rat", "--terms", "5", "--method", "series"});
  CHECK(r.out == "0\t1\n1\t0\n2\t1\n3\t0\n4\t1\n");
  r = run({"compose", "--outer", "1/(1-x)", "--inner", "x*x", "--field", "rat", "--terms", "5"});
  CHECK(r.out == "0\t1\n1\t0\n2\t2\n3\t0\n4\t24\n");

  r = run({"lambert", "--mode", "tower", "--terms", "6"});
  CHECK(r.out == "0\t0\n1\t1\n2\t-2\n3\t9\n4\t-64\n5\t625\n");
  r = run({"lambert", "--mode", "series", "--center", "0", "--terms", "4"});
  CHECK(r.out == "0\t0\n1\t1\n2\t-1\n3\t1.5\n");

  r = run({"stirling", "--method", "both", "--terms", "3", "--format", "csv"});
  CHECK(r.out == "k,backsub,laplace\n0,1,1\n1,1/12,1/12\n2,1/288,1/288\n");
  r = run({"stirling", "--method", "laplace", "--terms", "1"});
  CHECK(r.out == "0\t1\n");

  r = run({"plot-data", "--builtin", "lambert", "--center", "0", "--order", "5", "--xmin", "-0.3", "--xmax", "2.5",
           "--samples", "10"});
  CHECK(r.code == 0);
  std::vector<std::string> rows = lines(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "x,value");
  CHECK(rows[1].rfind("-0.3,", 0) == 0);
  CHECK(rows[10].rfind("2.5,", 0) == 0);
  r = run({"plot-data", "--expr", "1/(1-x)", "--order", "2", "--xmin", "0", "--xmax", "1", "--samples", "3"});
  CHECK(r.out == "x,value\n0,1\n0.5,1.75\n1,3\n");
  r = run({"plot-data", "--builtin", "lambert", "--center", "1", "--order", "0", "--xmin", "0", "--xmax", "0",
           "--samples", "1"});
  CHECK(r.out == "x,value\n0,1\n");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"tower"}).code == 2);
  CHECK(run({"tower", "--expr", "x", "--terms", "0"}).code == 2);
  CHECK(run({"tower", "--expr", "x", "--field", "complex"}).code == 2);
  Run r = run({"tower", "--expr", "x*("});
  CHECK(r.code == 2);
  CHECK(r.err.find("offset 3") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({"tower", "--expr", "foo(x)"}).code == 2);
  CHECK(run({"tower", "--expr", "x", "--at", "abc", "--field", "rat"}).code == 2);
  CHECK(run({"tower", "--expr", "x", "--at", "1/0", "--field", "rat"}).code == 2);
  CHECK(run({"tower", "--expr", "1/x", "--at", "0", "--field", "rat"}).code == 1);
  CHECK(run({"tower", "--expr", "exp(x)", "--field", "rat"}).code == 1);
  CHECK(run({"revert", "--expr", "x*x", "--method", "series", "--field", "rat"}).code == 1);
  CHECK(run({"plot-data", "--xmin", "0", "--xmax", "1"}).code == 2);
  CHECK(run({"plot-data", "--expr", "x", "--builtin", "lambert", "--xmin", "0", "--xmax", "1"}).code == 2);
  Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("stirling") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args{"series", "--expr", "log(1+x)/(1-x)", "--field", "rat", "--terms", "12"};
  Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
