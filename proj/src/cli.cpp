#include "ctower/cli.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctower/applications.hpp"
#include "ctower/expr.hpp"

namespace ctower {

namespace {

enum class FieldKind { rat, f64 };
enum class Format { table, csv, json };

struct Common {
  FieldKind field = FieldKind::f64;
  Format format = Format::table;
  std::size_t terms = 8;
};

// Usage errors discovered after flag parsing (bad numbers and the like).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class C>
C parse_number(const std::string& text) {
  if constexpr (std::is_same_v<C, double>) {
    double v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && end == text.data() + text.size()) return v;
    return parse_number<Rational>(text).to_double();
  } else {
    try {
      return Rational::parse(text);
    } catch (const std::invalid_argument&) {
      throw UsageError("not a number: '" + text + "'");
    } catch (const ZeroDenominator&) {
      throw UsageError("zero denominator in '" + text + "'");
    }
  }
}

template <class C>
std::vector<std::string> rendered(const std::vector<C>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(render(v));
  return out;
}

void emit(const std::vector<std::vector<std::string>>& columns, const std::vector<std::string>& names,
          Format format, std::ostream& out) {
  std::size_t rows = columns.front().size();
  switch (format) {
    case Format::table:
      for (std::size_t k = 0; k < rows; ++k) {
        out << k;
        for (const auto& c : columns) out << '\t' << c[k];
        out << '\n';
      }
      break;
    case Format::csv:
      out << "k";
      for (const auto& n : names) out << ',' << n;
      out << '\n';
      for (std::size_t k = 0; k < rows; ++k) {
        out << k;
        for (const auto& c : columns) out << ',' << c[k];
        out << '\n';
      }
      break;
    case Format::json: {
      nlohmann::json arr = nlohmann::json::array();
      for (std::size_t k = 0; k < rows; ++k) {
        nlohmann::json row{{"k", k}};
        for (std::size_t i = 0; i < columns.size(); ++i) row[names[i]] = columns[i][k];
        arr.push_back(row);
      }
      out << arr.dump() << '\n';
      break;
    }
  }
}

void emit_values(const std::vector<std::string>& values, Format format, std::ostream& out) {
  emit({values}, {"value"}, format, out);
}

// Dispatches a computation templated on the coefficient type.
template <class F>
std::vector<std::string> with_field(FieldKind field, F&& f) {
  if (field == FieldKind::rat) return rendered(f(Rational()));
  return rendered(f(0.0));
}

template <class C>
Series<C> without_constant(const Series<C>& s) {
  return Series<C>::cons_value(zero<C>(), stl(s));
}

std::size_t newton_iterations(std::size_t terms) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < terms) ++k;
  return k + 1;
}

void add_common(CLI::App* cmd, Common& c, bool with_field_flag) {
  if (with_field_flag) {
    cmd->add_option("--field", c.field, "Coefficient field")
        ->transform(CLI::CheckedTransformer(std::map<std::string, FieldKind>{{"rat", FieldKind::rat}, {"f64", FieldKind::f64}}));
  }
  cmd->add_option("--terms", c.terms, "Number of terms")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  cmd->add_option("--format", c.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derivative towers and power series"};
  app.name("ctower");
  app.require_subcommand(1);

  Common common;
  std::string expr_text, point = "0", outer_text, inner_text, method, mode = "tower", builtin;
  std::size_t order = 5, samples = 50;
  double xmin = 0, xmax = 1;

  auto* tower = app.add_subcommand("tower", "Derivatives f, f', f'', ... of an expression at a point");
  tower->add_option("--expr", expr_text, "Expression in x")->required();
  tower->add_option("--at", point, "Evaluation point");
  add_common(tower, common, true);

  auto* series = app.add_subcommand("series", "Taylor coefficients of an expression about a center");
  series->add_option("--expr", expr_text, "Expression in x")->required();
  series->add_option("--center,--at", point, "Expansion center");
  add_common(series, common, true);

  auto* revert = app.add_subcommand("revert", "Inverse function: derivatives (chain) or Taylor coefficients");
  revert->add_option("--expr", expr_text, "Expression in x")->required();
  revert->add_option("--at", point, "Point x; the inverse is taken about f(x)");
  revert->add_option("--method", method, "chain, series or newton")
      ->check(CLI::IsMember({"chain", "series", "newton"}))
      ->default_str("chain");
  add_common(revert, common, true);

  auto* compose = app.add_subcommand("compose", "Composition outer(inner(x)) about a point");
  compose->add_option("--outer", outer_text, "Outer expression in x")->required();
  compose->add_option("--inner", inner_text, "Inner expression in x")->required();
  compose->add_option("--at", point, "Point x");
  compose->add_option("--method", method, "chain or series")->check(CLI::IsMember({"chain", "series"}));
  add_common(compose, common, true);

  auto* lambert = app.add_subcommand("lambert", "Lambert W: derivative tower at 0, or series about w0 e^w0");
  lambert->add_option("--mode", mode, "tower or series")->check(CLI::IsMember({"tower", "series"}));
  lambert->add_option("--center", point, "Series mode: the value w0 = W(x0)");
  add_common(lambert, common, false);

  auto* stirling = app.add_subcommand("stirling", "Stirling series coefficients");
  stirling->add_option("--method", method, "backsub, laplace or both")
      ->check(CLI::IsMember({"backsub", "laplace", "both"}));
  add_common(stirling, common, false);

  auto* plot = app.add_subcommand("plot-data", "CSV samples of a truncated Taylor polynomial");
  auto* plot_expr = plot->add_option("--expr", expr_text, "Expression in x");
  auto* plot_builtin = plot->add_option("--builtin", builtin, "Built-in series")->check(CLI::IsMember({"lambert"}));
  plot_expr->excludes(plot_builtin);
  plot->add_option("--center", point, "Expansion center (lambert: the value w0 = W(x0))");
  plot->add_option("--order", order, "Truncation order")->check(CLI::Range(std::size_t{0}, std::size_t{1} << 16));
  plot->add_option("--xmin", xmin, "First sample")->required();
  plot->add_option("--xmax", xmax, "Last sample")->required();
  plot->add_option("--samples", samples, "Number of samples")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::size_t n = common.terms;
    if (tower->parsed() || series->parsed()) {
      ExprPtr e = parse_expr(expr_text);
      bool is_tower = tower->parsed();
      emit_values(with_field(common.field,
                             [&]<class C>(C) {
                               C x = parse_number<C>(point);
                               return is_tower ? eval_tower(*e, x, n) : eval_series(*e, x, n);
                             }),
                  common.format, out);
    } else if (revert->parsed()) {
      ExprPtr e = parse_expr(expr_text);
      if (method.empty()) method = "chain";
      emit_values(with_field(common.field,
                             [&]<class C>(C) {
                               C x = parse_number<C>(point);
                               if (method == "chain") {
                                 std::function<DTower<C>(const DTower<C>&)> f = [e](const DTower<C>& u) {
                                   return build_tower(*e, u);
                                 };
                                 return take(n, revchain(f, x));
                               }
                               Series<C> u = without_constant(build_series(*e, series_var(x)));
                               Series<C> r = method == "series" ? sreverse(u)
                                                                : at(newtreverse(u), newton_iterations(n));
                               std::vector<C> coeffs = to_list(r, n);
                               coeffs[0] = x;
                               return coeffs;
                             }),
                  common.format, out);
    } else if (compose->parsed()) {
      ExprPtr g = parse_expr(outer_text);
      ExprPtr f = parse_expr(inner_text);
      if (method.empty()) method = "chain";
      emit_values(with_field(common.field,
                             [&]<class C>(C) {
                               C x = parse_number<C>(point);
                               if (method == "chain") {
                                 DTower<C> ft = build_tower(*f, dvar(x));
                                 DTower<C> gt = build_tower(*g, dvar(ft.head()));
                                 return take(n, compchain(gt, ft));
                               }
                               Series<C> v = build_series(*f, series_var(x));
                               Series<C> u = build_series(*g, series_var(shd(v)));
                               return to_list(scompose(u, without_constant(v)), n);
                             }),
                  common.format, out);
    } else if (lambert->parsed()) {
      std::vector<double> values;
      if (mode == "tower") {
        values = take(n, lambert_w_tower());
      } else {
        values = to_list(lambert_w_series(parse_number<double>(point)), n);
      }
      emit_values(rendered(values), common.format, out);
    } else if (stirling->parsed()) {
      if (method.empty()) method = "backsub";
      auto backsub = [&] { return to_list(stirling_backsub(), n); };
      auto laplace = [&] {
        std::vector<Rational> v{Rational(1)};
        std::vector<Rational> rest = take(n - 1, stirling_laplace());
        v.insert(v.end(), rest.begin(), rest.end());
        return v;
      };
      if (method == "backsub") {
        emit_values(rendered(backsub()), common.format, out);
      } else if (method == "laplace") {
        emit_values(rendered(laplace()), common.format, out);
      } else {
        std::vector<Rational> a = backsub();
        std::vector<Rational> b = laplace();
        emit({rendered(a), rendered(b)}, {"backsub", "laplace"}, common.format, out);
        if (a != b) {
          err << "ctower: the two derivations disagree\n";
          return 1;
        }
      }
    } else if (plot->parsed()) {
      std::optional<SeriesF> s;
      double x0 = 0;
      if (!builtin.empty()) {
        double w0 = parse_number<double>(point);
        s = lambert_w_series(w0);
        x0 = w0 * std::exp(w0);
      } else if (!expr_text.empty()) {
        x0 = parse_number<double>(point);
        s = build_series(*parse_expr(expr_text), series_var(x0));
      } else {
        throw UsageError("plot-data needs --expr or --builtin");
      }
      out << "x,value\n";
      for (std::size_t i = 0; i < samples; ++i) {
        double x = samples == 1 ? xmin : xmin + (xmax - xmin) * static_cast<double>(i) / static_cast<double>(samples - 1);
        out << render(x) << ',' << render(evaluate_truncated(*s, order, x - x0)) << '\n';
      }
    }
  } catch (const SyntaxError& e) {
    err << "ctower: " << e.what() << '\n';
    return 2;
  } catch (const UnknownFunction& e) {
    err << "ctower: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "ctower: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "ctower: " << e.what() << '\n';
    return 1;
  } catch (const std::bad_alloc&) {
    err << "ctower: out of memory\n";
    return 1;
  }
  return 0;
}

}  // namespace ctower
