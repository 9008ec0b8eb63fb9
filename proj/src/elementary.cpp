#include "ctower/elementary.hpp"

#include <array>
#include <utility>

namespace ctower {

namespace {

constexpr std::array<std::pair<std::string_view, Elementary>, 9> kNames{{
    {"exp", Elementary::exp},
    {"log", Elementary::log},
    {"sqrt", Elementary::sqrt},
    {"sin", Elementary::sin},
    {"cos", Elementary::cos},
    {"tan", Elementary::tan},
    {"atan", Elementary::atan},
    {"asin", Elementary::asin},
    {"acos", Elementary::acos},
}};

}  // namespace

std::optional<Elementary> parse_elementary(std::string_view name) {
  for (const auto& [n, f] : kNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::string_view elementary_name(Elementary f) {
  for (const auto& [n, g] : kNames) {
    if (g == f) return n;
  }
  return "?";
}

}  // namespace ctower
