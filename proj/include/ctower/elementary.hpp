#pragma once

#include <optional>
#include <string_view>

namespace ctower {

enum class Elementary { exp, log, sqrt, sin, cos, tan, atan, asin, acos };

std::optional<Elementary> parse_elementary(std::string_view name);
std::string_view elementary_name(Elementary f);

}  // namespace ctower
