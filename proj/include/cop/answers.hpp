#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cop/money.hpp"

namespace cop {

/// Trims ASCII whitespace from both ends.
std::string trim(std::string_view s);

/// Lowercases ASCII.
std::string casefold(std::string_view s);

/// Multiple-choice normalization: strip parentheses, periods and whitespace,
/// casefold. Yields the bare option letter when the input is one; nullopt when
/// what remains is not a single letter.
std::optional<std::string> normalize_choice(std::string_view s);

/// Numeric normalization: strip commas and a leading '+', then parse as an
/// exact decimal. nullopt when unparseable.
std::optional<Rational> parse_numeric(std::string_view s);

}  // namespace cop
