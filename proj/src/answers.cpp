#include "cop/answers.hpp"

#include <cctype>

namespace cop {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string casefold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> normalize_choice(std::string_view s) {
  std::string kept;
  for (char c : s) {
    if (c == '(' || c == ')' || c == '.' || std::isspace(static_cast<unsigned char>(c)))
      continue;
    kept.push_back(c);
  }
  if (kept.size() != 1 || !std::isalpha(static_cast<unsigned char>(kept[0])))
    return std::nullopt;
  return casefold(kept);
}

std::optional<Rational> parse_numeric(std::string_view s) {
  std::string t = trim(s);
  if (!t.empty() && t[0] == '+') t.erase(t.begin());
  try {
    return Money::parse(t).value();
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace cop
