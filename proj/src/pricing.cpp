#include "cop/pricing.hpp"

#include "cop/errors.hpp"
#include "cop/records.hpp"

namespace cop {

namespace {
const Rational kMillion(1000000);
const Rational kMinutesPerHour(60);
}  // namespace

Money attempt_cost(const AttemptRecord& record, const PriceSheet& sheet) {
  if (record.cost_override) return *record.cost_override;
  Money total = sheet.input_price_per_million_tokens *
                (Rational(record.input_tokens) / kMillion);
  total += sheet.output_price_per_million_tokens *
           (Rational(record.output_tokens) / kMillion);
  for (const auto& [name, quantity] : record.extra_resources) {
    auto it = sheet.extra_unit_prices.find(name);
    if (it == sheet.extra_unit_prices.end())
      throw CostingError("price sheet '" + sheet.id + "' has no unit price for resource '" +
                         name + "'");
    total += it->second * quantity;
  }
  return total;
}

Money vector_cost(const CostVector& x, const PriceSheet& sheet) {
  Money total(0);
  for (const auto& [name, quantity] : x.quantities) {
    if (name == "input_tokens") {
      total += sheet.input_price_per_million_tokens * (quantity / kMillion);
    } else if (name == "output_tokens") {
      total += sheet.output_price_per_million_tokens * (quantity / kMillion);
    } else {
      auto it = sheet.extra_unit_prices.find(name);
      if (it == sheet.extra_unit_prices.end())
        throw CostingError("price sheet '" + sheet.id + "' has no unit price for resource '" +
                           name + "'");
      total += it->second * quantity;
    }
  }
  return total;
}

Money expert_cost(const ExpertProfile& profile, RateBound bound) {
  const Money& rate = bound == RateBound::low ? profile.hourly_rate_low : profile.hourly_rate_high;
  return rate * (profile.minutes_per_problem / kMinutesPerHour);
}

Money convert_currency(const Money& amount, const std::string& from, const std::string& to,
                       const std::map<std::string, Rational>& units_per_usd) {
  if (from == to) return amount;
  auto rate_of = [&](const std::string& code) -> Rational {
    if (code == "USD") return Rational(1);
    auto it = units_per_usd.find(code);
    if (it == units_per_usd.end())
      throw CostingError("no FX rate registered for currency '" + code + "'");
    return it->second;
  };
  // amount / (from units per USD) * (to units per USD)
  return amount * (rate_of(to) / rate_of(from));
}

}  // namespace cop
