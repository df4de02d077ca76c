#pragma once

#include <map>
#include <optional>
#include <string>

#include "cop/money.hpp"

namespace cop {

struct AttemptRecord;

/// Unit prices w. Token prices are quoted per million tokens, matching the
/// provider convention; extra resources are priced per unit.
struct PriceSheet {
  std::string id;
  std::string currency = "USD";
  Money input_price_per_million_tokens{Rational(0)};
  Money output_price_per_million_tokens{Rational(0)};
  std::map<std::string, Money> extra_unit_prices;
};

/// Resource quantities x for one attempt. input_tokens / output_tokens are
/// reserved names; anything else must be priced by the sheet's extras.
struct CostVector {
  std::map<std::string, Rational> quantities;
};

/// Human-expert baseline: hourly rate band and average minutes per problem
/// for one dataset. Success probability is treated as exactly 1.
struct ExpertProfile {
  std::string id;
  std::string dataset_id;
  std::string currency = "USD";
  Money hourly_rate_low{Rational(0)};
  Money hourly_rate_high{Rational(0)};
  Rational minutes_per_problem{0};
  std::string region_label;
};

enum class RateBound { low, high };

/// Money for one attempt: cost_override if present, otherwise the inner
/// product of the record's quantities with the sheet's unit prices.
Money attempt_cost(const AttemptRecord& record, const PriceSheet& sheet);

/// Inner product w.x for an explicit cost vector.
Money vector_cost(const CostVector& x, const PriceSheet& sheet);

/// hourly_rate(bound) * minutes_per_problem / 60. Exact.
Money expert_cost(const ExpertProfile& profile, RateBound bound);

/// Converts between currencies via a registry-supplied rate table mapping
/// currency code -> units per USD.
Money convert_currency(const Money& amount, const std::string& from,
                       const std::string& to,
                       const std::map<std::string, Rational>& units_per_usd);

}  // namespace cop
