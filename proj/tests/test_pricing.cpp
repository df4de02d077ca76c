#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cop/errors.hpp"
#include "cop/pricing.hpp"
#include "cop/records.hpp"
#include "cop/stats.hpp"
#include "test_support.hpp"

using namespace cop;
using namespace coptest;

TEST_CASE("zero usage costs zero") {
  PriceSheet sheet = make_sheet("s", "0.15", "0.60");
  AttemptRecord r = make_attempt("m", "d", "p", 0, true, 0, 0);
  CHECK(attempt_cost(r, sheet) == Money(Rational(0)));
}

TEST_CASE("token pricing matches hand arithmetic") {
  // 1000 in + 500 out at $0.15/M in, $0.60/M out
  PriceSheet sheet = make_sheet("s", "0.15", "0.60");
  AttemptRecord r = make_attempt("m", "d", "p", 0, true, 1000, 500);
  CHECK(attempt_cost(r, sheet) == Money::parse("0.00045"));
}

TEST_CASE("cost_override supersedes token pricing") {
  PriceSheet sheet = make_sheet("s", "0.15", "0.60");
  AttemptRecord r = make_attempt("m", "d", "p", 0, true, 0, 1000000);
  r.cost_override = Money::parse("0.01");
  CHECK(attempt_cost(r, sheet) == Money::parse("0.01"));
}

TEST_CASE("extras are priced per unit; unknown names error") {
  PriceSheet sheet = make_sheet("s", "0", "0");
  sheet.extra_unit_prices.emplace("tool_call", Money::parse("0.002"));
  AttemptRecord r = make_attempt("m", "d", "p", 0, true, 0, 0);
  r.extra_resources.emplace("tool_call", Rational(3));
  CHECK(attempt_cost(r, sheet) == Money::parse("0.006"));

  r.extra_resources.emplace("gpu_hours", Rational(1));
  CHECK_THROWS_AS(attempt_cost(r, sheet), CostingError);
}

TEST_CASE("expert cost: rate times minutes over 60") {
  CHECK(expert_cost(make_profile("gpqa", "d", "100", "100", "35"), RateBound::high) ==
        Money(Rational(5833, 100) + Rational(1, 300)));  // 58.33...
  CHECK(expert_cost(make_profile("bbq", "d", "15", "15", "0.4"), RateBound::high) ==
        Money::parse("0.10"));
  CHECK(expert_cost(make_profile("aime", "d", "45", "100", "12"), RateBound::high) ==
        Money::parse("20"));
  CHECK(expert_cost(make_profile("aime", "d", "45", "100", "12"), RateBound::low) ==
        Money::parse("9"));
}

TEST_CASE("regional profile with FX conversion") {
  // INR 800/h, 3.7 min -> INR 49.33...; about $0.56 at 88 INR per USD
  const Money inr = expert_cost(make_profile("in-gsm8k", "d", "350", "800", "3.7"), RateBound::high);
  CHECK(inr == Money(Rational(800) * Rational(37, 10) / Rational(60)));
  CHECK(inr.to_string(4).substr(0, 5) == "49.33");
  std::map<std::string, Rational> fx{{"INR", Rational(88)}};
  const Money usd = convert_currency(inr, "INR", "USD", fx);
  CHECK(doctest::Approx(usd.to_double()).epsilon(0.01) == 0.56);
}

TEST_CASE("linearity and monotonicity of attempt cost") {
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    PriceSheet sheet = make_sheet("s", std::to_string(rng.below(100)) + "." + std::to_string(rng.below(100)),
                                  std::to_string(rng.below(100)));
    sheet.extra_unit_prices.emplace("r", Money(Rational(static_cast<long>(rng.below(50)))));
    AttemptRecord x1 = make_attempt("m", "d", "p", 0, true, rng.below(10000), rng.below(10000));
    AttemptRecord x2 = make_attempt("m", "d", "p", 1, true, rng.below(10000), rng.below(10000));
    x1.extra_resources.emplace("r", Rational(static_cast<long>(rng.below(5))));
    x2.extra_resources.emplace("r", Rational(static_cast<long>(rng.below(5))));

    AttemptRecord sum = make_attempt("m", "d", "p", 2, true, x1.input_tokens + x2.input_tokens,
                                     x1.output_tokens + x2.output_tokens);
    sum.extra_resources.emplace("r", x1.extra_resources.at("r") + x2.extra_resources.at("r"));

    CHECK(attempt_cost(sum, sheet) == attempt_cost(x1, sheet) + attempt_cost(x2, sheet));

    AttemptRecord bigger = x1;
    bigger.output_tokens += 1 + rng.below(1000);
    CHECK(attempt_cost(x1, sheet) <= attempt_cost(bigger, sheet));
  }
}

TEST_CASE("low bound never exceeds high bound") {
  SplitMix64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const long low = 1 + static_cast<long>(rng.below(100));
    const long high = low + static_cast<long>(rng.below(100));
    ExpertProfile p = make_profile("p", "d", std::to_string(low), std::to_string(high),
                                   std::to_string(1 + rng.below(60)));
    CHECK(expert_cost(p, RateBound::low) <= expert_cost(p, RateBound::high));
  }
}
