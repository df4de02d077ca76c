#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cop/errors.hpp"
#include "cop/stats.hpp"
#include "test_support.hpp"

using namespace cop;
using namespace coptest;

namespace {

std::vector<std::pair<double, double>> decay_series(double a, double b, double c, int n,
                                                    double spacing) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double t = i * spacing;
    out.push_back({t, a * std::exp(-b * t) + c});
  }
  return out;
}

}  // namespace

TEST_CASE("fit_decay recovers noiseless parameters and half-life") {
  for (const double half_life : {2.6, 7.1}) {
    const double b = std::log(2.0) / half_life;
    const auto series = decay_series(50.0, b, 0.5, 14, 1.5);
    const DecayFit fit = fit_decay(series);
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.a - 50.0) / 50.0 < 0.01);
    CHECK(std::abs(fit.b - b) / b < 0.01);
    CHECK(std::abs(fit.c - 0.5) / 0.5 < 0.01);
    REQUIRE(fit.half_life_months.has_value());
    CHECK(std::abs(*fit.half_life_months - half_life) / half_life < 0.01);
  }
}

TEST_CASE("fit_decay recovers half-life within 15% under 5% noise in most seeds") {
  const double true_half_life = 4.0;
  const double b = std::log(2.0) / true_half_life;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitMix64 rng(derive_seed(9001, seed));
    auto series = decay_series(30.0, b, 1.0, 16, 1.25);
    for (auto& [t, y] : series) y *= 1.0 + 0.05 * (2.0 * rng.uniform() - 1.0);
    const DecayFit fit = fit_decay(series);
    if (fit.converged && fit.half_life_months &&
        std::abs(*fit.half_life_months - true_half_life) / true_half_life < 0.15)
      ++ok;
  }
  CHECK(ok >= 90);
}

TEST_CASE("fit_decay rejects short or non-finite input") {
  CHECK_THROWS_AS(fit_decay(decay_series(1, 1, 0, 3, 1.0)), FitError);
  auto bad = decay_series(1, 1, 0, 6, 1.0);
  bad[2].second = std::nan("");
  CHECK_THROWS_AS(fit_decay(bad), FitError);
}

TEST_CASE("fit_decay on extended values rejects infinities with a truncation hint") {
  std::vector<std::pair<double, ExtMoney>> series;
  series.push_back({0.0, ExtMoney::infinity()});
  for (int i = 1; i < 6; ++i) series.push_back({double(i), ExtMoney{Money::parse("1")}});
  CHECK_THROWS_WITH_AS(fit_decay(series), doctest::Contains("truncate"), FitError);

  std::vector<std::pair<double, ExtMoney>> finite;
  const auto plain = decay_series(10.0, 0.3, 0.2, 10, 1.0);
  for (const auto& [t, y] : plain)
    finite.push_back({t, ExtMoney{Money(Rational(std::llround(y * 1e9), 1000000000))}});
  CHECK(fit_decay(finite).converged);
}

TEST_CASE("fit_decay handles a flat series") {
  const DecayFit fit = fit_decay(decay_series(0.0, 0.0, 3.0, 8, 1.0));
  REQUIRE(fit.converged);
  CHECK(fit.residual_norm < 1e-9);
  CHECK(std::abs(fit.a * std::exp(-fit.b * 0.0) + fit.c - 3.0) < 1e-6);
}

namespace {

CellData one_cell(std::uint32_t n, std::uint32_t c, const std::string& cost) {
  CellData data;
  CellDraws draws;
  for (std::uint32_t i = 0; i < n; ++i) {
    draws.correct.push_back(i < c);
    draws.costs.push_back(Money::parse(cost));
  }
  data[{"m", "p"}] = std::move(draws);
  return data;
}

Statistic cop_statistic() {
  return [](const StatsTable& t) { return cost_of_pass(t.cells.begin()->second); };
}

}  // namespace

TEST_CASE("bootstrap_ci is deterministic in the seed and sensitive to it") {
  const CellData data = one_cell(8, 5, "0.001");
  const BootstrapCI a = bootstrap_ci(data, cop_statistic(), "v", 400, 0.95, 7);
  const BootstrapCI b = bootstrap_ci(data, cop_statistic(), "v", 400, 0.95, 7);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  const BootstrapCI c = bootstrap_ci(data, cop_statistic(), "v", 400, 0.95, 8);
  CHECK((c.lower != a.lower || c.upper != a.upper));
}

TEST_CASE("bootstrap_ci on a degenerate cell has zero width at the point") {
  const CellData data = one_cell(8, 8, "0.002");
  const BootstrapCI ci = bootstrap_ci(data, cop_statistic(), "v", 300, 0.95, 1);
  CHECK(ci.lower == ExtMoney{Money::parse("0.002")});
  CHECK(ci.upper == ExtMoney{Money::parse("0.002")});
  CHECK(ci.point == ExtMoney{Money::parse("0.002")});
  CHECK(ci.midpoint == ExtMoney{Money::parse("0.002")});
}

TEST_CASE("bootstrap_ci brackets the point and validates inputs") {
  const CellData data = one_cell(8, 5, "0.001");
  const BootstrapCI ci = bootstrap_ci(data, cop_statistic(), "v", 500, 0.90, 3);
  CHECK(!(ci.point < ci.lower));
  CHECK(!(ci.upper < ci.point));
  CHECK(ci.n_resamples == 500);
  CHECK_THROWS_AS(bootstrap_ci(data, cop_statistic(), "v", 100, 1.5, 0), EstimationError);
  CHECK_THROWS_AS(bootstrap_ci(CellData{}, cop_statistic(), "v", 100, 0.95, 0), EstimationError);
  CellData empty_cell;
  empty_cell[{"m", "p"}] = CellDraws{};
  CHECK_THROWS_AS(bootstrap_ci(empty_cell, cop_statistic(), "v", 100, 0.95, 0), EstimationError);
}

TEST_CASE("bootstrap_ci handles resamples whose statistic is infinite") {
  // 1 correct of 6: some resamples draw zero successes -> upper tail at INF
  const CellData data = one_cell(6, 1, "0.01");
  const BootstrapCI ci = bootstrap_ci(data, cop_statistic(), "v", 600, 0.95, 11);
  CHECK(ci.upper.is_infinite());
  REQUIRE(!ci.lower.is_infinite());
  CHECK(!(ExtMoney{Money::parse("0.06")} < ci.lower));  // c >= 1 resample caps v at 0.06
  CHECK(ci.midpoint.is_infinite());
}

TEST_CASE("collect_cell_data prices attempts and synthesizes the expert cell") {
  Registry reg;
  reg.datasets.emplace("ds", make_dataset("ds"));
  reg.problems.emplace(std::make_pair("ds", "p1"), make_problem("ds", "p1"));
  reg.price_sheets.emplace("sheet", make_sheet("sheet", "0.15", "0.60"));
  Strategy m = make_model("m1", "sheet");
  reg.strategies.emplace(m.id, m);
  Strategy e = make_expert();
  reg.strategies.emplace(e.id, e);
  reg.expert_profiles.emplace("prof", make_profile("prof", "ds", "45", "100", "12"));
  reg.add_attempt(make_attempt("m1", "ds", "p1", 0, true, 1000, 500));

  const CellData data = collect_cell_data(reg, "ds", {"m1", "expert"});
  REQUIRE(data.count({"m1", "p1"}) == 1);
  CHECK(data.at({"m1", "p1"}).costs[0] == Money::parse("0.00045"));
  REQUIRE(data.count({"expert", "p1"}) == 1);
  CHECK(data.at({"expert", "p1"}).costs[0] == Money::parse("20"));
  CHECK(data.at({"expert", "p1"}).correct[0]);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}
