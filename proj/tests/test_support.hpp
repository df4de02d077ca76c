#pragma once

// Shared fixture builders for the test suites.

#include <string>
#include <vector>

#include "cop/metrics.hpp"
#include "cop/records.hpp"

namespace coptest {

using namespace cop;

inline DatasetRef make_dataset(const std::string& id,
                               GraderKind kind = GraderKind::numeric,
                               std::optional<std::uint32_t> options = std::nullopt) {
  DatasetRef d;
  d.id = id;
  d.task_category = TaskCategory::other;
  d.grader_kind = kind;
  d.option_count = options;
  return d;
}

inline ProblemInstance make_problem(const std::string& dataset, const std::string& id,
                                    const std::string& input = "2+2?",
                                    const std::string& ref = "4") {
  return ProblemInstance{dataset, id, input, ref};
}

inline PriceSheet make_sheet(const std::string& id, const std::string& in_price,
                             const std::string& out_price) {
  PriceSheet p;
  p.id = id;
  p.input_price_per_million_tokens = Money::parse(in_price);
  p.output_price_per_million_tokens = Money::parse(out_price);
  return p;
}

inline Strategy make_model(const std::string& id, const std::string& sheet,
                           const Date& release = Date{2024, 7, 1},
                           Family family = Family::lightweight) {
  Strategy s;
  s.id = id;
  s.kind = StrategyKind::model;
  s.family = family;
  s.release_date = release;
  s.price_sheet_id = sheet;
  return s;
}

inline Strategy make_expert(const std::string& id = "expert") {
  Strategy s;
  s.id = id;
  s.kind = StrategyKind::expert;
  s.family = Family::expert;
  s.release_date = Date::epoch();
  return s;
}

inline ExpertProfile make_profile(const std::string& id, const std::string& dataset,
                                  const std::string& rate_low, const std::string& rate_high,
                                  const std::string& minutes) {
  ExpertProfile p;
  p.id = id;
  p.dataset_id = dataset;
  p.hourly_rate_low = Money::parse(rate_low);
  p.hourly_rate_high = Money::parse(rate_high);
  p.minutes_per_problem = Money::parse(minutes).value();
  return p;
}

inline AttemptRecord make_attempt(const std::string& strategy, const std::string& dataset,
                                  const std::string& problem, std::uint32_t index, bool correct,
                                  std::uint64_t in_tokens = 1000,
                                  std::uint64_t out_tokens = 500) {
  AttemptRecord r;
  r.strategy_id = strategy;
  r.dataset_id = dataset;
  r.problem_id = problem;
  r.attempt_index = index;
  r.correct = correct;
  r.input_tokens = in_tokens;
  r.output_tokens = out_tokens;
  return r;
}

/// Hand-built CellStats, the unit most metric tests work in.
inline CellStats make_cell(const std::string& strategy, const std::string& problem,
                           std::uint32_t n, std::uint32_t c, const std::string& mean_cost) {
  CellStats s;
  s.strategy_id = strategy;
  s.problem_id = problem;
  s.n_attempts = n;
  s.n_correct = c;
  s.mean_cost = Money::parse(mean_cost);
  return s;
}

}  // namespace coptest
