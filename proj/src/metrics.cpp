#include "cop/metrics.hpp"

#include <algorithm>

#include "cop/errors.hpp"
#include "cop/pricing.hpp"

namespace cop {

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Rational pow_rational(Rational base, std::uint32_t exp) {
  Rational r = 1;
  while (exp > 0) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

}  // namespace

CellStats estimate_cell(std::span<const AttemptRecord> records, const PriceSheet& sheet) {
  if (records.empty()) throw EstimationError("estimate_cell: empty cell");
  CellStats stats;
  stats.strategy_id = records.front().strategy_id;
  stats.problem_id = records.front().problem_id;
  Money total(0);
  for (const auto& r : records) {
    ++stats.n_attempts;
    if (r.correct) ++stats.n_correct;
    total += attempt_cost(r, sheet);
  }
  stats.mean_cost = total / Rational(stats.n_attempts);
  return stats;
}

CellStats expert_strategy_stats(const ExpertProfile& profile, RateBound bound,
                                const std::string& strategy_id, const std::string& problem_id,
                                std::uint32_t n_attempts) {
  CellStats stats;
  stats.strategy_id = strategy_id;
  stats.problem_id = problem_id;
  stats.n_attempts = std::max<std::uint32_t>(1, n_attempts);
  stats.n_correct = stats.n_attempts;  // R-hat is exactly 1
  stats.mean_cost = expert_cost(profile, bound);
  return stats;
}

Rational success_prob(const CellStats& stats, SuccessMode mode) {
  if (stats.n_attempts == 0) throw EstimationError("success_prob: empty cell");
  const Rational r_hat = Rational(stats.n_correct) / Rational(stats.n_attempts);
  switch (mode.kind) {
    case SuccessMode::Kind::pass1:
      return r_hat;
    case SuccessMode::Kind::pass_pow_k:
      return pow_rational(r_hat, mode.k);
    case SuccessMode::Kind::pass_at_k: {
      if (mode.k > stats.n_attempts)
        throw EstimationError("pass@k requires k <= n_attempts");
      const std::uint32_t n = stats.n_attempts, c = stats.n_correct;
      if (c == 0) return 0;
      if (n - c < mode.k) return 1;
      return 1 - Rational(binomial(n - c, mode.k)) / Rational(binomial(n, mode.k));
    }
  }
  throw EstimationError("success_prob: bad mode");
}

ExtMoney cost_of_pass(const CellStats& stats, SuccessMode mode, const Money& failure_penalty) {
  if (failure_penalty.is_negative())
    throw EstimationError("cost_of_pass: negative failure penalty");
  const Rational r = success_prob(stats, mode);
  if (r == 0) return ExtMoney::infinity();
  Money v = stats.mean_cost / r;
  if (!failure_penalty.is_zero()) v += failure_penalty * (Rational(1) / r - 1);
  return ExtMoney(v);
}

FrontierResult frontier(const std::vector<std::string>& problems,
                        const std::vector<std::string>& strategies, const StatsTable& table,
                        const Registry& registry, SuccessMode mode, const Money& failure_penalty) {
  if (problems.empty()) throw EstimationError("frontier: empty problem set");
  if (strategies.empty()) throw EstimationError("frontier: empty strategy set");

  FrontierResult result;
  std::vector<ExtMoney> values;
  values.reserve(problems.size());
  for (const auto& problem : problems) {
    bool have_best = false;
    ExtMoney best = ExtMoney::infinity();
    std::string best_id;
    Date best_date{};
    for (const auto& strat : strategies) {
      const CellStats* cell = table.find(strat, problem);
      if (!cell)
        throw MissingCellError("no attempts for (" + strat + ", " + problem + ")");
      const ExtMoney v = cost_of_pass(*cell, mode, failure_penalty);
      const Strategy* meta = registry.find_strategy(strat);
      const Date date = meta ? meta->release_date : Date::epoch();
      const bool better =
          !have_best || v < best ||
          (v == best && (date < best_date || (date == best_date && strat < best_id)));
      if (better) {
        have_best = true;
        best = v;
        best_id = strat;
        best_date = date;
      }
    }
    result.per_problem_values[problem] = best;
    result.argmin_by_problem[problem] = best_id;
    values.push_back(best);
  }
  result.value = ExtMoney::mean(values);
  return result;
}

std::vector<std::pair<Date, FrontierResult>> temporal_frontier(
    const std::vector<std::string>& problems, const std::vector<std::string>& strategies,
    const StatsTable& table, const Registry& registry, const std::vector<Date>& dates,
    SuccessMode mode, const Money& failure_penalty) {
  if (dates.empty()) throw EstimationError("temporal_frontier: empty date list");
  if (!std::is_sorted(dates.begin(), dates.end()))
    throw EstimationError("temporal_frontier: dates must be ascending");

  std::vector<std::pair<Date, FrontierResult>> out;
  out.reserve(dates.size());
  for (const Date& t : dates) {
    std::vector<std::string> available;
    for (const auto& id : strategies) {
      const Strategy* meta = registry.find_strategy(id);
      const Date release = meta ? meta->release_date : Date::epoch();
      if (release <= t) available.push_back(id);
    }
    if (available.empty())
      throw EstimationError("temporal_frontier: no strategy released by " + t.to_string());
    out.emplace_back(t, frontier(problems, available, table, registry, mode, failure_penalty));
  }
  return out;
}

GainResult gain(const std::vector<std::string>& new_strategies,
                const std::vector<std::string>& base_strategies,
                const std::vector<std::string>& problems, const StatsTable& table,
                const Registry& registry, SuccessMode mode, const Money& failure_penalty) {
  std::vector<std::string> combined = base_strategies;
  for (const auto& id : new_strategies)
    if (std::find(combined.begin(), combined.end(), id) == combined.end())
      combined.push_back(id);

  const FrontierResult before =
      frontier(problems, base_strategies, table, registry, mode, failure_penalty);
  const FrontierResult after =
      frontier(problems, combined, table, registry, mode, failure_penalty);

  GainResult result;
  std::vector<ExtMoney> diffs;
  diffs.reserve(problems.size());
  for (const auto& problem : problems) {
    ExtMoney d = ExtMoney::gain_diff(before.per_problem_values.at(problem),
                                     after.per_problem_values.at(problem));
    result.per_problem[problem] = d;
    diffs.push_back(d);
  }
  result.aggregate = ExtMoney::mean(diffs);
  return result;
}

StatsTable build_stats_table(const Registry& registry, const std::string& dataset_id,
                             RateBound expert_bound, std::uint32_t expert_n_attempts) {
  StatsTable table;
  // Group attempts by cell; attempts are already deduplicated at ingestion.
  std::map<std::pair<std::string, std::string>, std::vector<AttemptRecord>> cells;
  for (const auto& r : registry.attempts) {
    if (r.dataset_id != dataset_id) continue;
    cells[{r.strategy_id, r.problem_id}].push_back(r);
  }
  for (auto& [key, records] : cells) {
    const Strategy* strat = registry.find_strategy(key.first);
    if (!strat) throw ConfigError("attempt references unknown strategy '" + key.first + "'");
    const PriceSheet* sheet = registry.find_price_sheet(strat->price_sheet_id);
    if (!sheet)
      throw ConfigError("strategy '" + key.first + "' has no price sheet '" +
                        strat->price_sheet_id + "'");
    table.put(estimate_cell(records, *sheet));
  }
  // Expert cells are synthesized, never sampled.
  const ExpertProfile* profile = registry.expert_profile_for(dataset_id);
  if (profile) {
    for (const auto& [id, strat] : registry.strategies) {
      if (strat.kind != StrategyKind::expert) continue;
      for (const auto& problem : registry.problem_ids(dataset_id))
        table.put(expert_strategy_stats(*profile, expert_bound, id, problem, expert_n_attempts));
    }
  }
  return table;
}

}  // namespace cop
