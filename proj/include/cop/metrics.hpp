#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cop/money.hpp"
#include "cop/records.hpp"

namespace cop {

/// Per (strategy, problem) estimates: success proportion and mean attempt cost.
struct CellStats {
  std::string strategy_id;
  std::string problem_id;
  std::uint32_t n_attempts = 0;
  std::uint32_t n_correct = 0;
  Money mean_cost{Rational(0)};
};

/// pass1 is the canonical setting; pass@k and pass^k are the lenient/strict
/// alternatives.
struct SuccessMode {
  enum class Kind { pass1, pass_at_k, pass_pow_k };
  Kind kind = Kind::pass1;
  std::uint32_t k = 1;

  static SuccessMode pass1() { return {}; }
  static SuccessMode pass_at_k(std::uint32_t k) { return {Kind::pass_at_k, k}; }
  static SuccessMode pass_pow_k(std::uint32_t k) { return {Kind::pass_pow_k, k}; }
};

struct FrontierResult {
  ExtMoney value;                                   // mean over problems
  std::map<std::string, std::string> argmin_by_problem;  // problem -> strategy
  std::map<std::string, ExtMoney> per_problem_values;
};

/// Immutable (strategy, problem) -> CellStats table.
struct StatsTable {
  std::map<std::pair<std::string, std::string>, CellStats> cells;

  const CellStats* find(const std::string& strategy_id, const std::string& problem_id) const {
    auto it = cells.find({strategy_id, problem_id});
    return it == cells.end() ? nullptr : &it->second;
  }
  void put(CellStats s) { cells[{s.strategy_id, s.problem_id}] = std::move(s); }
};

/// Aggregates one cell's attempts: success count and exact mean attempt cost.
CellStats estimate_cell(std::span<const AttemptRecord> records, const PriceSheet& sheet);

/// Synthesizes the expert's cell for one problem: success exactly 1 at
/// expert_cost(profile, bound). n_attempts lets pass@k preconditions hold.
CellStats expert_strategy_stats(const ExpertProfile& profile, RateBound bound,
                                const std::string& strategy_id, const std::string& problem_id,
                                std::uint32_t n_attempts = 1);

/// Estimated success probability under the given mode. Exact rational.
/// pass@k uses the unbiased estimator 1 - C(n-c,k)/C(n,k).
Rational success_prob(const CellStats& stats, SuccessMode mode);

/// v = C/R + penalty*(1/R - 1); INFINITY when R = 0.
ExtMoney cost_of_pass(const CellStats& stats, SuccessMode mode = SuccessMode::pass1(),
                      const Money& failure_penalty = Money(Rational(0)));

/// Per-problem minimum cost-of-pass over the strategy set, aggregated as the
/// mean over problems. Ties break by earliest release date, then id.
FrontierResult frontier(const std::vector<std::string>& problems,
                        const std::vector<std::string>& strategies, const StatsTable& table,
                        const Registry& registry, SuccessMode mode = SuccessMode::pass1(),
                        const Money& failure_penalty = Money(Rational(0)));

/// Frontier sequence over the nested strategy sets {m : release(m) <= t}.
/// Experts carry the epoch sentinel date, so they are in every set.
std::vector<std::pair<Date, FrontierResult>> temporal_frontier(
    const std::vector<std::string>& problems, const std::vector<std::string>& strategies,
    const StatsTable& table, const Registry& registry, const std::vector<Date>& dates,
    SuccessMode mode = SuccessMode::pass1(), const Money& failure_penalty = Money(Rational(0)));

struct GainResult {
  std::map<std::string, ExtMoney> per_problem;
  ExtMoney aggregate;
};

/// G_p = V_p(base) - V_p(base U new), with INF - INF = 0.
GainResult gain(const std::vector<std::string>& new_strategies,
                const std::vector<std::string>& base_strategies,
                const std::vector<std::string>& problems, const StatsTable& table,
                const Registry& registry, SuccessMode mode = SuccessMode::pass1(),
                const Money& failure_penalty = Money(Rational(0)));

/// Builds the full table for a dataset from ingested attempts, synthesizing
/// expert cells from the dataset's profile at the given bound.
StatsTable build_stats_table(const Registry& registry, const std::string& dataset_id,
                             RateBound expert_bound = RateBound::high,
                             std::uint32_t expert_n_attempts = 1);

}  // namespace cop
