#include "cop/analysis.hpp"

#include <algorithm>

#include "cop/errors.hpp"

namespace cop {

namespace {

/// 1 - V(full)/V(without), the shared essentialness core.
EssentialnessReport essentialness(const std::string& subject,
                                  const std::vector<std::string>& without_set,
                                  const std::vector<std::string>& full_set,
                                  const std::vector<std::string>& problems,
                                  const StatsTable& table, const Registry& registry,
                                  const std::string& dataset_id, SuccessMode mode,
                                  const Money& penalty) {
  if (without_set.empty())
    throw EstimationError("essentialness: removing '" + subject +
                          "' leaves an empty base strategy set");
  EssentialnessReport report;
  report.subject = subject;
  report.dataset_id = dataset_id;
  report.v_full = frontier(problems, full_set, table, registry, mode, penalty).value;
  report.v_without = frontier(problems, without_set, table, registry, mode, penalty).value;
  report.relative_improvement = 1 - ExtMoney::ratio(report.v_full, report.v_without);
  return report;
}

std::vector<std::string> set_minus(const std::vector<std::string>& all,
                                   const std::vector<std::string>& removed) {
  std::vector<std::string> out;
  for (const auto& id : all)
    if (std::find(removed.begin(), removed.end(), id) == removed.end()) out.push_back(id);
  return out;
}

}  // namespace

EssentialnessReport family_essentialness(const std::vector<std::string>& family,
                                         const std::vector<std::string>& all,
                                         const std::vector<std::string>& problems,
                                         const StatsTable& table, const Registry& registry,
                                         const std::string& dataset_id, SuccessMode mode,
                                         const Money& penalty) {
  for (const auto& id : family)
    if (std::find(all.begin(), all.end(), id) == all.end())
      throw EstimationError("family_essentialness: '" + id + "' is not in the full set");
  std::string subject = family.empty() ? "(empty family)" : "family{" + family.front() + ",...}";
  return essentialness(subject, set_minus(all, family), all, problems, table, registry,
                       dataset_id, mode, penalty);
}

EssentialnessReport expert_essentialness(const std::vector<std::string>& lm_strategies,
                                         const std::string& expert_id,
                                         const std::vector<std::string>& problems,
                                         const StatsTable& table, const Registry& registry,
                                         const std::string& dataset_id, SuccessMode mode,
                                         const Money& penalty) {
  std::vector<std::string> full = lm_strategies;
  if (std::find(full.begin(), full.end(), expert_id) == full.end()) full.push_back(expert_id);
  EssentialnessReport report = essentialness(expert_id, lm_strategies, full, problems, table,
                                             registry, dataset_id, mode, penalty);
  report.subject = expert_id;
  return report;
}

EssentialnessReport single_model_essentialness(const std::string& strategy_id,
                                               const std::vector<std::string>& all,
                                               const std::vector<std::string>& problems,
                                               const StatsTable& table, const Registry& registry,
                                               const std::string& dataset_id, SuccessMode mode,
                                               const Money& penalty) {
  EssentialnessReport report = family_essentialness({strategy_id}, all, problems, table,
                                                    registry, dataset_id, mode, penalty);
  report.subject = strategy_id;
  return report;
}

TechniqueGainReport technique_gain(const std::vector<std::string>& base_set,
                                   const std::vector<std::string>& modified_set,
                                   const std::vector<std::string>& problems,
                                   const StatsTable& table, const Registry& registry,
                                   const std::string& dataset_id,
                                   const std::string& technique_id, SuccessMode mode,
                                   const Money& penalty) {
  for (const auto& id : modified_set) {
    const Strategy* strat = registry.find_strategy(id);
    if (!strat || !strat->base_strategy_id ||
        std::find(base_set.begin(), base_set.end(), *strat->base_strategy_id) == base_set.end())
      throw ConfigError("technique strategy '" + id +
                        "' does not reference a base strategy in the base set");
  }
  std::vector<std::string> combined = base_set;
  for (const auto& id : modified_set)
    if (std::find(combined.begin(), combined.end(), id) == combined.end()) combined.push_back(id);

  const ExtMoney v_base = frontier(problems, base_set, table, registry, mode, penalty).value;
  const ExtMoney v_plus = frontier(problems, combined, table, registry, mode, penalty).value;

  TechniqueGainReport report;
  report.technique_id = technique_id;
  report.dataset_id = dataset_id;
  report.base_set_descriptor = "base[" + std::to_string(base_set.size()) + " strategies]";
  report.relative_gain = 1 - ExtMoney::ratio(v_plus, v_base);
  return report;
}

std::vector<ReleaseEvent> release_relative_gain(const std::vector<std::string>& strategies,
                                                const std::vector<std::string>& problems,
                                                const StatsTable& table, const Registry& registry,
                                                SuccessMode mode, const Money& penalty) {
  std::vector<std::string> base;
  std::map<Date, std::vector<std::string>> events;  // same-date releases grouped
  for (const auto& id : strategies) {
    const Strategy* strat = registry.find_strategy(id);
    if (!strat) throw ConfigError("release_relative_gain: unknown strategy '" + id + "'");
    if (strat->kind == StrategyKind::expert)
      base.push_back(id);
    else
      events[strat->release_date].push_back(id);
  }
  if (base.empty())
    throw EstimationError("release_relative_gain: strategy set has no expert baseline");

  std::vector<ReleaseEvent> out;
  for (const auto& [date, ids] : events) {
    const ExtMoney v_before = frontier(problems, base, table, registry, mode, penalty).value;
    std::vector<std::string> with_event = base;
    with_event.insert(with_event.end(), ids.begin(), ids.end());
    const ExtMoney v_after = frontier(problems, with_event, table, registry, mode, penalty).value;

    ReleaseEvent event;
    event.date = date;
    event.strategy_ids = ids;
    event.relative_gain = 1 - ExtMoney::ratio(v_after, v_before);
    out.push_back(std::move(event));
    base = std::move(with_event);
  }
  return out;
}

}  // namespace cop
