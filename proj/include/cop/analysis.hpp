#pragma once

#include <string>
#include <vector>

#include "cop/metrics.hpp"

namespace cop {

/// Relative frontier improvement attributable to a strategy subset:
/// 1 - V(all) / V(all minus subject), under the extended-money conventions.
struct EssentialnessReport {
  std::string subject;
  std::string dataset_id;
  Rational relative_improvement{0};  // in [0, 1]
  ExtMoney v_full;
  ExtMoney v_without;
};

struct TechniqueGainReport {
  std::string technique_id;
  std::string dataset_id;
  Rational relative_gain{0};  // in [0, 1]
  std::string base_set_descriptor;
};

EssentialnessReport family_essentialness(const std::vector<std::string>& family,
                                         const std::vector<std::string>& all,
                                         const std::vector<std::string>& problems,
                                         const StatsTable& table, const Registry& registry,
                                         const std::string& dataset_id,
                                         SuccessMode mode = SuccessMode::pass1(),
                                         const Money& failure_penalty = Money(Rational(0)));

EssentialnessReport expert_essentialness(const std::vector<std::string>& lm_strategies,
                                         const std::string& expert_id,
                                         const std::vector<std::string>& problems,
                                         const StatsTable& table, const Registry& registry,
                                         const std::string& dataset_id,
                                         SuccessMode mode = SuccessMode::pass1(),
                                         const Money& failure_penalty = Money(Rational(0)));

EssentialnessReport single_model_essentialness(const std::string& strategy_id,
                                               const std::vector<std::string>& all,
                                               const std::vector<std::string>& problems,
                                               const StatsTable& table, const Registry& registry,
                                               const std::string& dataset_id,
                                               SuccessMode mode = SuccessMode::pass1(),
                                               const Money& failure_penalty = Money(Rational(0)));

/// relative_gain = [V(base) - V(base U modified)] / V(base). Every modified
/// strategy must reference a base strategy via base_strategy_id.
TechniqueGainReport technique_gain(const std::vector<std::string>& base_set,
                                   const std::vector<std::string>& modified_set,
                                   const std::vector<std::string>& problems,
                                   const StatsTable& table, const Registry& registry,
                                   const std::string& dataset_id,
                                   const std::string& technique_id = "technique",
                                   SuccessMode mode = SuccessMode::pass1(),
                                   const Money& failure_penalty = Money(Rational(0)));

struct ReleaseEvent {
  Date date;
  std::vector<std::string> strategy_ids;  // same-date releases form one event
  Rational relative_gain{0};
};

/// Per release event, G({m_t}, M_{t-1}) / V(M_{t-1}), where M_{t-1} holds the
/// expert and all earlier releases.
std::vector<ReleaseEvent> release_relative_gain(const std::vector<std::string>& strategies,
                                                const std::vector<std::string>& problems,
                                                const StatsTable& table, const Registry& registry,
                                                SuccessMode mode = SuccessMode::pass1(),
                                                const Money& failure_penalty = Money(Rational(0)));

}  // namespace cop
