#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cop/dates.hpp"
#include "cop/money.hpp"
#include "cop/pricing.hpp"

namespace cop {

enum class TaskCategory { basic_quantitative, knowledge_based, complex_quantitative, other };
enum class GraderKind { multiple_choice, numeric, free_response };
enum class StrategyKind { model, expert, technique_modified };
enum class Family { lightweight, large, reasoning, expert, other };

TaskCategory task_category_from_string(const std::string& s);
GraderKind grader_kind_from_string(const std::string& s);
StrategyKind strategy_kind_from_string(const std::string& s);
Family family_from_string(const std::string& s);
std::string to_string(TaskCategory);
std::string to_string(GraderKind);
std::string to_string(StrategyKind);
std::string to_string(Family);

struct DatasetRef {
  std::string id;
  TaskCategory task_category = TaskCategory::other;
  GraderKind grader_kind = GraderKind::free_response;
  std::optional<std::uint32_t> option_count;  // multiple-choice only
};

struct ProblemInstance {
  std::string dataset_id;
  std::string problem_id;
  std::string input_text;
  std::string reference_answer;
};

struct Strategy {
  std::string id;
  StrategyKind kind = StrategyKind::model;
  Family family = Family::other;
  Date release_date = Date::epoch();  // experts stay on the epoch sentinel
  std::string price_sheet_id;
  std::optional<std::string> base_strategy_id;  // technique_modified only
  std::optional<std::string> provider_config_id;
  bool impractical = false;  // excludable via --exclude-impractical
};

struct AttemptRecord {
  std::string strategy_id;
  std::string dataset_id;
  std::string problem_id;
  std::uint32_t attempt_index = 0;
  bool correct = false;
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;
  std::map<std::string, Rational> extra_resources;
  std::optional<Money> cost_override;
  std::optional<std::uint64_t> wall_time_ms;
};

/// Provider wiring for the harness. Only the fields for the given kind are
/// meaningful; validate_registry enforces that.
struct ProviderConfig {
  std::string id;
  enum class Kind { simulated, http_openai_compatible, random_guesser } kind = Kind::simulated;
  // http_openai_compatible
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env_var;
  // simulated
  double default_success_prob = 1.0;
  std::map<std::string, double> success_prob;  // per problem_id override
  std::uint64_t output_tokens_lo = 50;
  std::uint64_t output_tokens_hi = 50;
  // random_guesser
  std::optional<std::uint32_t> option_count;
};

struct Violation {
  std::string entity;
  std::string message;
};

struct IngestReport {
  std::size_t accepted = 0;
  struct LineError {
    std::size_t line;  // 1-based
    std::string message;
  };
  std::vector<LineError> errors;
};

/// The keyed collections every analysis runs against. Built single-writer,
/// immutable afterwards.
struct Registry {
  std::map<std::string, DatasetRef> datasets;
  std::map<std::pair<std::string, std::string>, ProblemInstance> problems;
  std::map<std::string, Strategy> strategies;
  std::map<std::string, PriceSheet> price_sheets;
  std::map<std::string, ExpertProfile> expert_profiles;
  std::map<std::string, ProviderConfig> provider_configs;
  std::map<std::string, Rational> fx_units_per_usd;  // currency code -> units per USD
  std::vector<AttemptRecord> attempts;

  const DatasetRef* find_dataset(const std::string& id) const;
  const Strategy* find_strategy(const std::string& id) const;
  const PriceSheet* find_price_sheet(const std::string& id) const;
  const ProblemInstance* find_problem(const std::string& dataset_id,
                                      const std::string& problem_id) const;
  /// Expert profile registered for a dataset, if any.
  const ExpertProfile* expert_profile_for(const std::string& dataset_id) const;

  std::vector<std::string> problem_ids(const std::string& dataset_id) const;

  bool has_attempt_key(const AttemptRecord& r) const {
    return attempt_keys_.count({r.strategy_id, r.dataset_id, r.problem_id, r.attempt_index}) > 0;
  }
  /// Appends without re-validating; ingest_attempts is the validating path.
  void add_attempt(AttemptRecord r);

 private:
  std::set<std::tuple<std::string, std::string, std::string, std::uint32_t>> attempt_keys_;
};

/// Parses one AttemptRecord from its JSONL object form. Unknown fields are
/// rejected. Throws std::invalid_argument with a descriptive message.
AttemptRecord parse_attempt_line(const std::string& line);

/// Serializes to the same JSONL schema (round-trips field-identically).
std::string serialize_attempt(const AttemptRecord& record);

/// Ingests one serialized AttemptRecord per line. Malformed lines, unresolved
/// foreign keys, and duplicate (strategy, problem, attempt_index) triples are
/// collected as per-line errors; ingestion continues past them.
IngestReport ingest_attempts(std::istream& lines, Registry& registry);

/// Empty result iff every registry invariant holds.
std::vector<Violation> validate_registry(const Registry& registry);

}  // namespace cop
