#include "cop/records.hpp"

#include <json.hpp>

#include <istream>
#include <sstream>

#include "cop/answers.hpp"

namespace cop {

using json = nlohmann::json;

namespace {

template <typename E>
E enum_from(const std::string& s, std::initializer_list<std::pair<const char*, E>> table,
            const char* what) {
  for (const auto& [name, v] : table)
    if (s == name) return v;
  throw std::invalid_argument(std::string(what) + ": unknown value '" + s + "'");
}

/// Exact decimal from a JSON scalar: strings are parsed directly; numbers go
/// through their shortest round-trip text form before rational conversion.
Money money_from_json(const json& j, const char* field) {
  if (j.is_string()) return Money::parse(j.get<std::string>());
  if (j.is_number()) return Money::parse(j.dump());
  throw std::invalid_argument(std::string(field) + ": expected number or decimal string");
}

Rational quantity_from_json(const json& j, const char* field) {
  Money m = money_from_json(j, field);
  return m.value();
}

std::uint64_t nonneg_int(const json& j, const char* field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw std::invalid_argument(std::string(field) + ": expected non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

TaskCategory task_category_from_string(const std::string& s) {
  return enum_from<TaskCategory>(s,
                                 {{"basic_quantitative", TaskCategory::basic_quantitative},
                                  {"knowledge_based", TaskCategory::knowledge_based},
                                  {"complex_quantitative", TaskCategory::complex_quantitative},
                                  {"other", TaskCategory::other}},
                                 "task_category");
}
GraderKind grader_kind_from_string(const std::string& s) {
  return enum_from<GraderKind>(s,
                               {{"multiple_choice", GraderKind::multiple_choice},
                                {"numeric", GraderKind::numeric},
                                {"free_response", GraderKind::free_response}},
                               "grader_kind");
}
StrategyKind strategy_kind_from_string(const std::string& s) {
  return enum_from<StrategyKind>(s,
                                 {{"model", StrategyKind::model},
                                  {"expert", StrategyKind::expert},
                                  {"technique_modified", StrategyKind::technique_modified}},
                                 "kind");
}
Family family_from_string(const std::string& s) {
  return enum_from<Family>(s,
                           {{"lightweight", Family::lightweight},
                            {"large", Family::large},
                            {"reasoning", Family::reasoning},
                            {"expert", Family::expert},
                            {"other", Family::other}},
                           "family");
}

std::string to_string(TaskCategory c) {
  switch (c) {
    case TaskCategory::basic_quantitative: return "basic_quantitative";
    case TaskCategory::knowledge_based: return "knowledge_based";
    case TaskCategory::complex_quantitative: return "complex_quantitative";
    case TaskCategory::other: return "other";
  }
  return "other";
}
std::string to_string(GraderKind g) {
  switch (g) {
    case GraderKind::multiple_choice: return "multiple_choice";
    case GraderKind::numeric: return "numeric";
    case GraderKind::free_response: return "free_response";
  }
  return "free_response";
}
std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::model: return "model";
    case StrategyKind::expert: return "expert";
    case StrategyKind::technique_modified: return "technique_modified";
  }
  return "model";
}
std::string to_string(Family f) {
  switch (f) {
    case Family::lightweight: return "lightweight";
    case Family::large: return "large";
    case Family::reasoning: return "reasoning";
    case Family::expert: return "expert";
    case Family::other: return "other";
  }
  return "other";
}

const DatasetRef* Registry::find_dataset(const std::string& id) const {
  auto it = datasets.find(id);
  return it == datasets.end() ? nullptr : &it->second;
}
const Strategy* Registry::find_strategy(const std::string& id) const {
  auto it = strategies.find(id);
  return it == strategies.end() ? nullptr : &it->second;
}
const PriceSheet* Registry::find_price_sheet(const std::string& id) const {
  auto it = price_sheets.find(id);
  return it == price_sheets.end() ? nullptr : &it->second;
}
const ProblemInstance* Registry::find_problem(const std::string& dataset_id,
                                              const std::string& problem_id) const {
  auto it = problems.find({dataset_id, problem_id});
  return it == problems.end() ? nullptr : &it->second;
}
const ExpertProfile* Registry::expert_profile_for(const std::string& dataset_id) const {
  for (const auto& [id, profile] : expert_profiles)
    if (profile.dataset_id == dataset_id) return &profile;
  return nullptr;
}

std::vector<std::string> Registry::problem_ids(const std::string& dataset_id) const {
  std::vector<std::string> out;
  for (auto it = problems.lower_bound({dataset_id, ""});
       it != problems.end() && it->first.first == dataset_id; ++it)
    out.push_back(it->first.second);
  return out;
}

void Registry::add_attempt(AttemptRecord r) {
  attempt_keys_.insert({r.strategy_id, r.dataset_id, r.problem_id, r.attempt_index});
  attempts.push_back(std::move(r));
}

AttemptRecord parse_attempt_line(const std::string& line) {
  json j = json::parse(line);  // throws json::parse_error on malformed input
  if (!j.is_object()) throw std::invalid_argument("attempt line is not a JSON object");

  static const std::set<std::string> known = {
      "strategy_id", "dataset_id",    "problem_id",      "attempt_index", "correct",
      "input_tokens", "output_tokens", "extra_resources", "cost_override", "wall_time_ms"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("unknown field '" + key + "'");
  for (const char* req : {"strategy_id", "dataset_id", "problem_id", "attempt_index",
                          "correct", "input_tokens", "output_tokens"})
    if (!j.contains(req)) throw std::invalid_argument(std::string("missing field '") + req + "'");

  AttemptRecord r;
  r.strategy_id = j.at("strategy_id").get<std::string>();
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.problem_id = j.at("problem_id").get<std::string>();
  r.attempt_index = static_cast<std::uint32_t>(nonneg_int(j.at("attempt_index"), "attempt_index"));
  if (!j.at("correct").is_boolean()) throw std::invalid_argument("correct: expected boolean");
  r.correct = j.at("correct").get<bool>();
  r.input_tokens = nonneg_int(j.at("input_tokens"), "input_tokens");
  r.output_tokens = nonneg_int(j.at("output_tokens"), "output_tokens");
  if (j.contains("extra_resources")) {
    for (const auto& [name, q] : j.at("extra_resources").items()) {
      Rational v = quantity_from_json(q, "extra_resources");
      if (v < 0) throw std::invalid_argument("extra_resources: negative quantity for '" + name + "'");
      r.extra_resources.emplace(name, std::move(v));
    }
  }
  if (j.contains("cost_override") && !j.at("cost_override").is_null()) {
    Money m = money_from_json(j.at("cost_override"), "cost_override");
    if (m.is_negative()) throw std::invalid_argument("cost_override: negative");
    r.cost_override = std::move(m);
  }
  if (j.contains("wall_time_ms") && !j.at("wall_time_ms").is_null())
    r.wall_time_ms = nonneg_int(j.at("wall_time_ms"), "wall_time_ms");
  return r;
}

std::string serialize_attempt(const AttemptRecord& r) {
  json j;
  j["strategy_id"] = r.strategy_id;
  j["dataset_id"] = r.dataset_id;
  j["problem_id"] = r.problem_id;
  j["attempt_index"] = r.attempt_index;
  j["correct"] = r.correct;
  j["input_tokens"] = r.input_tokens;
  j["output_tokens"] = r.output_tokens;
  if (!r.extra_resources.empty()) {
    json extras = json::object();
    for (const auto& [name, q] : r.extra_resources) extras[name] = Money(q).to_string();
    j["extra_resources"] = extras;
  }
  if (r.cost_override) j["cost_override"] = r.cost_override->to_string();
  if (r.wall_time_ms) j["wall_time_ms"] = *r.wall_time_ms;
  return j.dump();
}

IngestReport ingest_attempts(std::istream& lines, Registry& registry) {
  IngestReport report;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    AttemptRecord r;
    try {
      r = parse_attempt_line(line);
    } catch (const std::exception& e) {
      report.errors.push_back({lineno, e.what()});
      continue;
    }
    if (!registry.find_strategy(r.strategy_id)) {
      report.errors.push_back({lineno, "unresolved strategy_id '" + r.strategy_id + "'"});
      continue;
    }
    if (!registry.find_dataset(r.dataset_id)) {
      report.errors.push_back({lineno, "unresolved dataset_id '" + r.dataset_id + "'"});
      continue;
    }
    if (!registry.find_problem(r.dataset_id, r.problem_id)) {
      report.errors.push_back({lineno, "unresolved problem_id '" + r.problem_id + "'"});
      continue;
    }
    if (registry.has_attempt_key(r)) {
      std::ostringstream oss;
      oss << "duplicate attempt (" << r.strategy_id << ", " << r.problem_id << ", "
          << r.attempt_index << ")";
      report.errors.push_back({lineno, oss.str()});
      continue;
    }
    registry.add_attempt(std::move(r));
    ++report.accepted;
  }
  return report;
}

std::vector<Violation> validate_registry(const Registry& reg) {
  std::vector<Violation> out;
  auto add = [&](const std::string& entity, const std::string& msg) {
    out.push_back({entity, msg});
  };

  for (const auto& [id, d] : reg.datasets) {
    if (id.empty()) add("dataset", "empty id");
    bool mc = d.grader_kind == GraderKind::multiple_choice;
    if (mc && !d.option_count)
      add("dataset " + id, "multiple_choice dataset requires option_count");
    if (mc && d.option_count && *d.option_count < 2)
      add("dataset " + id, "option_count must be >= 2");
    if (!mc && d.option_count)
      add("dataset " + id, "option_count only valid for multiple_choice");
  }

  for (const auto& [key, p] : reg.problems) {
    const std::string ent = "problem " + key.first + "/" + key.second;
    const DatasetRef* d = reg.find_dataset(p.dataset_id);
    if (!d) {
      add(ent, "dangling dataset_id '" + p.dataset_id + "'");
      continue;
    }
    if (p.reference_answer.empty()) {
      add(ent, "empty reference_answer");
      continue;
    }
    // Graders require parseable references; catching this at load keeps
    // grade() itself total.
    if (d->grader_kind == GraderKind::numeric && !parse_numeric(p.reference_answer))
      add(ent, "reference_answer not numeric: '" + p.reference_answer + "'");
    if (d->grader_kind == GraderKind::multiple_choice && !normalize_choice(p.reference_answer))
      add(ent, "reference_answer not a choice letter: '" + p.reference_answer + "'");
  }

  for (const auto& [id, s] : reg.strategies) {
    const std::string ent = "strategy " + id;
    if ((s.family == Family::expert) != (s.kind == StrategyKind::expert))
      add(ent, "family is 'expert' iff kind is 'expert'");
    if (s.kind == StrategyKind::expert && s.release_date != Date::epoch())
      add(ent, "expert strategies must carry the epoch release date");
    if (!reg.find_price_sheet(s.price_sheet_id) && s.kind != StrategyKind::expert)
      add(ent, "dangling price_sheet_id '" + s.price_sheet_id + "'");
    if (s.kind == StrategyKind::technique_modified) {
      if (!s.base_strategy_id)
        add(ent, "technique_modified strategy requires base_strategy_id");
      else if (!reg.find_strategy(*s.base_strategy_id))
        add(ent, "dangling base_strategy_id '" + *s.base_strategy_id + "'");
    } else if (s.base_strategy_id) {
      add(ent, "base_strategy_id only valid for technique_modified");
    }
    if (s.provider_config_id && !reg.provider_configs.count(*s.provider_config_id))
      add(ent, "dangling provider_config_id '" + *s.provider_config_id + "'");
  }

  for (const auto& [id, ps] : reg.price_sheets) {
    const std::string ent = "price_sheet " + id;
    if (ps.currency.empty()) add(ent, "empty currency code");
    if (ps.input_price_per_million_tokens.is_negative() ||
        ps.output_price_per_million_tokens.is_negative())
      add(ent, "negative token price");
    for (const auto& [name, price] : ps.extra_unit_prices)
      if (price.is_negative()) add(ent, "negative unit price for '" + name + "'");
  }

  for (const auto& [id, ep] : reg.expert_profiles) {
    const std::string ent = "expert_profile " + id;
    if (!reg.find_dataset(ep.dataset_id)) add(ent, "dangling dataset_id '" + ep.dataset_id + "'");
    if (!(Money(Rational(0)) < ep.hourly_rate_low) || ep.hourly_rate_high < ep.hourly_rate_low)
      add(ent, "rates must satisfy 0 < low <= high");
    if (ep.minutes_per_problem <= 0) add(ent, "minutes_per_problem must be positive");
  }

  for (const auto& r : reg.attempts) {
    if (!reg.find_strategy(r.strategy_id))
      add("attempt", "unresolved strategy_id '" + r.strategy_id + "'");
    if (!reg.find_problem(r.dataset_id, r.problem_id))
      add("attempt", "unresolved problem '" + r.dataset_id + "/" + r.problem_id + "'");
  }

  return out;
}

}  // namespace cop
