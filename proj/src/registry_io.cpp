#include "cop/registry_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

#include "cop/errors.hpp"

namespace cop {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::optional<json> load_collection(const fs::path& dir, const char* name) {
  const fs::path path = dir / name;
  if (!fs::exists(path)) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Money money_field(const json& j, const char* field) {
  const json& v = j.at(field);
  if (v.is_string()) return Money::parse(v.get<std::string>());
  if (v.is_number()) return Money::parse(v.dump());
  throw ConfigError(std::string(field) + ": expected number or decimal string");
}

}  // namespace

Registry load_registry_bundle(const std::string& directory) {
  const fs::path dir(directory);
  if (!fs::is_directory(dir)) throw ConfigError("registry bundle is not a directory: " + directory);
  Registry reg;

  if (auto j = load_collection(dir, "datasets.json")) {
    for (const auto& d : *j) {
      DatasetRef ds;
      ds.id = d.at("id").get<std::string>();
      ds.task_category = task_category_from_string(d.at("task_category").get<std::string>());
      ds.grader_kind = grader_kind_from_string(d.at("grader_kind").get<std::string>());
      if (d.contains("option_count") && !d.at("option_count").is_null())
        ds.option_count = d.at("option_count").get<std::uint32_t>();
      if (reg.datasets.count(ds.id)) throw ConfigError("duplicate dataset id '" + ds.id + "'");
      reg.datasets.emplace(ds.id, std::move(ds));
    }
  }

  if (auto j = load_collection(dir, "problems.json")) {
    for (const auto& p : *j) {
      ProblemInstance pi;
      pi.dataset_id = p.at("dataset_id").get<std::string>();
      pi.problem_id = p.at("problem_id").get<std::string>();
      pi.input_text = p.at("input_text").get<std::string>();
      pi.reference_answer = p.at("reference_answer").get<std::string>();
      auto key = std::make_pair(pi.dataset_id, pi.problem_id);
      if (reg.problems.count(key))
        throw ConfigError("duplicate problem (" + pi.dataset_id + ", " + pi.problem_id + ")");
      reg.problems.emplace(std::move(key), std::move(pi));
    }
  }

  if (auto j = load_collection(dir, "price_sheets.json")) {
    for (const auto& p : *j) {
      PriceSheet ps;
      ps.id = p.at("id").get<std::string>();
      if (p.contains("currency")) ps.currency = p.at("currency").get<std::string>();
      ps.input_price_per_million_tokens = money_field(p, "input_price_per_million_tokens");
      ps.output_price_per_million_tokens = money_field(p, "output_price_per_million_tokens");
      if (p.contains("extra_unit_prices"))
        for (const auto& [name, price] : p.at("extra_unit_prices").items())
          ps.extra_unit_prices.emplace(
              name, price.is_string() ? Money::parse(price.get<std::string>())
                                      : Money::parse(price.dump()));
      reg.price_sheets.emplace(ps.id, std::move(ps));
    }
  }

  if (auto j = load_collection(dir, "strategies.json")) {
    for (const auto& s : *j) {
      Strategy st;
      st.id = s.at("id").get<std::string>();
      st.kind = strategy_kind_from_string(s.at("kind").get<std::string>());
      st.family = family_from_string(s.at("family").get<std::string>());
      if (s.contains("release_date"))
        st.release_date = Date::parse(s.at("release_date").get<std::string>());
      if (s.contains("price_sheet_id")) st.price_sheet_id = s.at("price_sheet_id").get<std::string>();
      if (s.contains("base_strategy_id") && !s.at("base_strategy_id").is_null())
        st.base_strategy_id = s.at("base_strategy_id").get<std::string>();
      if (s.contains("provider_config_id") && !s.at("provider_config_id").is_null())
        st.provider_config_id = s.at("provider_config_id").get<std::string>();
      if (s.contains("impractical")) st.impractical = s.at("impractical").get<bool>();
      reg.strategies.emplace(st.id, std::move(st));
    }
  }

  if (auto j = load_collection(dir, "expert_profiles.json")) {
    for (const auto& e : *j) {
      ExpertProfile ep;
      ep.id = e.at("id").get<std::string>();
      ep.dataset_id = e.at("dataset_id").get<std::string>();
      if (e.contains("currency")) ep.currency = e.at("currency").get<std::string>();
      ep.hourly_rate_low = money_field(e, "hourly_rate_low");
      ep.hourly_rate_high = money_field(e, "hourly_rate_high");
      ep.minutes_per_problem = money_field(e, "minutes_per_problem").value();
      if (e.contains("region_label")) ep.region_label = e.at("region_label").get<std::string>();
      reg.expert_profiles.emplace(ep.id, std::move(ep));
    }
  }

  if (auto j = load_collection(dir, "provider_configs.json")) {
    for (const auto& p : *j) {
      ProviderConfig pc;
      pc.id = p.at("id").get<std::string>();
      const std::string kind = p.at("kind").get<std::string>();
      if (kind == "simulated")
        pc.kind = ProviderConfig::Kind::simulated;
      else if (kind == "http_openai_compatible")
        pc.kind = ProviderConfig::Kind::http_openai_compatible;
      else if (kind == "random_guesser")
        pc.kind = ProviderConfig::Kind::random_guesser;
      else
        throw ConfigError("provider_config '" + pc.id + "': unknown kind '" + kind + "'");
      if (p.contains("endpoint_url")) pc.endpoint_url = p.at("endpoint_url").get<std::string>();
      if (p.contains("model_name")) pc.model_name = p.at("model_name").get<std::string>();
      if (p.contains("api_key_env_var"))
        pc.api_key_env_var = p.at("api_key_env_var").get<std::string>();
      if (p.contains("default_success_prob"))
        pc.default_success_prob = p.at("default_success_prob").get<double>();
      if (p.contains("success_prob"))
        for (const auto& [pid, prob] : p.at("success_prob").items())
          pc.success_prob[pid] = prob.get<double>();
      if (p.contains("output_tokens_lo")) pc.output_tokens_lo = p.at("output_tokens_lo").get<std::uint64_t>();
      if (p.contains("output_tokens_hi")) pc.output_tokens_hi = p.at("output_tokens_hi").get<std::uint64_t>();
      if (p.contains("option_count") && !p.at("option_count").is_null())
        pc.option_count = p.at("option_count").get<std::uint32_t>();
      reg.provider_configs.emplace(pc.id, std::move(pc));
    }
  }

  if (auto j = load_collection(dir, "fx_rates.json")) {
    for (const auto& [code, rate] : j->items())
      reg.fx_units_per_usd.emplace(
          code, rate.is_string() ? Money::parse(rate.get<std::string>()).value()
                                 : Money::parse(rate.dump()).value());
  }

  return reg;
}

}  // namespace cop
