// cop: cost-of-pass analytics over LM evaluation records.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cop/analysis.hpp"
#include "cop/cli_support.hpp"
#include "cop/errors.hpp"
#include "cop/harness.hpp"
#include "cop/metrics.hpp"
#include "cop/records.hpp"
#include "cop/registry_io.hpp"
#include "cop/stats.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitMissingData = 3;
constexpr int kExitNumerical = 4;

struct CommonArgs {
  std::string registry_dir;
  std::string attempts_path;
  std::string dataset;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool exclude_impractical = false;
};

Registry load_and_validate(const CommonArgs& args) {
  Registry reg = load_registry_bundle(args.registry_dir);
  const auto violations = validate_registry(reg);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << v.entity << ": " << v.message << "\n";
    throw ConfigError("registry validation failed (" + std::to_string(violations.size()) +
                      " violations)");
  }
  if (!args.dataset.empty() && !reg.find_dataset(args.dataset))
    throw ConfigError("unknown dataset id '" + args.dataset + "'");
  return reg;
}

void ingest_file(const std::string& path, Registry& reg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open attempts file: " + path);
  const IngestReport report = ingest_attempts(in, reg);
  if (!report.errors.empty()) {
    for (const auto& e : report.errors)
      std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    throw ConfigError("attempt ingestion failed (" + std::to_string(report.errors.size()) +
                      " bad lines, " + std::to_string(report.accepted) + " accepted)");
  }
}

RunManifest make_manifest(const std::string& command, const CommonArgs& args,
                          std::map<std::string, std::string> params) {
  RunManifest m;
  m.command = command;
  m.config_paths.push_back(args.registry_dir);
  if (!args.attempts_path.empty()) m.config_paths.push_back(args.attempts_path);
  m.seed = args.seed;
  m.output_dir = args.out_dir;
  params.emplace("dataset", args.dataset);
  m.parameters = std::move(params);
  fs::create_directories(args.out_dir);
  m.compute_content_hash();
  m.write();
  return m;
}

/// Strategy ids for a dataset's analyses: registry order, experts included,
/// optionally dropping the impractical ones.
std::vector<std::string> analysis_strategies(const Registry& reg, const CommonArgs& args,
                                             const std::vector<std::string>& filter) {
  std::vector<std::string> out;
  for (const auto& [id, s] : reg.strategies) {
    if (args.exclude_impractical && s.impractical) continue;
    if (!filter.empty() && std::find(filter.begin(), filter.end(), id) == filter.end() &&
        s.kind != StrategyKind::expert)
      continue;
    out.push_back(id);
  }
  if (out.empty()) throw ConfigError("no strategies selected");
  return out;
}

SuccessMode parse_mode(const std::string& mode_name, std::uint32_t k) {
  if (mode_name == "pass1") return SuccessMode::pass1();
  if (mode_name == "pass_at_k") return SuccessMode::pass_at_k(k);
  if (mode_name == "pass_pow_k") return SuccessMode::pass_pow_k(k);
  throw ConfigError("unknown success mode '" + mode_name + "'");
}

std::vector<std::string> expert_ids(const Registry& reg) {
  std::vector<std::string> out;
  for (const auto& [id, s] : reg.strategies)
    if (s.kind == StrategyKind::expert) out.push_back(id);
  return out;
}

// ---- run ----

int cmd_run(const CommonArgs& args, const std::vector<std::string>& strategy_filter,
            const SamplingConfig& sampling) {
  Registry reg = load_and_validate(args);
  const DatasetRef& dataset = *reg.find_dataset(args.dataset);
  const std::vector<std::string> strategies = analysis_strategies(reg, args, strategy_filter);

  const RunManifest manifest =
      make_manifest("run", args,
                    {{"n_attempts", std::to_string(sampling.n_attempts)},
                     {"strategies", std::to_string(strategies.size())}});

  std::ofstream records_out(fs::path(args.out_dir) / "attempts.jsonl");
  std::ofstream report_out(fs::path(args.out_dir) / "run_report.jsonl");
  std::size_t shortfalls = 0;

  for (const auto& strategy_id : strategies) {
    const Strategy& strategy = *reg.find_strategy(strategy_id);
    if (strategy.kind == StrategyKind::expert) continue;  // experts have no harness runs
    if (!strategy.provider_config_id)
      throw ConfigError("strategy '" + strategy_id + "' has no provider_config_id");
    const auto cfg_it = reg.provider_configs.find(*strategy.provider_config_id);
    if (cfg_it == reg.provider_configs.end())
      throw ConfigError("strategy '" + strategy_id + "': unknown provider config '" +
                        *strategy.provider_config_id + "'");
    auto provider = make_provider(cfg_it->second, reg);

    for (const auto& problem_id : reg.problem_ids(args.dataset)) {
      const ProblemInstance& problem = *reg.find_problem(args.dataset, problem_id);
      if (prompt_needs_fence_warning(problem)) {
        json warning = {{"strategy_id", strategy_id},  {"dataset_id", args.dataset},
                        {"problem_id", problem_id},    {"attempt_index", 0},
                        {"status", "warning"},         {"extraction_failed", false},
                        {"message", "input text contains the prompt's ''' fence"}};
        report_out << warning.dump() << "\n";
      }
      const CellRunResult result =
          run_cell(*provider, strategy_id, problem, dataset.grader_kind, sampling, args.seed);
      for (const auto& record : result.records) records_out << serialize_attempt(record) << "\n";
      for (const auto& entry : result.report) {
        json line = {{"strategy_id", entry.strategy_id},
                     {"dataset_id", entry.dataset_id},
                     {"problem_id", entry.problem_id},
                     {"attempt_index", entry.attempt_index},
                     {"status", entry.status},
                     {"extraction_failed", entry.extraction_failed},
                     {"message", entry.message}};
        line["manifest_hash"] = manifest.hash_hex();
        report_out << line.dump() << "\n";
        if (entry.status == "transport_failed" || entry.status == "protocol_error") ++shortfalls;
      }
    }
  }
  if (shortfalls != 0) {
    std::cerr << shortfalls << " attempts failed to run; see "
              << (fs::path(args.out_dir) / "run_report.jsonl").string() << "\n";
    return 1;
  }
  return kExitOk;
}

// ---- frontier ----

int cmd_frontier(const CommonArgs& args, const std::vector<std::string>& strategy_filter,
                 bool with_expert, const std::string& mode_name, std::uint32_t k) {
  Registry reg = load_and_validate(args);
  ingest_file(args.attempts_path, reg);
  const SuccessMode mode = parse_mode(mode_name, k);
  const RunManifest manifest = make_manifest(
      "frontier", args, {{"with_expert", with_expert ? "1" : "0"}, {"mode", mode_name}});

  const StatsTable table = build_stats_table(reg, args.dataset);
  const std::vector<std::string> problems = reg.problem_ids(args.dataset);
  const std::vector<std::string> experts = expert_ids(reg);

  std::vector<std::pair<std::string, ExtMoney>> rows;
  for (const auto& id : analysis_strategies(reg, args, strategy_filter)) {
    if (reg.find_strategy(id)->kind == StrategyKind::expert) continue;
    std::vector<std::string> set = {id};
    if (with_expert) set.insert(set.end(), experts.begin(), experts.end());
    rows.push_back({id, frontier(problems, set, table, reg, mode).value});
  }
  if (rows.empty() && with_expert)
    for (const auto& id : experts)
      rows.push_back({id, frontier(problems, {id}, table, reg, mode).value});

  // flag the three lowest values in the text output
  std::vector<ExtMoney> sorted;
  for (const auto& [id, v] : rows) sorted.push_back(v);
  std::sort(sorted.begin(), sorted.end(), [](const ExtMoney& a, const ExtMoney& b) { return a < b; });
  const std::size_t flag_count = std::min<std::size_t>(3, sorted.size());

  std::vector<std::vector<std::string>> text_rows, csv_rows;
  for (const auto& [id, v] : rows) {
    const bool low = flag_count > 0 && (v < sorted[flag_count - 1] || v == sorted[flag_count - 1]);
    text_rows.push_back({id, display_money(v), low ? "*" : ""});
    csv_rows.push_back({id, csv_money(v)});
  }
  print_table({"strategy", "frontier_cost_of_pass", "lowest3"}, text_rows);
  write_csv((fs::path(args.out_dir) / "frontier.csv").string(), manifest.hash_hex(),
            {"strategy", "frontier_cost_of_pass"}, csv_rows);
  return kExitOk;
}

// ---- timeline ----

int cmd_timeline(const CommonArgs& args, bool do_fit) {
  Registry reg = load_and_validate(args);
  ingest_file(args.attempts_path, reg);
  const RunManifest manifest = make_manifest("timeline", args, {{"fit", do_fit ? "1" : "0"}});

  const StatsTable table = build_stats_table(reg, args.dataset);
  const std::vector<std::string> problems = reg.problem_ids(args.dataset);
  const std::vector<std::string> strategies = analysis_strategies(reg, args, {});

  std::set<Date> date_set;
  for (const auto& id : strategies) date_set.insert(reg.find_strategy(id)->release_date);
  const std::vector<Date> dates(date_set.begin(), date_set.end());

  const auto series = temporal_frontier(problems, strategies, table, reg, dates);
  const ExtMoney v0 = series.front().second.value;

  std::vector<std::vector<std::string>> csv_rows;
  std::vector<std::pair<double, ExtMoney>> fit_series;
  for (const auto& [date, result] : series) {
    const double months = months_between(series.front().first, date);
    const Rational normalized = ExtMoney::ratio(result.value, v0) * 100;
    csv_rows.push_back({date.to_string(), std::to_string(months), csv_money(result.value),
                        Money(normalized).to_string()});
    fit_series.push_back({months, result.value});
  }
  write_csv((fs::path(args.out_dir) / "timeline.csv").string(), manifest.hash_hex(),
            {"release_date", "months", "V", "V_normalized_percent"}, csv_rows);

  if (do_fit) {
    const DecayFit fit = fit_decay(fit_series);
    json out = {{"a", fit.a},
                {"b", fit.b},
                {"c", fit.c},
                {"residual_norm", fit.residual_norm},
                {"converged", fit.converged},
                {"manifest_hash", manifest.hash_hex()}};
    if (fit.half_life_months) out["half_life_months"] = *fit.half_life_months;
    std::ofstream(fs::path(args.out_dir) / "fit.json") << out.dump(2) << "\n";
    std::cout << "half-life (months): "
              << (fit.half_life_months ? std::to_string(*fit.half_life_months) : "n/a") << "\n";
  }
  return kExitOk;
}

// ---- essentialness ----

int cmd_essentialness(const CommonArgs& args, const std::string& by) {
  Registry reg = load_and_validate(args);
  ingest_file(args.attempts_path, reg);
  const RunManifest manifest = make_manifest("essentialness", args, {{"by", by}});

  const StatsTable table = build_stats_table(reg, args.dataset);
  const std::vector<std::string> problems = reg.problem_ids(args.dataset);
  const std::vector<std::string> all = analysis_strategies(reg, args, {});

  std::vector<EssentialnessReport> reports;
  if (by == "expert") {
    std::vector<std::string> models;
    for (const auto& id : all)
      if (reg.find_strategy(id)->kind != StrategyKind::expert) models.push_back(id);
    for (const auto& e : expert_ids(reg))
      reports.push_back(expert_essentialness(models, e, problems, table, reg, args.dataset));
  } else if (by == "model") {
    for (const auto& id : all) {
      if (reg.find_strategy(id)->kind == StrategyKind::expert) continue;
      reports.push_back(single_model_essentialness(id, all, problems, table, reg, args.dataset));
    }
  } else if (by == "family") {
    std::map<Family, std::vector<std::string>> families;
    for (const auto& id : all) {
      const Strategy& s = *reg.find_strategy(id);
      if (s.kind != StrategyKind::expert) families[s.family].push_back(id);
    }
    for (const auto& [family, members] : families) {
      EssentialnessReport r =
          family_essentialness(members, all, problems, table, reg, args.dataset);
      r.subject = to_string(family);
      reports.push_back(std::move(r));
    }
  } else {
    throw ConfigError("--by must be family, model, or expert");
  }

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports)
    rows.push_back({r.subject, Money(r.relative_improvement * 100).to_string(4) + "%",
                    display_money(r.v_full), display_money(r.v_without)});
  print_table({"subject", "essentialness", "V_full", "V_without"}, rows);
  std::vector<std::vector<std::string>> csv_rows;
  for (const auto& r : reports)
    csv_rows.push_back({r.subject, Money(r.relative_improvement * 100).to_string(),
                        csv_money(r.v_full), csv_money(r.v_without)});
  write_csv((fs::path(args.out_dir) / "essentialness.csv").string(), manifest.hash_hex(),
            {"subject", "essentialness_percent", "V_full", "V_without"}, csv_rows);
  return kExitOk;
}

// ---- technique ----

int cmd_technique(const CommonArgs& args) {
  Registry reg = load_and_validate(args);
  ingest_file(args.attempts_path, reg);
  const RunManifest manifest = make_manifest("technique", args, {});

  const StatsTable table = build_stats_table(reg, args.dataset);
  const std::vector<std::string> problems = reg.problem_ids(args.dataset);

  std::vector<std::string> base_set;
  std::vector<std::string> techniques;
  for (const auto& id : analysis_strategies(reg, args, {})) {
    if (reg.find_strategy(id)->kind == StrategyKind::technique_modified)
      techniques.push_back(id);
    else
      base_set.push_back(id);
  }
  if (techniques.empty()) throw ConfigError("no technique_modified strategies in the registry");

  std::vector<std::vector<std::string>> rows, csv_rows;
  for (const auto& id : techniques) {
    const TechniqueGainReport r =
        technique_gain(base_set, {id}, problems, table, reg, args.dataset, id);
    rows.push_back({id, args.dataset, Money(r.relative_gain * 100).to_string(4) + "%"});
    csv_rows.push_back({id, args.dataset, Money(r.relative_gain * 100).to_string()});
  }
  print_table({"technique", "dataset", "relative_gain"}, rows);
  write_csv((fs::path(args.out_dir) / "technique.csv").string(), manifest.hash_hex(),
            {"technique", "dataset", "relative_gain_percent"}, csv_rows);
  return kExitOk;
}

// ---- bootstrap ----

int cmd_bootstrap(const CommonArgs& args, const std::string& statistic_name, std::uint32_t n,
                  double level) {
  Registry reg = load_and_validate(args);
  ingest_file(args.attempts_path, reg);
  const RunManifest manifest = make_manifest(
      "bootstrap", args,
      {{"statistic", statistic_name}, {"n", std::to_string(n)}, {"level", std::to_string(level)}});

  const std::vector<std::string> problems = reg.problem_ids(args.dataset);
  const std::vector<std::string> strategies = analysis_strategies(reg, args, {});
  const CellData data = collect_cell_data(reg, args.dataset, strategies);

  Statistic statistic;
  if (statistic_name == "frontier") {
    statistic = [&](const StatsTable& t) {
      return frontier(problems, strategies, t, reg).value;
    };
  } else if (statistic_name.rfind("cop:", 0) == 0) {
    const std::string strategy = statistic_name.substr(4);
    if (!reg.find_strategy(strategy)) throw ConfigError("unknown strategy '" + strategy + "'");
    statistic = [&, strategy](const StatsTable& t) {
      return frontier(problems, {strategy}, t, reg).value;
    };
  } else {
    throw ConfigError("--statistic must be 'frontier' or 'cop:<strategy>'");
  }

  const BootstrapCI ci = bootstrap_ci(data, statistic, statistic_name, n, level, args.seed);
  print_table({"statistic", "lower", "midpoint", "upper", "point"},
              {{ci.statistic_label, display_money(ci.lower), display_money(ci.midpoint),
                display_money(ci.upper), display_money(ci.point)}});
  write_csv((fs::path(args.out_dir) / "bootstrap.csv").string(), manifest.hash_hex(),
            {"statistic", "level", "lower", "midpoint", "upper", "point", "n_resamples", "seed"},
            {{ci.statistic_label, std::to_string(level), csv_money(ci.lower),
              csv_money(ci.midpoint), csv_money(ci.upper), csv_money(ci.point),
              std::to_string(ci.n_resamples), std::to_string(ci.seed)}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-of-pass evaluation economics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonArgs args;
  std::vector<std::string> strategy_filter;
  std::string strategies_arg;

  auto add_common = [&](CLI::App* cmd, bool needs_attempts, bool needs_dataset) {
    cmd->add_option("--registry", args.registry_dir, "registry bundle directory")->required();
    if (needs_attempts)
      cmd->add_option("--attempts", args.attempts_path, "attempt records JSONL")->required();
    if (needs_dataset) cmd->add_option("--dataset", args.dataset, "dataset id")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_flag("--exclude-impractical", args.exclude_impractical,
                  "drop strategies flagged impractical");
    cmd->add_option("--strategies", strategies_arg, "comma-separated strategy filter");
  };

  auto* validate = app.add_subcommand("validate", "check registry invariants");
  validate->add_option("--registry", args.registry_dir, "registry bundle directory")->required();

  SamplingConfig sampling;
  auto* run = app.add_subcommand("run", "execute harness attempts");
  add_common(run, false, true);
  run->add_option("--n", sampling.n_attempts, "attempts per cell");
  run->add_option("--temperature", sampling.temperature, "sampling temperature");
  run->add_flag("--reasoning", sampling.reasoning_mode, "reasoning-model decoding settings");

  bool with_expert = false;
  std::string mode_name = "pass1";
  std::uint32_t k = 1;
  auto* frontier_cmd = app.add_subcommand("frontier", "frontier cost-of-pass table");
  add_common(frontier_cmd, true, true);
  frontier_cmd->add_flag("--with-expert", with_expert, "evaluate each model against the expert");
  frontier_cmd->add_option("--mode", mode_name, "pass1 | pass_at_k | pass_pow_k");
  frontier_cmd->add_option("--k", k, "k for pass_at_k / pass_pow_k");

  bool do_fit = false;
  auto* timeline = app.add_subcommand("timeline", "frontier over release dates");
  add_common(timeline, true, true);
  timeline->add_flag("--fit", do_fit, "fit an exponential decay and report half-life");

  std::string by = "model";
  auto* essentialness = app.add_subcommand("essentialness", "relative frontier improvements");
  add_common(essentialness, true, true);
  essentialness->add_option("--by", by, "family | model | expert");

  auto* technique = app.add_subcommand("technique", "technique relative gains");
  add_common(technique, true, true);

  std::string statistic_name = "frontier";
  std::uint32_t n_resamples = 10000;
  double level = 0.95;
  auto* bootstrap = app.add_subcommand("bootstrap", "percentile-bootstrap confidence interval");
  add_common(bootstrap, true, true);
  bootstrap->add_option("--statistic", statistic_name, "frontier | cop:<strategy>");
  bootstrap->add_option("--n", n_resamples, "resample count");
  bootstrap->add_option("--level", level, "confidence level in (0,1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (!strategies_arg.empty()) strategy_filter = split_csv_list(strategies_arg);
    if (validate->parsed()) {
      const Registry reg = load_registry_bundle(args.registry_dir);
      const auto violations = validate_registry(reg);
      for (const auto& v : violations) std::cerr << v.entity << ": " << v.message << "\n";
      std::cout << (violations.empty() ? "registry ok" : "registry invalid") << "\n";
      return violations.empty() ? kExitOk : kExitConfig;
    }
    if (run->parsed()) return cmd_run(args, strategy_filter, sampling);
    if (frontier_cmd->parsed()) return cmd_frontier(args, strategy_filter, with_expert, mode_name, k);
    if (timeline->parsed()) return cmd_timeline(args, do_fit);
    if (essentialness->parsed()) return cmd_essentialness(args, by);
    if (technique->parsed()) return cmd_technique(args);
    if (bootstrap->parsed()) return cmd_bootstrap(args, statistic_name, n_resamples, level);
  } catch (const MissingCellError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingData;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
