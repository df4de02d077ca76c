#include "cop/harness.hpp"

#include <algorithm>

#include "cop/answers.hpp"
#include "cop/errors.hpp"
#include "cop/http_provider.hpp"
#include "cop/stats.hpp"

namespace cop {

const char* const kPromptTemplateVersion = "v1";
const char* const kPromptTemplateV1 =
    "Please solve the following question. You can explain your solution before presenting the "
    "final answer. Format your final answer as:\n"
    "\n"
    "<answer>\n"
    "...\n"
    "</answer>\n"
    "\n"
    "Instructions:\n"
    "- For multiple-choice: Give only the letter (e.g., (A)).\n"
    "- For numeric: Give only the number (e.g., 42).\n"
    "- For free-response: Provide the full final answer text.\n"
    "\n"
    "INPUT:\n"
    "\n"
    "'''\n"
    "{input}\n"
    "'''\n";

std::string render_prompt(const ProblemInstance& problem, const std::string& prompt_template) {
  std::string out = prompt_template;
  const std::string placeholder = "{input}";
  const std::size_t pos = out.find(placeholder);
  if (pos == std::string::npos)
    throw ConfigError("prompt template has no {input} placeholder");
  out.replace(pos, placeholder.size(), problem.input_text);
  return out;
}

bool prompt_needs_fence_warning(const ProblemInstance& problem) {
  return problem.input_text.find("'''") != std::string::npos;
}

std::optional<std::string> extract_answer(const std::string& text) {
  static const std::string open = "<answer>";
  static const std::string close = "</answer>";
  std::optional<std::string> last;
  std::size_t pos = 0;
  while (true) {
    const std::size_t start = text.find(open, pos);
    if (start == std::string::npos) break;
    const std::size_t body = start + open.size();
    const std::size_t end = text.find(close, body);
    if (end == std::string::npos) break;  // unclosed trailing block
    last = trim(std::string_view(text).substr(body, end - body));
    pos = end + close.size();
  }
  return last;
}

bool grade(const std::optional<std::string>& extracted, const ProblemInstance& problem,
           GraderKind kind) {
  if (!extracted) return false;
  switch (kind) {
    case GraderKind::multiple_choice: {
      const auto got = normalize_choice(*extracted);
      const auto ref = normalize_choice(problem.reference_answer);
      return got && ref && *got == *ref;
    }
    case GraderKind::numeric: {
      const auto got = parse_numeric(*extracted);
      const auto ref = parse_numeric(problem.reference_answer);
      return got && ref && *got == *ref;
    }
    case GraderKind::free_response:
      return casefold(trim(*extracted)) == casefold(trim(problem.reference_answer));
  }
  return false;
}

std::uint64_t approx_token_count(const std::string& text) {
  return (text.size() + 3) / 4;
}

namespace {

std::uint64_t attempt_seed_for(std::uint64_t seed, const ProblemInstance& problem,
                               std::uint32_t attempt_index) {
  return derive_seed(derive_seed(seed, hash_string(problem.dataset_id + "/" + problem.problem_id)),
                     attempt_index);
}

class SimulatedProvider final : public Provider {
 public:
  explicit SimulatedProvider(ProviderConfig config) : config_(std::move(config)) {}

  Completion complete(const ProblemInstance& problem, const std::string& prompt,
                      const SamplingConfig&, std::uint64_t attempt_seed) override {
    SplitMix64 rng(attempt_seed);
    double p = config_.default_success_prob;
    if (auto it = config_.success_prob.find(problem.problem_id); it != config_.success_prob.end())
      p = it->second;
    const bool success = rng.uniform() < p;

    Completion c;
    c.input_tokens = approx_token_count(prompt);
    const std::uint64_t lo = config_.output_tokens_lo;
    const std::uint64_t hi = std::max(config_.output_tokens_hi, lo);
    c.output_tokens = lo + (hi > lo ? rng.below(hi - lo + 1) : 0);
    c.text = success ? "Worked through it.\n<answer>" + problem.reference_answer + "</answer>"
                     : "Worked through it.\n<answer>__incorrect__</answer>";
    return c;
  }

 private:
  ProviderConfig config_;
};

class RandomGuesserProvider final : public Provider {
 public:
  RandomGuesserProvider(ProviderConfig config, std::uint32_t option_count)
      : config_(std::move(config)), option_count_(option_count) {}

  Completion complete(const ProblemInstance&, const std::string& prompt, const SamplingConfig&,
                      std::uint64_t attempt_seed) override {
    SplitMix64 rng(attempt_seed);
    const char letter = static_cast<char>('A' + rng.below(option_count_));
    Completion c;
    c.input_tokens = approx_token_count(prompt);
    c.text = std::string("<answer>(") + letter + ")</answer>";
    c.output_tokens = approx_token_count(c.text);
    return c;
  }

 private:
  ProviderConfig config_;
  std::uint32_t option_count_;
};

}  // namespace

std::unique_ptr<Provider> make_provider(const ProviderConfig& config, const Registry& registry) {
  switch (config.kind) {
    case ProviderConfig::Kind::simulated:
      return std::make_unique<SimulatedProvider>(config);
    case ProviderConfig::Kind::random_guesser: {
      std::uint32_t k = config.option_count.value_or(0);
      if (k < 2)
        throw ConfigError("random_guesser provider '" + config.id +
                          "' requires option_count >= 2");
      return std::make_unique<RandomGuesserProvider>(config, k);
    }
    case ProviderConfig::Kind::http_openai_compatible:
      return std::make_unique<HttpOpenAIProvider>(HttpProviderOptions::from_config(config));
  }
  throw ConfigError("unknown provider kind");
  (void)registry;
}

CellRunResult run_cell(Provider& provider, const std::string& strategy_id,
                       const ProblemInstance& problem, GraderKind grader_kind,
                       const SamplingConfig& sampling, std::uint64_t seed,
                       const std::string& prompt_template) {
  CellRunResult result;
  const std::string prompt = render_prompt(problem, prompt_template);
  if (prompt_needs_fence_warning(problem))
    result.report.push_back({strategy_id, problem.dataset_id, problem.problem_id, 0, "warning",
                             "input contains the ''' fence; emitted unescaped", false});

  for (std::uint32_t i = 0; i < sampling.n_attempts; ++i) {
    const std::uint64_t attempt_seed = attempt_seed_for(seed, problem, i);
    Completion completion;
    try {
      completion = provider.complete(problem, prompt, sampling, attempt_seed);
    } catch (const TransportError& e) {
      result.report.push_back({strategy_id, problem.dataset_id, problem.problem_id, i,
                               "transport_failed", e.what(), false});
      continue;  // excluded from stats; R-hat must not absorb transport noise
    } catch (const ProtocolError& e) {
      result.report.push_back({strategy_id, problem.dataset_id, problem.problem_id, i,
                               "protocol_error", e.what(), false});
      continue;
    }

    const auto extracted = extract_answer(completion.text);
    AttemptRecord record;
    record.strategy_id = strategy_id;
    record.dataset_id = problem.dataset_id;
    record.problem_id = problem.problem_id;
    record.attempt_index = i;
    record.correct = grade(extracted, problem, grader_kind);
    record.input_tokens = completion.input_tokens;
    record.output_tokens = completion.output_tokens;
    result.records.push_back(std::move(record));
    result.report.push_back({strategy_id, problem.dataset_id, problem.problem_id, i, "ok", "",
                             !extracted.has_value()});
  }
  return result;
}

}  // namespace cop
