#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cop/records.hpp"

namespace cop {

/// Decoding settings shared across a cell's attempts. reasoning_mode maps to
/// temperature 1.0 with top_p unset.
struct SamplingConfig {
  std::uint32_t n_attempts = 8;
  double temperature = 0.7;
  std::optional<double> top_p = 1.0;
  bool reasoning_mode = false;
  std::optional<std::uint32_t> max_output_tokens;

  double effective_temperature() const { return reasoning_mode ? 1.0 : temperature; }
  std::optional<double> effective_top_p() const {
    return reasoning_mode ? std::nullopt : top_p;
  }
};

struct Completion {
  std::string text;
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;
};

/// The versioned instruction template. {input} is the substitution point.
extern const char* const kPromptTemplateV1;
extern const char* const kPromptTemplateVersion;

/// Fills the template with the problem's input text, byte-for-byte otherwise.
/// A custom template overrides the built-in one for the whole run.
std::string render_prompt(const ProblemInstance& problem,
                          const std::string& prompt_template = kPromptTemplateV1);

/// True when the input text contains the template's ''' fence, which the
/// template cannot escape; surfaced as a run warning.
bool prompt_needs_fence_warning(const ProblemInstance& problem);

/// Content of the LAST well-formed <answer>...</answer> block, trimmed.
std::optional<std::string> extract_answer(const std::string& text);

/// Grades an extracted answer against the problem's reference under the
/// dataset's grader kind. Absent extraction grades false.
bool grade(const std::optional<std::string>& extracted, const ProblemInstance& problem,
           GraderKind kind);

class Provider {
 public:
  virtual ~Provider() = default;
  /// One attempt. Throws TransportError / ProtocolError on failure.
  virtual Completion complete(const ProblemInstance& problem, const std::string& prompt,
                              const SamplingConfig& sampling, std::uint64_t attempt_seed) = 0;
};

/// Instantiates the provider for a config (simulated, random_guesser, or
/// http_openai_compatible).
std::unique_ptr<Provider> make_provider(const ProviderConfig& config, const Registry& registry);

struct RunReportEntry {
  std::string strategy_id;
  std::string dataset_id;
  std::string problem_id;
  std::uint32_t attempt_index = 0;
  std::string status;  // "ok" | "transport_failed" | "protocol_error" | "warning"
  std::string message;
  bool extraction_failed = false;
};

struct CellRunResult {
  std::vector<AttemptRecord> records;  // failed-to-run attempts are excluded
  std::vector<RunReportEntry> report;
};

/// Runs n_attempts independent completions for one (strategy, problem) cell.
/// Deterministic providers derive randomness from (seed, problem, attempt_index).
CellRunResult run_cell(Provider& provider, const std::string& strategy_id,
                       const ProblemInstance& problem, GraderKind grader_kind,
                       const SamplingConfig& sampling, std::uint64_t seed,
                       const std::string& prompt_template = kPromptTemplateV1);

/// Token estimate used by the offline providers: ceil(bytes / 4).
std::uint64_t approx_token_count(const std::string& text);

}  // namespace cop
