#pragma once

#include <cstdint>
#include <string>

#include "cop/harness.hpp"

namespace cop {

struct HttpProviderOptions {
  std::string endpoint_url;  // e.g. "https://api.example.com/v1"
  std::string model_name;
  std::string api_key_env_var;  // keys travel via the environment only
  int max_retries = 3;          // transport errors only, never wrong answers
  int backoff_base_ms = 250;    // doubled per retry
  int timeout_seconds = 120;

  static HttpProviderOptions from_config(const ProviderConfig& config) {
    HttpProviderOptions o;
    o.endpoint_url = config.endpoint_url;
    o.model_name = config.model_name;
    o.api_key_env_var = config.api_key_env_var;
    return o;
  }
};

/// OpenAI-compatible chat-completions client. One user message per attempt;
/// token counts come from the response usage object and are never estimated.
class HttpOpenAIProvider final : public Provider {
 public:
  explicit HttpOpenAIProvider(HttpProviderOptions options);

  Completion complete(const ProblemInstance& problem, const std::string& prompt,
                      const SamplingConfig& sampling, std::uint64_t attempt_seed) override;

 private:
  HttpProviderOptions options_;
  std::string host_base_;  // scheme://host[:port]
  std::string path_prefix_;
};

}  // namespace cop
