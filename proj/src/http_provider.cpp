#include "cop/http_provider.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "cop/errors.hpp"

namespace cop {

using json = nlohmann::json;

HttpOpenAIProvider::HttpOpenAIProvider(HttpProviderOptions options)
    : options_(std::move(options)) {
  const std::string& url = options_.endpoint_url;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint_url must include a scheme: '" + url + "'");
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    host_base_ = url;
  } else {
    host_base_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  }
}

Completion HttpOpenAIProvider::complete(const ProblemInstance&, const std::string& prompt,
                                        const SamplingConfig& sampling, std::uint64_t) {
  json body;
  body["model"] = options_.model_name;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = sampling.effective_temperature();
  if (auto tp = sampling.effective_top_p()) body["top_p"] = *tp;
  if (sampling.max_output_tokens) body["max_tokens"] = *sampling.max_output_tokens;

  httplib::Headers headers;
  if (!options_.api_key_env_var.empty()) {
    const char* key = std::getenv(options_.api_key_env_var.c_str());
    if (!key || !*key)
      throw ConfigError("API key environment variable '" + options_.api_key_env_var +
                        "' is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const std::string path = path_prefix_ + "/chat/completions";
  std::string last_error;
  int last_status = 0;

  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(options_.backoff_base_ms << (attempt - 1)));
    }
    httplib::Client client(host_base_);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw TransportError("HTTP " + std::to_string(res->status) + " from " + path, res->status);

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw ProtocolError(std::string("response is not JSON: ") + e.what());
    }
    try {
      Completion c;
      c.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      const json& usage = reply.at("usage");
      if (!usage.contains("prompt_tokens") || !usage.contains("completion_tokens"))
        throw ProtocolError("usage object missing token counts");
      c.input_tokens = usage.at("prompt_tokens").get<std::uint64_t>();
      c.output_tokens = usage.at("completion_tokens").get<std::uint64_t>();
      return c;
    } catch (const json::exception& e) {
      throw ProtocolError(std::string("malformed chat completion: ") + e.what());
    }
  }
  throw TransportError("request failed after " + std::to_string(options_.max_retries + 1) +
                           " tries: " + last_error,
                       last_status);
}

}  // namespace cop
