#include "kogito/completion_client.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing '/'
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigurationError("API URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

void CompletionRequest::validate() const {
  if (prompt.empty()) throw ValidationError("completion prompt is empty");
  if (max_tokens < 1) throw ValidationError("max_tokens must be at least 1");
  if (temperature < 0) throw ValidationError("temperature must be non-negative");
  if (n_samples < 1) throw ValidationError("n_samples must be at least 1");
}

ApiEndpoint ApiEndpoint::from_env() {
  ApiEndpoint e;
  if (const char* key = std::getenv("KOGITO_API_KEY")) e.api_key = key;
  if (const char* url = std::getenv("KOGITO_API_URL")) e.base_url = url;
  return e;
}

std::string truncate_at_stop(std::string_view text,
                             const std::vector<std::string>& stop_sequences) {
  std::size_t cut = text.size();
  for (const auto& stop : stop_sequences) {
    if (stop.empty()) continue;
    cut = std::min(cut, text.find(stop));
  }
  return std::string(text.substr(0, cut));
}

std::vector<std::string> complete_via_api(const ApiEndpoint& endpoint,
                                          const CompletionRequest& request) {
  if (endpoint.api_key.empty())
    throw CredentialError("no API key configured (set KOGITO_API_KEY)");
  request.validate();
  if (endpoint.base_url.empty())
    throw ConfigurationError("no API URL configured (set KOGITO_API_URL)");
  const SplitUrl url = split_url(endpoint.base_url);

  nlohmann::json body = {{"prompt", request.prompt},
                         {"max_tokens", request.max_tokens},
                         {"temperature", request.temperature},
                         {"stop", request.stop_sequences},
                         {"n", request.n_samples}};
  if (!endpoint.model.empty()) body["model"] = endpoint.model;
  const std::string payload = body.dump();
  const httplib::Headers headers = {
      {"Authorization", "Bearer " + endpoint.api_key}};

  const int attempts = std::max(1, endpoint.max_attempts);
  auto delay = endpoint.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(delay.count()) * endpoint.backoff_multiplier));
    }
    httplib::Client client(url.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        endpoint.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    auto res = client.Post(url.prefix + endpoint.path, headers, payload,
                           "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw CredentialError("API rejected credentials (HTTP " +
                            std::to_string(res->status) + ")");
    if (res->status < 200 || res->status >= 300) {
      if (retryable_status(res->status) && attempt < attempts) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      throw ApiError(res->status, excerpt(res->body));
    }
    std::vector<std::string> out;
    try {
      const auto doc = nlohmann::json::parse(res->body);
      for (const auto& choice : doc.at("choices"))
        out.emplace_back(text::trim(
            truncate_at_stop(choice.at("text").get<std::string>(),
                             request.stop_sequences)));
    } catch (const nlohmann::json::exception& e) {
      throw ApiError(res->status, "malformed completion response: " +
                                      excerpt(res->body));
    }
    return out;
  }
  throw TransportError("completion endpoint unreachable after " +
                       std::to_string(attempts) + " attempts: " + last_error);
}

}  // namespace kogito
