#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kogito {

struct CompletionRequest {
  std::string prompt;
  int max_tokens = 24;
  double temperature = 0.0;
  std::vector<std::string> stop_sequences = {"\n"};
  int n_samples = 1;

  // Throws ValidationError on an empty prompt, max_tokens < 1, a negative
  // temperature or n_samples < 1.
  void validate() const;
};

// Remote text-completion endpoint (completion-API request/response shape).
struct ApiEndpoint {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string path = "/completions";
  std::string api_key;
  std::string model;  // sent as "model" when non-empty
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double backoff_multiplier = 2.0;
  std::chrono::milliseconds timeout{30000};

  // KOGITO_API_KEY and KOGITO_API_URL; unset variables leave fields empty.
  static ApiEndpoint from_env();
};

// Cuts `text` at the earliest occurrence of any stop sequence.
std::string truncate_at_stop(std::string_view text,
                             const std::vector<std::string>& stop_sequences);

// POSTs {prompt, max_tokens, temperature, stop, n} and returns the
// completions from {"choices": [{"text": ...}]}, each cut at the first stop
// sequence and trimmed. Transport failures, 429 and 5xx responses are
// retried with exponential backoff, max_attempts attempts in total.
//
// Throws CredentialError when no key is configured (before any network
// traffic) or on 401/403, ApiError on other non-success statuses,
// TransportError when the endpoint stays unreachable.
std::vector<std::string> complete_via_api(const ApiEndpoint& endpoint,
                                          const CompletionRequest& request);

}  // namespace kogito
