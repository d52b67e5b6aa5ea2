// Copyright 2026 The adeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// HTTP client for the AD generation endpoint: POST /v1/generate with a JSON
// request, bounded retries with exponential backoff on transient failures
// (timeouts, transport errors, 429, 5xx), fail-fast on other statuses. A
// response is only accepted when it echoes the request's clip_id.

#ifndef ADEVAL_INFERENCE_HPP_
#define ADEVAL_INFERENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adeval/types.hpp"

namespace adeval::infer {

struct GenerationRequest {
  std::string clip_id;
  std::string video_uri;  // advisory; may be empty
  std::string prompt;
  ClipContext context;    // structured cues travel alongside the prompt
  int max_tokens = 128;
  double temperature = 0.0;
  int frames = 4;         // sampling hint for the endpoint
};

struct GenerationResponse {
  std::string clip_id;
  std::string ad_text;
  std::string model_id;
  double latency_ms = 0.0;
};

struct EndpointConfig {
  std::string base_url = "http://127.0.0.1:8089";
  std::string auth_token;  // sent as a bearer token when non-empty
  double timeout_s = 30.0;
  int max_attempts = 3;    // total tries per request, >= 1
  int backoff_ms = 100;    // doubled after each failed attempt
  int concurrency = 4;     // in-flight request bound for batches
};

enum class RequestError {
  kNone,
  kTransport,   // connection failed or broken
  kTimeout,
  kHttpStatus,  // non-retryable or final HTTP status
  kMalformed,   // body was not a valid response
  kWrongClip,   // response clip_id did not echo the request
};

const char* request_error_name(RequestError e);

struct GenerationOutcome {
  std::string clip_id;
  bool ok = false;
  GenerationResponse response;  // valid when ok
  RequestError error = RequestError::kNone;
  std::string message;
  int attempts = 0;

  // Retryable failures exhaust the attempt budget before reporting.
};

nlohmann::json request_to_json(const GenerationRequest& request);
GenerationRequest request_from_json(const nlohmann::json& doc);
nlohmann::json response_to_json(const GenerationResponse& response);
std::optional<GenerationResponse> response_from_json(const nlohmann::json& doc);

// One request, honoring the retry budget. Never throws for per-request
// failures; the outcome carries the error.
GenerationOutcome generate_ad(const GenerationRequest& request,
                              const EndpointConfig& config);

// Runs requests through a bounded worker pool; the result is sorted by
// clip_id and contains exactly one outcome per request.
std::vector<GenerationOutcome> generate_batch(
    const std::vector<GenerationRequest>& requests,
    const EndpointConfig& config);

}  // namespace adeval::infer

#endif  // ADEVAL_INFERENCE_HPP_
