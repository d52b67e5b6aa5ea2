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

#include "adeval/inference.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "adeval/error.hpp"

namespace adeval::infer {
namespace {

using nlohmann::json;

constexpr int kMaxBackoffMs = 5000;

bool is_retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

void sleep_backoff(const EndpointConfig& config, int attempt) {
  double ms = static_cast<double>(config.backoff_ms) *
              std::pow(2.0, static_cast<double>(attempt - 1));
  ms = std::min(ms, static_cast<double>(kMaxBackoffMs));
  std::this_thread::sleep_for(
      std::chrono::milliseconds(static_cast<long long>(ms)));
}

httplib::Headers make_headers(const EndpointConfig& config) {
  httplib::Headers headers;
  if (!config.auth_token.empty()) {
    headers.emplace("Authorization", "Bearer " + config.auth_token);
  }
  return headers;
}

}  // namespace

const char* request_error_name(RequestError e) {
  switch (e) {
    case RequestError::kNone: return "none";
    case RequestError::kTransport: return "transport";
    case RequestError::kTimeout: return "timeout";
    case RequestError::kHttpStatus: return "http_status";
    case RequestError::kMalformed: return "malformed_response";
    case RequestError::kWrongClip: return "wrong_clip_id";
  }
  return "unknown";
}

json request_to_json(const GenerationRequest& request) {
  json ctx;
  ctx["commentary"] = request.context.commentary;
  ctx["players"] = request.context.players;
  json actions = json::array();
  for (const auto& a : request.context.actions) {
    actions.push_back({{"label", a.label}, {"t_s", a.t_s}});
  }
  ctx["actions"] = std::move(actions);
  if (request.context.previous_ad) {
    ctx["previous_ad"] = *request.context.previous_ad;
  }
  json doc;
  doc["clip_id"] = request.clip_id;
  if (!request.video_uri.empty()) doc["video_uri"] = request.video_uri;
  doc["prompt"] = request.prompt;
  doc["context"] = std::move(ctx);
  doc["max_tokens"] = request.max_tokens;
  doc["temperature"] = request.temperature;
  doc["frames"] = request.frames;
  return doc;
}

GenerationRequest request_from_json(const json& doc) {
  GenerationRequest req;
  if (!doc.is_object() || !doc.contains("clip_id") ||
      !doc["clip_id"].is_string() || !doc.contains("prompt") ||
      !doc["prompt"].is_string()) {
    throw DataError("generation request must carry clip_id and prompt");
  }
  req.clip_id = doc["clip_id"].get<std::string>();
  req.prompt = doc["prompt"].get<std::string>();
  req.video_uri = doc.value("video_uri", "");
  req.max_tokens = doc.value("max_tokens", 128);
  req.temperature = doc.value("temperature", 0.0);
  req.frames = doc.value("frames", 4);
  if (doc.contains("context") && doc["context"].is_object()) {
    const json& ctx = doc["context"];
    req.context.clip_id = req.clip_id;
    req.context.commentary = ctx.value("commentary", "");
    for (const auto& p : ctx.value("players", json::array())) {
      if (p.is_string()) req.context.players.push_back(p.get<std::string>());
    }
    for (const auto& a : ctx.value("actions", json::array())) {
      if (a.is_object() && a.contains("label")) {
        ActionEvent ev;
        ev.label = a["label"].get<std::string>();
        ev.t_s = a.value("t_s", 0.0);
        req.context.actions.push_back(std::move(ev));
      }
    }
    if (ctx.contains("previous_ad") && ctx["previous_ad"].is_string()) {
      req.context.previous_ad = ctx["previous_ad"].get<std::string>();
    }
  }
  return req;
}

json response_to_json(const GenerationResponse& response) {
  return json{{"clip_id", response.clip_id},
              {"ad_text", response.ad_text},
              {"model_id", response.model_id},
              {"latency_ms", response.latency_ms}};
}

std::optional<GenerationResponse> response_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("clip_id") ||
      !doc["clip_id"].is_string() || !doc.contains("ad_text") ||
      !doc["ad_text"].is_string()) {
    return std::nullopt;
  }
  GenerationResponse resp;
  resp.clip_id = doc["clip_id"].get<std::string>();
  resp.ad_text = doc["ad_text"].get<std::string>();
  resp.model_id = doc.value("model_id", "");
  resp.latency_ms = doc.value("latency_ms", 0.0);
  return resp;
}

namespace {

GenerationOutcome run_once(httplib::Client& client,
                           const GenerationRequest& request,
                           const EndpointConfig& config, int* status_out) {
  GenerationOutcome out;
  out.clip_id = request.clip_id;
  *status_out = 0;
  const std::string body = request_to_json(request).dump();
  auto res = client.Post("/v1/generate", make_headers(config), body,
                         "application/json");
  if (!res) {
    const auto err = res.error();
    out.error = err == httplib::Error::ConnectionTimeout
                    ? RequestError::kTimeout
                    : RequestError::kTransport;
    out.message = httplib::to_string(err);
    return out;
  }
  if (res->status != 200) {
    *status_out = res->status;
    out.error = RequestError::kHttpStatus;
    out.message = "HTTP " + std::to_string(res->status);
    return out;
  }
  json doc;
  try {
    doc = json::parse(res->body);
  } catch (const json::parse_error&) {
    out.error = RequestError::kMalformed;
    out.message = "response body is not valid JSON";
    return out;
  }
  auto resp = response_from_json(doc);
  if (!resp) {
    out.error = RequestError::kMalformed;
    out.message = "response is missing clip_id or ad_text";
    return out;
  }
  if (resp->clip_id != request.clip_id) {
    out.error = RequestError::kWrongClip;
    out.message = "response clip_id '" + resp->clip_id +
                  "' does not match request '" + request.clip_id + "'";
    return out;
  }
  out.ok = true;
  out.error = RequestError::kNone;
  out.response = std::move(*resp);
  return out;
}

}  // namespace

GenerationOutcome generate_ad(const GenerationRequest& request,
                              const EndpointConfig& config) {
  if (config.max_attempts < 1) {
    throw UsageError("max_attempts must be at least 1");
  }
  httplib::Client client(config.base_url);
  const auto sec = static_cast<time_t>(config.timeout_s);
  const auto usec =
      static_cast<long>((config.timeout_s - static_cast<double>(sec)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  GenerationOutcome out;
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    const auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    out = run_once(client, request, config, &status);
    out.attempts = attempt;
    if (out.ok) {
      if (out.response.latency_ms <= 0.0) {
        out.response.latency_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
      }
      return out;
    }
    // 4xx other than 429 will not improve on retry.
    if (out.error == RequestError::kHttpStatus &&
        !is_retryable_status(status)) {
      return out;
    }
    if (attempt < config.max_attempts) sleep_backoff(config, attempt);
  }
  return out;
}

std::vector<GenerationOutcome> generate_batch(
    const std::vector<GenerationRequest>& requests,
    const EndpointConfig& config) {
  if (config.concurrency < 1) {
    throw UsageError("concurrency must be at least 1");
  }
  std::vector<GenerationOutcome> outcomes(requests.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(config.concurrency), requests.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= requests.size()) break;
        outcomes[i] = generate_ad(requests[i], config);
      }
    });
  }
  for (auto& t : pool) t.join();
  std::sort(outcomes.begin(), outcomes.end(),
            [](const GenerationOutcome& a, const GenerationOutcome& b) {
              return a.clip_id < b.clip_id;
            });
  return outcomes;
}

}  // namespace adeval::infer
