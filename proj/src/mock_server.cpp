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

#include "adeval/mock_server.hpp"

#include <httplib.h>

#include <mutex>
#include <thread>

#include "adeval/error.hpp"
#include "adeval/unicode.hpp"

namespace adeval::infer {

using nlohmann::json;

struct MockServer::Impl {
  Options options;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex log_mutex;
  std::vector<GenerationRequest> log;
};

MockServer::MockServer() : MockServer(Options{}) {}

MockServer::MockServer(Options options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);

  impl_->server.Post("/v1/generate", [this](const httplib::Request& req,
                                            httplib::Response& res) {
    json doc;
    try {
      doc = json::parse(req.body);
    } catch (const json::parse_error&) {
      res.status = 400;
      res.set_content(json{{"error", "request body is not valid JSON"}}.dump(),
                      "application/json");
      return;
    }
    GenerationRequest request;
    try {
      request = request_from_json(doc);
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      return;
    }
    {
      std::lock_guard<std::mutex> lock(impl_->log_mutex);
      impl_->log.push_back(request);
    }

    GenerationResponse response;
    response.clip_id = request.clip_id;
    response.latency_ms = 1.0;
    if (!impl_->options.fixtures.empty()) {
      auto it = impl_->options.fixtures.find(request.clip_id);
      if (it == impl_->options.fixtures.end()) {
        res.status = 404;
        res.set_content(
            json{{"error", "unknown clip_id '" + request.clip_id + "'"}}.dump(),
            "application/json");
        return;
      }
      response.ad_text = it->second;
      response.model_id = "mock-fixture";
    } else {
      response.ad_text = echo_text(request.context, impl_->options.lexicon);
      response.model_id = "mock-echo";
    }
    res.status = 200;
    res.set_content(response_to_json(response).dump(), "application/json");
  });
}

MockServer::~MockServer() { stop(); }

int MockServer::start(int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) {
      throw EndpointError("mock server: cannot bind a port on 127.0.0.1");
    }
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port)) {
      throw EndpointError("mock server: cannot bind port " +
                          std::to_string(port));
    }
    impl_->port = port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void MockServer::stop() {
  if (impl_ && impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

int MockServer::port() const { return impl_->port; }

std::string MockServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

std::vector<GenerationRequest> MockServer::request_log() const {
  std::lock_guard<std::mutex> lock(impl_->log_mutex);
  return impl_->log;
}

std::string MockServer::echo_text(const ClipContext& context,
                                  const ActionLexicon& lexicon) {
  const bool has_players = !context.players.empty();
  const bool has_actions = !context.actions.empty();
  if (has_players && has_actions) {
    const std::string& label = context.actions.front().label;
    std::string lemma;
    if (const auto* lemmas = lexicon.lemmas_for(label);
        lemmas && !lemmas->empty()) {
      lemma = lemmas->front();
    } else {
      lemma = uni::fold(label);
    }
    // Naive -s inflection keeps the output a plain deterministic sentence.
    return context.players.front() + " " + lemma + "s.";
  }
  if (has_players) {
    return context.players.front() + " controls the ball.";
  }
  if (has_actions) {
    return "The " + uni::fold(context.actions.front().label) + " is taken.";
  }
  return "The players contest the ball in midfield.";
}

}  // namespace adeval::infer
