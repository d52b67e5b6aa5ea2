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
// Deterministic stand-in for the generation endpoint, used for tests and
// offline runs: fixture mode replays canned ADs per clip_id, echo mode
// synthesizes one fixed sentence from the request context.

#ifndef ADEVAL_MOCK_SERVER_HPP_
#define ADEVAL_MOCK_SERVER_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "adeval/inference.hpp"
#include "adeval/types.hpp"

namespace adeval::infer {

class MockServer {
 public:
  struct Options {
    // Non-empty: fixture mode; a request for an unlisted clip_id gets 404.
    std::map<std::string, std::string> fixtures;
    // Used by echo mode to pick the verb for the first action label.
    ActionLexicon lexicon = ActionLexicon::default_lexicon();
  };

  MockServer();
  explicit MockServer(Options options);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds 127.0.0.1 and serves on a background thread. port 0 picks a free
  // port. Returns the bound port; throws EndpointError when binding fails.
  int start(int port = 0);
  void stop();
  int port() const;
  std::string base_url() const;

  // Every well-formed request received, in arrival order.
  std::vector<GenerationRequest> request_log() const;

  // The sentence echo mode would produce for this context. Exposed so tests
  // and documentation share one definition.
  static std::string echo_text(const ClipContext& context,
                               const ActionLexicon& lexicon);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace adeval::infer

#endif  // ADEVAL_MOCK_SERVER_HPP_
