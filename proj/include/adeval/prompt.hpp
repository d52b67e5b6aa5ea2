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
// Prompt assembly. Three instruction variants (plain, with a worked
// example, with guideline clauses) crossed with four context profiles that
// gate which per-clip cues are included. Building is pure string work and
// injective over the enabled context values.

#ifndef ADEVAL_PROMPT_HPP_
#define ADEVAL_PROMPT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adeval/types.hpp"

namespace adeval::prompt {

enum class Variant { kP1 = 1, kP2 = 2, kP3 = 3 };

// The fixed instruction line shared by all variants.
inline constexpr const char* kBaseInstruction =
    "Give an audio description of the given video.";

enum class ContextProfile {
  kNone,                      // instruction only
  kPlayersActions,            // players + actions
  kPlayersActionsCommentary,  // + commentary
  kFull,                      // + previous AD
};

std::optional<Variant> parse_variant(const std::string& s);
std::optional<ContextProfile> parse_profile(const std::string& s);
const char* profile_name(ContextProfile p);
const char* variant_name(Variant v);

struct ContextFlags {
  bool players_actions = false;
  bool commentary = false;
  bool previous_ad = false;
};

ContextFlags context_flags_from_profile(ContextProfile profile);

struct PromptTemplate {
  Variant variant = Variant::kP1;
  // May reference {players}, {actions}, {commentary}, {previous_ad}; a
  // referenced placeholder must be enabled and present in the bundle.
  std::string body;
};

// Built-in templates. P1 is exactly the base instruction.
PromptTemplate default_template(Variant variant);

// Reads a custom body; one trailing newline is stripped.
PromptTemplate load_template_file(const std::filesystem::path& path,
                                  Variant variant);

struct ContextBundle {
  ContextFlags flags;
  std::vector<std::string> players;
  std::vector<ActionEvent> actions;
  std::string commentary;
  std::optional<std::string> previous_ad;
};

ContextBundle make_bundle(ContextProfile profile, const ClipContext& context);

// Expands in-body placeholders, then appends one labeled section per
// enabled, unconsumed, non-empty context field (Players, Actions,
// Commentary, Previous AD, in that order). Disabled or empty fields leave
// no trace. With everything disabled the result is the body itself.
std::string build_prompt(const PromptTemplate& tmpl,
                         const ContextBundle& bundle);

}  // namespace adeval::prompt

#endif  // ADEVAL_PROMPT_HPP_
