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

#include "adeval/prompt.hpp"

#include <cstdio>

#include "adeval/error.hpp"
#include "adeval/io_util.hpp"

namespace adeval::prompt {
namespace {

std::string render_players(const std::vector<std::string>& players) {
  std::string out;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (i) out += ", ";
    out += players[i];
  }
  return out;
}

std::string render_actions(const std::vector<ActionEvent>& actions) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ", ";
    std::snprintf(buf, sizeof(buf), "@%.1f", actions[i].t_s);
    out += actions[i].label;
    out += buf;
  }
  return out;
}

// Replaces every occurrence; returns whether the placeholder was present.
bool substitute(std::string& body, const std::string& placeholder,
                const std::string& value) {
  bool found = false;
  std::size_t pos = 0;
  while ((pos = body.find(placeholder, pos)) != std::string::npos) {
    body.replace(pos, placeholder.size(), value);
    pos += value.size();
    found = true;
  }
  return found;
}

}  // namespace

std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "1" || s == "p1" || s == "P1") return Variant::kP1;
  if (s == "2" || s == "p2" || s == "P2") return Variant::kP2;
  if (s == "3" || s == "p3" || s == "P3") return Variant::kP3;
  return std::nullopt;
}

std::optional<ContextProfile> parse_profile(const std::string& s) {
  if (s == "none") return ContextProfile::kNone;
  if (s == "pa") return ContextProfile::kPlayersActions;
  if (s == "pa+c") return ContextProfile::kPlayersActionsCommentary;
  if (s == "pa+c+prev") return ContextProfile::kFull;
  return std::nullopt;
}

const char* profile_name(ContextProfile p) {
  switch (p) {
    case ContextProfile::kNone: return "none";
    case ContextProfile::kPlayersActions: return "pa";
    case ContextProfile::kPlayersActionsCommentary: return "pa+c";
    case ContextProfile::kFull: return "pa+c+prev";
  }
  return "none";
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kP1: return "P1";
    case Variant::kP2: return "P2";
    case Variant::kP3: return "P3";
  }
  return "P1";
}

ContextFlags context_flags_from_profile(ContextProfile profile) {
  ContextFlags flags;
  switch (profile) {
    case ContextProfile::kNone:
      break;
    case ContextProfile::kPlayersActions:
      flags.players_actions = true;
      break;
    case ContextProfile::kPlayersActionsCommentary:
      flags.players_actions = true;
      flags.commentary = true;
      break;
    case ContextProfile::kFull:
      flags.players_actions = true;
      flags.commentary = true;
      flags.previous_ad = true;
      break;
  }
  return flags;
}

PromptTemplate default_template(Variant variant) {
  PromptTemplate tmpl;
  tmpl.variant = variant;
  switch (variant) {
    case Variant::kP1:
      tmpl.body = kBaseInstruction;
      break;
    case Variant::kP2:
      tmpl.body = std::string(kBaseInstruction) +
                  "\nExample: Rooney rises at the far post and heads the "
                  "cross against the bar.";
      break;
    case Variant::kP3:
      tmpl.body = std::string(kBaseInstruction) +
                  "\nName the players involved, avoid pronouns, mention the "
                  "key action, and keep the description short enough to fit "
                  "the clip.";
      break;
  }
  return tmpl;
}

PromptTemplate load_template_file(const std::filesystem::path& path,
                                  Variant variant) {
  PromptTemplate tmpl;
  tmpl.variant = variant;
  tmpl.body = io::read_file(path);
  if (!tmpl.body.empty() && tmpl.body.back() == '\n') tmpl.body.pop_back();
  if (!tmpl.body.empty() && tmpl.body.back() == '\r') tmpl.body.pop_back();
  return tmpl;
}

ContextBundle make_bundle(ContextProfile profile, const ClipContext& context) {
  ContextBundle bundle;
  bundle.flags = context_flags_from_profile(profile);
  if (bundle.flags.players_actions) {
    bundle.players = context.players;
    bundle.actions = context.actions;
  }
  if (bundle.flags.commentary) bundle.commentary = context.commentary;
  if (bundle.flags.previous_ad) bundle.previous_ad = context.previous_ad;
  return bundle;
}

std::string build_prompt(const PromptTemplate& tmpl,
                         const ContextBundle& bundle) {
  std::string out = tmpl.body;

  struct Field {
    const char* placeholder;
    bool enabled;
    bool present;
    std::string value;
    const char* section_label;
  };
  const bool prev_present = bundle.previous_ad.has_value();
  std::vector<Field> fields;
  fields.push_back({"{players}", bundle.flags.players_actions, true,
                    render_players(bundle.players), "Players"});
  fields.push_back({"{actions}", bundle.flags.players_actions, true,
                    render_actions(bundle.actions), "Actions"});
  fields.push_back({"{commentary}", bundle.flags.commentary, true,
                    bundle.commentary, "Commentary"});
  fields.push_back({"{previous_ad}", bundle.flags.previous_ad, prev_present,
                    prev_present ? *bundle.previous_ad : std::string(),
                    "Previous AD"});

  for (auto& f : fields) {
    const bool referenced = out.find(f.placeholder) != std::string::npos;
    if (referenced && !f.enabled) {
      throw UsageError(std::string("template references ") + f.placeholder +
                       " but that context field is disabled");
    }
    if (f.enabled && !f.present) {
      throw DataError(std::string("context field ") + f.placeholder +
                      " is enabled but missing from the bundle");
    }
    if (referenced) {
      substitute(out, f.placeholder, f.value);
      f.enabled = false;  // consumed; no trailing section
    }
  }

  for (const auto& f : fields) {
    if (f.enabled && !f.value.empty()) {
      out += "\n";
      out += f.section_label;
      out += ": ";
      out += f.value;
    }
  }
  return out;
}

}  // namespace adeval::prompt
