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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "adeval/error.hpp"
#include "adeval/prompt.hpp"

using namespace adeval;
using prompt::ContextProfile;
using prompt::Variant;

namespace {

ClipContext sample_context() {
  ClipContext ctx;
  ctx.clip_id = "c1";
  ctx.commentary = "A rasping drive from the edge of the box.";
  ctx.players = {"Wayne Rooney", "Juan Mata"};
  ctx.actions = {{"Shot", 12.5}, {"Save", 13.0}};
  ctx.previous_ad = "Mata slides the ball square.";
  return ctx;
}

}  // namespace

TEST_CASE("plain variant is exactly the base instruction") {
  const auto tmpl = prompt::default_template(Variant::kP1);
  CHECK(tmpl.body == std::string("Give an audio description of the given video."));

  prompt::ContextBundle empty;
  CHECK(prompt::build_prompt(tmpl, empty) == tmpl.body);
}

TEST_CASE("the richer variants extend, not replace, the instruction") {
  const std::string base = prompt::kBaseInstruction;
  const auto p2 = prompt::default_template(Variant::kP2);
  const auto p3 = prompt::default_template(Variant::kP3);

  CHECK(p2.body.rfind(base, 0) == 0);
  CHECK(p3.body.rfind(base, 0) == 0);
  CHECK(p2.body.find("Example:") != std::string::npos);
  CHECK(p3.body.find("pronouns") != std::string::npos);
  CHECK(p2.body != p3.body);
}

TEST_CASE("variant and profile names round-trip through parsing") {
  CHECK(prompt::parse_variant("1") == Variant::kP1);
  CHECK(prompt::parse_variant("2") == Variant::kP2);
  CHECK(prompt::parse_variant("3") == Variant::kP3);
  CHECK_FALSE(prompt::parse_variant("0").has_value());
  CHECK_FALSE(prompt::parse_variant("p4").has_value());

  CHECK(prompt::parse_profile("none") == ContextProfile::kNone);
  CHECK(prompt::parse_profile("pa") == ContextProfile::kPlayersActions);
  CHECK(prompt::parse_profile("pa+c") ==
        ContextProfile::kPlayersActionsCommentary);
  CHECK(prompt::parse_profile("pa+c+prev") == ContextProfile::kFull);
  CHECK_FALSE(prompt::parse_profile("everything").has_value());

  for (auto p : {ContextProfile::kNone, ContextProfile::kPlayersActions,
                 ContextProfile::kPlayersActionsCommentary,
                 ContextProfile::kFull}) {
    CHECK(prompt::parse_profile(prompt::profile_name(p)) == p);
  }
  for (auto v : {Variant::kP1, Variant::kP2, Variant::kP3}) {
    CHECK(prompt::parse_variant(prompt::variant_name(v)) == v);
  }
}

TEST_CASE("profiles gate the context flags cumulatively") {
  auto f = prompt::context_flags_from_profile(ContextProfile::kNone);
  CHECK_FALSE(f.players_actions);
  CHECK_FALSE(f.commentary);
  CHECK_FALSE(f.previous_ad);

  f = prompt::context_flags_from_profile(ContextProfile::kPlayersActions);
  CHECK(f.players_actions);
  CHECK_FALSE(f.commentary);

  f = prompt::context_flags_from_profile(
      ContextProfile::kPlayersActionsCommentary);
  CHECK(f.players_actions);
  CHECK(f.commentary);
  CHECK_FALSE(f.previous_ad);

  f = prompt::context_flags_from_profile(ContextProfile::kFull);
  CHECK(f.players_actions);
  CHECK(f.commentary);
  CHECK(f.previous_ad);
}

TEST_CASE("sections appear in order and only when enabled and non-empty") {
  const auto tmpl = prompt::default_template(Variant::kP1);
  const auto ctx = sample_context();

  const auto full =
      prompt::build_prompt(tmpl, prompt::make_bundle(ContextProfile::kFull, ctx));
  const auto p_players = full.find("Players:");
  const auto p_actions = full.find("Actions:");
  const auto p_comm = full.find("Commentary:");
  const auto p_prev = full.find("Previous AD:");
  REQUIRE(p_players != std::string::npos);
  REQUIRE(p_actions != std::string::npos);
  REQUIRE(p_comm != std::string::npos);
  REQUIRE(p_prev != std::string::npos);
  CHECK(p_players < p_actions);
  CHECK(p_actions < p_comm);
  CHECK(p_comm < p_prev);
  CHECK(full.find("Wayne Rooney") != std::string::npos);
  CHECK(full.find("Shot@12.5") != std::string::npos);
  CHECK(full.find("Save@13.0") != std::string::npos);
  CHECK(full.find("rasping drive") != std::string::npos);
  CHECK(full.find("Mata slides") != std::string::npos);

  const auto pa = prompt::build_prompt(
      tmpl, prompt::make_bundle(ContextProfile::kPlayersActions, ctx));
  CHECK(pa.find("Players:") != std::string::npos);
  CHECK(pa.find("Commentary:") == std::string::npos);
  CHECK(pa.find("Previous AD:") == std::string::npos);

  const auto none = prompt::build_prompt(
      tmpl, prompt::make_bundle(ContextProfile::kNone, ctx));
  CHECK(none == tmpl.body);

  // Enabled but empty fields leave no trace.
  ClipContext sparse;
  sparse.clip_id = "c2";
  const auto sparse_prompt = prompt::build_prompt(
      tmpl, prompt::make_bundle(ContextProfile::kPlayersActionsCommentary,
                                sparse));
  CHECK(sparse_prompt == tmpl.body);
}

TEST_CASE("placeholders consume their section") {
  prompt::PromptTemplate tmpl;
  tmpl.variant = Variant::kP1;
  tmpl.body = "Describe what {players} do.";

  const auto bundle =
      prompt::make_bundle(ContextProfile::kPlayersActions, sample_context());
  const auto text = prompt::build_prompt(tmpl, bundle);
  CHECK(text.find("Describe what Wayne Rooney") == 0);
  // Consumed by the placeholder: no appended Players section.
  CHECK(text.find("Players:") == std::string::npos);
  // Actions were not referenced, so their section still appends.
  CHECK(text.find("Actions:") != std::string::npos);
}

TEST_CASE("referencing a disabled field is a usage error") {
  prompt::PromptTemplate tmpl;
  tmpl.variant = Variant::kP1;
  tmpl.body = "Use {commentary} wisely.";

  const auto bundle =
      prompt::make_bundle(ContextProfile::kPlayersActions, sample_context());
  CHECK_THROWS_AS(prompt::build_prompt(tmpl, bundle), UsageError);
}

TEST_CASE("an enabled previous AD must exist") {
  ClipContext ctx = sample_context();
  ctx.previous_ad.reset();
  const auto tmpl = prompt::default_template(Variant::kP1);

  const auto full = prompt::make_bundle(ContextProfile::kFull, ctx);
  CHECK_THROWS_AS(prompt::build_prompt(tmpl, full), DataError);

  // Profiles that do not use it do not mind.
  const auto pac =
      prompt::make_bundle(ContextProfile::kPlayersActionsCommentary, ctx);
  CHECK_NOTHROW(prompt::build_prompt(tmpl, pac));
}

TEST_CASE("prompts are injective over the enabled context") {
  const auto tmpl = prompt::default_template(Variant::kP3);
  std::set<std::string> seen;

  for (const char* commentary :
       {"", "One touch.", "One touch!", "Two touches."}) {
    for (const char* player : {"Wayne Rooney", "Juan Mata"}) {
      ClipContext ctx;
      ctx.clip_id = "c1";
      ctx.commentary = commentary;
      ctx.players = {player};
      ctx.previous_ad = "Before.";
      const auto bundle =
          prompt::make_bundle(ContextProfile::kFull, ctx);
      seen.insert(prompt::build_prompt(tmpl, bundle));
    }
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("every variant-profile combination builds a distinct prompt") {
  const auto ctx = sample_context();
  std::set<std::string> seen;
  for (auto v : {Variant::kP1, Variant::kP2, Variant::kP3}) {
    for (auto p : {ContextProfile::kNone, ContextProfile::kPlayersActions,
                   ContextProfile::kPlayersActionsCommentary,
                   ContextProfile::kFull}) {
      seen.insert(
          prompt::build_prompt(prompt::default_template(v),
                               prompt::make_bundle(p, ctx)));
    }
  }
  CHECK(seen.size() == 12);
}

TEST_CASE("load_template_file strips one trailing newline") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "adeval_prompt_tmpl";
  fs::create_directories(dir);

  const fs::path file = dir / "body.txt";
  {
    std::ofstream out(file);
    out << "Custom instruction with {players}.\n";
  }
  const auto tmpl = prompt::load_template_file(file, Variant::kP2);
  CHECK(tmpl.body == "Custom instruction with {players}.");
  CHECK(tmpl.variant == Variant::kP2);

  const fs::path inner = dir / "inner.txt";
  {
    std::ofstream out(inner);
    out << "Line one.\nLine two.\n";
  }
  CHECK(prompt::load_template_file(inner, Variant::kP1).body ==
        "Line one.\nLine two.");

  CHECK_THROWS_AS(prompt::load_template_file(dir / "absent.txt", Variant::kP1),
                  DataError);
  fs::remove_all(dir);
}
