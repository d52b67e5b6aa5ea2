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

#include "adeval/store.hpp"

#include <algorithm>
#include <tuple>

#include "adeval/error.hpp"
#include "adeval/io_util.hpp"
#include "adeval/unicode.hpp"

namespace adeval {
namespace {

using io::json;

std::string record_where(const std::filesystem::path& file, std::size_t index) {
  return file.filename().string() + ": record " + std::to_string(index);
}

std::string line_where(const std::filesystem::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

json require_array(const json& doc, const std::filesystem::path& file) {
  if (!doc.is_array()) {
    throw DataError(file.filename().string() + ": expected a JSON array");
  }
  return doc;
}

}  // namespace

Store Store::ingest(const IngestPaths& paths) {
  Store store;

  const json games_doc =
      require_array(io::parse_json_file(paths.games), paths.games);
  std::size_t idx = 0;
  for (const auto& rec : games_doc) {
    ++idx;
    const std::string where = record_where(paths.games, idx);
    if (!rec.is_object()) throw DataError(where + ": expected an object");
    Game g;
    g.game_id = io::require_string(rec, "game_id", where);
    g.season = io::require_string(rec, "season", where);
    g.league = io::require_string(rec, "league", where);
    g.home = uni::nfc(io::require_string(rec, "home", where));
    g.away = uni::nfc(io::require_string(rec, "away", where));
    if (g.game_id.empty()) throw DataError(where + ": empty game_id");
    store.games_.push_back(std::move(g));
  }

  const json roster_doc =
      require_array(io::parse_json_file(paths.rosters), paths.rosters);
  idx = 0;
  for (const auto& rec : roster_doc) {
    ++idx;
    const std::string where = record_where(paths.rosters, idx);
    if (!rec.is_object()) throw DataError(where + ": expected an object");
    Player p;
    p.game_id = io::require_string(rec, "game_id", where);
    const std::string team = io::require_string(rec, "team", where);
    const auto parsed = parse_team(team);
    if (!parsed) {
      throw DataError(where + ": field 'team' must be \"home\" or \"away\", got \"" +
                      team + "\"");
    }
    p.team = *parsed;
    p.jersey = io::require_int(rec, "jersey", where);
    if (p.jersey < 0) {
      throw DataError(where + ": jersey " + std::to_string(p.jersey) +
                      " is negative");
    }
    p.player_name = uni::nfc(io::require_string(rec, "player_name", where));
    if (p.player_name.empty()) throw DataError(where + ": empty player_name");
    store.players_.push_back(std::move(p));
  }

  io::for_each_jsonl(paths.clips, [&](std::size_t line, const json& rec) {
    const std::string where = line_where(paths.clips, line);
    Clip c;
    c.clip_id = io::require_string(rec, "clip_id", where);
    c.game_id = io::require_string(rec, "game_id", where);
    c.start_s = io::require_number(rec, "start_s", where);
    c.end_s = io::require_number(rec, "end_s", where);
    if (c.clip_id.empty()) throw DataError(where + ": empty clip_id");
    if (!(c.end_s > c.start_s)) {
      throw DataError(where + ": clip '" + c.clip_id +
                      "' has end_s <= start_s");
    }
    store.clips_.push_back(std::move(c));
  });

  // An empty context path means the corpus ships no per-clip context.
  if (!paths.context.empty())
  io::for_each_jsonl(paths.context, [&](std::size_t line, const json& rec) {
    const std::string where = line_where(paths.context, line);
    ClipContext ctx;
    ctx.clip_id = io::require_string(rec, "clip_id", where);
    if (rec.contains("commentary")) {
      if (!rec["commentary"].is_string()) {
        throw DataError(where + ": field 'commentary' must be a string");
      }
      ctx.commentary = rec["commentary"].get<std::string>();
    }
    if (rec.contains("players")) {
      if (!rec["players"].is_array()) {
        throw DataError(where + ": field 'players' must be an array");
      }
      for (const auto& p : rec["players"]) {
        if (!p.is_string()) {
          throw DataError(where + ": 'players' entries must be strings");
        }
        ctx.players.push_back(uni::nfc(p.get<std::string>()));
      }
    }
    if (rec.contains("actions")) {
      if (!rec["actions"].is_array()) {
        throw DataError(where + ": field 'actions' must be an array");
      }
      for (const auto& a : rec["actions"]) {
        if (!a.is_object()) {
          throw DataError(where + ": 'actions' entries must be objects");
        }
        ActionEvent ev;
        ev.label = io::require_string(a, "label", where);
        ev.t_s = io::require_number(a, "t_s", where);
        ctx.actions.push_back(std::move(ev));
      }
    }
    if (rec.contains("previous_ad") && !rec["previous_ad"].is_null()) {
      if (!rec["previous_ad"].is_string()) {
        throw DataError(where + ": field 'previous_ad' must be a string");
      }
      ctx.previous_ad = rec["previous_ad"].get<std::string>();
    }
    store.contexts_.push_back(std::move(ctx));
  });

  if (paths.lexicon.empty()) {
    store.lexicon_ = ActionLexicon::default_lexicon();
  } else {
    const json lex_doc =
        require_array(io::parse_json_file(paths.lexicon), paths.lexicon);
    std::map<std::string, std::vector<std::string>> entries;
    idx = 0;
    for (const auto& rec : lex_doc) {
      ++idx;
      const std::string where = record_where(paths.lexicon, idx);
      if (!rec.is_object()) throw DataError(where + ": expected an object");
      const std::string label = io::require_string(rec, "label", where);
      if (!rec.contains("verb_lemmas") || !rec["verb_lemmas"].is_array()) {
        throw DataError(where + ": missing array field 'verb_lemmas'");
      }
      if (entries.count(label)) {
        throw DataError(where + ": duplicate label '" + label + "'");
      }
      std::vector<std::string> lemmas;
      for (const auto& l : rec["verb_lemmas"]) {
        if (!l.is_string()) {
          throw DataError(where + ": 'verb_lemmas' entries must be strings");
        }
        lemmas.push_back(l.get<std::string>());
      }
      entries.emplace(label, std::move(lemmas));
    }
    store.lexicon_ = ActionLexicon(std::move(entries));
  }

  store.index_and_validate();
  return store;
}

void Store::index_and_validate() {
  std::sort(games_.begin(), games_.end(),
            [](const Game& a, const Game& b) { return a.game_id < b.game_id; });
  std::set<std::tuple<std::string, std::string, std::string, std::string>>
      game_keys;
  for (std::size_t i = 0; i < games_.size(); ++i) {
    const Game& g = games_[i];
    if (!game_index_.emplace(g.game_id, i).second) {
      throw DataError("duplicate game_id '" + g.game_id + "'");
    }
    if (!game_keys.emplace(g.season, g.league, g.home, g.away).second) {
      throw DataError("duplicate game key (season, league, home, away) for '" +
                      g.game_id + "'");
    }
  }

  std::sort(players_.begin(), players_.end(),
            [](const Player& a, const Player& b) {
              return std::tie(a.game_id, a.team, a.jersey, a.player_name) <
                     std::tie(b.game_id, b.team, b.jersey, b.player_name);
            });
  std::set<std::tuple<std::string, Team, int>> jersey_keys;
  for (const Player& p : players_) {
    if (!game_index_.count(p.game_id)) {
      throw DataError("roster entry for '" + p.player_name +
                      "' references unknown game_id '" + p.game_id + "'");
    }
    if (!jersey_keys.emplace(p.game_id, p.team, p.jersey).second) {
      throw DataError("duplicate jersey " + std::to_string(p.jersey) +
                      " on team " + team_name(p.team) + " of game '" +
                      p.game_id + "'");
    }
    roster_names_[p.game_id].insert(p.player_name);
  }

  std::sort(clips_.begin(), clips_.end(),
            [](const Clip& a, const Clip& b) { return a.clip_id < b.clip_id; });
  for (std::size_t i = 0; i < clips_.size(); ++i) {
    const Clip& c = clips_[i];
    if (!clip_index_.emplace(c.clip_id, i).second) {
      throw DataError("duplicate clip_id '" + c.clip_id + "'");
    }
    if (!game_index_.count(c.game_id)) {
      throw DataError("clip '" + c.clip_id + "' references unknown game_id '" +
                      c.game_id + "'");
    }
  }

  std::sort(contexts_.begin(), contexts_.end(),
            [](const ClipContext& a, const ClipContext& b) {
              return a.clip_id < b.clip_id;
            });
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    const ClipContext& ctx = contexts_[i];
    if (!context_index_.emplace(ctx.clip_id, i).second) {
      throw DataError("duplicate context for clip '" + ctx.clip_id + "'");
    }
    auto cit = clip_index_.find(ctx.clip_id);
    if (cit == clip_index_.end()) {
      throw DataError("context references unknown clip_id '" + ctx.clip_id +
                      "'");
    }
    const Clip& clip = clips_[cit->second];
    for (const auto& ev : ctx.actions) {
      if (!lexicon_.has_label(ev.label)) {
        throw DataError("context for clip '" + ctx.clip_id +
                        "' uses unknown action label '" + ev.label + "'");
      }
      if (ev.t_s < clip.start_s || ev.t_s > clip.end_s) {
        throw DataError("context for clip '" + ctx.clip_id + "': action '" +
                        ev.label + "' at t_s " + io::format_fixed(ev.t_s, 3) +
                        " lies outside the clip span");
      }
    }
  }
}

namespace {

json snapshot_json(const Store& s) {
  json doc;
  doc["schema_version"] = 1;
  json games = json::array();
  for (const auto& g : s.games()) {
    games.push_back({{"game_id", g.game_id},
                     {"season", g.season},
                     {"league", g.league},
                     {"home", g.home},
                     {"away", g.away}});
  }
  doc["games"] = std::move(games);
  json rosters = json::array();
  for (const auto& p : s.players()) {
    rosters.push_back({{"game_id", p.game_id},
                       {"team", team_name(p.team)},
                       {"jersey", p.jersey},
                       {"player_name", p.player_name}});
  }
  doc["rosters"] = std::move(rosters);
  json clips = json::array();
  for (const auto& c : s.clips()) {
    clips.push_back({{"clip_id", c.clip_id},
                     {"game_id", c.game_id},
                     {"start_s", c.start_s},
                     {"end_s", c.end_s}});
  }
  doc["clips"] = std::move(clips);
  return doc;
}

}  // namespace

std::string Store::snapshot_string() const {
  json doc = snapshot_json(*this);
  json contexts = json::array();
  for (const auto& ctx : contexts_) {
    json rec;
    rec["clip_id"] = ctx.clip_id;
    rec["commentary"] = ctx.commentary;
    rec["players"] = ctx.players;
    json actions = json::array();
    for (const auto& ev : ctx.actions) {
      actions.push_back({{"label", ev.label}, {"t_s", ev.t_s}});
    }
    rec["actions"] = std::move(actions);
    if (ctx.previous_ad) rec["previous_ad"] = *ctx.previous_ad;
    contexts.push_back(std::move(rec));
  }
  doc["contexts"] = std::move(contexts);
  json lex = json::array();
  for (const auto& [label, lemmas] : lexicon_.entries()) {
    lex.push_back({{"label", label}, {"verb_lemmas", lemmas}});
  }
  doc["action_lexicon"] = std::move(lex);
  return doc.dump(2) + "\n";
}

void Store::save_snapshot(const std::filesystem::path& path) const {
  io::write_file(path, snapshot_string());
}

Store Store::from_snapshot(const std::filesystem::path& path) {
  const json doc = io::parse_json_file(path);
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw DataError(path.string() + ": not a store snapshot");
  }
  if (doc["schema_version"] != 1) {
    throw DataError(path.string() + ": unsupported schema_version " +
                    doc["schema_version"].dump());
  }
  const std::string where = path.filename().string();
  Store store;
  for (const auto& rec : doc.value("games", json::array())) {
    Game g;
    g.game_id = io::require_string(rec, "game_id", where);
    g.season = io::require_string(rec, "season", where);
    g.league = io::require_string(rec, "league", where);
    g.home = uni::nfc(io::require_string(rec, "home", where));
    g.away = uni::nfc(io::require_string(rec, "away", where));
    store.games_.push_back(std::move(g));
  }
  for (const auto& rec : doc.value("rosters", json::array())) {
    Player p;
    p.game_id = io::require_string(rec, "game_id", where);
    const auto team = parse_team(io::require_string(rec, "team", where));
    if (!team) throw DataError(where + ": bad team value");
    p.team = *team;
    p.jersey = io::require_int(rec, "jersey", where);
    p.player_name = uni::nfc(io::require_string(rec, "player_name", where));
    store.players_.push_back(std::move(p));
  }
  for (const auto& rec : doc.value("clips", json::array())) {
    Clip c;
    c.clip_id = io::require_string(rec, "clip_id", where);
    c.game_id = io::require_string(rec, "game_id", where);
    c.start_s = io::require_number(rec, "start_s", where);
    c.end_s = io::require_number(rec, "end_s", where);
    store.clips_.push_back(std::move(c));
  }
  for (const auto& rec : doc.value("contexts", json::array())) {
    ClipContext ctx;
    ctx.clip_id = io::require_string(rec, "clip_id", where);
    ctx.commentary = rec.value("commentary", "");
    for (const auto& p : rec.value("players", json::array())) {
      ctx.players.push_back(uni::nfc(p.get<std::string>()));
    }
    for (const auto& a : rec.value("actions", json::array())) {
      ActionEvent ev;
      ev.label = io::require_string(a, "label", where);
      ev.t_s = io::require_number(a, "t_s", where);
      ctx.actions.push_back(std::move(ev));
    }
    if (rec.contains("previous_ad") && !rec["previous_ad"].is_null()) {
      ctx.previous_ad = rec["previous_ad"].get<std::string>();
    }
    store.contexts_.push_back(std::move(ctx));
  }
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& rec : doc.value("action_lexicon", json::array())) {
    const std::string label = io::require_string(rec, "label", where);
    std::vector<std::string> lemmas;
    for (const auto& l : rec.value("verb_lemmas", json::array())) {
      lemmas.push_back(l.get<std::string>());
    }
    entries.emplace(label, std::move(lemmas));
  }
  store.lexicon_ = ActionLexicon(std::move(entries));
  store.index_and_validate();
  return store;
}

std::vector<Game> Store::lookup_game(const GameFilter& filter) const {
  std::vector<Game> out;
  for (const auto& g : games_) {
    if (filter.season && *filter.season != g.season) continue;
    if (filter.league && *filter.league != g.league) continue;
    if (filter.home && uni::nfc(*filter.home) != g.home) continue;
    if (filter.away && uni::nfc(*filter.away) != g.away) continue;
    out.push_back(g);
  }
  return out;
}

const Game* Store::find_game(const std::string& game_id) const {
  auto it = game_index_.find(game_id);
  return it == game_index_.end() ? nullptr : &games_[it->second];
}

const Clip* Store::find_clip(const std::string& clip_id) const {
  auto it = clip_index_.find(clip_id);
  return it == clip_index_.end() ? nullptr : &clips_[it->second];
}

const ClipContext* Store::context_for(const std::string& clip_id) const {
  auto it = context_index_.find(clip_id);
  return it == context_index_.end() ? nullptr : &contexts_[it->second];
}

std::set<std::string> Store::roster_names(const std::string& game_id) const {
  if (!game_index_.count(game_id)) {
    throw DataError("unknown game_id '" + game_id + "'");
  }
  auto it = roster_names_.find(game_id);
  return it == roster_names_.end() ? std::set<std::string>{} : it->second;
}

std::optional<Player> Store::player_by_jersey(const std::string& game_id,
                                              Team team, int jersey) const {
  if (!game_index_.count(game_id)) {
    throw DataError("unknown game_id '" + game_id + "'");
  }
  for (const auto& p : players_) {
    if (p.game_id == game_id && p.team == team && p.jersey == jersey) return p;
  }
  return std::nullopt;
}

StoreCounts Store::counts() const {
  StoreCounts c;
  c.games = games_.size();
  c.players = players_.size();
  c.clips = clips_.size();
  c.contexts = contexts_.size();
  c.labels = lexicon_.size();
  return c;
}

}  // namespace adeval
