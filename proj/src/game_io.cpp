// Copyright 2026 The sgnash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgnash/game_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sgnash/error.hpp"

namespace sgnash {
namespace {

using json = nlohmann::json;

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T Get(const json& j, const char* key) {
  Require(j.is_object() && j.contains(key), ErrorCode::kInvalidArgument,
          std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

StochasticGame GameFromJsonText(const std::string& text) {
  const json doc = Parse(text);
  const double discount = Get<double>(doc, "discount");
  const int states = Get<int>(doc, "states");
  Require(states >= 1, ErrorCode::kInvalidGame, "game needs at least one state");
  const auto actions = Get<std::vector<std::array<int, 2>>>(doc, "actions");
  Require(static_cast<int>(actions.size()) == states, ErrorCode::kInvalidGame,
          "'actions' must list one [m1, m2] pair per state");
  for (const auto& m : actions) {
    Require(m[0] >= 1 && m[1] >= 1, ErrorCode::kInvalidGame,
            "every state needs at least one action per player");
  }
  GameBuilder builder(discount, actions);
  if (doc.contains("successors")) {
    const auto succ = Get<std::vector<std::vector<int>>>(doc, "successors");
    Require(static_cast<int>(succ.size()) == states, ErrorCode::kInvalidGame,
            "'successors' must list one set per state");
    for (int x = 0; x < states; ++x) builder.SetSuccessors(x, succ[x]);
  }
  for (const json& t : Get<json>(doc, "transitions")) {
    std::vector<Transition> probs;
    for (const auto& pair : Get<std::vector<std::pair<int, double>>>(t, "probs")) {
      probs.push_back({pair.first, pair.second});
    }
    builder.SetTransition(Get<int>(t, "x"), Get<int>(t, "a1"), Get<int>(t, "a2"),
                          std::move(probs));
  }
  if (doc.contains("rewards")) {
    for (const json& r : Get<json>(doc, "rewards")) {
      const auto pair = Get<std::array<double, 2>>(r, "r");
      builder.SetReward(Get<int>(r, "x"), Get<int>(r, "a1"), Get<int>(r, "a2"),
                        pair[0], pair[1]);
    }
  }
  StochasticGame game = std::move(builder).Build();
  const auto violations = ValidateGame(game);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid game (" << violations.size() << " violations)";
    for (std::size_t k = 0; k < violations.size() && k < 20; ++k) {
      os << "\n  " << violations[k];
    }
    Fail(ErrorCode::kInvalidGame, os.str());
  }
  return game;
}

std::string GameToJsonText(const StochasticGame& game) {
  json doc;
  doc["discount"] = game.discount();
  doc["states"] = game.num_states();
  json actions = json::array();
  json successors = json::array();
  json transitions = json::array();
  json rewards = json::array();
  for (int x = 0; x < game.num_states(); ++x) {
    actions.push_back({game.num_actions(0, x), game.num_actions(1, x)});
    const auto succ = game.successors(x);
    successors.push_back(std::vector<int>(succ.begin(), succ.end()));
    for (int a1 = 0; a1 < game.num_actions(0, x); ++a1) {
      for (int a2 = 0; a2 < game.num_actions(1, x); ++a2) {
        json probs = json::array();
        for (const Transition& t : game.transitions(x, a1, a2)) {
          probs.push_back({t.next, t.prob});
        }
        transitions.push_back({{"x", x}, {"a1", a1}, {"a2", a2}, {"probs", probs}});
        const double r1 = game.reward(0, x, a1, a2);
        const double r2 = game.reward(1, x, a1, a2);
        if (r1 != 0.0 || r2 != 0.0) {
          rewards.push_back({{"x", x}, {"a1", a1}, {"a2", a2}, {"r", {r1, r2}}});
        }
      }
    }
  }
  doc["actions"] = std::move(actions);
  doc["successors"] = std::move(successors);
  doc["transitions"] = std::move(transitions);
  doc["rewards"] = std::move(rewards);
  return doc.dump();
}

StochasticGame LoadGame(const std::string& path) {
  return GameFromJsonText(ReadTextFile(path));
}

void SaveGame(const StochasticGame& game, const std::string& path) {
  WriteTextFile(path, GameToJsonText(game));
}

PointData PointFromJsonText(const StochasticGame& game, const std::string& text) {
  const json doc = Parse(text);
  const auto v = Get<std::vector<std::vector<double>>>(doc, "v");
  const auto pi = Get<std::vector<std::vector<std::vector<double>>>>(doc, "pi");
  Require(v.size() == 2 && pi.size() == 2, ErrorCode::kDimensionMismatch,
          "point needs two value vectors and two strategies");
  PointData out{{}, JointStrategy(game)};
  for (int i = 0; i < kNumPlayers; ++i) {
    Require(static_cast<int>(v[i].size()) == game.num_states(),
            ErrorCode::kDimensionMismatch, "value vector length mismatch");
    out.v[i] = Eigen::Map<const Eigen::VectorXd>(v[i].data(),
                                                 static_cast<Eigen::Index>(v[i].size()));
    Require(static_cast<int>(pi[i].size()) == game.num_states(),
            ErrorCode::kDimensionMismatch, "strategy state count mismatch");
    for (int x = 0; x < game.num_states(); ++x) {
      auto row = out.pi.at(i, x);
      Require(pi[i][x].size() == row.size(), ErrorCode::kDimensionMismatch,
              "strategy action count mismatch at state " + std::to_string(x));
      std::copy(pi[i][x].begin(), pi[i][x].end(), row.begin());
    }
  }
  return out;
}

std::string PointToJsonText(const ValueVector& v, const JointStrategy& pi) {
  json doc;
  json values = json::array();
  json strategies = json::array();
  for (int i = 0; i < kNumPlayers; ++i) {
    values.push_back(std::vector<double>(v[i].data(), v[i].data() + v[i].size()));
    json per_state = json::array();
    for (int x = 0; x < pi.num_states(); ++x) {
      const auto row = pi.at(i, x);
      per_state.push_back(std::vector<double>(row.begin(), row.end()));
    }
    strategies.push_back(std::move(per_state));
  }
  doc["v"] = std::move(values);
  doc["pi"] = std::move(strategies);
  return doc.dump();
}

PointData LoadPoint(const StochasticGame& game, const std::string& path) {
  return PointFromJsonText(game, ReadTextFile(path));
}

void SavePoint(const ValueVector& v, const JointStrategy& pi,
               const std::string& path) {
  WriteTextFile(path, PointToJsonText(v, pi));
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  out << text;
  Require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

}  // namespace sgnash
