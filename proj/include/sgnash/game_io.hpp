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

#ifndef SGNASH_GAME_IO_HPP_
#define SGNASH_GAME_IO_HPP_

#include <string>

#include "sgnash/game.hpp"

namespace sgnash {

// Game documents:
//   {"discount": b, "states": n, "actions": [[m1, m2], ...],
//    "successors": [[y, ...], ...],
//    "transitions": [{"x": x, "a1": i, "a2": j, "probs": [[y, p], ...]}, ...],
//    "rewards": [{"x": x, "a1": i, "a2": j, "r": [r1, r2]}, ...]}
// Missing reward entries are zero. Loading validates the game and throws
// kInvalidGame listing every violation.
StochasticGame GameFromJsonText(const std::string& text);
std::string GameToJsonText(const StochasticGame& game);
StochasticGame LoadGame(const std::string& path);
void SaveGame(const StochasticGame& game, const std::string& path);

// Point documents: {"v": [[v1...], [v2...]], "pi": [[[p(x=0)...], ...],
// [[...], ...]]}, i.e. one list of per-state probability vectors per player.
struct PointData {
  ValueVector v;
  JointStrategy pi;
};
PointData PointFromJsonText(const StochasticGame& game, const std::string& text);
std::string PointToJsonText(const ValueVector& v, const JointStrategy& pi);
PointData LoadPoint(const StochasticGame& game, const std::string& path);
void SavePoint(const ValueVector& v, const JointStrategy& pi,
               const std::string& path);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace sgnash

#endif  // SGNASH_GAME_IO_HPP_
