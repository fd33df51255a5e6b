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

#ifndef SGNASH_TERRAIN_HPP_
#define SGNASH_TERRAIN_HPP_

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sgnash/game.hpp"

namespace sgnash {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Two agents on a side x side grid collecting objects at known cells.
struct TerrainSpec {
  int side = 4;
  std::vector<Cell> objects;
  std::vector<Cell> starts;  // Metadata only; the game covers every start.
  double discount = 0.75;
  double collision_penalty = -0.5;
  double object_reward = 1.0;
};

struct TerrainState {
  std::array<Cell, 2> agents{};
  std::uint32_t collected = 0;  // Bit k set once object k is picked up.
  bool terminal = false;
};

struct TerrainGame {
  StochasticGame game;
  std::vector<TerrainState> states;  // Indexed like game states.
  // Action a of player i at state x moves towards action_targets[x][i][a].
  std::vector<std::array<std::vector<Cell>, 2>> action_targets;

  // Index of a non-terminal state, or of the terminal state when
  // state.terminal is set. Returns -1 for infeasible combinations.
  int StateIndex(const TerrainState& state) const;
  int terminal_index() const { return static_cast<int>(states.size()) - 1; }

  int side = 0;
  int num_objects = 0;
  std::vector<int> lookup;  // (mask, agent0 cell, agent1 cell) -> state
};

// Throws kInvalidArgument for empty object lists, duplicated or off-grid
// objects, and grids on which no non-terminal state survives.
void ValidateTerrainSpec(const TerrainSpec& spec);

// Cells within L-infinity distance 1 of pos, in row-major cell order.
std::vector<Cell> NeighbourCells(Cell pos, int side);

// p(y | pos, target) proportional to 2^{-|target - y|_1} over the neighbours
// of pos. Throws kInvalidArgument when target is not a neighbour of pos.
std::vector<std::pair<Cell, double>> AgentTransition(Cell pos, Cell target,
                                                     int side);

// Per-transition rewards when the agents leave `from` and land on `landing`.
std::array<double, 2> TerrainReward(const TerrainSpec& spec,
                                    const TerrainState& from,
                                    const std::array<Cell, 2>& landing);

TerrainGame BuildTerrainGame(const TerrainSpec& spec);

}  // namespace sgnash

#endif  // SGNASH_TERRAIN_HPP_
