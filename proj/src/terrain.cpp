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

#include "sgnash/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "sgnash/error.hpp"

namespace sgnash {
namespace {

constexpr int kMaxObjects = 16;

int CellIndex(Cell c, int side) { return c.x * side + c.y; }

bool InGrid(Cell c, int side) {
  return c.x >= 0 && c.x < side && c.y >= 0 && c.y < side;
}

// Object index at c, or -1.
int ObjectAt(const TerrainSpec& spec, Cell c) {
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    if (spec.objects[k] == c) return static_cast<int>(k);
  }
  return -1;
}

bool OnUncollected(const TerrainSpec& spec, Cell c, std::uint32_t mask) {
  const int k = ObjectAt(spec, c);
  return k >= 0 && !(mask & (1u << k));
}

}  // namespace

int TerrainGame::StateIndex(const TerrainState& state) const {
  if (state.terminal) return terminal_index();
  const int cells = side * side;
  if (!InGrid(state.agents[0], side) || !InGrid(state.agents[1], side) ||
      state.collected >= (1u << num_objects)) {
    return -1;
  }
  const std::size_t key =
      (static_cast<std::size_t>(state.collected) * cells +
       CellIndex(state.agents[0], side)) * cells +
      CellIndex(state.agents[1], side);
  return lookup[key];
}

void ValidateTerrainSpec(const TerrainSpec& spec) {
  Require(spec.side >= 1, ErrorCode::kInvalidArgument, "grid side must be positive");
  Require(!spec.objects.empty(), ErrorCode::kInvalidArgument,
          "terrain needs at least one object");
  Require(static_cast<int>(spec.objects.size()) <= kMaxObjects,
          ErrorCode::kInvalidArgument, "too many objects");
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    Require(InGrid(spec.objects[k], spec.side), ErrorCode::kInvalidArgument,
            "object " + std::to_string(k) + " lies outside the grid");
    for (std::size_t l = 0; l < k; ++l) {
      Require(!(spec.objects[k] == spec.objects[l]), ErrorCode::kInvalidArgument,
              "objects " + std::to_string(l) + " and " + std::to_string(k) +
                  " share a cell");
    }
  }
  Require(spec.discount > 0.0 && spec.discount < 1.0, ErrorCode::kInvalidArgument,
          "discount must lie inside (0, 1)");
  // Every cell hosting an uncollected object is excluded, so with no free
  // cell there is no non-terminal state at all.
  const int free_cells = spec.side * spec.side - static_cast<int>(spec.objects.size());
  Require(free_cells >= 1, ErrorCode::kInvalidArgument,
          "grid has no cell free of objects; the game would be terminal only");
}

std::vector<Cell> NeighbourCells(Cell pos, int side) {
  std::vector<Cell> out;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      const Cell c{pos.x + dx, pos.y + dy};
      if (InGrid(c, side)) out.push_back(c);
    }
  }
  return out;
}

std::vector<std::pair<Cell, double>> AgentTransition(Cell pos, Cell target,
                                                     int side) {
  Require(InGrid(pos, side) && InGrid(target, side) &&
              std::max(std::abs(pos.x - target.x), std::abs(pos.y - target.y)) <= 1,
          ErrorCode::kInvalidArgument, "move target is not adjacent to the agent");
  std::vector<std::pair<Cell, double>> out;
  double total = 0.0;
  for (const Cell& y : NeighbourCells(pos, side)) {
    const int d1 = std::abs(target.x - y.x) + std::abs(target.y - y.y);
    const double w = std::ldexp(1.0, -d1);
    out.emplace_back(y, w);
    total += w;
  }
  for (auto& [cell, w] : out) w /= total;
  return out;
}

std::array<double, 2> TerrainReward(const TerrainSpec& spec,
                                    const TerrainState& from,
                                    const std::array<Cell, 2>& landing) {
  std::uint32_t after = from.collected;
  for (const Cell& c : landing) {
    const int k = ObjectAt(spec, c);
    if (k >= 0) after |= 1u << k;
  }
  const std::uint32_t all = (1u << spec.objects.size()) - 1u;
  std::array<double, 2> r{0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    if (landing[0] == landing[1] && after != all) r[i] += spec.collision_penalty;
    if (OnUncollected(spec, landing[i], from.collected)) r[i] += spec.object_reward;
  }
  return r;
}

TerrainGame BuildTerrainGame(const TerrainSpec& spec) {
  ValidateTerrainSpec(spec);
  const int side = spec.side;
  const int cells = side * side;
  const int num_objects = static_cast<int>(spec.objects.size());
  const std::uint32_t all = (1u << num_objects) - 1u;

  TerrainGame out;
  out.side = side;
  out.num_objects = num_objects;
  out.lookup.assign(static_cast<std::size_t>(all + 1) * cells * cells, -1);
  for (std::uint32_t mask = 0; mask < all; ++mask) {
    for (int c0 = 0; c0 < cells; ++c0) {
      for (int c1 = 0; c1 < cells; ++c1) {
        const Cell p0{c0 / side, c0 % side};
        const Cell p1{c1 / side, c1 % side};
        if (OnUncollected(spec, p0, mask) || OnUncollected(spec, p1, mask)) continue;
        out.lookup[(static_cast<std::size_t>(mask) * cells + c0) * cells + c1] =
            static_cast<int>(out.states.size());
        out.states.push_back({{p0, p1}, mask, false});
      }
    }
  }
  TerrainState terminal;
  terminal.collected = all;
  terminal.terminal = true;
  out.states.push_back(terminal);
  const int num_states = static_cast<int>(out.states.size());
  const int t_index = num_states - 1;

  std::vector<std::array<int, 2>> actions(num_states);
  out.action_targets.resize(num_states);
  for (int x = 0; x < t_index; ++x) {
    for (int i = 0; i < 2; ++i) {
      out.action_targets[x][i] = NeighbourCells(out.states[x].agents[i], side);
      actions[x][i] = static_cast<int>(out.action_targets[x][i].size());
    }
  }
  // The terminal state offers a single stay action to each agent.
  actions[t_index] = {1, 1};
  out.action_targets[t_index] = {{std::vector<Cell>{Cell{}}, std::vector<Cell>{Cell{}}}};

  GameBuilder builder(spec.discount, actions);
  for (int x = 0; x < t_index; ++x) {
    const TerrainState& s = out.states[x];
    const auto& targets0 = out.action_targets[x][0];
    const auto& targets1 = out.action_targets[x][1];
    for (int a1 = 0; a1 < actions[x][0]; ++a1) {
      const auto move0 = AgentTransition(s.agents[0], targets0[a1], side);
      for (int a2 = 0; a2 < actions[x][1]; ++a2) {
        const auto move1 = AgentTransition(s.agents[1], targets1[a2], side);
        std::vector<Transition> probs;
        double r0 = 0.0;
        double r1 = 0.0;
        for (const auto& [y0, q0] : move0) {
          for (const auto& [y1, q1] : move1) {
            const double q = q0 * q1;
            TerrainState next{{y0, y1}, s.collected, false};
            for (const Cell& c : next.agents) {
              const int k = ObjectAt(spec, c);
              if (k >= 0) next.collected |= 1u << k;
            }
            next.terminal = next.collected == all;
            const int y = out.StateIndex(next);
            Require(y >= 0, ErrorCode::kInternal, "terrain successor not enumerated");
            probs.push_back({y, q});
            const auto r = TerrainReward(spec, s, {y0, y1});
            r0 += q * r[0];
            r1 += q * r[1];
          }
        }
        builder.SetTransition(x, a1, a2, std::move(probs));
        builder.SetReward(x, a1, a2, r0, r1);
      }
    }
  }
  builder.SetTransition(t_index, 0, 0, {{t_index, 1.0}});
  out.game = std::move(builder).Build();
  return out;
}

}  // namespace sgnash
