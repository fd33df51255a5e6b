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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgnash/sgnash.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError {
  std::string what;
};

struct DomainError {
  std::string what;
};

std::string Describe(sgn_status status, const std::string& context) {
  return context + ": " + sgn_status_name(status) + ": " + sgn_last_error();
}

// Library failures while running a command are domain errors.
void Check(sgn_status status, const std::string& context) {
  if (status != SGN_OK) throw DomainError{Describe(status, context)};
}

// RAII owners for the C handles.
template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr_); }
  T** out() {
    Free(ptr_);
    ptr_ = nullptr;
    return &ptr_;
  }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Game = Handle<sgn_game, sgn_game_free>;
using Point = Handle<sgn_point, sgn_point_free>;
using Report = Handle<sgn_report, sgn_report_free>;

std::vector<int> ParseCells(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  static const std::regex cell(R"(\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*)");
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const std::string item = text.substr(start, end - start);
    std::smatch m;
    if (!std::regex_match(item, m, cell)) {
      throw UsageError{"cannot parse cell '" + item + "', expected (x,y)"};
    }
    out.push_back(std::stoi(m[1]));
    out.push_back(std::stoi(m[2]));
    start = end + 1;
  }
  return out;
}

struct Globals {
  int seed = 0;
  bool quiet = false;
  std::string out;
};

void Info(const Globals& g, const char* fmt, auto... args) {
  if (g.quiet) return;
  std::printf(fmt, args...);
}

int RunGenTerrain(const Globals& g, int side, const std::string& objects,
                  const std::string& starts, double discount, double collision,
                  double object_reward) {
  if (g.out.empty()) throw UsageError{"gen-terrain requires --out"};
  if (side < 1) throw UsageError{"--side must be positive"};
  const std::vector<int> obj = ParseCells(objects);
  const std::vector<int> st = ParseCells(starts);
  sgn_terrain_spec spec;
  sgn_terrain_spec_default(&spec);
  spec.side = side;
  spec.num_objects = static_cast<int>(obj.size() / 2);
  spec.objects = obj.data();
  spec.num_starts = static_cast<int>(st.size() / 2);
  spec.starts = st.data();
  spec.discount = discount;
  spec.collision_penalty = collision;
  spec.object_reward = object_reward;
  Game game;
  Check(sgn_terrain_build(&spec, game.out()), "gen-terrain");
  Check(sgn_game_save(game.get(), g.out.c_str()), "write game");
  Info(g, "wrote %s (%d states)\n", g.out.c_str(), sgn_game_num_states(game.get()));
  return kExitOk;
}

int RunCensus(const Globals& g, const std::string& game_path) {
  Game game;
  Check(sgn_game_load(game_path.c_str(), game.out()), "load game");
  sgn_census c;
  Check(sgn_game_census(game.get(), &c), "census");
  std::printf("states %d\n", c.num_states);
  std::printf("actions %d %d\n", c.total_actions[0], c.total_actions[1]);
  std::printf("variables %lld\n", c.full_variables);
  std::printf("constraints %lld\n", c.full_constraints);
  std::printf("packed_variables %lld\n", c.packed_variables);
  std::printf("packed_constraints %lld\n", c.packed_constraints);
  (void)g;
  return kExitOk;
}

void Progress(int iter, double f, double norm_s, double step, void* user) {
  const auto* g = static_cast<const Globals*>(user);
  if (g->quiet || iter % 10 != 0) return;
  std::fprintf(stderr, "iter %6d  f %.6e  |S| %.3e  t %.3e\n", iter, f, norm_s, step);
}

int RunSolve(Globals& g, const std::string& game_path, sgn_solver_config config,
             std::optional<double> discount) {
  const sgn_status valid = sgn_solver_config_validate(&config);
  if (valid != SGN_OK) throw UsageError{Describe(valid, "solver options")};
  if (discount && !(*discount >= 0.0 && *discount < 1.0)) {
    throw UsageError{"--discount must lie in [0, 1)"};
  }
  Game game;
  Check(sgn_game_load(game_path.c_str(), game.out()), "load game");
  Game changed;
  const sgn_game* target = game.get();
  if (discount) {
    Check(sgn_game_with_discount(game.get(), *discount, changed.out()), "discount");
    target = changed.get();
  }
  const std::filesystem::path dir = g.out.empty() ? "." : g.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DomainError{"cannot create output directory " + dir.string()};

  Report report;
  Check(sgn_solve(target, &config, Progress, &g, report.out()), "solve");
  Check(sgn_report_write_point(report.get(), (dir / "point.json").c_str()), "write point");
  Check(sgn_report_write_json(report.get(), (dir / "report.json").c_str()), "write report");
  Check(sgn_report_write_trace(report.get(), (dir / "trace.csv").c_str()), "write trace");
  sgn_report_summary s;
  Check(sgn_report_summary_get(report.get(), &s), "summary");
  Info(g, "stop %s after %d iterations (%.1f s)\n", s.stop_reason, s.iterations, s.seconds);
  Info(g, "f %.6e (initial %.6e)\n", s.f, s.initial_f);
  Info(g, "epsilon %.6e  eps_emp %.6e  %s\n", s.epsilon, s.eps_emp,
       s.certified ? "certified" : "NOT certified");
  return kExitOk;
}

int RunVerify(const Globals& g, const std::string& game_path, const std::string& point_path,
              double act_tol) {
  Game game;
  Check(sgn_game_load(game_path.c_str(), game.out()), "load game");
  Point point;
  Check(sgn_point_load(game.get(), point_path.c_str(), point.out()), "load point");
  if (!(act_tol >= 0.0)) throw UsageError{"--act-tol must be non-negative"};
  sgn_verify_result r;
  Check(sgn_verify(game.get(), point.get(), act_tol, &r), "verify");
  std::printf("kkt stationarity %.3e complementarity %.3e primal %.3e dual %.3e active %d\n",
              r.stationarity, r.complementarity, r.primal, r.dual, r.num_active);
  std::printf("kktn %s rank %d inactive %d min_singular %.3e lambda_prime_inactive %.3e\n",
              r.kktn_verdict, r.kktn_rank, r.num_inactive, r.kktn_min_singular,
              r.lambda_prime_inactive);
  std::printf("f %.6e bound %.6e eps_emp %.6e\n", r.f, r.bound, r.eps_emp);
  std::printf("%s\n", r.certified ? "pass" : "fail");
  (void)g;
  return r.certified ? kExitOk : kExitDomain;
}

int RunEval(const Globals& g, const std::string& game_path, const std::string& point_path) {
  Game game;
  Check(sgn_game_load(game_path.c_str(), game.out()), "load game");
  Point point;
  Check(sgn_point_load(game.get(), point_path.c_str(), point.out()), "load point");
  Point value;
  Check(sgn_point_strategy_value(game.get(), point.get(), value.out()), "strategy value");
  sgn_eval_result given, induced;
  Check(sgn_eval(game.get(), point.get(), &given), "eval");
  Check(sgn_eval(game.get(), value.get(), &induced), "eval");
  const int n = sgn_game_num_states(game.get());
  std::vector<double> v(n);
  for (int player = 0; player < 2; ++player) {
    Check(sgn_point_values(value.get(), player, v.data(), n), "values");
    std::printf("v%d", player + 1);
    for (double x : v) std::printf(" %.10g", x);
    std::printf("\n");
  }
  std::printf("f(point) %.6e max_g(point) %.6e\n", given.f, given.max_g);
  std::printf("f(strategy value) %.6e max_g(strategy value) %.6e\n", induced.f, induced.max_g);
  if (!g.out.empty()) {
    Check(sgn_point_save(value.get(), g.out.c_str()), "write point");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash equilibria of two-player discounted stochastic games"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized runs (the pipeline is deterministic)");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.add_option("--out", g.out, "Output file (gen-terrain, eval) or directory (solve)");

  auto* gen = app.add_subcommand("gen-terrain", "Write a terrain exploration game");
  int side = 4;
  std::string objects = "(0,3);(3,3)";
  std::string starts;
  sgn_terrain_spec tdef;
  sgn_terrain_spec_default(&tdef);
  double tdiscount = tdef.discount;
  double collision = tdef.collision_penalty;
  double object_reward = tdef.object_reward;
  gen->add_option("--side", side, "Grid side length")->capture_default_str();
  gen->add_option("--objects", objects, "Object cells as \"(x,y);(x,y)\"")->capture_default_str();
  gen->add_option("--starts", starts, "Start cells (metadata only)");
  gen->add_option("--discount", tdiscount, "Discount factor")->capture_default_str();
  gen->add_option("--collision", collision, "Collision penalty")->capture_default_str();
  gen->add_option("--object-reward", object_reward, "Object reward")->capture_default_str();

  auto* census = app.add_subcommand("census", "Print problem dimensions");
  std::string game_path;
  census->add_option("game", game_path, "Game file")->required();

  auto* solve = app.add_subcommand("solve", "Solve a game; writes point.json, report.json, trace.csv");
  solve->add_option("game", game_path, "Game file")->required();
  sgn_solver_config config;
  sgn_solver_config_default(&config);
  std::optional<double> discount;
  solve->add_option("--discount", discount, "Override the game's discount factor");
  solve->add_option("--init-slack", config.init_slack, "Initial constraint slack")
      ->capture_default_str();
  solve->add_option("--alpha,--ts-alpha", config.ts_alpha, "Stage-two deflection alpha")
      ->capture_default_str();
  solve->add_option("--rho0", config.rho0, "Deflection rho0")->capture_default_str();
  solve->add_option("--w", config.w, "Constraint weight (uniform)")->capture_default_str();
  solve->add_option("--delta0", config.delta0, "Step-length safety delta0")->capture_default_str();
  solve->add_option("--eta", config.eta, "Armijo eta")->capture_default_str();
  solve->add_option("--nu", config.nu, "Backtracking factor nu")->capture_default_str();
  solve->add_option("--t-cap", config.t_cap, "Largest step")->capture_default_str();
  solve->add_option("--t-min", config.t_min, "Smallest step")->capture_default_str();
  solve->add_option("--tol-s", config.tol_s, "Direction tolerance")->capture_default_str();
  solve->add_option("--tol-f", config.tol_f, "Objective tolerance")->capture_default_str();
  solve->add_option("--max-iters", config.max_iters, "Iteration limit")->capture_default_str();
  solve->add_option("--max-seconds", config.max_seconds, "Wall-clock limit, 0 for none")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check optimality conditions and certify a point");
  std::string point_path;
  double act_tol = 1e-6;
  verify->add_option("game", game_path, "Game file")->required();
  verify->add_option("point", point_path, "Point file")->required();
  verify->add_option("--act-tol", act_tol, "Active-set tolerance")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Values induced by a point's strategy");
  eval->add_option("game", game_path, "Game file")->required();
  eval->add_option("point", point_path, "Point file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      return RunGenTerrain(g, side, objects, starts, tdiscount, collision, object_reward);
    }
    if (*census) return RunCensus(g, game_path);
    if (*solve) return RunSolve(g, game_path, config, discount);
    if (*verify) return RunVerify(g, game_path, point_path, act_tol);
    if (*eval) return RunEval(g, game_path, point_path);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what.c_str());
    return kExitUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what.c_str());
    return kExitDomain;
  }
  return kExitUsage;
}
