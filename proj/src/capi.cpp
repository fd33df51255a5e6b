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

#include "sgnash/sgnash.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "sgnash/diagnostics.hpp"
#include "sgnash/error.hpp"
#include "sgnash/feasible_init.hpp"
#include "sgnash/game.hpp"
#include "sgnash/game_io.hpp"
#include "sgnash/nlp.hpp"
#include "sgnash/solver.hpp"
#include "sgnash/terrain.hpp"

struct sgn_game {
  sgnash::StochasticGame game;
};

struct sgn_point {
  sgnash::PointData data;
};

struct sgn_report {
  sgnash::SolveReport report;
  sgnash::EpsCertificate certificate;
  sgnash::KktReport kkt;
};

namespace {

thread_local std::string g_last_error;

sgn_status ToStatus(sgnash::ErrorCode code) {
  switch (code) {
    case sgnash::ErrorCode::kInvalidArgument: return SGN_ERR_INVALID_ARGUMENT;
    case sgnash::ErrorCode::kInvalidGame: return SGN_ERR_INVALID_GAME;
    case sgnash::ErrorCode::kDimensionMismatch: return SGN_ERR_DIMENSION;
    case sgnash::ErrorCode::kIo: return SGN_ERR_IO;
    case sgnash::ErrorCode::kNumeric: return SGN_ERR_NUMERIC;
    case sgnash::ErrorCode::kInfeasible: return SGN_ERR_INFEASIBLE;
    case sgnash::ErrorCode::kInternal: return SGN_ERR_INTERNAL;
  }
  return SGN_ERR_INTERNAL;
}

template <typename F>
sgn_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SGN_OK;
  } catch (const sgnash::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SGN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SGN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SGN_ERR_INTERNAL;
  }
}

void RequireArg(const void* p, const char* name) {
  sgnash::Require(p != nullptr, sgnash::ErrorCode::kInvalidArgument,
                  std::string("null argument: ") + name);
}

std::vector<sgnash::Cell> Cells(const int* xy, int count, const char* name) {
  sgnash::Require(count >= 0, sgnash::ErrorCode::kInvalidArgument,
                  std::string("negative count: ") + name);
  if (count > 0) RequireArg(xy, name);
  std::vector<sgnash::Cell> out;
  for (int k = 0; k < count; ++k) out.push_back({xy[2 * k], xy[2 * k + 1]});
  return out;
}

sgnash::SolverConfig ToConfig(const sgn_solver_config& c) {
  sgnash::SolverConfig out;
  out.init_slack = c.init_slack;
  out.ts_alpha = c.ts_alpha;
  out.rho0 = c.rho0;
  out.delta0 = c.delta0;
  out.eta = c.eta;
  out.nu = c.nu;
  out.t_cap = c.t_cap;
  out.t_min = c.t_min;
  out.tol_s = c.tol_s;
  out.tol_f = c.tol_f;
  out.max_iters = c.max_iters;
  out.max_seconds = c.max_seconds;
  sgnash::Require(c.w > 0.0 && std::isfinite(c.w), sgnash::ErrorCode::kInvalidArgument,
                  "solver option out of range: w");
  return out;
}

nlohmann::json ReportJson(const sgn_report& r) {
  const sgnash::SolveReport& s = r.report;
  nlohmann::json j;
  j["stop_reason"] = sgnash::StopReasonName(s.stop);
  if (!s.message.empty()) j["message"] = s.message;
  j["iterations"] = s.iterations;
  j["f"] = s.f;
  j["initial_f"] = s.initial_f;
  j["epsilon"] = s.epsilon;
  j["seconds"] = s.seconds;
  j["fallback_steps"] = s.fallback_steps;
  j["discriminant_violations"] = s.discriminant_violations;
  j["certificate"] = {{"eps_emp", r.certificate.eps_emp},
                      {"eps_player", {r.certificate.per_player[0], r.certificate.per_player[1]}},
                      {"bound", r.certificate.bound},
                      {"passed", r.certificate.passed}};
  j["kkt"] = {{"stationarity", r.kkt.stationarity},
              {"complementarity", r.kkt.complementarity},
              {"primal", r.kkt.primal},
              {"dual", r.kkt.dual},
              {"active", r.kkt.active.size()}};
  return j;
}

}  // namespace

extern "C" {

const char* sgn_last_error(void) { return g_last_error.c_str(); }

const char* sgn_status_name(sgn_status status) {
  switch (status) {
    case SGN_OK: return "ok";
    case SGN_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case SGN_ERR_INVALID_GAME: return "invalid-game";
    case SGN_ERR_DIMENSION: return "dimension-mismatch";
    case SGN_ERR_IO: return "io";
    case SGN_ERR_NUMERIC: return "numeric";
    case SGN_ERR_INFEASIBLE: return "infeasible";
    case SGN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

sgn_status sgn_game_load(const char* path, sgn_game** out) {
  return Guard([&] {
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = nullptr;
    auto g = std::make_unique<sgn_game>();
    g->game = sgnash::LoadGame(path);
    *out = g.release();
  });
}

sgn_status sgn_game_from_json(const char* text, sgn_game** out) {
  return Guard([&] {
    RequireArg(text, "text");
    RequireArg(out, "out");
    *out = nullptr;
    auto g = std::make_unique<sgn_game>();
    g->game = sgnash::GameFromJsonText(text);
    *out = g.release();
  });
}

sgn_status sgn_game_save(const sgn_game* game, const char* path) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(path, "path");
    sgnash::SaveGame(game->game, path);
  });
}

void sgn_game_free(sgn_game* game) { delete game; }

int sgn_game_num_states(const sgn_game* game) { return game ? game->game.num_states() : 0; }

double sgn_game_discount(const sgn_game* game) { return game ? game->game.discount() : 0.0; }

sgn_status sgn_game_with_discount(const sgn_game* game, double discount, sgn_game** out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(out, "out");
    *out = nullptr;
    nlohmann::json j = nlohmann::json::parse(sgnash::GameToJsonText(game->game));
    j["discount"] = discount;
    auto g = std::make_unique<sgn_game>();
    g->game = sgnash::GameFromJsonText(j.dump());
    *out = g.release();
  });
}

void sgn_terrain_spec_default(sgn_terrain_spec* spec) {
  if (!spec) return;
  const sgnash::TerrainSpec d;
  *spec = sgn_terrain_spec{};
  spec->side = d.side;
  spec->discount = d.discount;
  spec->collision_penalty = d.collision_penalty;
  spec->object_reward = d.object_reward;
  static const int kDefaultObjects[4] = {0, 3, 3, 3};
  spec->objects = kDefaultObjects;
  spec->num_objects = 2;
}

sgn_status sgn_terrain_build(const sgn_terrain_spec* spec, sgn_game** out) {
  return Guard([&] {
    RequireArg(spec, "spec");
    RequireArg(out, "out");
    *out = nullptr;
    sgnash::TerrainSpec ts;
    ts.side = spec->side;
    ts.objects = Cells(spec->objects, spec->num_objects, "objects");
    ts.starts = Cells(spec->starts, spec->num_starts, "starts");
    ts.discount = spec->discount;
    ts.collision_penalty = spec->collision_penalty;
    ts.object_reward = spec->object_reward;
    auto g = std::make_unique<sgn_game>();
    g->game = sgnash::BuildTerrainGame(ts).game;
    *out = g.release();
  });
}

sgn_status sgn_game_census(const sgn_game* game, sgn_census* out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(out, "out");
    const sgnash::ProblemCensus c = sgnash::Census(game->game);
    out->num_states = c.num_states;
    out->total_actions[0] = c.total_actions[0];
    out->total_actions[1] = c.total_actions[1];
    out->full_variables = c.full_variables;
    out->full_constraints = c.full_constraints;
    out->packed_variables = c.packed_variables;
    out->packed_constraints = c.packed_constraints;
  });
}

void sgn_solver_config_default(sgn_solver_config* config) {
  if (!config) return;
  const sgnash::SolverConfig d;
  config->init_slack = d.init_slack;
  config->ts_alpha = d.ts_alpha;
  config->rho0 = d.rho0;
  config->w = 1.0;
  config->delta0 = d.delta0;
  config->eta = d.eta;
  config->nu = d.nu;
  config->t_cap = d.t_cap;
  config->t_min = d.t_min;
  config->tol_s = d.tol_s;
  config->tol_f = d.tol_f;
  config->max_iters = d.max_iters;
  config->max_seconds = d.max_seconds;
}

sgn_status sgn_solver_config_validate(const sgn_solver_config* config) {
  return Guard([&] {
    RequireArg(config, "config");
    sgnash::ValidateConfig(ToConfig(*config));
  });
}

sgn_status sgn_solve(const sgn_game* game, const sgn_solver_config* config,
                     sgn_progress_fn progress, void* user, sgn_report** out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(out, "out");
    *out = nullptr;
    sgn_solver_config defaults;
    sgn_solver_config_default(&defaults);
    const sgn_solver_config& c = config ? *config : defaults;
    sgnash::SolverConfig cfg = ToConfig(c);
    const sgnash::Problem problem(game->game);
    if (c.w != 1.0) cfg.w = Eigen::VectorXd::Constant(problem.num_constraints(), c.w);
    sgnash::IterationCallback cb;
    if (progress) {
      cb = [&](const sgnash::TraceRow& row) {
        progress(row.iter, row.f, row.norm_s, row.t, user);
      };
    }
    sgnash::ValidateConfig(cfg);
    const Eigen::VectorXd z0 = sgnash::InitialPoint(problem, cfg.init_slack);
    auto r = std::make_unique<sgn_report>();
    r->report = sgnash::SolveFrom(problem, z0, cfg, cb);
    r->certificate =
        sgnash::EpsNashCertify(game->game, r->report.pi, r->report.epsilon);
    if (r->report.gamma.size() == problem.num_constraints()) {
      r->kkt = sgnash::KktResidual(problem, r->report.z, r->report.gamma, cfg.act_tol);
    }
    *out = r.release();
  });
}

sgn_status sgn_report_summary_get(const sgn_report* report, sgn_report_summary* out) {
  return Guard([&] {
    RequireArg(report, "report");
    RequireArg(out, "out");
    const sgnash::SolveReport& s = report->report;
    out->f = s.f;
    out->epsilon = s.epsilon;
    out->initial_f = s.initial_f;
    out->seconds = s.seconds;
    out->iterations = s.iterations;
    out->fallback_steps = s.fallback_steps;
    out->stop_reason = sgnash::StopReasonName(s.stop);
    out->eps_emp = report->certificate.eps_emp;
    out->certified = report->certificate.passed ? 1 : 0;
  });
}

sgn_status sgn_report_write_json(const sgn_report* report, const char* path) {
  return Guard([&] {
    RequireArg(report, "report");
    RequireArg(path, "path");
    sgnash::WriteTextFile(path, ReportJson(*report).dump(2) + "\n");
  });
}

sgn_status sgn_report_write_trace(const sgn_report* report, const char* path) {
  return Guard([&] {
    RequireArg(report, "report");
    RequireArg(path, "path");
    sgnash::ExportTrace(report->report, path);
  });
}

sgn_status sgn_report_write_point(const sgn_report* report, const char* path) {
  return Guard([&] {
    RequireArg(report, "report");
    RequireArg(path, "path");
    sgnash::SavePoint(report->report.v, report->report.pi, path);
  });
}

void sgn_report_free(sgn_report* report) { delete report; }

sgn_status sgn_point_load(const sgn_game* game, const char* path, sgn_point** out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(path, "path");
    RequireArg(out, "out");
    *out = nullptr;
    auto p = std::make_unique<sgn_point>();
    p->data = sgnash::LoadPoint(game->game, path);
    *out = p.release();
  });
}

sgn_status sgn_point_save(const sgn_point* point, const char* path) {
  return Guard([&] {
    RequireArg(point, "point");
    RequireArg(path, "path");
    sgnash::SavePoint(point->data.v, point->data.pi, path);
  });
}

void sgn_point_free(sgn_point* point) { delete point; }

sgn_status sgn_point_strategy_value(const sgn_game* game, const sgn_point* point,
                                    sgn_point** out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(point, "point");
    RequireArg(out, "out");
    *out = nullptr;
    auto p = std::make_unique<sgn_point>();
    p->data.pi = point->data.pi;
    p->data.v = sgnash::StrategyValue(game->game, point->data.pi);
    *out = p.release();
  });
}

sgn_status sgn_point_values(const sgn_point* point, int player, double* values, int len) {
  return Guard([&] {
    RequireArg(point, "point");
    RequireArg(values, "values");
    sgnash::Require(player == 0 || player == 1, sgnash::ErrorCode::kInvalidArgument,
                    "player must be 0 or 1");
    const Eigen::VectorXd& v = point->data.v[player];
    sgnash::Require(len == v.size(), sgnash::ErrorCode::kDimensionMismatch,
                    "value buffer length does not match the state count");
    for (int x = 0; x < len; ++x) values[x] = v[x];
  });
}

sgn_status sgn_eval(const sgn_game* game, const sgn_point* point, sgn_eval_result* out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(point, "point");
    RequireArg(out, "out");
    const sgnash::Problem problem(game->game);
    const Eigen::VectorXd z = problem.Pack(point->data.v, point->data.pi);
    const Eigen::VectorXd g = problem.Constraints(z);
    out->f = problem.Objective(z);
    out->f_product_sum = problem.ObjectiveProductSum(z);
    out->max_g = g.size() ? g.maxCoeff() : 0.0;
    out->num_variables = problem.num_variables();
    out->num_constraints = problem.num_constraints();
  });
}

sgn_status sgn_verify(const sgn_game* game, const sgn_point* point, double act_tol,
                      sgn_verify_result* out) {
  return Guard([&] {
    RequireArg(game, "game");
    RequireArg(point, "point");
    RequireArg(out, "out");
    sgnash::Require(act_tol >= 0.0, sgnash::ErrorCode::kInvalidArgument,
                    "act_tol must be non-negative");
    const sgnash::Problem problem(game->game);
    const Eigen::VectorXd z = problem.Pack(point->data.v, point->data.pi);
    out->f = problem.Objective(z);
    out->bound = std::max(0.0, out->f) / (1.0 - game->game.discount());
    const sgnash::EpsCertificate cert =
        sgnash::EpsNashCertify(game->game, point->data.pi, out->bound);
    out->eps_emp = cert.eps_emp;
    out->certified = cert.passed ? 1 : 0;
    const Eigen::VectorXd lambda = -sgnash::LambdaPrime(problem, z);
    const sgnash::KktReport kkt = sgnash::KktResidual(problem, z, lambda, act_tol);
    out->stationarity = kkt.stationarity;
    out->complementarity = kkt.complementarity;
    out->primal = kkt.primal;
    out->dual = kkt.dual;
    out->num_active = static_cast<int>(kkt.active.size());
    const sgnash::KktnReport kn = sgnash::KktnCheck(problem, z, act_tol);
    out->num_inactive = kn.num_inactive;
    out->kktn_verdict = sgnash::KktnVerdictName(kn.verdict);
    out->kktn_rank = kn.rank;
    out->kktn_min_singular = kn.min_singular;
    out->lambda_prime_inactive = kn.lambda_prime_inactive;
  });
}

}  // extern "C"
