/* Copyright 2026 The sgnash Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the stochastic-game Nash solver. Every function returns an
 * sgn_status; on failure sgn_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller, who releases
 * them with the matching *_free function (NULL is accepted). */

#ifndef SGNASH_SGNASH_H_
#define SGNASH_SGNASH_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SGN_API __declspec(dllexport)
#else
#define SGN_API __attribute__((visibility("default")))
#endif

typedef struct sgn_game sgn_game;
typedef struct sgn_point sgn_point;
typedef struct sgn_report sgn_report;

typedef enum sgn_status {
  SGN_OK = 0,
  SGN_ERR_INVALID_ARGUMENT = 1,
  SGN_ERR_INVALID_GAME = 2,
  SGN_ERR_DIMENSION = 3,
  SGN_ERR_IO = 4,
  SGN_ERR_NUMERIC = 5,
  SGN_ERR_INFEASIBLE = 6,
  SGN_ERR_INTERNAL = 7
} sgn_status;

SGN_API const char* sgn_last_error(void);
SGN_API const char* sgn_status_name(sgn_status status);

/* Games. */
SGN_API sgn_status sgn_game_load(const char* path, sgn_game** out);
SGN_API sgn_status sgn_game_from_json(const char* text, sgn_game** out);
SGN_API sgn_status sgn_game_save(const sgn_game* game, const char* path);
SGN_API void sgn_game_free(sgn_game* game);
SGN_API int sgn_game_num_states(const sgn_game* game);
SGN_API double sgn_game_discount(const sgn_game* game);
/* Copy of `game` with the discount factor replaced. */
SGN_API sgn_status sgn_game_with_discount(const sgn_game* game, double discount, sgn_game** out);

/* Terrain exploration games. objects and starts hold (x, y) pairs. */
typedef struct sgn_terrain_spec {
  int side;
  int num_objects;
  const int* objects;
  int num_starts;
  const int* starts;
  double discount;
  double collision_penalty;
  double object_reward;
} sgn_terrain_spec;

/* 4x4 grid, objects at (0, 3) and (3, 3), discount 0.75. */
SGN_API void sgn_terrain_spec_default(sgn_terrain_spec* spec);
SGN_API sgn_status sgn_terrain_build(const sgn_terrain_spec* spec, sgn_game** out);

typedef struct sgn_census {
  int num_states;
  int total_actions[2];
  long long full_variables;
  long long full_constraints;
  long long packed_variables;
  long long packed_constraints;
} sgn_census;

SGN_API sgn_status sgn_game_census(const sgn_game* game, sgn_census* out);

/* Solver. */
typedef struct sgn_solver_config {
  double init_slack;
  double ts_alpha;
  double rho0;
  double w;
  double delta0;
  double eta;
  double nu;
  double t_cap;
  double t_min;
  double tol_s;
  double tol_f;
  int max_iters;
  double max_seconds; /* 0 means no limit. */
} sgn_solver_config;

SGN_API void sgn_solver_config_default(sgn_solver_config* config);
/* SGN_ERR_INVALID_ARGUMENT naming the first field out of range. */
SGN_API sgn_status sgn_solver_config_validate(const sgn_solver_config* config);

/* Progress callback, invoked once per trace row. */
typedef void (*sgn_progress_fn)(int iter, double f, double norm_s, double step, void* user);

SGN_API sgn_status sgn_solve(const sgn_game* game, const sgn_solver_config* config,
                             sgn_progress_fn progress, void* user, sgn_report** out);

typedef struct sgn_report_summary {
  double f;
  double epsilon;
  double initial_f;
  double seconds;
  int iterations;
  int fallback_steps;
  const char* stop_reason; /* Static string. */
  double eps_emp;          /* Best-response gap of the final strategy. */
  int certified;           /* eps_emp <= epsilon + 1e-6 */
} sgn_report_summary;

SGN_API sgn_status sgn_report_summary_get(const sgn_report* report, sgn_report_summary* out);
SGN_API sgn_status sgn_report_write_json(const sgn_report* report, const char* path);
SGN_API sgn_status sgn_report_write_trace(const sgn_report* report, const char* path);
SGN_API sgn_status sgn_report_write_point(const sgn_report* report, const char* path);
SGN_API void sgn_report_free(sgn_report* report);

/* Points: {"v": [...], "pi": [...]} documents. */
SGN_API sgn_status sgn_point_load(const sgn_game* game, const char* path, sgn_point** out);
SGN_API sgn_status sgn_point_save(const sgn_point* point, const char* path);
SGN_API void sgn_point_free(sgn_point* point);
/* Point holding the point's strategy and the values it induces. */
SGN_API sgn_status sgn_point_strategy_value(const sgn_game* game, const sgn_point* point,
                                            sgn_point** out);
/* Copies the value of `player` at every state; len must equal the state count. */
SGN_API sgn_status sgn_point_values(const sgn_point* point, int player, double* values, int len);

typedef struct sgn_eval_result {
  double f;
  double f_product_sum;
  double max_g;
  int num_variables;
  int num_constraints;
} sgn_eval_result;

SGN_API sgn_status sgn_eval(const sgn_game* game, const sgn_point* point, sgn_eval_result* out);

/* Verification. The multipliers are lambda = -lambda', so the KKT fields
 * measure exactly the equilibrium conditions at the point. */
typedef struct sgn_verify_result {
  double f;
  double bound;       /* f / (1 - beta) */
  double eps_emp;
  int certified;      /* eps_emp <= bound + 1e-6 */
  double stationarity;
  double complementarity;
  double primal;
  double dual;
  int num_active;
  int num_inactive;
  const char* kktn_verdict; /* Static string. */
  int kktn_rank;
  double kktn_min_singular;
  double lambda_prime_inactive;
} sgn_verify_result;

SGN_API sgn_status sgn_verify(const sgn_game* game, const sgn_point* point, double act_tol,
                              sgn_verify_result* out);

#ifdef __cplusplus
}
#endif

#endif /* SGNASH_SGNASH_H_ */
