#pragma once

#include <utility>
#include <vector>

#include "gftpl/action.hpp"
#include "gftpl/game.hpp"
#include "gftpl/noise.hpp"
#include "gftpl/oracle.hpp"
#include "gftpl/ptm.hpp"

namespace gftpl {

// eta(L*) = min{1/gamma, c/sqrt(L* + 1)}.
struct StepSizeSchedule {
  double gamma = 1.0;
  double c = 1.0;
  double eta(double l_star_prev) const;
};

// ---------------------------------------------------------------------------
// Direct (non-oracle) perturbed leader.

struct GftplState {
  NoiseVector base_noise;
  StepSizeSchedule schedule;
  std::vector<double> cumulative;
  double l_star_prev = 0.0;
  int round = 1;
  bool chosen = false;  // round-phase flag: choose before update
  int last_choice = 0;
};

GftplState make_gftpl_state(int k, NoiseVector base_noise,
                            StepSizeSchedule schedule);

// argmin_k cumulative[k] + <gamma_k, alpha> / eta_t. Sets the round flag.
int gftpl_choose(GftplState& state, const Ptm& ptm);
// Same argmin without touching the state (used by OFF and the probes).
int gftpl_choice(const GftplState& state, const Ptm& ptm);
// Absorb y into the state without the phase check (meta-algorithm path).
void gftpl_feed(GftplState& state, const Game& game, const Action& y);
// Standard round closure: requires a preceding gftpl_choose.
void gftpl_update(GftplState& state, const Game& game, const Action& y);

// The analysis-only argmin that already includes round t's loss, at the
// same eta_t as the corresponding choice.
int infeasible_leader(const GftplState& state, const Ptm& ptm,
                      const Game& game, const Action& y);

// ---------------------------------------------------------------------------
// Oracle-mediated variants (reward feedback, c fixed at 1).

struct OracleGftplState {
  NoiseVector base_noise;
  double gamma = 1.0;
  double eta = 1.0;  // eta_1 = min{1/gamma, 1}
  std::vector<Action> history;
  double l_hat_star = 0.0;
};

OracleGftplState make_oracle_gftpl_state(NoiseVector base_noise, double gamma);

// Choose via one perturbed oracle call, observe y, recompute L-hat* with a
// second oracle call, and set eta_{t+1} = min{1/gamma, 1/sqrt(L-hat* + 1)}.
int oracle_gftpl_step(OracleGftplState& state, const Game& game,
                      const Ptm& ptm, OfflineOracle& oracle, const Action& y);

// Algorithm variant with nonpositive base noise; identical control flow.
// Requires the state's noise family to be negative-exponential.
int neg_exp_gftpl_step(OracleGftplState& state, const Game& game,
                       const Ptm& ptm, OfflineOracle& oracle, const Action& y);

// ---------------------------------------------------------------------------
// Follow the leader.

struct FtlState {
  std::vector<double> cumulative;
  int last_leader = 0;  // 0 before the first round
  int leader_changes = 0;
  std::vector<int> change_rounds;
  std::vector<double> mixability_gaps;       // delta_t per fed round
  double delta_sum_all = 0.0;                // sum over all rounds
  double delta_sum_change_rounds = 0.0;      // sum over C_T only
  int round = 1;
};

FtlState make_ftl_state(int k);

int ftl_choice(const FtlState& state);
// delta for playing `expert` on y against the current state:
// f(expert, y) - (min(cum + col) - min(cum)); in [0,1] when expert is the
// current leader.
double ftl_delta(const FtlState& state, const Game& game, const Action& y,
                 int expert);
void ftl_feed(FtlState& state, const Game& game, const Action& y);

struct FtlStepResult {
  int expert = 1;
  double delta = 0.0;
  bool leader_changed = false;
};
FtlStepResult ftl_step(FtlState& state, const Game& game, const Action& y);

// ---------------------------------------------------------------------------
// Bound formulas (all with A = 4*sqrt(2)*max{2 ln K, sqrt(N ln K)}).

double theorem1_bound(int k, int n, double gamma, double c, double l_star);
// The OFF regret estimate for the perturbed leader; equals theorem1_bound
// at c = 1.
double u_hat_gftpl(double l_hat_star, int k, int n, double gamma);
double tau(int k, int n, double gamma);
double lower_bound(int k, int n, double gamma, double c, double l_star);

// ---------------------------------------------------------------------------
// OFF: switch between FTL and the perturbed leader on running regret
// estimates. Samples are fed to the algorithm active in the *next* round;
// the estimates accumulate over executed rounds.

struct OffState {
  bool gftpl_active = false;  // starts on FTL
  FtlState ftl;
  GftplState gftpl;
  double gamma = 1.0;
  int k = 1;
  int n = 1;
  double switch_alpha = 1.0;
  double switch_beta = 1.0;
  double tau_value = 0.0;
  double u_hat_ftl = 0.0;
  double u_hat_gftpl = 0.0;  // bound formula at L-hat* = 0 before any round
  std::vector<double> gftpl_exec_cum;  // losses over executed GFTPL rounds
  double l_hat = 0.0;
  int ftl_round_count = 0;
  int gftpl_round_count = 0;
  int switch_count = 0;
};

OffState make_off_state(int k, const Ptm& ptm, NoiseVector base_noise,
                        double gamma);

struct OffStepResult {
  int expert = 1;
  bool was_gftpl = false;
  double u_hat_ftl = 0.0;
  double u_hat_gftpl = 0.0;
};
OffStepResult off_step(OffState& state, const Game& game, const Ptm& ptm,
                       const Action& y);

// ---------------------------------------------------------------------------
// Classical baseline: one independent Laplace perturbation per expert,
// drawn once and rescaled by 1/eta_t.

struct VanillaFtplState {
  std::vector<double> base_noise;  // size K
  StepSizeSchedule schedule;
  std::vector<double> cumulative;
  double l_star_prev = 0.0;
};

VanillaFtplState make_vanilla_ftpl_state(int k, StepSizeSchedule schedule,
                                         std::uint64_t seed);
int vanilla_ftpl_step(VanillaFtplState& state, const Game& game,
                      const Action& y);

}  // namespace gftpl
