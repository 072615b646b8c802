#include "gftpl/algorithms.hpp"

#include <cmath>
#include <stdexcept>

#include "gftpl/rng.hpp"

namespace gftpl {

double StepSizeSchedule::eta(double l_star_prev) const {
  if (gamma <= 0.0 || c <= 0.0)
    throw std::invalid_argument("schedule: gamma and c must be > 0");
  if (l_star_prev < 0.0)
    throw std::invalid_argument("schedule: L* must be >= 0");
  return std::min(1.0 / gamma, c / std::sqrt(l_star_prev + 1.0));
}

// ---------------------------------------------------------------------------

GftplState make_gftpl_state(int k, NoiseVector base_noise,
                            StepSizeSchedule schedule) {
  if (k < 1) throw std::invalid_argument("gftpl: K must be >= 1");
  GftplState st;
  st.base_noise = std::move(base_noise);
  st.schedule = schedule;
  st.cumulative.assign(k, 0.0);
  return st;
}

int gftpl_choice(const GftplState& state, const Ptm& ptm) {
  const int big_k = static_cast<int>(state.cumulative.size());
  if (ptm.num_rows() != big_k)
    throw std::invalid_argument("gftpl: PTM rows != K");
  if (ptm.num_cols() != static_cast<int>(state.base_noise.alpha.size()))
    throw std::invalid_argument("gftpl: PTM columns != noise dimension");
  const double eta = state.schedule.eta(state.l_star_prev);
  std::vector<double> objective(big_k);
  for (int k = 0; k < big_k; ++k) {
    double dot = 0.0;
    for (int i = 0; i < ptm.num_cols(); ++i)
      dot += ptm.rows[k][i] * state.base_noise.alpha[i];
    objective[k] = state.cumulative[k] + dot / eta;
  }
  return argmin_expert(objective);
}

int gftpl_choose(GftplState& state, const Ptm& ptm) {
  if (state.chosen)
    throw std::logic_error("gftpl: choose called twice in one round");
  int x = gftpl_choice(state, ptm);
  state.chosen = true;
  state.last_choice = x;
  return x;
}

void gftpl_feed(GftplState& state, const Game& game, const Action& y) {
  const int big_k = static_cast<int>(state.cumulative.size());
  for (int k = 1; k <= big_k; ++k) state.cumulative[k - 1] += game.loss(k, y);
  double l_star = state.cumulative[0];
  for (double v : state.cumulative) l_star = std::min(l_star, v);
  state.l_star_prev = l_star;
  state.round += 1;
  state.chosen = false;
}

void gftpl_update(GftplState& state, const Game& game, const Action& y) {
  if (!state.chosen)
    throw std::logic_error("gftpl: update without a preceding choose");
  gftpl_feed(state, game, y);
}

int infeasible_leader(const GftplState& state, const Ptm& ptm,
                      const Game& game, const Action& y) {
  const int big_k = static_cast<int>(state.cumulative.size());
  if (ptm.num_rows() != big_k)
    throw std::invalid_argument("gftpl: PTM rows != K");
  const double eta = state.schedule.eta(state.l_star_prev);
  std::vector<double> objective(big_k);
  for (int k = 0; k < big_k; ++k) {
    double dot = 0.0;
    for (int i = 0; i < ptm.num_cols(); ++i)
      dot += ptm.rows[k][i] * state.base_noise.alpha[i];
    objective[k] = state.cumulative[k] + game.loss(k + 1, y) + dot / eta;
  }
  return argmin_expert(objective);
}

// ---------------------------------------------------------------------------

OracleGftplState make_oracle_gftpl_state(NoiseVector base_noise,
                                         double gamma) {
  if (gamma <= 0.0)
    throw std::invalid_argument("oracle gftpl: gamma must be > 0");
  OracleGftplState st;
  st.base_noise = std::move(base_noise);
  st.gamma = gamma;
  st.eta = std::min(1.0 / gamma, 1.0);
  return st;
}

int oracle_gftpl_step(OracleGftplState& state, const Game& game,
                      const Ptm& ptm, OfflineOracle& oracle, const Action& y) {
  int x = oracle_perturbed_argmin(oracle, game, state.history, ptm,
                                  state.base_noise, state.eta);
  state.history.push_back(y);
  // Second oracle call: best expert on the bare history gives L-hat*.
  WeightedDataset hist;
  for (const Action& a : state.history) hist.add(1.0, a);
  int best = oracle.solve(game, hist);
  double l_hat = 0.0;
  for (const Action& a : state.history) l_hat += game.loss(best, a);
  state.l_hat_star = l_hat;
  state.eta = std::min(1.0 / state.gamma, 1.0 / std::sqrt(l_hat + 1.0));
  return x;
}

int neg_exp_gftpl_step(OracleGftplState& state, const Game& game,
                       const Ptm& ptm, OfflineOracle& oracle,
                       const Action& y) {
  if (state.base_noise.family != NoiseFamily::kNegExponential)
    throw std::invalid_argument(
        "neg_exp_gftpl_step: base noise must be negative-exponential");
  return oracle_gftpl_step(state, game, ptm, oracle, y);
}

// ---------------------------------------------------------------------------

FtlState make_ftl_state(int k) {
  if (k < 1) throw std::invalid_argument("ftl: K must be >= 1");
  FtlState st;
  st.cumulative.assign(k, 0.0);
  return st;
}

int ftl_choice(const FtlState& state) { return argmin_expert(state.cumulative); }

double ftl_delta(const FtlState& state, const Game& game, const Action& y,
                 int expert) {
  const int big_k = static_cast<int>(state.cumulative.size());
  double old_min = state.cumulative[0];
  for (double v : state.cumulative) old_min = std::min(old_min, v);
  double new_min = state.cumulative[0] + game.loss(1, y);
  for (int k = 2; k <= big_k; ++k)
    new_min = std::min(new_min, state.cumulative[k - 1] + game.loss(k, y));
  return game.loss(expert, y) - (new_min - old_min);
}

void ftl_feed(FtlState& state, const Game& game, const Action& y) {
  const int big_k = static_cast<int>(state.cumulative.size());
  for (int k = 1; k <= big_k; ++k) state.cumulative[k - 1] += game.loss(k, y);
  state.round += 1;
}

FtlStepResult ftl_step(FtlState& state, const Game& game, const Action& y) {
  FtlStepResult res;
  res.expert = ftl_choice(state);
  res.delta = ftl_delta(state, game, y, res.expert);
  res.leader_changed = (res.expert != state.last_leader);
  state.mixability_gaps.push_back(res.delta);
  state.delta_sum_all += res.delta;
  if (res.leader_changed) {
    state.leader_changes += 1;
    state.change_rounds.push_back(state.round);
    state.delta_sum_change_rounds += res.delta;
  }
  state.last_leader = res.expert;
  ftl_feed(state, game, y);
  return res;
}

// ---------------------------------------------------------------------------

double theorem1_bound(int k, int n, double gamma, double c, double l_star) {
  if (c <= 0.0) throw std::invalid_argument("theorem1_bound: c must be > 0");
  if (gamma <= 0.0)
    throw std::invalid_argument("theorem1_bound: gamma must be > 0");
  if (l_star < 0.0)
    throw std::invalid_argument("theorem1_bound: L* must be >= 0");
  const double a = 4.0 * max_row_product_bound(k, n);  // 4*sqrt(2)*max{...}
  const double root = std::sqrt(l_star + 1.0);
  return (a / c + 2.0 * gamma * (c + 1.0 / c)) * root +
         8.0 * gamma * std::log(root / c + gamma) + 2.0 * gamma * gamma +
         a * gamma;
}

double u_hat_gftpl(double l_hat_star, int k, int n, double gamma) {
  return theorem1_bound(k, n, gamma, 1.0, l_hat_star);
}

double tau(int k, int n, double gamma) {
  return 4.0 * max_row_product_bound(k, n) + 12.0 * gamma;
}

double lower_bound(int k, int n, double gamma, double c, double l_star) {
  if (c <= 0.0) throw std::invalid_argument("lower_bound: c must be > 0");
  return -2.0 * max_row_product_bound(k, n) *
         (gamma + std::sqrt(l_star + 1.0) / c);
}

// ---------------------------------------------------------------------------

OffState make_off_state(int k, const Ptm& ptm, NoiseVector base_noise,
                        double gamma) {
  OffState st;
  st.k = k;
  st.n = ptm.num_cols();
  st.gamma = gamma;
  st.ftl = make_ftl_state(k);
  StepSizeSchedule sched{gamma, 1.0};
  st.gftpl = make_gftpl_state(k, std::move(base_noise), sched);
  st.gftpl_exec_cum.assign(k, 0.0);
  st.tau_value = tau(k, st.n, gamma);
  // The perturbed-leader estimate is the bound formula evaluated over its
  // executed rounds; over no rounds L-hat* = 0, so the estimate starts at
  // the formula's value for 0 rather than at 0 itself. This keeps every
  // later one-round increment of the estimate below tau.
  st.u_hat_gftpl = u_hat_gftpl(0.0, k, st.n, gamma);
  return st;
}

OffStepResult off_step(OffState& state, const Game& game, const Ptm& ptm,
                       const Action& y) {
  OffStepResult res;
  res.was_gftpl = state.gftpl_active;

  // 1. Play the active algorithm's choice.
  res.expert = state.gftpl_active ? gftpl_choice(state.gftpl, ptm)
                                  : ftl_choice(state.ftl);

  // 2. Update the running regret estimates over executed rounds.
  if (state.gftpl_active) {
    const int big_k = state.k;
    for (int k = 1; k <= big_k; ++k)
      state.gftpl_exec_cum[k - 1] += game.loss(k, y);
    double l_hat = state.gftpl_exec_cum[0];
    for (double v : state.gftpl_exec_cum) l_hat = std::min(l_hat, v);
    state.l_hat = l_hat;
    state.u_hat_gftpl = u_hat_gftpl(l_hat, state.k, state.n, state.gamma);
    state.gftpl_round_count += 1;
  } else {
    double delta = ftl_delta(state.ftl, game, y, res.expert);
    state.u_hat_ftl += delta;
    state.ftl_round_count += 1;
  }

  // 3. Decide who acts next round. Until the perturbed leader has executed
  // at least once its estimate is 0 (an estimate over no rounds).
  bool next_gftpl = state.gftpl_active;
  if (!state.gftpl_active &&
      state.u_hat_ftl > state.switch_alpha * state.u_hat_gftpl) {
    next_gftpl = true;
  } else if (state.gftpl_active &&
             state.u_hat_gftpl > state.switch_beta * state.u_hat_ftl) {
    next_gftpl = false;
  }
  if (next_gftpl != state.gftpl_active) state.switch_count += 1;

  // 4. Feed y to the algorithm active at t+1.
  if (next_gftpl)
    gftpl_feed(state.gftpl, game, y);
  else
    ftl_feed(state.ftl, game, y);
  state.gftpl_active = next_gftpl;

  res.u_hat_ftl = state.u_hat_ftl;
  res.u_hat_gftpl = state.u_hat_gftpl;
  return res;
}

// ---------------------------------------------------------------------------

VanillaFtplState make_vanilla_ftpl_state(int k, StepSizeSchedule schedule,
                                         std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("ftpl: K must be >= 1");
  VanillaFtplState st;
  st.schedule = schedule;
  st.cumulative.assign(k, 0.0);
  Rng rng(seed);
  st.base_noise.resize(k);
  for (int i = 0; i < k; ++i) st.base_noise[i] = rng.laplace();
  return st;
}

int vanilla_ftpl_step(VanillaFtplState& state, const Game& game,
                      const Action& y) {
  const int big_k = static_cast<int>(state.cumulative.size());
  const double eta = state.schedule.eta(state.l_star_prev);
  std::vector<double> objective(big_k);
  for (int k = 0; k < big_k; ++k)
    objective[k] = state.cumulative[k] + state.base_noise[k] / eta;
  int x = argmin_expert(objective);
  for (int k = 1; k <= big_k; ++k) state.cumulative[k - 1] += game.loss(k, y);
  double l_star = state.cumulative[0];
  for (double v : state.cumulative) l_star = std::min(l_star, v);
  state.l_star_prev = l_star;
  return x;
}

}  // namespace gftpl
