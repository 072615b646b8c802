#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gftpl/action.hpp"
#include "gftpl/algorithms.hpp"
#include "gftpl/game.hpp"
#include "gftpl/level_auction.hpp"
#include "gftpl/ptm.hpp"

namespace gftpl {

enum class EnvKind {
  kFixedSequence,
  kIid,
  kSmallLossRig,
  kLeaderFlip,
  kLevelAuction
};

struct Environment {
  EnvKind kind = EnvKind::kFixedSequence;

  // fixed_sequence: stored actions, cycled to length T.
  std::vector<Action> sequence;

  // iid: finite support with probabilities summing to 1.
  std::vector<Action> support;
  std::vector<double> probs;

  // small_loss_rig: K-expert loss columns; the target expert draws
  // Bernoulli(leak), everyone else Bernoulli(1/2).
  int k = 2;
  int target_expert = 1;
  double leak = 0.0;

  // leader_flip: two experts alternate the loss columns (1,0) and (0,1);
  // each column is held for period/2 rounds (period 2 = flip every round).
  int period = 2;

  // level_auction: uniform grid bids for the first n bidders, 0 for the
  // augmented bidder.
  LevelAuctionConfig la_cfg;
};

std::vector<Action> generate_sequence(const Environment& env, int t,
                                      std::uint64_t seed);

enum class AlgorithmFamily {
  kFtl,
  kGftpl,
  kOracleGftpl,
  kNegExpGftpl,
  kOff,
  kVanillaFtpl
};

std::string algorithm_name(AlgorithmFamily family);

struct TraceRow {
  int t = 0;
  int expert = 1;
  double loss = 0.0;
  double cum_loss = 0.0;
  double best_cum_loss = 0.0;
  double eta = 0.0;
  std::string active_alg;
  double u_hat_ftl = 0.0;
  double u_hat_gftpl = 0.0;
};

struct RegretTrace {
  std::string run_id;
  std::uint64_t seed = 0;
  AlgorithmFamily algorithm = AlgorithmFamily::kFtl;
  std::vector<TraceRow> rows;
  double final_regret = 0.0;
  double l_star = 0.0;
};

struct RunOptions {
  double c = 1.0;            // step-size constant for the direct GFTPL
  double gamma = 0.0;        // 0: take the PTM's declared gamma
  NoiseSpec noise;           // dimension is overridden to match the PTM
  bool noise_set = false;    // default: Laplace (neg-exp for that variant)
};

// Executes one seeded run. `ptm` may be null for FTL / vanilla FTPL.
RegretTrace run(AlgorithmFamily family, const Game& game,
                const Environment& env, const Ptm* ptm, int t,
                std::uint64_t seed, const RunOptions& opts = {});

struct AggregateSummary {
  int t = 0;
  int runs = 0;
  double mean_final_regret = 0.0;
  double stderr_final_regret = 0.0;
  double mean_l_star = 0.0;
  std::vector<double> mean_regret_curve;  // per round
  // Reference-bound columns, filled by attach_bounds.
  bool bounds_set = false;
  double upper_bound = 0.0;  // adaptive upper bound at the mean L*
  double lower_bound_value = 0.0;
};

AggregateSummary aggregate(const std::vector<RegretTrace>& traces);
void attach_bounds(AggregateSummary& summary, int k, int n, double gamma,
                   double c);

struct StabilityExpertStat {
  int expert = 1;
  double p = 0.0;        // P[x_t = expert]
  double p_prime = 0.0;  // P[x'_t = expert], infeasible leader
  double ratio = 0.0;    // p / p' (inf when p' = 0 < p)
  double slack = 0.0;    // 3-sigma Monte-Carlo allowance
  bool tracked = false;  // p >= 1e-3
  bool ok = true;
};

struct StabilityProbeReport {
  int trials = 0;
  double eta = 0.0;
  double gamma = 0.0;
  double bound = 0.0;  // exp(gamma * eta)
  std::vector<StabilityExpertStat> experts;
  bool verdict = false;
};

StabilityProbeReport stability_probe(const Game& game, const Ptm& ptm,
                                     const std::vector<Action>& history,
                                     const Action& y_next,
                                     const StepSizeSchedule& schedule,
                                     int trials, std::uint64_t seed);

struct CounterexampleResult {
  double p_t = 0.0;
  double p_t1 = 0.0;
  double ratio = 0.0;  // inf when p_t1 = 0 < p_t
};

// K = 2, one 0/1 column, uniform noise on [0, beta]: survival of expert 2
// at cumulative gaps delta_t and delta_t1.
CounterexampleResult counterexample_uniform(double beta, double delta_t,
                                            double delta_t1);

// K = 3, column (0, 1/2, 1), Laplace noise: P[expert 2 wins] =
// P[2*d23 <= alpha <= 2*d12], before and after the next loss column.
CounterexampleResult counterexample_laplace(double d12, double d23,
                                            const std::vector<double>& next_losses);

std::string trace_to_csv(const RegretTrace& trace);

}  // namespace gftpl
