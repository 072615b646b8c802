#include "gftpl/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "gftpl/oracle.hpp"
#include "gftpl/rng.hpp"

namespace gftpl {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Action loss_column(std::vector<double> values, int t) {
  Action a;
  a.id = "y" + std::to_string(t);
  a.values = std::move(values);
  a.index = t;
  return a;
}

double laplace_cdf(double x) {
  return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x);
}

double survival_ratio(double p_t, double p_t1) {
  if (p_t1 > 0.0) return p_t / p_t1;
  return p_t > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

std::vector<Action> generate_sequence(const Environment& env, int t,
                                      std::uint64_t seed) {
  if (t < 0) throw std::invalid_argument("generate_sequence: T must be >= 0");
  std::vector<Action> out;
  out.reserve(t);
  switch (env.kind) {
    case EnvKind::kFixedSequence: {
      if (env.sequence.empty() && t > 0)
        throw std::invalid_argument("generate_sequence: empty fixed sequence");
      for (int r = 0; r < t; ++r) {
        Action a = env.sequence[r % env.sequence.size()];
        a.index = r + 1;
        out.push_back(std::move(a));
      }
      break;
    }
    case EnvKind::kIid: {
      if (env.support.empty())
        throw std::invalid_argument("generate_sequence: empty iid support");
      if (env.probs.size() != env.support.size())
        throw std::invalid_argument("generate_sequence: probs/support mismatch");
      double total = 0.0;
      for (double p : env.probs) {
        if (p < 0.0) throw std::invalid_argument("generate_sequence: p < 0");
        total += p;
      }
      if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("generate_sequence: probs must sum to 1");
      for (int r = 0; r < t; ++r) {
        // One sub-seed per round keeps prefixes stable across horizons.
        Rng rng(derive_seed(seed, "env", static_cast<std::uint64_t>(r)));
        double u = rng.uniform();
        std::size_t pick = env.support.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < env.probs.size(); ++i) {
          acc += env.probs[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
        Action a = env.support[pick];
        a.index = r + 1;
        out.push_back(std::move(a));
      }
      break;
    }
    case EnvKind::kSmallLossRig: {
      if (env.k < 2) throw std::invalid_argument("small_loss_rig: K must be >= 2");
      if (env.target_expert < 1 || env.target_expert > env.k)
        throw std::invalid_argument("small_loss_rig: bad target expert");
      if (env.leak < 0.0 || env.leak > 1.0)
        throw std::invalid_argument("small_loss_rig: leak must be in [0,1]");
      for (int r = 0; r < t; ++r) {
        Rng rng(derive_seed(seed, "env", static_cast<std::uint64_t>(r)));
        std::vector<double> col(env.k);
        for (int i = 0; i < env.k; ++i) {
          double p = (i + 1 == env.target_expert) ? env.leak : 0.5;
          col[i] = rng.uniform() < p ? 1.0 : 0.0;
        }
        out.push_back(loss_column(std::move(col), r + 1));
      }
      break;
    }
    case EnvKind::kLeaderFlip: {
      if (env.period < 2 || env.period % 2 != 0)
        throw std::invalid_argument("leader_flip: period must be even, >= 2");
      for (int r = 0; r < t; ++r) {
        int phase = (r / (env.period / 2)) % 2;
        std::vector<double> col =
            phase == 0 ? std::vector<double>{1.0, 0.0}
                       : std::vector<double>{0.0, 1.0};
        out.push_back(loss_column(std::move(col), r + 1));
      }
      break;
    }
    case EnvKind::kLevelAuction: {
      const LevelAuctionConfig& cfg = env.la_cfg;
      if (cfg.n < 1 || cfg.m < 1)
        throw std::invalid_argument("level_auction env: bad config");
      for (int r = 0; r < t; ++r) {
        Rng rng(derive_seed(seed, "env", static_cast<std::uint64_t>(r)));
        BidProfile b;
        b.b.resize(cfg.n + 1, 0);
        for (int i = 0; i < cfg.n; ++i)
          b.b[i] = static_cast<int>(rng.uniform() * (cfg.m + 1));
        b.b[cfg.n] = 0;
        Action a = bid_action(b, "y" + std::to_string(r + 1));
        a.index = r + 1;
        out.push_back(std::move(a));
      }
      break;
    }
  }
  return out;
}

std::string algorithm_name(AlgorithmFamily family) {
  switch (family) {
    case AlgorithmFamily::kFtl: return "ftl";
    case AlgorithmFamily::kGftpl: return "gftpl";
    case AlgorithmFamily::kOracleGftpl: return "oracle_gftpl";
    case AlgorithmFamily::kNegExpGftpl: return "neg_exp_gftpl";
    case AlgorithmFamily::kOff: return "off";
    case AlgorithmFamily::kVanillaFtpl: return "vanilla_ftpl";
  }
  return "unknown";
}

RegretTrace run(AlgorithmFamily family, const Game& game,
                const Environment& env, const Ptm* ptm, int t,
                std::uint64_t seed, const RunOptions& opts) {
  const int big_k = game.num_experts();
  const bool needs_ptm = family != AlgorithmFamily::kFtl &&
                         family != AlgorithmFamily::kVanillaFtpl;
  if (needs_ptm && ptm == nullptr)
    throw std::invalid_argument("run: this algorithm needs a PTM");
  if (needs_ptm && ptm->num_rows() != big_k)
    throw std::invalid_argument("run: PTM rows != K");

  double gamma = opts.gamma;
  if (gamma <= 0.0 && needs_ptm && ptm->declared_gamma)
    gamma = *ptm->declared_gamma;
  if (gamma <= 0.0) gamma = 1.0;

  NoiseSpec spec = opts.noise;
  if (!opts.noise_set) {
    spec.family = family == AlgorithmFamily::kNegExpGftpl
                      ? NoiseFamily::kNegExponential
                      : NoiseFamily::kLaplace;
  }
  if (needs_ptm) spec.dimension = ptm->num_cols();

  std::vector<Action> ys = generate_sequence(env, t, seed);
  const std::uint64_t noise_seed = derive_seed(seed, "noise", 0);

  RegretTrace trace;
  trace.seed = seed;
  trace.algorithm = family;
  trace.run_id = algorithm_name(family) + "-" + std::to_string(seed);
  trace.rows.reserve(t);

  // Per-algorithm state.
  FtlState ftl;
  GftplState gftpl;
  OracleGftplState oracle_state;
  OffState off;
  VanillaFtplState vanilla;
  BruteForceOracle oracle;
  StepSizeSchedule sched{gamma, opts.c};
  switch (family) {
    case AlgorithmFamily::kFtl:
      ftl = make_ftl_state(big_k);
      break;
    case AlgorithmFamily::kGftpl:
      gftpl = make_gftpl_state(big_k, sample(spec, noise_seed), sched);
      break;
    case AlgorithmFamily::kOracleGftpl:
    case AlgorithmFamily::kNegExpGftpl:
      oracle_state = make_oracle_gftpl_state(sample(spec, noise_seed), gamma);
      break;
    case AlgorithmFamily::kOff:
      off = make_off_state(big_k, *ptm, sample(spec, noise_seed), gamma);
      break;
    case AlgorithmFamily::kVanillaFtpl:
      vanilla = make_vanilla_ftpl_state(big_k, sched, noise_seed);
      break;
  }

  std::vector<double> global_cum(big_k, 0.0);
  double cum_loss = 0.0;

  for (int r = 0; r < t; ++r) {
    const Action& y = ys[r];
    TraceRow row;
    row.t = r + 1;
    row.active_alg = algorithm_name(family);
    switch (family) {
      case AlgorithmFamily::kFtl: {
        FtlStepResult res = ftl_step(ftl, game, y);
        row.expert = res.expert;
        row.eta = 0.0;
        break;
      }
      case AlgorithmFamily::kGftpl: {
        row.eta = gftpl.schedule.eta(gftpl.l_star_prev);
        row.expert = gftpl_choose(gftpl, *ptm);
        gftpl_update(gftpl, game, y);
        break;
      }
      case AlgorithmFamily::kOracleGftpl: {
        row.eta = oracle_state.eta;
        row.expert = oracle_gftpl_step(oracle_state, game, *ptm, oracle, y);
        break;
      }
      case AlgorithmFamily::kNegExpGftpl: {
        row.eta = oracle_state.eta;
        row.expert = neg_exp_gftpl_step(oracle_state, game, *ptm, oracle, y);
        break;
      }
      case AlgorithmFamily::kOff: {
        row.eta = off.gftpl_active
                      ? off.gftpl.schedule.eta(off.gftpl.l_star_prev)
                      : 0.0;
        OffStepResult res = off_step(off, game, *ptm, y);
        row.expert = res.expert;
        row.active_alg = res.was_gftpl ? "gftpl" : "ftl";
        row.u_hat_ftl = res.u_hat_ftl;
        row.u_hat_gftpl = res.u_hat_gftpl;
        break;
      }
      case AlgorithmFamily::kVanillaFtpl: {
        row.eta = vanilla.schedule.eta(vanilla.l_star_prev);
        row.expert = vanilla_ftpl_step(vanilla, game, y);
        break;
      }
    }

    row.loss = game.loss(row.expert, y);
    cum_loss += row.loss;
    row.cum_loss = cum_loss;
    for (int k = 1; k <= big_k; ++k) global_cum[k - 1] += game.loss(k, y);
    double best = global_cum[0];
    for (double v : global_cum) best = std::min(best, v);
    row.best_cum_loss = best;
    trace.rows.push_back(std::move(row));
  }

  if (!trace.rows.empty()) {
    trace.l_star = trace.rows.back().best_cum_loss;
    trace.final_regret = trace.rows.back().cum_loss - trace.l_star;
  }
  return trace;
}

AggregateSummary aggregate(const std::vector<RegretTrace>& traces) {
  AggregateSummary out;
  out.runs = static_cast<int>(traces.size());
  if (traces.empty()) return out;
  std::size_t min_t = traces[0].rows.size();
  for (const auto& tr : traces) min_t = std::min(min_t, tr.rows.size());
  out.t = static_cast<int>(min_t);
  out.mean_regret_curve.assign(min_t, 0.0);

  double sum = 0.0, sum_sq = 0.0, l_sum = 0.0;
  for (const auto& tr : traces) {
    sum += tr.final_regret;
    sum_sq += tr.final_regret * tr.final_regret;
    l_sum += tr.l_star;
    for (std::size_t r = 0; r < min_t; ++r)
      out.mean_regret_curve[r] +=
          tr.rows[r].cum_loss - tr.rows[r].best_cum_loss;
  }
  const double n = static_cast<double>(traces.size());
  out.mean_final_regret = sum / n;
  out.mean_l_star = l_sum / n;
  for (double& v : out.mean_regret_curve) v /= n;
  if (traces.size() > 1) {
    double var = (sum_sq - sum * sum / n) / (n - 1.0);
    out.stderr_final_regret = std::sqrt(std::max(0.0, var) / n);
  }
  return out;
}

void attach_bounds(AggregateSummary& summary, int k, int n, double gamma,
                   double c) {
  summary.upper_bound = theorem1_bound(k, n, gamma, c, summary.mean_l_star);
  summary.lower_bound_value = lower_bound(k, n, gamma, c, summary.mean_l_star);
  summary.bounds_set = true;
}

StabilityProbeReport stability_probe(const Game& game, const Ptm& ptm,
                                     const std::vector<Action>& history,
                                     const Action& y_next,
                                     const StepSizeSchedule& schedule,
                                     int trials, std::uint64_t seed) {
  if (trials < 1000)
    throw std::invalid_argument("stability_probe: need at least 1000 trials");
  const int big_k = game.num_experts();
  if (ptm.num_rows() != big_k)
    throw std::invalid_argument("stability_probe: PTM rows != K");

  GftplState base = make_gftpl_state(
      big_k, NoiseVector{std::vector<double>(ptm.num_cols(), 0.0), 0,
                         NoiseFamily::kLaplace},
      schedule);
  for (const Action& a : history) gftpl_feed(base, game, a);

  StabilityProbeReport rep;
  rep.trials = trials;
  rep.gamma = schedule.gamma;
  rep.eta = schedule.eta(base.l_star_prev);
  rep.bound = std::exp(rep.gamma * rep.eta);

  NoiseSpec spec;
  spec.family = NoiseFamily::kLaplace;
  spec.dimension = ptm.num_cols();

  std::vector<int> count(big_k, 0), count_prime(big_k, 0);
  for (int trial = 0; trial < trials; ++trial) {
    base.base_noise =
        sample(spec, derive_seed(seed, "stability", static_cast<std::uint64_t>(trial)));
    count[gftpl_choice(base, ptm) - 1] += 1;
    count_prime[infeasible_leader(base, ptm, game, y_next) - 1] += 1;
  }

  rep.verdict = true;
  const double n = static_cast<double>(trials);
  for (int k = 0; k < big_k; ++k) {
    StabilityExpertStat st;
    st.expert = k + 1;
    st.p = count[k] / n;
    st.p_prime = count_prime[k] / n;
    st.ratio = survival_ratio(st.p, st.p_prime);
    double var_p = st.p * (1.0 - st.p) / n;
    double var_pp = st.p_prime * (1.0 - st.p_prime) / n;
    st.slack = 3.0 * std::sqrt(var_p + rep.bound * rep.bound * var_pp);
    st.tracked = st.p >= 1e-3;
    st.ok = !st.tracked || st.p <= rep.bound * st.p_prime + st.slack;
    if (!st.ok) rep.verdict = false;
    rep.experts.push_back(st);
  }
  return rep;
}

CounterexampleResult counterexample_uniform(double beta, double delta_t,
                                            double delta_t1) {
  if (beta <= 0.0)
    throw std::invalid_argument("counterexample_uniform: beta must be > 0");
  auto p = [beta](double d) {
    return std::clamp((beta - d) / beta, 0.0, 1.0);
  };
  CounterexampleResult res;
  res.p_t = p(delta_t);
  res.p_t1 = p(delta_t1);
  res.ratio = survival_ratio(res.p_t, res.p_t1);
  return res;
}

CounterexampleResult counterexample_laplace(double d12, double d23,
                                            const std::vector<double>& next_losses) {
  if (next_losses.size() != 3)
    throw std::invalid_argument(
        "counterexample_laplace: need three next-round losses");
  auto p = [](double a, double b) {
    // P[2b <= alpha <= 2a] for alpha ~ Laplace(1).
    return std::max(0.0, laplace_cdf(2.0 * a) - laplace_cdf(2.0 * b));
  };
  CounterexampleResult res;
  res.p_t = p(d12, d23);
  double d12_next = d12 + next_losses[0] - next_losses[1];
  double d23_next = d23 + next_losses[1] - next_losses[2];
  res.p_t1 = p(d12_next, d23_next);
  res.ratio = survival_ratio(res.p_t, res.p_t1);
  return res;
}

std::string trace_to_csv(const RegretTrace& trace) {
  std::string out =
      "run_id,seed,t,expert,loss,cum_loss,best_cum_loss,eta,active_alg,"
      "u_hat_ftl,u_hat_gftpl\n";
  for (const TraceRow& r : trace.rows) {
    out += trace.run_id;
    out += ',';
    out += std::to_string(trace.seed);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += std::to_string(r.expert);
    out += ',';
    out += fmt(r.loss);
    out += ',';
    out += fmt(r.cum_loss);
    out += ',';
    out += fmt(r.best_cum_loss);
    out += ',';
    out += fmt(r.eta);
    out += ',';
    out += r.active_alg;
    out += ',';
    out += fmt(r.u_hat_ftl);
    out += ',';
    out += fmt(r.u_hat_gftpl);
    out += '\n';
  }
  return out;
}

}  // namespace gftpl
