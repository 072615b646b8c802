#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gftpl/algorithms.hpp"
#include "gftpl/noise.hpp"
#include "gftpl/rng.hpp"

using namespace gftpl;

namespace {

NoiseVector fixed_noise(std::vector<double> alpha) {
  return NoiseVector{std::move(alpha), 0, NoiseFamily::kLaplace};
}

Game flip_game() { return Game::from_loss_matrix({{1.0, 0.0}, {0.0, 1.0}}); }

}  // namespace

TEST_CASE("step-size schedule evaluates the min formula") {
  StepSizeSchedule s_gamma2{2.0, 1.0};
  StepSizeSchedule s_unit{1.0, 1.0};
  StepSizeSchedule s_half{0.5, 1.0};
  StepSizeSchedule s_zero{0.0, 1.0};
  CHECK(s_gamma2.eta(0.0) == doctest::Approx(0.5));
  CHECK(s_unit.eta(99.0) == doctest::Approx(0.1));
  CHECK(s_half.eta(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(s_zero.eta(0.0), std::invalid_argument);
  CHECK_THROWS_AS(s_unit.eta(-1.0), std::invalid_argument);
}

TEST_CASE("perturbed choice on an empty history with zero noise") {
  Ptm ptm = binary_rep_ptm(4);
  GftplState st = make_gftpl_state(4, fixed_noise({0.0, 0.0}), {2.0, 1.0});
  CHECK(gftpl_choose(st, ptm) == 1);
}

TEST_CASE("perturbed choice trades history against noise") {
  Ptm ptm;
  ptm.rows = {{0.0}, {1.0}};
  GftplState st = make_gftpl_state(2, fixed_noise({0.3}), {1.0, 1.0});
  st.cumulative = {0.5, 0.0};
  // eta = 1 at L* = 0: objectives 0.5 vs 0.0 + 0.3.
  CHECK(gftpl_choice(st, ptm) == 2);
}

TEST_CASE("adding a constant column to the matrix preserves the choice") {
  Rng rng(17);
  Ptm ptm = binary_rep_ptm(4);
  Ptm shifted = ptm;
  // Shift within [0,1] by mapping {0,1} to {0.25, 0.75} (affine, common
  // constant plus scaling is still argmin-equivalent at equal row scaling).
  for (auto& row : shifted.rows)
    for (double& v : row) v = 0.25 + 0.5 * v;
  for (int trial = 0; trial < 20; ++trial) {
    GftplState st = make_gftpl_state(
        4, fixed_noise({rng.laplace(), rng.laplace()}), {2.0, 1.0});
    for (double& v : st.cumulative) v = rng.uniform();
    st.l_star_prev = 0.0;
    GftplState st2 = st;
    // Equal-scaling equivalence requires matching eta adjustment; with the
    // same eta the 0.5 factor shrinks noise uniformly, so compare against
    // the original matrix under noise scaled by 0.5 instead.
    st2.base_noise.alpha[0] *= 0.5;
    st2.base_noise.alpha[1] *= 0.5;
    CHECK(gftpl_choice(st, shifted) == gftpl_choice(st2, ptm));
  }
}

TEST_CASE("round phase flags catch protocol misuse") {
  Ptm ptm = binary_rep_ptm(2);
  Game game = flip_game();
  GftplState st = make_gftpl_state(2, fixed_noise({0.1}), {1.0, 1.0});
  CHECK_THROWS_AS(gftpl_update(st, game, game.action(0)), std::logic_error);
  gftpl_choose(st, ptm);
  CHECK_THROWS_AS(gftpl_choose(st, ptm), std::logic_error);
  gftpl_update(st, game, game.action(0));
  CHECK(st.round == 2);
  CHECK(st.l_star_prev == doctest::Approx(0.0));
}

TEST_CASE("eta never increases over a run") {
  Ptm ptm = binary_rep_ptm(2);
  Game game = flip_game();
  GftplState st = make_gftpl_state(2, fixed_noise({0.4}), {1.0, 1.0});
  Rng rng(5);
  double prev = st.schedule.eta(st.l_star_prev);
  for (int t = 0; t < 50; ++t) {
    gftpl_choose(st, ptm);
    gftpl_update(st, game, game.action(rng.uniform() < 0.5 ? 0 : 1));
    double eta = st.schedule.eta(st.l_star_prev);
    CHECK(eta <= prev + 1e-15);
    CHECK(eta <= 1.0 / st.schedule.gamma + 1e-15);
    prev = eta;
  }
}

TEST_CASE("constant-loss actions make the infeasible leader agree") {
  Ptm ptm = binary_rep_ptm(2);
  Game game = Game::from_loss_matrix({{1.0, 0.3}, {0.0, 0.3}});
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    GftplState st = make_gftpl_state(2, fixed_noise({rng.laplace()}),
                                     {1.0, 1.0});
    st.cumulative = {rng.uniform(), rng.uniform()};
    CHECK(gftpl_choice(st, ptm) ==
          infeasible_leader(st, ptm, game, game.action(1)));
  }
}

TEST_CASE("be-the-leader chain inequality holds per realization") {
  Game game = Game::from_loss_matrix(
      {{0.2, 0.9, 0.4}, {0.8, 0.1, 0.6}, {0.5, 0.5, 0.1}});
  Ptm ptm = binary_rep_ptm(3);
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    NoiseVector alpha = fixed_noise({rng.laplace(), rng.laplace()});
    GftplState st = make_gftpl_state(3, alpha, {2.0, 1.0});
    std::vector<Action> ys;
    double lhs = 0.0;
    std::vector<double> prev_alpha_t(2, 0.0);
    for (int t = 0; t < 30; ++t) {
      const Action& y = game.action(static_cast<int>(rng.uniform() * 3));
      double eta = st.schedule.eta(st.l_star_prev);
      int xp = infeasible_leader(st, ptm, game, y);
      double inc = game.loss(xp, y);
      for (int i = 0; i < 2; ++i)
        inc += ptm.rows[xp - 1][i] * (alpha.alpha[i] / eta - prev_alpha_t[i]);
      lhs += inc;
      for (int i = 0; i < 2; ++i) prev_alpha_t[i] = alpha.alpha[i] / eta;
      gftpl_feed(st, game, y);
      ys.push_back(y);
    }
    HindsightStats best = game.best_in_hindsight(ys);
    double max_pert = -1e300;
    for (int k = 0; k < 3; ++k) {
      double dot = 0.0;
      for (int i = 0; i < 2; ++i)
        dot += ptm.rows[k][i] * prev_alpha_t[i];
      max_pert = std::max(max_pert, dot);
    }
    CHECK(lhs <= best.best_loss + max_pert + 1e-9);
  }
}

TEST_CASE("follow the leader records changes and gaps") {
  Game game = flip_game();
  FtlState st = make_ftl_state(2);
  FtlStepResult r1 = ftl_step(st, game, game.action(0));  // losses (1,0)
  CHECK(r1.expert == 1);
  CHECK(r1.leader_changed);  // round 1 counts as the initial change
  CHECK(r1.delta == doctest::Approx(1.0));
  FtlStepResult r2 = ftl_step(st, game, game.action(1));  // losses (0,1)
  CHECK(r2.expert == 2);
  CHECK(r2.leader_changed);
  CHECK(st.leader_changes == 2);
  for (double d : st.mixability_gaps) {
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("a dominant expert keeps FTL at one leader change") {
  Game game = Game::from_loss_matrix({{0.0, 0.0}, {0.6, 0.4}});
  FtlState st = make_ftl_state(2);
  double regret = 0.0;
  for (int t = 0; t < 40; ++t) {
    FtlStepResult res = ftl_step(st, game, game.action(t % 2));
    regret += game.loss(res.expert, game.action(t % 2));
  }
  CHECK(st.leader_changes == 1);
  CHECK(regret <= 1.0);
}

TEST_CASE("regret-bound formulas match hand evaluations") {
  CHECK(u_hat_gftpl(0.0, 8, 3, 3.0) == doctest::Approx(157.38).epsilon(1e-4));
  CHECK(tau(8, 3, 3.0) == doctest::Approx(59.53).epsilon(1e-3));
  CHECK(theorem1_bound(8, 3, 3.0, 1.0, 0.0) ==
        doctest::Approx(u_hat_gftpl(0.0, 8, 3, 3.0)));
  CHECK(u_hat_gftpl(10.0, 8, 3, 3.0) > u_hat_gftpl(0.0, 8, 3, 3.0));
  CHECK(u_hat_gftpl(0.0, 8, 3, 3.0) > 0.0);
  CHECK(tau(8, 3, 3.0) >= 12.0 * 3.0);
  CHECK_THROWS(theorem1_bound(1, 3, 3.0, 1.0, 0.0));
}

TEST_CASE("upper bound scales like the square root for large losses") {
  double lo = theorem1_bound(16, 4, 4.0, 1.0, 1e4);
  double hi = theorem1_bound(16, 4, 4.0, 1.0, 1e6);
  CHECK(hi / lo == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("tau dominates the unit-step jump of the regret estimate") {
  for (int k : {2, 8, 64})
    for (int n : {1, 3, 6})
      for (double gamma : {1.0, 3.0, 10.0})
        for (double l : {0.0, 0.5, 1.0, 10.0, 100.0}) {
          double jump =
              u_hat_gftpl(l + 1.0, k, n, gamma) - u_hat_gftpl(l, k, n, gamma);
          CHECK(jump <= tau(k, n, gamma) + 1e-9);
        }
}

TEST_CASE("lower bound is nonpositive and evaluates the formula") {
  CHECK(lower_bound(8, 3, 3.0, 1.0, 0.0) ==
        doctest::Approx(-2.0 * max_row_product_bound(8, 3) * 4.0));
  CHECK(lower_bound(16, 4, 2.0, 1.0, 50.0) <= 0.0);
}

TEST_CASE("the meta-algorithm starts on FTL and partitions rounds") {
  Game game = flip_game();
  Ptm ptm = binary_rep_ptm(2);
  OffState st = make_off_state(2, ptm, fixed_noise({0.7}), 1.0);
  CHECK(!st.gftpl_active);
  int t_total = 60;
  for (int t = 0; t < t_total; ++t) {
    OffStepResult res = off_step(st, game, ptm, game.action(t % 2));
    if (t == 0) CHECK(!res.was_gftpl);
  }
  CHECK(st.ftl_round_count + st.gftpl_round_count == t_total);
}

TEST_CASE("a no-switch run of the meta-algorithm equals plain FTL") {
  Game game = Game::from_loss_matrix({{0.0, 0.0}, {0.6, 0.4}});
  Ptm ptm = binary_rep_ptm(2);
  OffState off = make_off_state(2, ptm, fixed_noise({1.3}), 1.0);
  FtlState ftl = make_ftl_state(2);
  for (int t = 0; t < 50; ++t) {
    const Action& y = game.action(t % 2);
    OffStepResult res = off_step(off, game, ptm, y);
    FtlStepResult ref = ftl_step(ftl, game, y);
    CHECK(!res.was_gftpl);
    CHECK(res.expert == ref.expert);
  }
  CHECK(off.switch_count == 0);
  // The perturbed-leader estimate sits at its L-hat* = 0 formula value the
  // whole time; FTL's zero estimate never exceeds it.
  CHECK(off.u_hat_gftpl == doctest::Approx(u_hat_gftpl(0.0, 2, 1, 1.0)));
}

TEST_CASE("oracle-mediated perturbed leader uses the fixed-c schedule") {
  // Reward-mode game so Algorithm-2 conventions apply end to end.
  Game game = Game::from_loss_matrix({{0.1, 0.8}, {0.9, 0.3}},
                                     GameMode::kReward);
  Ptm ptm = small_y_ptm(game);
  BruteForceOracle oracle;
  OracleGftplState st =
      make_oracle_gftpl_state(sample({NoiseFamily::kLaplace, 2, 1.0}, 3), 1.0);
  CHECK(st.eta == doctest::Approx(1.0));
  double prev_eta = st.eta;
  Rng rng(77);
  for (int t = 0; t < 25; ++t) {
    const Action& y = game.action(rng.uniform() < 0.5 ? 0 : 1);
    int x = oracle_gftpl_step(st, game, ptm, oracle, y);
    CHECK(x >= 1);
    CHECK(x <= 2);
    CHECK(st.eta <= prev_eta + 1e-15);
    prev_eta = st.eta;
  }
  // L-hat* from the oracle equals the direct hindsight minimum.
  HindsightStats best = game.best_in_hindsight(st.history);
  CHECK(st.l_hat_star == doctest::Approx(best.best_loss));
}

TEST_CASE("negative-exponential variant insists on its noise family") {
  Game game = Game::from_loss_matrix({{0.1, 0.8}, {0.9, 0.3}},
                                     GameMode::kReward);
  Ptm ptm = small_y_ptm(game);
  BruteForceOracle oracle;
  OracleGftplState bad =
      make_oracle_gftpl_state(sample({NoiseFamily::kLaplace, 2, 1.0}, 3), 1.0);
  CHECK_THROWS(neg_exp_gftpl_step(bad, game, ptm, oracle, game.action(0)));
  OracleGftplState good = make_oracle_gftpl_state(
      sample({NoiseFamily::kNegExponential, 2, 1.0}, 3), 1.0);
  CHECK_NOTHROW(neg_exp_gftpl_step(good, game, ptm, oracle, game.action(0)));
}

TEST_CASE("classical per-expert perturbation baseline") {
  Game game = Game::from_loss_matrix({{0.5, 0.5}});
  VanillaFtplState st = make_vanilla_ftpl_state(1, {1.0, 1.0}, 8);
  for (int t = 0; t < 5; ++t)
    CHECK(vanilla_ftpl_step(st, game, game.action(t % 2)) == 1);
  VanillaFtplState a = make_vanilla_ftpl_state(3, {1.0, 1.0}, 8);
  VanillaFtplState b = make_vanilla_ftpl_state(3, {1.0, 1.0}, 8);
  CHECK(a.base_noise == b.base_noise);
}
