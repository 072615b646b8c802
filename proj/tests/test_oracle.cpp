#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "gftpl/algorithms.hpp"
#include "gftpl/game.hpp"
#include "gftpl/oracle.hpp"
#include "gftpl/ptm.hpp"
#include "gftpl/rng.hpp"

using namespace gftpl;

namespace {

class PositiveOnlyOracle : public OfflineOracle {
 public:
  int solve(const Game& game, const WeightedDataset& data) override {
    return brute_force_solve(game, data);
  }
  bool accepts_negative_weights() const override { return false; }
};

}  // namespace

TEST_CASE("brute force on an empty dataset ties to expert 1") {
  Game game = Game::from_loss_matrix({{0.9}, {0.1}});
  CHECK(brute_force_solve(game, {}) == 1);
}

TEST_CASE("brute force minimizes the weighted sum") {
  Game game = Game::from_loss_matrix({{0.9}, {0.1}});
  WeightedDataset pos, neg;
  pos.add(1.0, game.action(0));
  neg.add(-1.0, game.action(0));
  CHECK(brute_force_solve(game, pos) == 2);
  CHECK(brute_force_solve(game, neg) == 1);
}

TEST_CASE("positive rescaling never changes the argmin") {
  Game game = Game::from_loss_matrix({{0.2, 0.8}, {0.6, 0.1}, {0.5, 0.5}});
  WeightedDataset data, scaled;
  data.add(0.7, game.action(0));
  data.add(-0.2, game.action(1));
  for (const auto& item : data.items) scaled.add(13.0 * item.weight, item.action);
  CHECK(brute_force_solve(game, data) == brute_force_solve(game, scaled));
}

TEST_CASE("implementability holds for loss-column matrices") {
  Game game = Game::from_loss_matrix({{0.2, 0.9}, {0.7, 0.1}});
  Ptm ptm = small_y_ptm(game);
  CheckResult res = implementability_check(ptm, game);
  CHECK(res.pass);
  CHECK(res.max_residual == doctest::Approx(0.0));
}

TEST_CASE("an injected defect is reported with its magnitude") {
  Game game = Game::from_loss_matrix({{0.2, 0.9}, {0.7, 0.1}});
  Ptm ptm = small_y_ptm(game);
  ptm.rows[0][1] += 0.01;
  CheckResult res = implementability_check(ptm, game);
  CHECK(!res.pass);
  CHECK(res.max_residual == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("missing datasets are an error") {
  Game game = Game::from_loss_matrix({{0.2}, {0.7}});
  Ptm ptm;
  ptm.rows = {{0.1}, {0.9}};
  CHECK_THROWS(implementability_check(ptm, game));
}

TEST_CASE("constant columns pass the negative check with empty datasets") {
  Game game = Game::from_loss_matrix({{0.2}, {0.7}});
  std::vector<std::vector<double>> rows = {{0.4, 0.4}, {0.4, 0.4}};
  std::vector<WeightedDataset> flipped(2);
  CHECK(negative_implementability_check(rows, flipped, game).pass);
}

TEST_CASE("negative weights in flipped datasets are rejected") {
  Game game = Game::from_loss_matrix({{0.2}, {0.7}});
  std::vector<std::vector<double>> rows = {{0.4}, {0.4}};
  std::vector<WeightedDataset> flipped(1);
  flipped[0].add(-0.5, game.action(0));
  CHECK_THROWS(negative_implementability_check(rows, flipped, game));
}

TEST_CASE("zero noise reduces the perturbed argmin to the history argmin") {
  Game game = Game::from_loss_matrix({{0.9, 0.2}, {0.1, 0.8}});
  Ptm ptm = small_y_ptm(game);
  BruteForceOracle oracle;
  std::vector<Action> history = {game.action(0), game.action(0)};
  NoiseVector zero{std::vector<double>(2, 0.0), 0, NoiseFamily::kLaplace};
  WeightedDataset hist;
  for (const Action& a : history) hist.add(1.0, a);
  CHECK(oracle_perturbed_argmin(oracle, game, history, ptm, zero, 1.0) ==
        brute_force_solve(game, hist));
}

TEST_CASE("hand-computed perturbed argmin with one history action") {
  Game game = Game::from_loss_matrix({{0.2, 0.9}, {0.7, 0.1}});
  Ptm ptm = small_y_ptm(game);
  BruteForceOracle oracle;
  NoiseVector alpha{{1.0, 0.0}, 0, NoiseFamily::kLaplace};
  // Objectives: expert 1: 0.2 + 0.2 = 0.4; expert 2: 0.7 + 0.7 = 1.4.
  CHECK(oracle_perturbed_argmin(oracle, game, {game.action(0)}, ptm, alpha,
                                1.0) == 1);
  // Flip the sign: expert 1: 0.2 - 0.2 = 0; expert 2: 0.7 - 0.7 = 0; tie -> 1.
  NoiseVector neg{{-1.0, 0.0}, 0, NoiseFamily::kLaplace};
  CHECK(oracle_perturbed_argmin(oracle, game, {game.action(0)}, ptm, neg,
                                1.0) == 1);
}

TEST_CASE("oracle and direct argmins agree on random instances") {
  Rng rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 2 + static_cast<int>(rng.uniform() * 4);
    int d = 2 + static_cast<int>(rng.uniform() * 3);
    std::vector<std::vector<double>> losses(k, std::vector<double>(d));
    for (auto& row : losses)
      for (double& v : row) v = rng.uniform();
    Game game = Game::from_loss_matrix(losses);
    Ptm ptm = small_y_ptm(game);
    BruteForceOracle oracle;

    int hist_len = static_cast<int>(rng.uniform() * 6);
    std::vector<Action> history;
    for (int h = 0; h < hist_len; ++h)
      history.push_back(game.action(static_cast<int>(rng.uniform() * d)));
    NoiseVector alpha{std::vector<double>(d), 77, NoiseFamily::kLaplace};
    for (double& v : alpha.alpha) v = rng.laplace();
    double eta = 0.1 + rng.uniform();

    GftplState st = make_gftpl_state(k, alpha, {1.0, 1.0});
    for (const Action& a : history) gftpl_feed(st, game, a);
    // Force the same eta in the direct path by a schedule with c chosen so
    // c / sqrt(L*+1) = eta and 1/gamma >= eta.
    st.schedule = {1.0 / eta, eta * std::sqrt(st.l_star_prev + 1.0)};
    int direct = gftpl_choice(st, ptm);
    int via_oracle =
        oracle_perturbed_argmin(oracle, game, history, ptm, alpha, eta);
    CHECK(direct == via_oracle);
  }
}

TEST_CASE("negative combined weights require a capable oracle") {
  Game game = Game::from_loss_matrix({{0.2, 0.9}, {0.7, 0.1}});
  Ptm ptm = small_y_ptm(game);
  PositiveOnlyOracle oracle;
  NoiseVector neg{{-1.0, 0.0}, 0, NoiseFamily::kLaplace};
  CHECK_THROWS(oracle_perturbed_argmin(oracle, game, {}, ptm, neg, 1.0));
}
