#pragma once

#include <vector>

#include "gftpl/action.hpp"
#include "gftpl/game.hpp"
#include "gftpl/noise.hpp"
#include "gftpl/ptm.hpp"

namespace gftpl {

// The offline optimization black box: returns the expert minimizing a
// weighted sum of losses over a finite dataset.
class OfflineOracle {
 public:
  virtual ~OfflineOracle() = default;
  virtual int solve(const Game& game, const WeightedDataset& data) = 0;
  virtual bool accepts_negative_weights() const = 0;
};

// Exact reference oracle: O(K * |data|) evaluations, smallest-index argmin.
class BruteForceOracle : public OfflineOracle {
 public:
  int solve(const Game& game, const WeightedDataset& data) override;
  bool accepts_negative_weights() const override { return true; }
};

int brute_force_solve(const Game& game, const WeightedDataset& data);

struct CheckResult {
  bool pass = false;
  double max_residual = 0.0;
};

// Verifies the column-difference identity
//   gamma[k][j] - gamma[k'][j] = sum_{(w,y) in S_j} w * (v(k,y) - v(k',y))
// where v is the game's stored evaluator (f in loss mode, r in reward mode).
CheckResult implementability_check(const Ptm& ptm, const Game& game,
                                   double tol = 1e-9);

// Verifies the negated identity with nonnegative-weight datasets, always
// against the loss f. Throws if any flipped weight is negative.
CheckResult negative_implementability_check(
    const std::vector<std::vector<double>>& rows,
    const std::vector<WeightedDataset>& flipped, const Game& game,
    double tol = 1e-9);

// One oracle call realizing argmin_k sum_hist f + <gamma_k, alpha/eta>:
// history actions enter with weight 1; dataset S_i enters scaled by
// alpha_i/eta (negated in reward mode, where the perturbation rides on r
// and the oracle consumes losses f = 1 - r).
int oracle_perturbed_argmin(OfflineOracle& oracle, const Game& game,
                            const std::vector<Action>& history,
                            const Ptm& ptm, const NoiseVector& alpha,
                            double eta);

}  // namespace gftpl
