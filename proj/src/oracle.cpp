#include "gftpl/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace gftpl {

int brute_force_solve(const Game& game, const WeightedDataset& data) {
  const int big_k = game.num_experts();
  std::vector<double> objective(big_k, 0.0);
  for (const WeightedItem& item : data.items)
    for (int k = 1; k <= big_k; ++k)
      objective[k - 1] += item.weight * game.loss(k, item.action);
  return argmin_expert(objective);
}

int BruteForceOracle::solve(const Game& game, const WeightedDataset& data) {
  return brute_force_solve(game, data);
}

CheckResult implementability_check(const Ptm& ptm, const Game& game,
                                   double tol) {
  ptm.validate();
  if (ptm.datasets.empty())
    throw std::invalid_argument("implementability_check: PTM has no datasets");
  const int big_k = ptm.num_rows();
  const int n = ptm.num_cols();
  CheckResult res;
  for (int j = 0; j < n; ++j) {
    std::vector<double> weighted(big_k, 0.0);
    for (const WeightedItem& item : ptm.datasets[j].items)
      for (int k = 1; k <= big_k; ++k)
        weighted[k - 1] += item.weight * game.raw(k, item.action);
    for (int k = 0; k < big_k; ++k) {
      for (int kp = 0; kp < big_k; ++kp) {
        double lhs = ptm.rows[k][j] - ptm.rows[kp][j];
        double rhs = weighted[k] - weighted[kp];
        double r = std::fabs(lhs - rhs);
        if (r > res.max_residual) res.max_residual = r;
      }
    }
  }
  res.pass = res.max_residual <= tol;
  return res;
}

CheckResult negative_implementability_check(
    const std::vector<std::vector<double>>& rows,
    const std::vector<WeightedDataset>& flipped, const Game& game,
    double tol) {
  if (rows.empty()) throw std::invalid_argument("negative check: empty matrix");
  const int big_k = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows[0].size());
  if (static_cast<int>(flipped.size()) != n)
    throw std::invalid_argument("negative check: dataset count != columns");
  for (const auto& ds : flipped)
    for (const auto& item : ds.items)
      if (item.weight < 0.0)
        throw std::invalid_argument("negative check: negative weight present");

  CheckResult res;
  for (int j = 0; j < n; ++j) {
    std::vector<double> weighted(big_k, 0.0);
    for (const WeightedItem& item : flipped[j].items)
      for (int k = 1; k <= big_k; ++k)
        weighted[k - 1] += item.weight * game.loss(k, item.action);
    for (int k = 0; k < big_k; ++k) {
      for (int kp = 0; kp < big_k; ++kp) {
        double lhs = -(rows[k][j] - rows[kp][j]);
        double rhs = weighted[k] - weighted[kp];
        double r = std::fabs(lhs - rhs);
        if (r > res.max_residual) res.max_residual = r;
      }
    }
  }
  res.pass = res.max_residual <= tol;
  return res;
}

int oracle_perturbed_argmin(OfflineOracle& oracle, const Game& game,
                            const std::vector<Action>& history,
                            const Ptm& ptm, const NoiseVector& alpha,
                            double eta) {
  if (eta <= 0.0)
    throw std::invalid_argument("oracle_perturbed_argmin: eta must be > 0");
  if (ptm.datasets.empty())
    throw std::invalid_argument("oracle_perturbed_argmin: PTM has no datasets");
  if (static_cast<int>(alpha.alpha.size()) != ptm.num_cols())
    throw std::invalid_argument("oracle_perturbed_argmin: dimension mismatch");

  const double sign = game.mode() == GameMode::kReward ? -1.0 : 1.0;
  WeightedDataset combined;
  for (const Action& y : history) combined.add(1.0, y);
  bool has_negative = false;
  for (int i = 0; i < ptm.num_cols(); ++i) {
    double scale = sign * alpha.alpha[i] / eta;
    for (const WeightedItem& item : ptm.datasets[i].items) {
      double w = scale * item.weight;
      if (w < 0.0) has_negative = true;
      if (w != 0.0) combined.add(w, item.action);
    }
  }
  if (has_negative && !oracle.accepts_negative_weights())
    throw std::runtime_error(
        "oracle_perturbed_argmin: oracle rejects negative weights; use the "
        "negative-exponential variant or a negatively implementable PTM");
  return oracle.solve(game, combined);
}

}  // namespace gftpl
