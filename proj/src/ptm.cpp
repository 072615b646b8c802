#include "gftpl/ptm.hpp"

#include <cmath>
#include <stdexcept>

#include "gftpl/lp.hpp"

namespace gftpl {

namespace {
constexpr double kTol = 1e-9;

// Minimal ||s||_1 subject to <g_k - g_j, s> >= gaps[j] for all j, via the
// split s = s+ - s-. Returns nullopt when infeasible.
std::optional<Witness> min_l1_witness(
    const std::vector<std::vector<double>>& rows, int k,
    const std::vector<double>& gaps) {
  const int big_k = static_cast<int>(rows.size());
  const int n = static_cast<int>(rows[k].size());
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (int j = 0; j < big_k; ++j) {
    if (j == k) continue;
    std::vector<double> row(2 * n);
    for (int i = 0; i < n; ++i) {
      double diff = rows[k][i] - rows[j][i];
      row[i] = diff;
      row[n + i] = -diff;
    }
    a.push_back(std::move(row));
    b.push_back(gaps[j]);
  }
  std::vector<double> c(2 * n, 1.0);
  LpResult lp = lp_minimize(a, b, c);
  if (!lp.optimal()) return std::nullopt;
  Witness w;
  w.s.resize(n);
  w.l1_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    w.s[i] = lp.x[i] - lp.x[n + i];
    w.l1_norm += std::fabs(w.s[i]);
  }
  return w;
}

}  // namespace

void Ptm::validate() const {
  if (rows.empty() || rows[0].empty())
    throw std::invalid_argument("ptm: empty matrix");
  const std::size_t n = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("ptm: ragged matrix");
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("ptm: entry outside [0,1]");
  }
  if (!datasets.empty() && datasets.size() != n)
    throw std::invalid_argument("ptm: dataset count != column count");
}

AdmissibilityReport admissibility_delta(const Ptm& ptm) {
  ptm.validate();
  AdmissibilityReport rep;
  const int k = ptm.num_rows();
  const int n = ptm.num_cols();
  double delta = 2.0;  // entries are in [0,1], so any real gap is <= 1
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      bool differ = false;
      for (int i = 0; i < n; ++i) {
        double gap = std::fabs(ptm.rows[a][i] - ptm.rows[b][i]);
        if (gap > 0.0) {
          differ = true;
          if (gap < delta) delta = gap;
        }
      }
      if (!differ) {
        rep.admissible = false;
        rep.violating_pair = {a + 1, b + 1};
        return rep;
      }
    }
  }
  rep.admissible = true;
  rep.delta = (k < 2) ? 1.0 : delta;  // single row: vacuously admissible
  return rep;
}

ApproximabilityReport approximability_check(const Ptm& ptm, const Game& game,
                                            double gamma) {
  ptm.validate();
  if (ptm.num_rows() != game.num_experts())
    throw std::invalid_argument("approximability: row count != K");
  if (!game.has_action_space())
    throw std::invalid_argument("approximability: game has no finite action space");

  ApproximabilityReport rep;
  rep.feasible = true;
  const int big_k = ptm.num_rows();
  for (const Action& y : game.action_space()) {
    std::vector<double> losses(big_k);
    for (int k = 1; k <= big_k; ++k) losses[k - 1] = game.loss(k, y);
    for (int k = 0; k < big_k; ++k) {
      std::vector<double> gaps(big_k);
      for (int j = 0; j < big_k; ++j) gaps[j] = losses[k] - losses[j];
      auto w = min_l1_witness(ptm.rows, k, gaps);
      if (!w || w->l1_norm > gamma + kTol) {
        rep.feasible = false;
        rep.infeasible_pair = {k + 1, y.id};
        return rep;
      }
      if (w->l1_norm > rep.gamma_star) rep.gamma_star = w->l1_norm;
      rep.witnesses[{k + 1, y.id}] = *w;
    }
  }
  return rep;
}

std::optional<double> min_gamma(const Ptm& ptm, const Game& game) {
  ptm.validate();
  if (ptm.num_rows() != game.num_experts())
    throw std::invalid_argument("min_gamma: row count != K");
  if (!game.has_action_space())
    throw std::invalid_argument("min_gamma: game has no finite action space");

  double gamma_star = 0.0;
  const int big_k = ptm.num_rows();
  for (const Action& y : game.action_space()) {
    std::vector<double> losses(big_k);
    for (int k = 1; k <= big_k; ++k) losses[k - 1] = game.loss(k, y);
    for (int k = 0; k < big_k; ++k) {
      std::vector<double> gaps(big_k);
      for (int j = 0; j < big_k; ++j) gaps[j] = losses[k] - losses[j];
      auto w = min_l1_witness(ptm.rows, k, gaps);
      if (!w) return std::nullopt;
      if (w->l1_norm > gamma_star) gamma_star = w->l1_norm;
    }
  }
  return gamma_star;
}

ApproximabilityReport strong_approx_check(const Ptm& ptm, double gamma) {
  ptm.validate();
  ApproximabilityReport rep;
  rep.feasible = true;
  const int big_k = ptm.num_rows();
  for (int k = 0; k < big_k; ++k) {
    std::vector<double> gaps(big_k, 1.0);
    gaps[k] = 0.0;
    auto w = min_l1_witness(ptm.rows, k, gaps);
    if (!w || w->l1_norm > gamma + kTol) {
      rep.feasible = false;
      rep.infeasible_pair = {k + 1, std::string("*")};
      return rep;
    }
    if (w->l1_norm > rep.gamma_star) rep.gamma_star = w->l1_norm;
    rep.witnesses[{k + 1, std::string("*")}] = *w;
  }
  return rep;
}

Ptm binary_rep_ptm(int k) {
  if (k < 1) throw std::invalid_argument("binary_rep_ptm: K must be >= 1");
  int n = 1;
  while ((1 << n) < k) ++n;
  Ptm ptm;
  ptm.kind = PtmKind::kBinary;
  ptm.declared_gamma = static_cast<double>(n);
  ptm.rows.resize(k, std::vector<double>(n, 0.0));
  for (int idx = 0; idx < k; ++idx)
    for (int bit = 0; bit < n; ++bit)
      ptm.rows[idx][bit] = ((idx >> (n - 1 - bit)) & 1) ? 1.0 : 0.0;
  return ptm;
}

Witness binary_witness(const Ptm& ptm, int k) {
  ptm.validate();
  if (k < 1 || k > ptm.num_rows())
    throw std::out_of_range("binary_witness: expert out of range");
  Witness w;
  for (double v : ptm.rows[k - 1]) {
    if (v != 0.0 && v != 1.0)
      throw std::invalid_argument("binary_witness: PTM is not 0/1");
    w.s.push_back(2.0 * v - 1.0);
  }
  w.l1_norm = static_cast<double>(w.s.size());
  return w;
}

Ptm small_y_ptm(const Game& game) {
  if (!game.has_action_space())
    throw std::invalid_argument("small_y_ptm: game has no finite action space");
  Ptm ptm;
  ptm.kind = PtmKind::kSmallY;
  ptm.declared_gamma = 1.0;
  const int big_k = game.num_experts();
  const auto& actions = game.action_space();
  ptm.rows.assign(big_k, std::vector<double>(actions.size(), 0.0));
  for (std::size_t j = 0; j < actions.size(); ++j) {
    for (int k = 1; k <= big_k; ++k)
      ptm.rows[k - 1][j] = game.loss(k, actions[j]);
    WeightedDataset ds;
    ds.add(1.0, actions[j]);
    ptm.datasets.push_back(std::move(ds));
  }
  return ptm;
}

Action transductive_action(int feature, int label) {
  Action a;
  a.id = "w" + std::to_string(feature) + ":" + std::to_string(label);
  a.values = {static_cast<double>(feature), static_cast<double>(label)};
  return a;
}

Ptm transductive_ptm(const Game& game, int m) {
  if (m < 1) throw std::invalid_argument("transductive_ptm: m must be >= 1");
  Ptm ptm;
  ptm.kind = PtmKind::kTransductive;
  ptm.declared_gamma = 1.0;
  const int big_k = game.num_experts();
  ptm.rows.assign(big_k, std::vector<double>(m, 0.0));
  for (int j = 1; j <= m; ++j) {
    Action one = transductive_action(j, 1);
    for (int k = 1; k <= big_k; ++k) ptm.rows[k - 1][j - 1] = game.loss(k, one);
    WeightedDataset ds;
    ds.add(1.0, one);
    ptm.datasets.push_back(std::move(ds));
  }
  return ptm;
}

NegativeFlip negative_flip_datasets(const Ptm& ptm, const Game& game) {
  ptm.validate();
  NegativeFlip flip;
  switch (ptm.kind) {
    case PtmKind::kSmallY: {
      // The complement matrix 1 - f is negatively implemented by the
      // original unit-weight action datasets.
      flip.rows = ptm.rows;
      for (auto& row : flip.rows)
        for (double& v : row) v = 1.0 - v;
      flip.datasets = ptm.datasets;
      break;
    }
    case PtmKind::kTransductive: {
      // The label-1 matrix itself is negatively implemented by label-0
      // datasets: with indicator losses, f(k,(w,0)) = 1 - f(k,(w,1)).
      flip.rows = ptm.rows;
      const int m = ptm.num_cols();
      for (int j = 1; j <= m; ++j) {
        Action zero = transductive_action(j, 0);
        // Verify the binary-label complement identity before trusting it.
        for (int k = 1; k <= game.num_experts(); ++k) {
          double sum = game.loss(k, zero) + ptm.rows[k - 1][j - 1];
          if (std::fabs(sum - 1.0) > kTol)
            throw std::invalid_argument(
                "negative_flip_datasets: losses are not binary complements");
        }
        WeightedDataset ds;
        ds.add(1.0, zero);
        flip.datasets.push_back(std::move(ds));
      }
      break;
    }
    default:
      throw std::invalid_argument(
          "negative_flip_datasets: construction unsupported for this PTM kind");
  }
  return flip;
}

}  // namespace gftpl
