#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gftpl/action.hpp"
#include "gftpl/game.hpp"

namespace gftpl {

enum class PtmKind { kGeneric, kBinary, kSmallY, kTransductive, kLevelAuction };

// Perturbation-translation matrix: K rows (one per expert), N columns,
// entries in [0,1]. `datasets` (when present, one per column) realize the
// column differences as weighted loss differences.
struct Ptm {
  std::vector<std::vector<double>> rows;  // K x N
  std::vector<WeightedDataset> datasets;  // empty or size N
  std::optional<double> declared_gamma;
  PtmKind kind = PtmKind::kGeneric;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const {
    return rows.empty() ? 0 : static_cast<int>(rows[0].size());
  }
  void validate() const;  // throws on malformed matrices
};

struct AdmissibilityReport {
  bool admissible = false;
  double delta = 0.0;  // largest valid delta when admissible
  std::optional<std::pair<int, int>> violating_pair;  // identical rows (1-based)
};

struct Witness {
  std::vector<double> s;
  double l1_norm = 0.0;
};

struct ApproximabilityReport {
  bool feasible = false;
  double gamma_star = 0.0;  // max over (k, y) of the minimal l1 norm
  // Key: (expert, action id); for the loss-independent strong check the
  // action id is "*".
  std::map<std::pair<int, std::string>, Witness> witnesses;
  std::optional<std::pair<int, std::string>> infeasible_pair;
};

AdmissibilityReport admissibility_delta(const Ptm& ptm);

// Per-(expert, action) LP: minimize ||s||_1 subject to the K gap
// constraints of the approximability definition. Feasible iff every
// minimum is <= gamma + 1e-9.
ApproximabilityReport approximability_check(const Ptm& ptm, const Game& game,
                                            double gamma);

// gamma* = max over (k, y) of the LP minimum; nullopt when infeasible.
std::optional<double> min_gamma(const Ptm& ptm, const Game& game);

// Loss-independent sufficient condition: per row k, a witness whose row
// gaps are all >= 1 against every other row.
ApproximabilityReport strong_approx_check(const Ptm& ptm, double gamma);

// 0/1 binary encoding of the expert index; N = ceil(log2 K) (1 when K = 1);
// declared gamma = N.
Ptm binary_rep_ptm(int k);

// s = 2 * row_k - 1 in {-1, +1}^N; strong-condition witness for binary PTMs.
Witness binary_witness(const Ptm& ptm, int k);

// Columns are the literal loss columns of a finite action space; unit-weight
// datasets; declared gamma = 1.
Ptm small_y_ptm(const Game& game);

// Columns are the label-1 loss columns over the known feature set
// {1, ..., m}; actions must carry values = {feature_index, label}.
Ptm transductive_ptm(const Game& game, int m);

// A (possibly flipped) matrix plus nonnegative-weight datasets that
// negatively implement it, for the negative-exponential algorithm.
struct NegativeFlip {
  std::vector<std::vector<double>> rows;  // entries of the PTM to check
  std::vector<WeightedDataset> datasets;
};
NegativeFlip negative_flip_datasets(const Ptm& ptm, const Game& game);

// Action constructor for transductive games: values = {feature, label}.
Action transductive_action(int feature, int label);

}  // namespace gftpl
