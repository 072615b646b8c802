#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gftpl/action.hpp"

namespace gftpl {

enum class GameMode { kLoss, kReward };

// Per-round statistics of the best fixed expert in hindsight.
struct HindsightStats {
  std::vector<double> cumulative;
  int best_expert = 1;  // 1-based; ties resolved to the smallest index
  double best_loss = 0.0;
};

// The arena: K experts, a loss (or reward) evaluator into [0,1], and an
// optional finite adversary action space. Immutable after construction.
class Game {
 public:
  using Evaluator = std::function<double(int /*expert, 1-based*/,
                                         const Action&)>;

  Game(int k, Evaluator evaluator, GameMode mode = GameMode::kLoss,
       std::vector<Action> action_space = {});

  // Dense K x |Y| loss matrix; column j becomes action "y<j>" (1-based).
  static Game from_loss_matrix(const std::vector<std::vector<double>>& rows,
                               GameMode mode = GameMode::kLoss);

  int num_experts() const { return k_; }
  GameMode mode() const { return mode_; }
  bool has_action_space() const { return !action_space_.empty(); }
  const std::vector<Action>& action_space() const { return action_space_; }
  const Action& action(int index) const;  // 0-based position
  std::optional<int> find_action(const std::string& id) const;

  // Always the loss: f(x,y), or 1 - r(x,y) in reward mode. Validates the
  // evaluator output is in [0,1] (tolerance 1e-12) and the index in [1,K].
  double loss(int expert, const Action& y) const;
  // The stored evaluator's value: r in reward mode, f otherwise.
  double raw(int expert, const Action& y) const;

  std::vector<double> cumulative_losses(
      const std::vector<Action>& ys) const;
  HindsightStats best_in_hindsight(const std::vector<Action>& ys) const;

 private:
  int k_;
  Evaluator evaluator_;
  GameMode mode_;
  std::vector<Action> action_space_;
};

// Smallest index attaining the minimum of a nonempty vector (0-based in,
// 1-based out), the tie-break used by every argmin in this library.
int argmin_expert(const std::vector<double>& values);

}  // namespace gftpl
