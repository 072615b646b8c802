#include "gftpl/game.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gftpl {

namespace {
constexpr double kRangeTol = 1e-12;
}

Game::Game(int k, Evaluator evaluator, GameMode mode,
           std::vector<Action> action_space)
    : k_(k),
      evaluator_(std::move(evaluator)),
      mode_(mode),
      action_space_(std::move(action_space)) {
  if (k_ < 1) throw std::invalid_argument("game: K must be >= 1");
  for (std::size_t i = 0; i < action_space_.size(); ++i)
    action_space_[i].index = static_cast<int>(i);
}

Game Game::from_loss_matrix(const std::vector<std::vector<double>>& rows,
                            GameMode mode) {
  if (rows.empty() || rows[0].empty())
    throw std::invalid_argument("game: empty loss matrix");
  const int k = static_cast<int>(rows.size());
  const std::size_t d = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != d) throw std::invalid_argument("game: ragged loss matrix");

  std::vector<Action> actions;
  actions.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    Action a;
    a.id = "y" + std::to_string(j + 1);
    a.values.reserve(rows.size());
    for (const auto& r : rows) a.values.push_back(r[j]);
    actions.push_back(std::move(a));
  }
  auto eval = [](int expert, const Action& y) {
    if (expert < 1 || static_cast<std::size_t>(expert) > y.values.size())
      throw std::out_of_range("game: expert index out of range for action");
    return y.values[expert - 1];
  };
  return Game(k, eval, mode, std::move(actions));
}

const Action& Game::action(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= action_space_.size())
    throw std::out_of_range("game: action index out of range");
  return action_space_[index];
}

std::optional<int> Game::find_action(const std::string& id) const {
  for (std::size_t i = 0; i < action_space_.size(); ++i)
    if (action_space_[i].id == id) return static_cast<int>(i);
  return std::nullopt;
}

double Game::raw(int expert, const Action& y) const {
  if (expert < 1 || expert > k_)
    throw std::out_of_range("game: expert index out of range");
  double v = evaluator_(expert, y);
  if (std::isnan(v) || v < -kRangeTol || v > 1.0 + kRangeTol)
    throw std::domain_error("game: evaluator value outside [0,1]");
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

double Game::loss(int expert, const Action& y) const {
  double v = raw(expert, y);
  return mode_ == GameMode::kReward ? 1.0 - v : v;
}

std::vector<double> Game::cumulative_losses(
    const std::vector<Action>& ys) const {
  std::vector<double> cum(k_, 0.0);
  for (const Action& y : ys)
    for (int k = 1; k <= k_; ++k) cum[k - 1] += loss(k, y);
  return cum;
}

HindsightStats Game::best_in_hindsight(const std::vector<Action>& ys) const {
  HindsightStats stats;
  stats.cumulative = cumulative_losses(ys);
  stats.best_expert = argmin_expert(stats.cumulative);
  stats.best_loss = stats.cumulative[stats.best_expert - 1];
  return stats;
}

int argmin_expert(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("argmin of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[best]) best = i;
  return static_cast<int>(best) + 1;
}

}  // namespace gftpl
