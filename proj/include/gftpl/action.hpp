#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gftpl {

// One adversary action. `values` is the environment-specific payload:
// a bid profile for auctions, {feature_index, label} for classification,
// or a per-expert loss column for matrix games. `index` is the position
// in the owning game's action space (-1 when the space is abstract).
struct Action {
  std::string id;
  std::vector<double> values;
  int index = -1;
};

struct WeightedItem {
  double weight = 0.0;
  Action action;
};

// Finite weighted dataset fed to the offline oracle. Weights may be
// negative; oracles advertise whether they accept that.
struct WeightedDataset {
  std::vector<WeightedItem> items;

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
  void add(double weight, Action action) {
    items.push_back({weight, std::move(action)});
  }
};

}  // namespace gftpl
