#include "gftpl/level_auction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gftpl {

namespace {

// Highest threshold index met by the bid; 0 when below the first threshold.
int bidder_level(const std::vector<int>& thresholds, int bid_num) {
  int level = 0;
  for (std::size_t j = 0; j < thresholds.size(); ++j)
    if (thresholds[j] <= bid_num) level = static_cast<int>(j) + 1;
  return level;
}

}  // namespace

void validate_thresholds(const AuctionThresholds& a,
                         const LevelAuctionConfig& cfg) {
  if (cfg.n < 1 || cfg.levels < 1 || cfg.m < cfg.levels)
    throw std::invalid_argument("level auction: bad config");
  if (static_cast<int>(a.a.size()) != cfg.n)
    throw std::invalid_argument("level auction: wrong bidder count");
  for (const auto& row : a.a) {
    if (static_cast<int>(row.size()) != cfg.levels)
      throw std::invalid_argument("level auction: wrong level count");
    int prev = 0;
    for (int v : row) {
      if (v <= prev || v > cfg.m)
        throw std::invalid_argument(
            "level auction: thresholds must be strictly increasing in [1/m, 1]");
      prev = v;
    }
  }
}

double auction_revenue(const std::vector<std::vector<int>>& rows,
                       const BidProfile& b, const LevelAuctionConfig& cfg) {
  const int nb = static_cast<int>(rows.size());
  if (static_cast<int>(b.b.size()) != nb)
    throw std::invalid_argument("auction_revenue: bid length mismatch");

  std::vector<int> level(nb);
  for (int i = 0; i < nb; ++i) level[i] = bidder_level(rows[i], b.b[i]);

  // Winner: highest level among non-eliminated bidders, ties to the
  // smallest index.
  int winner = -1;
  for (int i = 0; i < nb; ++i) {
    if (level[i] == 0) continue;
    if (winner < 0 || level[i] > level[winner]) winner = i;
  }
  if (winner < 0) return 0.0;

  // Best surviving rival level L and the smallest rival index attaining it.
  int rival_level = 0, rival_index = -1;
  for (int i = 0; i < nb; ++i) {
    if (i == winner || level[i] == 0) continue;
    if (level[i] > rival_level) {
      rival_level = level[i];
      rival_index = i;
    }
  }

  // Minimum level the winner needs: tie at L suffices when the winner
  // precedes the rival, else L+1; at least level 1 to stay in the auction.
  int l_min;
  if (rival_index < 0) {
    l_min = 1;
  } else if (winner < rival_index) {
    l_min = std::max(rival_level, 1);
  } else {
    l_min = rival_level + 1;
  }
  return static_cast<double>(rows[winner][l_min - 1]) / cfg.m;
}

AugmentedThresholds augment(const AuctionThresholds& a,
                            const LevelAuctionConfig& cfg) {
  validate_thresholds(a, cfg);
  AugmentedThresholds out;
  out.a = a.a;
  std::vector<int> fixed(cfg.levels);
  fixed[0] = 1;
  for (int j = 2; j <= cfg.levels; ++j) fixed[j - 1] = j - 1;
  out.a.push_back(std::move(fixed));
  return out;
}

BidProfile probe_bid_profile(int i, int j, int k,
                             const LevelAuctionConfig& cfg) {
  if (i < 1 || i > cfg.n || j < 1 || j > cfg.levels || k < 1 ||
      k > cfg.m - cfg.levels + 1)
    throw std::out_of_range("probe_bid_profile: index out of range");
  BidProfile b;
  b.b.assign(cfg.n + 1, 0);
  b.b[i - 1] = k + j - 1;
  b.b[cfg.n] = j - 1;
  return b;
}

double reward_closed_form(const AugmentedThresholds& a_prime, int i, int j,
                          int k, const LevelAuctionConfig& cfg) {
  if (i < 1 || i > cfg.n || j < 1 || j > cfg.levels || k < 1 ||
      k > cfg.m - cfg.levels + 1)
    throw std::out_of_range("reward_closed_form: index out of range");
  int aij = a_prime.a[i - 1][j - 1];
  int num = (aij <= k + j - 1) ? aij : (j - 1);
  return static_cast<double>(num) / cfg.m;
}

Ptm level_auction_ptm(const std::vector<AugmentedThresholds>& auction_set,
                      const LevelAuctionConfig& cfg) {
  if (auction_set.empty())
    throw std::invalid_argument("level_auction_ptm: empty auction set");
  Ptm ptm;
  ptm.kind = PtmKind::kLevelAuction;
  ptm.declared_gamma = static_cast<double>(cfg.n) * cfg.levels * cfg.m;
  const int probes_per_ij = cfg.m - cfg.levels + 1;
  ptm.rows.assign(auction_set.size(), {});
  for (int i = 1; i <= cfg.n; ++i) {
    for (int j = 1; j <= cfg.levels; ++j) {
      for (int k = 1; k <= probes_per_ij; ++k) {
        for (std::size_t row = 0; row < auction_set.size(); ++row)
          ptm.rows[row].push_back(
              reward_closed_form(auction_set[row], i, j, k, cfg));
        BidProfile probe = probe_bid_profile(i, j, k, cfg);
        std::string id = "b" + std::to_string(i) + "_" + std::to_string(j) +
                         "_" + std::to_string(k);
        WeightedDataset ds;
        ds.add(1.0, bid_action(probe, id));
        ptm.datasets.push_back(std::move(ds));
      }
    }
  }
  return ptm;
}

Witness level_witness(const AugmentedThresholds& a_prime,
                      const LevelAuctionConfig& cfg) {
  Witness w;
  const int probes_per_ij = cfg.m - cfg.levels + 1;
  for (int i = 1; i <= cfg.n; ++i) {
    for (int j = 1; j <= cfg.levels; ++j) {
      for (int k = 1; k <= probes_per_ij; ++k) {
        bool match = (k + j - 1 == a_prime.a[i - 1][j - 1]);
        w.s.push_back(match ? static_cast<double>(cfg.m) : 0.0);
      }
    }
  }
  for (double v : w.s) w.l1_norm += std::fabs(v);
  return w;
}

std::vector<AugmentedThresholds> enumerate_auction_set(
    const LevelAuctionConfig& cfg, std::size_t cap) {
  if (cfg.n < 1 || cfg.levels < 1 || cfg.m < cfg.levels)
    throw std::invalid_argument("enumerate_auction_set: bad config");

  // All strictly increasing `levels`-subsets of {1..m}.
  std::vector<std::vector<int>> rows;
  std::vector<int> cur(cfg.levels);
  auto rec_rows = [&](auto&& self, int pos, int start) -> void {
    if (pos == cfg.levels) {
      rows.push_back(cur);
      return;
    }
    for (int v = start; v <= cfg.m; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v + 1);
    }
  };
  rec_rows(rec_rows, 0, 1);

  double count = 1.0;
  for (int i = 0; i < cfg.n; ++i) count *= static_cast<double>(rows.size());
  if (count > static_cast<double>(cap))
    throw std::runtime_error("enumerate_auction_set: cap exceeded (" +
                             std::to_string(static_cast<long long>(count)) +
                             " auctions)");

  std::vector<AugmentedThresholds> out;
  AuctionThresholds a;
  a.a.resize(cfg.n);
  auto rec_bidders = [&](auto&& self, int bidder) -> void {
    if (bidder == cfg.n) {
      out.push_back(augment(a, cfg));
      return;
    }
    for (const auto& row : rows) {
      a.a[bidder] = row;
      self(self, bidder + 1);
    }
  };
  rec_bidders(rec_bidders, 0);
  return out;
}

Action bid_action(const BidProfile& b, const std::string& id) {
  Action a;
  a.id = id;
  a.values.reserve(b.b.size());
  for (int v : b.b) a.values.push_back(static_cast<double>(v));
  return a;
}

Game make_level_auction_game(
    const std::vector<AugmentedThresholds>& auction_set,
    const LevelAuctionConfig& cfg) {
  if (auction_set.empty())
    throw std::invalid_argument("make_level_auction_game: empty auction set");
  auto set = auction_set;  // captured copy keeps the game self-contained
  auto eval = [set, cfg](int expert, const Action& y) {
    if (expert < 1 || static_cast<std::size_t>(expert) > set.size())
      throw std::out_of_range("level auction game: expert out of range");
    BidProfile b;
    b.b.reserve(y.values.size());
    for (double v : y.values) b.b.push_back(static_cast<int>(std::lround(v)));
    return auction_revenue(set[expert - 1].a, b, cfg);
  };
  return Game(static_cast<int>(auction_set.size()), eval, GameMode::kReward);
}

}  // namespace gftpl
