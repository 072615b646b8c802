#pragma once

#include <cstdint>
#include <vector>

#include "gftpl/game.hpp"
#include "gftpl/ptm.hpp"

namespace gftpl {

// Single-item level auction with n bidders, `levels` thresholds per bidder
// and bid grid {0, 1/m, ..., m/m}. All threshold and bid values are kept as
// integer numerators over m so revenue comparisons are exact.
struct LevelAuctionConfig {
  int n = 1;
  int levels = 1;
  int m = 1;
};

// rows x levels numerators, strictly increasing within each row, in [1, m].
struct AuctionThresholds {
  std::vector<std::vector<int>> a;
};

// As above with the fixed extra row for bidder n+1:
// numerators (1, 1, 2, ..., levels-1).
struct AugmentedThresholds {
  std::vector<std::vector<int>> a;
};

// Bid numerators over m; length n (original) or n+1 (augmented).
struct BidProfile {
  std::vector<int> b;
};

void validate_thresholds(const AuctionThresholds& a,
                         const LevelAuctionConfig& cfg);

// Level rule: each bidder's level is the highest threshold index its bid
// meets (0 below the first); level-0 bidders are eliminated; the highest
// level wins with ties to the smallest index and pays its own threshold at
// the lowest level that still beats every rival level.
double auction_revenue(const std::vector<std::vector<int>>& rows,
                       const BidProfile& b, const LevelAuctionConfig& cfg);

AugmentedThresholds augment(const AuctionThresholds& a,
                            const LevelAuctionConfig& cfg);

// b'^{(i,j,k)} = ((k+j-1)/m) e_i + ((j-1)/m) e_{n+1}.
BidProfile probe_bid_profile(int i, int j, int k,
                             const LevelAuctionConfig& cfg);

// a'^{(i,j)} if a'^{(i,j)} <= (k+j-1)/m, else (j-1)/m.
double reward_closed_form(const AugmentedThresholds& a_prime, int i, int j,
                          int k, const LevelAuctionConfig& cfg);

// Probe columns in lexicographic (i, j, k) order; entries from the closed
// form; unit-weight probe datasets (reward-implemented); declared gamma =
// n * levels * m.
Ptm level_auction_ptm(const std::vector<AugmentedThresholds>& auction_set,
                      const LevelAuctionConfig& cfg);

// Witness with entry m at every column (i, j, k') where (k'+j-1)/m matches
// the auction's own threshold; ||s||_1 = n * levels * m.
Witness level_witness(const AugmentedThresholds& a_prime,
                      const LevelAuctionConfig& cfg);

// All strictly-increasing threshold matrices over the grid, augmented.
std::vector<AugmentedThresholds> enumerate_auction_set(
    const LevelAuctionConfig& cfg, std::size_t cap = 100000);

// Reward-mode game: experts are the augmented auctions, actions are bid
// profiles carried as numerators in Action::values.
Game make_level_auction_game(
    const std::vector<AugmentedThresholds>& auction_set,
    const LevelAuctionConfig& cfg);

Action bid_action(const BidProfile& b, const std::string& id);

}  // namespace gftpl
