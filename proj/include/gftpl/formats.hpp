#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gftpl/game.hpp"
#include "gftpl/level_auction.hpp"
#include "gftpl/ptm.hpp"
#include "gftpl/simulation.hpp"

namespace gftpl {

// Raised on malformed input files / configs (CLI exit code 2).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string& path);

// Game descriptors:
//   {"kind": "matrix", "loss_matrix": [[...]], "mode": "loss"|"reward"}
//   {"kind": "column", "k": K, "mode": ...}   (loss columns ride on actions)
//   {"kind": "level_auction", "n": .., "levels": .., "m": ..}
Game parse_game(const nlohmann::json& j);

// PTM descriptors:
//   {"kind": "explicit", "rows": [[...]], "gamma": optional}
//   {"kind": "binary"}        (K from the game)
//   {"kind": "small_y"}       (finite action space required)
//   {"kind": "level_auction", "n": .., "levels": .., "m": ..}
Ptm parse_ptm(const nlohmann::json& j, const Game& game);

Environment parse_environment(const nlohmann::json& j);

NoiseSpec parse_noise(const nlohmann::json& j);

AlgorithmFamily parse_algorithm(const std::string& name);

struct ExperimentConfig {
  std::optional<Game> game;
  std::optional<Ptm> ptm;
  std::vector<AlgorithmFamily> algorithms;
  Environment env;
  int t = 1;
  std::vector<std::uint64_t> seeds;
  RunOptions opts;
  int trials = 100000;
};

ExperimentConfig parse_experiment(const nlohmann::json& j);

// The exact configuration a run executed with, defaults included.
nlohmann::json resolved_config(const ExperimentConfig& cfg);

nlohmann::json trace_to_json(const RegretTrace& trace);
nlohmann::json summary_to_json(const AggregateSummary& summary);
std::string summary_to_csv(const AggregateSummary& summary);

// Writes via a temp file in the target directory plus rename, so partial
// output never lands under the final name.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace gftpl
