#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "gftpl/formats.hpp"

using namespace gftpl;
using nlohmann::json;

TEST_CASE("matrix games parse with mode defaults and overrides") {
  json j = {{"kind", "matrix"},
            {"loss_matrix", {{0.2, 0.9}, {0.7, 0.1}}}};
  Game game = parse_game(j);
  CHECK(game.num_experts() == 2);
  CHECK(game.mode() == GameMode::kLoss);
  CHECK(game.loss(1, game.action(1)) == doctest::Approx(0.9));

  j["mode"] = "reward";
  CHECK(parse_game(j).mode() == GameMode::kReward);
  j["mode"] = "banana";
  CHECK_THROWS_AS(parse_game(j), FormatError);
}

TEST_CASE("column games read losses off the action payload") {
  Game game = parse_game(json{{"kind", "column"}, {"k", 3}});
  Action y;
  y.values = {0.1, 0.5, 0.9};
  CHECK(game.loss(2, y) == doctest::Approx(0.5));
}

TEST_CASE("auction games and matrices come from one descriptor") {
  json j = {{"kind", "level_auction"}, {"n", 1}, {"levels", 2}, {"m", 4}};
  Game game = parse_game(j);
  CHECK(game.mode() == GameMode::kReward);
  Ptm ptm = parse_ptm(j, game);
  CHECK(ptm.num_rows() == game.num_experts());
  CHECK(ptm.declared_gamma == 8.0);
}

TEST_CASE("explicit and derived matrix descriptors") {
  Game game = parse_game(
      json{{"kind", "matrix"}, {"loss_matrix", {{0.0, 1.0}, {1.0, 0.0}}}});
  Ptm expl = parse_ptm(json{{"kind", "explicit"},
                            {"rows", {{0.0}, {1.0}}},
                            {"gamma", 3.5}},
                       game);
  CHECK(expl.rows == std::vector<std::vector<double>>{{0.0}, {1.0}});
  CHECK(expl.declared_gamma == 3.5);

  CHECK(parse_ptm(json{{"kind", "binary"}}, game).num_cols() == 1);
  CHECK(parse_ptm(json{{"kind", "small_y"}}, game).num_cols() == 2);
  CHECK_THROWS_AS(parse_ptm(json{{"kind", "mystery"}}, game), FormatError);
}

TEST_CASE("environment descriptors cover every kind") {
  Environment fix = parse_environment(
      json{{"kind", "fixed_sequence"}, {"sequence", {{0.0, 1.0}}}});
  CHECK(fix.kind == EnvKind::kFixedSequence);
  REQUIRE(fix.sequence.size() == 1);
  CHECK(fix.sequence[0].values == std::vector<double>{0.0, 1.0});

  Environment iid = parse_environment(json{
      {"kind", "iid"}, {"support", {{0.0}, {1.0}}}, {"probs", {0.4, 0.6}}});
  CHECK(iid.kind == EnvKind::kIid);
  CHECK(iid.probs == std::vector<double>{0.4, 0.6});

  Environment rig = parse_environment(
      json{{"kind", "small_loss_rig"}, {"k", 5}, {"leak", 0.02}});
  CHECK(rig.k == 5);
  CHECK(rig.leak == 0.02);
  CHECK(rig.target_expert == 1);

  Environment flip = parse_environment(json{{"kind", "leader_flip"}});
  CHECK(flip.period == 2);

  CHECK_THROWS_AS(parse_environment(json{{"kind", "weather"}}), FormatError);
}

TEST_CASE("noise and algorithm names resolve or fail loudly") {
  CHECK(parse_noise(json::object()).family == NoiseFamily::kLaplace);
  NoiseSpec lp = parse_noise(json{{"family", "lp"}, {"p", 2.0}});
  CHECK(lp.family == NoiseFamily::kLp);
  CHECK(lp.p == 2.0);
  CHECK(parse_noise(json{{"family", "neg_exponential"}}).family ==
        NoiseFamily::kNegExponential);
  CHECK_THROWS_AS(parse_noise(json{{"family", "gauss"}}), FormatError);

  CHECK(parse_algorithm("off") == AlgorithmFamily::kOff);
  CHECK(parse_algorithm("vanilla_ftpl") == AlgorithmFamily::kVanillaFtpl);
  CHECK_THROWS_AS(parse_algorithm("hedge"), FormatError);
}

TEST_CASE("experiment parsing validates required fields") {
  json base = {{"game",
                {{"kind", "matrix"}, {"loss_matrix", {{0.0, 1.0}, {1.0, 0.0}}}}},
               {"ptm", {{"kind", "binary"}}},
               {"algorithms", {"ftl", "gftpl"}},
               {"environment", {{"kind", "leader_flip"}}},
               {"t", 10},
               {"seeds", {1, 2, 3}}};
  ExperimentConfig cfg = parse_experiment(base);
  CHECK(cfg.t == 10);
  CHECK(cfg.seeds.size() == 3);
  CHECK(cfg.opts.c == 1.0);
  CHECK(!cfg.opts.noise_set);

  json no_seeds = base;
  no_seeds.erase("seeds");
  CHECK_THROWS_AS(parse_experiment(no_seeds), FormatError);

  json no_ptm = base;
  no_ptm.erase("ptm");
  CHECK_THROWS_AS(parse_experiment(no_ptm), FormatError);
  no_ptm["algorithms"] = {"ftl"};
  CHECK_NOTHROW(parse_experiment(no_ptm));

  json bad_t = base;
  bad_t["t"] = 0;
  CHECK_THROWS_AS(parse_experiment(bad_t), FormatError);
}

TEST_CASE("the resolved config echoes defaults explicitly") {
  json base = {{"game",
                {{"kind", "matrix"}, {"loss_matrix", {{0.0, 1.0}, {1.0, 0.0}}}}},
               {"ptm", {{"kind", "binary"}}},
               {"algorithms", {"gftpl"}},
               {"environment", {{"kind", "leader_flip"}}},
               {"t", 5},
               {"seeds", {7}}};
  json rc = resolved_config(parse_experiment(base));
  CHECK(rc["c"] == 1.0);
  CHECK(rc["gamma"] == 1.0);  // binary representation with one column
  CHECK(rc["feasibility_tolerance"] == 1e-9);
  CHECK(rc["noise"]["family"] == "laplace");
  CHECK(rc["noise"]["dimension"] == 1);
  CHECK(rc["k"] == 2);
}

TEST_CASE("trace serialization keeps the identifying fields") {
  RegretTrace tr;
  tr.run_id = "gftpl-7";
  tr.seed = 7;
  tr.algorithm = AlgorithmFamily::kGftpl;
  tr.final_regret = 1.25;
  TraceRow row;
  row.t = 1;
  row.expert = 2;
  row.loss = 0.5;
  row.active_alg = "gftpl";
  tr.rows.push_back(row);
  json j = trace_to_json(tr);
  CHECK(j["run_id"] == "gftpl-7");
  CHECK(j["algorithm"] == "gftpl");
  CHECK(j["rows"][0]["expert"] == 2);
  CHECK(j["rows"][0]["active_alg"] == "gftpl");
}

TEST_CASE("summary serialization carries the optional bounds") {
  AggregateSummary s;
  s.t = 2;
  s.runs = 3;
  s.mean_final_regret = 0.5;
  s.mean_regret_curve = {0.25, 0.5};
  json j = summary_to_json(s);
  CHECK(!j.contains("upper_bound"));
  s.bounds_set = true;
  s.upper_bound = 10.0;
  s.lower_bound_value = -4.0;
  j = summary_to_json(s);
  CHECK(j["upper_bound"] == 10.0);
  CHECK(j["lower_bound"] == -4.0);
  std::string csv = summary_to_csv(s);
  CHECK(csv.rfind("t,mean_regret\n", 0) == 0);
  CHECK(csv.find("# runs=3") != std::string::npos);
  CHECK(csv.find("upper_bound=10") != std::string::npos);
}

TEST_CASE("atomic writes land complete files and round-trip json") {
  std::string path = "formats_test_atomic.json";
  json j = {{"hello", 1}};
  atomic_write(path, j.dump());
  json back = load_json(path);
  CHECK(back["hello"] == 1);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_json("formats_test_missing.json"), FormatError);
}
