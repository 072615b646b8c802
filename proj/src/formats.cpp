#include "gftpl/formats.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gftpl {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing field: ") + key);
  return *it;
}

std::vector<std::vector<double>> parse_matrix(const json& j, const char* key) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : field(j, key)) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get<double>());
    rows.push_back(std::move(r));
  }
  return rows;
}

GameMode parse_mode(const json& j) {
  std::string mode = j.value("mode", "loss");
  if (mode == "loss") return GameMode::kLoss;
  if (mode == "reward") return GameMode::kReward;
  throw FormatError("mode must be \"loss\" or \"reward\": " + mode);
}

LevelAuctionConfig parse_la_config(const json& j) {
  LevelAuctionConfig cfg;
  cfg.n = field(j, "n").get<int>();
  cfg.levels = field(j, "levels").get<int>();
  cfg.m = field(j, "m").get<int>();
  return cfg;
}

Action column_action(const json& col, int index) {
  Action a;
  a.id = "a" + std::to_string(index);
  for (const auto& v : col) a.values.push_back(v.get<double>());
  a.index = index;
  return a;
}

}  // namespace

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("parse error in " + path + ": " + e.what());
  }
  return j;
}

Game parse_game(const nlohmann::json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  try {
    if (kind == "matrix")
      return Game::from_loss_matrix(parse_matrix(j, "loss_matrix"),
                                    parse_mode(j));
    if (kind == "column") {
      int k = field(j, "k").get<int>();
      auto eval = [k](int expert, const Action& y) {
        if (static_cast<int>(y.values.size()) < k)
          throw std::invalid_argument("column game: short loss column");
        return y.values[expert - 1];
      };
      return Game(k, eval, parse_mode(j));
    }
    if (kind == "level_auction") {
      LevelAuctionConfig cfg = parse_la_config(j);
      return make_level_auction_game(enumerate_auction_set(cfg), cfg);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("game descriptor: ") + e.what());
  }
  throw FormatError("unknown game kind: " + kind);
}

Ptm parse_ptm(const nlohmann::json& j, const Game& game) {
  std::string kind = field(j, "kind").get<std::string>();
  try {
    if (kind == "explicit") {
      Ptm ptm;
      ptm.rows = parse_matrix(j, "rows");
      if (j.contains("gamma")) ptm.declared_gamma = j["gamma"].get<double>();
      ptm.validate();
      return ptm;
    }
    if (kind == "binary") return binary_rep_ptm(game.num_experts());
    if (kind == "small_y") return small_y_ptm(game);
    if (kind == "level_auction") {
      LevelAuctionConfig cfg = parse_la_config(j);
      return level_auction_ptm(enumerate_auction_set(cfg), cfg);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("ptm descriptor: ") + e.what());
  }
  throw FormatError("unknown ptm kind: " + kind);
}

Environment parse_environment(const nlohmann::json& j) {
  std::string kind = field(j, "kind").get<std::string>();
  Environment env;
  try {
    if (kind == "fixed_sequence") {
      env.kind = EnvKind::kFixedSequence;
      int idx = 1;
      for (const auto& col : field(j, "sequence"))
        env.sequence.push_back(column_action(col, idx++));
    } else if (kind == "iid") {
      env.kind = EnvKind::kIid;
      int idx = 1;
      for (const auto& col : field(j, "support"))
        env.support.push_back(column_action(col, idx++));
      for (const auto& p : field(j, "probs"))
        env.probs.push_back(p.get<double>());
    } else if (kind == "small_loss_rig") {
      env.kind = EnvKind::kSmallLossRig;
      env.k = field(j, "k").get<int>();
      env.target_expert = j.value("target_expert", 1);
      env.leak = field(j, "leak").get<double>();
    } else if (kind == "leader_flip") {
      env.kind = EnvKind::kLeaderFlip;
      env.period = j.value("period", 2);
    } else if (kind == "level_auction") {
      env.kind = EnvKind::kLevelAuction;
      env.la_cfg = parse_la_config(j);
    } else {
      throw FormatError("unknown environment kind: " + kind);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("environment descriptor: ") + e.what());
  }
  return env;
}

NoiseSpec parse_noise(const nlohmann::json& j) {
  NoiseSpec spec;
  std::string family = j.value("family", "laplace");
  if (family == "laplace") {
    spec.family = NoiseFamily::kLaplace;
  } else if (family == "lp") {
    spec.family = NoiseFamily::kLp;
    spec.p = j.value("p", 1.0);
  } else if (family == "neg_exponential") {
    spec.family = NoiseFamily::kNegExponential;
  } else {
    throw FormatError("unknown noise family: " + family);
  }
  spec.dimension = j.value("dimension", 1);
  return spec;
}

AlgorithmFamily parse_algorithm(const std::string& name) {
  if (name == "ftl") return AlgorithmFamily::kFtl;
  if (name == "gftpl") return AlgorithmFamily::kGftpl;
  if (name == "oracle_gftpl") return AlgorithmFamily::kOracleGftpl;
  if (name == "neg_exp_gftpl") return AlgorithmFamily::kNegExpGftpl;
  if (name == "off") return AlgorithmFamily::kOff;
  if (name == "vanilla_ftpl") return AlgorithmFamily::kVanillaFtpl;
  throw FormatError("unknown algorithm: " + name);
}

ExperimentConfig parse_experiment(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.game = parse_game(field(j, "game"));
    if (j.contains("ptm")) cfg.ptm = parse_ptm(j["ptm"], *cfg.game);
    for (const auto& a : field(j, "algorithms"))
      cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    cfg.env = parse_environment(field(j, "environment"));
    cfg.t = field(j, "t").get<int>();
    if (cfg.t < 1) throw FormatError("t must be >= 1");
    for (const auto& s : field(j, "seeds"))
      cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty()) throw FormatError("seed list must be nonempty");
    cfg.opts.c = j.value("c", 1.0);
    cfg.opts.gamma = j.value("gamma", 0.0);
    if (j.contains("noise")) {
      cfg.opts.noise = parse_noise(j["noise"]);
      cfg.opts.noise_set = true;
    }
    cfg.trials = j.value("trials", 100000);
  } catch (const json::exception& e) {
    throw FormatError(std::string("experiment config: ") + e.what());
  }
  if (cfg.algorithms.empty())
    throw FormatError("algorithm list must be nonempty");
  bool needs_ptm = false;
  for (AlgorithmFamily f : cfg.algorithms)
    needs_ptm |= f != AlgorithmFamily::kFtl &&
                 f != AlgorithmFamily::kVanillaFtpl;
  if (needs_ptm && !cfg.ptm)
    throw FormatError("config needs a ptm for the selected algorithms");
  return cfg;
}

nlohmann::json resolved_config(const ExperimentConfig& cfg) {
  json j;
  std::vector<std::string> names;
  for (AlgorithmFamily f : cfg.algorithms) names.push_back(algorithm_name(f));
  j["algorithms"] = names;
  j["t"] = cfg.t;
  j["seeds"] = cfg.seeds;
  j["c"] = cfg.opts.c;
  j["gamma"] = cfg.opts.gamma > 0.0
                   ? cfg.opts.gamma
                   : (cfg.ptm && cfg.ptm->declared_gamma
                          ? *cfg.ptm->declared_gamma
                          : 1.0);
  j["trials"] = cfg.trials;
  j["feasibility_tolerance"] = 1e-9;
  json noise;
  switch (cfg.opts.noise_set ? cfg.opts.noise.family : NoiseFamily::kLaplace) {
    case NoiseFamily::kLaplace: noise["family"] = "laplace"; break;
    case NoiseFamily::kLp:
      noise["family"] = "lp";
      noise["p"] = cfg.opts.noise.p;
      break;
    case NoiseFamily::kNegExponential:
      noise["family"] = "neg_exponential";
      break;
  }
  if (cfg.ptm) noise["dimension"] = cfg.ptm->num_cols();
  j["noise"] = noise;
  if (cfg.game) j["k"] = cfg.game->num_experts();
  if (cfg.ptm) j["ptm_cols"] = cfg.ptm->num_cols();
  return j;
}

nlohmann::json trace_to_json(const RegretTrace& trace) {
  json j;
  j["run_id"] = trace.run_id;
  j["seed"] = trace.seed;
  j["algorithm"] = algorithm_name(trace.algorithm);
  j["final_regret"] = trace.final_regret;
  j["l_star"] = trace.l_star;
  json rows = json::array();
  for (const TraceRow& r : trace.rows) {
    rows.push_back({{"t", r.t},
                    {"expert", r.expert},
                    {"loss", r.loss},
                    {"cum_loss", r.cum_loss},
                    {"best_cum_loss", r.best_cum_loss},
                    {"eta", r.eta},
                    {"active_alg", r.active_alg},
                    {"u_hat_ftl", r.u_hat_ftl},
                    {"u_hat_gftpl", r.u_hat_gftpl}});
  }
  j["rows"] = std::move(rows);
  return j;
}

nlohmann::json summary_to_json(const AggregateSummary& summary) {
  json j;
  j["t"] = summary.t;
  j["runs"] = summary.runs;
  j["mean_final_regret"] = summary.mean_final_regret;
  j["stderr_final_regret"] = summary.stderr_final_regret;
  j["mean_l_star"] = summary.mean_l_star;
  j["mean_regret_curve"] = summary.mean_regret_curve;
  if (summary.bounds_set) {
    j["upper_bound"] = summary.upper_bound;
    j["lower_bound"] = summary.lower_bound_value;
  }
  return j;
}

std::string summary_to_csv(const AggregateSummary& summary) {
  std::string out = "t,mean_regret\n";
  for (std::size_t r = 0; r < summary.mean_regret_curve.size(); ++r) {
    out += std::to_string(r + 1);
    out += ',';
    out += fmt(summary.mean_regret_curve[r]);
    out += '\n';
  }
  std::ostringstream footer;
  footer << "# runs=" << summary.runs
         << " mean_final_regret=" << fmt(summary.mean_final_regret)
         << " stderr=" << fmt(summary.stderr_final_regret)
         << " mean_l_star=" << fmt(summary.mean_l_star);
  if (summary.bounds_set)
    footer << " upper_bound=" << fmt(summary.upper_bound)
           << " lower_bound=" << fmt(summary.lower_bound_value);
  footer << '\n';
  out += footer.str();
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace gftpl
