// Command-line surface: PTM certification, experiment execution, and the
// stability / noise / counterexample probes. Exit codes: 0 success,
// 1 check failure, 2 usage or parse error.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "gftpl/algorithms.hpp"
#include "gftpl/formats.hpp"
#include "gftpl/noise.hpp"
#include "gftpl/oracle.hpp"
#include "gftpl/ptm.hpp"
#include "gftpl/simulation.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    gftpl::atomic_write(out_path, text);
}

std::vector<double> parse_column(const json& j) {
  std::vector<double> col;
  for (const auto& v : j) col.push_back(v.get<double>());
  return col;
}

// ---------------------------------------------------------------------------

int cmd_verify_ptm(const std::string& config_path, double gamma_flag,
                   const std::string& out_path) {
  json cfg = gftpl::load_json(config_path);
  gftpl::Game game = gftpl::parse_game(cfg.at("game"));
  gftpl::Ptm ptm = gftpl::parse_ptm(cfg.at("ptm"), game);
  ptm.validate();

  json report;
  bool all_pass = true;

  gftpl::AdmissibilityReport adm = gftpl::admissibility_delta(ptm);
  report["admissibility"] = {{"admissible", adm.admissible},
                             {"delta", adm.delta}};
  if (adm.violating_pair)
    report["admissibility"]["identical_rows"] = {adm.violating_pair->first,
                                                 adm.violating_pair->second};
  all_pass &= adm.admissible;

  double gamma = gamma_flag > 0.0
                     ? gamma_flag
                     : ptm.declared_gamma.value_or(0.0);
  json approx;
  if (game.has_action_space()) {
    if (gamma <= 0.0) {
      auto g = gftpl::min_gamma(ptm, game);
      if (g) gamma = *g;
    }
    if (gamma <= 0.0) {
      approx["feasible"] = false;
      all_pass = false;
    } else {
      gftpl::ApproximabilityReport rep =
          gftpl::approximability_check(ptm, game, gamma);
      approx["feasible"] = rep.feasible;
      approx["gamma"] = gamma;
      approx["gamma_star"] = rep.gamma_star;
      if (rep.infeasible_pair)
        approx["infeasible_at"] = {rep.infeasible_pair->first,
                                   rep.infeasible_pair->second};
      all_pass &= rep.feasible;
    }
  } else {
    if (gamma <= 0.0) gamma = ptm.num_cols();
    gftpl::ApproximabilityReport rep = gftpl::strong_approx_check(ptm, gamma);
    approx["feasible"] = rep.feasible;
    approx["gamma"] = gamma;
    approx["gamma_star"] = rep.gamma_star;
    approx["loss_independent"] = true;
    all_pass &= rep.feasible;
  }
  report["approximability"] = approx;

  if (!ptm.datasets.empty()) {
    gftpl::CheckResult impl = gftpl::implementability_check(ptm, game);
    report["implementability"] = {{"pass", impl.pass},
                                  {"max_residual", impl.max_residual}};
    all_pass &= impl.pass;
    try {
      gftpl::NegativeFlip flip = gftpl::negative_flip_datasets(ptm, game);
      gftpl::CheckResult neg = gftpl::negative_implementability_check(
          flip.rows, flip.datasets, game);
      report["negative_implementability"] = {
          {"pass", neg.pass}, {"max_residual", neg.max_residual}};
      all_pass &= neg.pass;
    } catch (const std::exception& e) {
      report["negative_implementability"] = {{"skipped", true},
                                             {"reason", e.what()}};
    }
  }

  report["pass"] = all_pass;
  emit(report, out_path);
  return all_pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_flag,
            const std::string& seeds_file, int jobs,
            const std::string& format) {
  json cfg_json = gftpl::load_json(config_path);
  gftpl::ExperimentConfig cfg = gftpl::parse_experiment(cfg_json);
  if (seed_flag) cfg.seeds = {*seed_flag};
  if (!seeds_file.empty()) {
    cfg.seeds.clear();
    json seeds = gftpl::load_json(seeds_file);
    for (const auto& s : seeds) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty())
      throw gftpl::FormatError("seeds file is empty: " + seeds_file);
  }

  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);

  struct Task {
    gftpl::AlgorithmFamily alg;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (gftpl::AlgorithmFamily alg : cfg.algorithms)
    for (std::uint64_t seed : cfg.seeds) tasks.push_back({alg, seed});

  std::vector<gftpl::RegretTrace> traces(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size() || failed.load()) break;
      try {
        traces[i] = gftpl::run(tasks[i].alg, *cfg.game, cfg.env,
                               cfg.ptm ? &*cfg.ptm : nullptr, cfg.t,
                               tasks[i].seed, cfg.opts);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  int workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("run failed: " + first_error);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::string stem = traces[i].run_id;
    if (format == "json") {
      emit(gftpl::trace_to_json(traces[i]), (dir / (stem + ".json")).string());
    } else {
      gftpl::atomic_write((dir / (stem + ".csv")).string(),
                          gftpl::trace_to_csv(traces[i]));
    }
  }

  double gamma = cfg.opts.gamma > 0.0
                     ? cfg.opts.gamma
                     : (cfg.ptm && cfg.ptm->declared_gamma
                            ? *cfg.ptm->declared_gamma
                            : 1.0);
  for (gftpl::AlgorithmFamily alg : cfg.algorithms) {
    std::vector<gftpl::RegretTrace> batch;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].alg == alg) batch.push_back(traces[i]);
    gftpl::AggregateSummary summary = gftpl::aggregate(batch);
    if (cfg.ptm)
      gftpl::attach_bounds(summary, cfg.game->num_experts(),
                           cfg.ptm->num_cols(), gamma, cfg.opts.c);
    std::string stem = "summary-" + gftpl::algorithm_name(alg);
    if (format == "json")
      emit(gftpl::summary_to_json(summary), (dir / (stem + ".json")).string());
    else
      gftpl::atomic_write((dir / (stem + ".csv")).string(),
                          gftpl::summary_to_csv(summary));
  }

  emit(gftpl::resolved_config(cfg), (dir / "resolved_config.json").string());
  return kOk;
}

// ---------------------------------------------------------------------------

int probe_stability(const std::string& config_path, int trials,
                    std::uint64_t seed, const std::string& out_path) {
  json cfg = gftpl::load_json(config_path);
  gftpl::Game game = gftpl::parse_game(cfg.at("game"));
  gftpl::Ptm ptm = gftpl::parse_ptm(cfg.at("ptm"), game);
  gftpl::StepSizeSchedule sched;
  sched.gamma = cfg.contains("gamma") ? cfg["gamma"].get<double>()
                                      : ptm.declared_gamma.value_or(1.0);
  sched.c = cfg.value("c", 1.0);

  std::vector<gftpl::Action> history;
  int idx = 1;
  for (const auto& col : cfg.value("history", json::array())) {
    gftpl::Action a;
    a.id = "h" + std::to_string(idx);
    a.values = parse_column(col);
    a.index = idx++;
    history.push_back(std::move(a));
  }
  gftpl::Action y_next;
  y_next.id = "y_next";
  y_next.values = parse_column(cfg.at("y_next"));

  gftpl::StabilityProbeReport rep;
  try {
    rep = gftpl::stability_probe(game, ptm, history, y_next, sched, trials,
                                 seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  json report;
  report["trials"] = rep.trials;
  report["eta"] = rep.eta;
  report["gamma"] = rep.gamma;
  report["bound"] = rep.bound;
  json experts = json::array();
  for (const auto& st : rep.experts) {
    experts.push_back({{"expert", st.expert},
                       {"p", st.p},
                       {"p_prime", st.p_prime},
                       {"ratio", std::isinf(st.ratio) ? json("inf")
                                                      : json(st.ratio)},
                       {"slack", st.slack},
                       {"tracked", st.tracked},
                       {"ok", st.ok}});
  }
  report["experts"] = std::move(experts);
  report["verdict"] = rep.verdict;
  emit(report, out_path);
  return rep.verdict ? kOk : kCheckFailed;
}

int probe_max_noise(const std::string& config_path, int trials,
                    std::uint64_t seed, const std::string& out_path) {
  json cfg = gftpl::load_json(config_path);
  std::vector<std::vector<double>> rows;
  if (cfg.contains("rows")) {
    for (const auto& row : cfg["rows"]) rows.push_back(parse_column(row));
  } else {
    rows = gftpl::binary_rep_ptm(cfg.at("k").get<int>()).rows;
  }
  int k = static_cast<int>(rows.size());
  int n = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  gftpl::NoiseSpec spec;
  if (cfg.contains("noise")) spec = gftpl::parse_noise(cfg["noise"]);
  spec.dimension = n;

  gftpl::McEstimate est = gftpl::mc_expected_max(rows, spec, trials, seed);
  double bound = gftpl::max_row_product_bound(k, n);
  bool ok = est.mean <= bound + 3.0 * est.stderr_;

  json report;
  report["k"] = k;
  report["n"] = n;
  report["trials"] = trials;
  report["mc_mean"] = est.mean;
  report["mc_stderr"] = est.stderr_;
  report["bound"] = bound;
  report["verdict"] = ok;
  emit(report, out_path);
  return ok ? kOk : kCheckFailed;
}

json counterexample_json(const gftpl::CounterexampleResult& res) {
  json report;
  report["p_t"] = res.p_t;
  report["p_t1"] = res.p_t1;
  report["ratio"] =
      std::isinf(res.ratio) ? json("inf") : json(res.ratio);
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbed-leader online learning toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, out_dir, seeds_file;
  std::string format = "csv";
  double gamma_flag = 0.0;
  int jobs = 1;
  int trials = 100000;
  std::uint64_t probe_seed = 1;

  CLI::App* verify = app.add_subcommand("verify-ptm", "Certify a PTM");
  verify->add_option("--config", config_path, "game + ptm descriptor file")
      ->required();
  verify->add_option("--gamma", gamma_flag, "target gamma");
  verify->add_option("--out", out_path, "report file (default: stdout)");

  CLI::App* run_cmd = app.add_subcommand("run", "Execute experiment runs");
  run_cmd->add_option("--config", config_path, "experiment config file")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", seed_value, "single seed override");
  run_cmd->add_option("--seeds", seeds_file, "seed list file (json array)");
  run_cmd->add_option("--jobs", jobs, "parallel workers");
  run_cmd->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* probe = app.add_subcommand("probe", "Diagnostic probes");
  probe->require_subcommand(1);
  CLI::App* p_stab = probe->add_subcommand("stability",
                      "Choice-distribution stability ratio probe");
  p_stab->add_option("--config", config_path)->required();
  p_stab->add_option("--trials", trials);
  p_stab->add_option("--seed", probe_seed);
  p_stab->add_option("--out", out_path);
  CLI::App* p_max = probe->add_subcommand("max-noise", "E[max] vs bound");
  p_max->add_option("--config", config_path)->required();
  p_max->add_option("--trials", trials);
  p_max->add_option("--seed", probe_seed);
  p_max->add_option("--out", out_path);
  CLI::App* p_cu = probe->add_subcommand("counterexample-uniform",
                                         "Uniform-noise survival ratio");
  double beta = 1.0, delta_t = 0.0, delta_t1 = 0.0;
  p_cu->add_option("--beta", beta)->required();
  p_cu->add_option("--delta-t", delta_t)->required();
  p_cu->add_option("--delta-t1", delta_t1)->required();
  p_cu->add_option("--out", out_path);
  CLI::App* p_cl = probe->add_subcommand("counterexample-laplace",
                                         "Laplace-noise survival ratio");
  double d12 = 0.0, d23 = 0.0;
  std::vector<double> next_losses;
  p_cl->add_option("--d12", d12)->required();
  p_cl->add_option("--d23", d23)->required();
  p_cl->add_option("--next-losses", next_losses, "three loss values")
      ->expected(3)
      ->required();
  p_cl->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (verify->parsed())
      return cmd_verify_ptm(config_path, gamma_flag, out_path);
    if (run_cmd->parsed())
      return cmd_run(config_path, out_dir,
                     *seed_opt ? std::optional<std::uint64_t>(seed_value)
                               : std::nullopt,
                     seeds_file, jobs, format);
    if (p_stab->parsed())
      return probe_stability(config_path, trials, probe_seed, out_path);
    if (p_max->parsed())
      return probe_max_noise(config_path, trials, probe_seed, out_path);
    if (p_cu->parsed()) {
      auto res = gftpl::counterexample_uniform(beta, delta_t, delta_t1);
      emit(counterexample_json(res), out_path);
      return kOk;
    }
    if (p_cl->parsed()) {
      auto res = gftpl::counterexample_laplace(d12, d23, next_losses);
      emit(counterexample_json(res), out_path);
      return kOk;
    }
  } catch (const gftpl::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsageError;
}
