#include "polynash/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>

#include "polynash/constraints.hpp"
#include "polynash/io.hpp"
#include "polynash/oracles.hpp"

namespace polynash {

double ExperimentConfig::resolved_p() const {
  if (p >= 0) return p;
  if (d >= 0 && n > 0) return std::min(1.0, d / n);
  return 0.5;
}

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd sample_table(int k, const std::string& model, std::mt19937_64& rng) {
  Eigen::MatrixXd m(k, k);
  if (model == "uniform") {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m(r, c) = uniform01(rng);
  } else if (model == "coordination") {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m(r, c) = r == c ? 1.0 : 0.0;
  } else if (model == "anticoordination") {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m(r, c) = r == c ? 0.0 : 1.0;
  } else {
    throw Error("unknown payoff model: " + model);
  }
  return m;
}

}  // namespace

GeneratedInstance generate_instance(const ExperimentConfig& cfg) {
  GeneratedInstance out;
  if (cfg.model == "fromfile") {
    if (cfg.game_file.empty()) throw Error("fromfile model needs a game file");
    out.game = game_from_json(read_file(cfg.game_file));
    out.graph = graph_of(out.game);
  } else {
    out.graph = sample_gnp(cfg.n, cfg.resolved_p(), cfg.seed);
    out.game.num_players = cfg.n;
    out.game.num_actions = cfg.k;
    std::mt19937_64 rng(mix_seed(cfg.seed ^ 0x706f6c79ull));
    for (const auto& [i, j] : out.graph.edge_list()) {
      PolymatrixGame::Edge e;
      e.i = i;
      e.j = j;
      e.pay_ij = sample_table(cfg.k, cfg.model, rng);
      e.pay_ji = sample_table(cfg.k, cfg.model, rng);
      out.game.edges.push_back(std::move(e));
    }
  }
  out.rescaled = rescale(out.game);
  return out;
}

std::string config_to_json_fragment(const ExperimentConfig& cfg) {
  JsonWriter w;
  w.begin_object();
  w.key("n").value(cfg.n);
  w.key("k").value(cfg.k);
  w.key("p").value(cfg.resolved_p());
  w.key("model").value(cfg.model);
  w.key("l_target").value(cfg.l_target);
  w.key("eps").value(cfg.eps);
  w.key("ell").value(cfg.ell);
  w.key("seed").value(static_cast<std::uint64_t>(cfg.seed));
  w.key("trials").value(cfg.trials);
  w.key("rounds").value(cfg.rounds);
  w.key("target_delta").value(cfg.target_delta);
  w.key("smallset_cutoff").value(cfg.smallset_cutoff);
  w.key("include_conditioned").value(cfg.include_conditioned);
  w.key("tol").value(cfg.tol);
  w.key("eps_eff").value(cfg.eps_eff);
  w.key("max_iterations").value(cfg.max_iterations);
  w.key("inject_contradiction").value(cfg.inject_contradiction);
  w.end_object();
  return w.str();
}

namespace {

void append_violations(JsonWriter& w, const FamilyViolations& v) {
  w.begin_object();
  w.key("normalization").value(v.normalization);
  w.key("booleanity").value(v.booleanity);
  w.key("coloring").value(v.coloring);
  w.key("cpce").value(v.cpce);
  w.key("custom").value(v.custom);
  w.key("psd_min_eigenvalue").value(v.psd_min_eigenvalue);
  w.key("max_violation").value(v.max_violation());
  w.end_object();
}

std::string solver_report_json(const SolveOutcome& outcome) {
  JsonWriter w;
  w.begin_object();
  w.key("status").value(status_name(outcome.status));
  w.key("iterations").value(outcome.iterations);
  w.key("heuristic_infeasibility").value(outcome.infeasibility_heuristic);
  w.key("violations");
  append_violations(w, outcome.violations);
  w.end_object();
  return w.str() + "\n";
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult res;

  GeneratedInstance inst = generate_instance(cfg);
  const RescaledGame& game = inst.rescaled;
  const Graph& graph = inst.graph;
  res.smoothness_l = game.smoothness;

  const bool writing = !cfg.out_dir.empty();
  std::filesystem::path dir(cfg.out_dir);
  if (writing) {
    std::filesystem::create_directories(dir);
    write_file((dir / "game.json").string(), game_to_json(inst.game));
    write_file((dir / "graph.json").string(), graph_to_json(graph));
  }

  // Constraints and solve.
  ConstraintSystem sys = build_constraints(game, graph, cfg.ell, cfg.eps);
  if (cfg.inject_contradiction) {
    // pE[a_00] pinned to both 0 and 1.
    for (double rhs : {0.0, 1.0}) {
      LinearConstraint c;
      c.family = ConstraintFamily::Custom;
      c.equality = true;
      c.terms = {{sys.basis->index({sys.basis->var_id(0, 0)}), 1.0}};
      c.rhs = rhs;
      c.finalize();
      sys.constraints.push_back(std::move(c));
      ++sys.family_counts[ConstraintFamily::Custom];
    }
  }

  SolveOptions sopts;
  sopts.tolerance = cfg.tol;
  sopts.max_iterations = cfg.max_iterations;
  sopts.seed = cfg.seed;
  res.solve = solve_feasible(sys, sopts);

  double solve_seconds = res.solve.seconds;
  double total_seconds = 0;
  const double L = game.smoothness;
  res.eps_eff = cfg.eps_eff >= 0 ? cfg.eps_eff : 120.0 * L * cfg.eps;

  std::string rounding_error;
  int final_exit = kExitOk;
  std::string status = "ok";

  if (res.solve.status != SolveStatus::Feasible) {
    final_exit = kExitSolver;
    status = "solver_failed";
  } else {
    const Pseudoexpectation& pe0 = *res.solve.point;
    res.delta_before = pe0.average_local_correlation(graph);
    res.delta_after = res.delta_before;

    const double target =
        cfg.target_delta >= 0
            ? cfg.target_delta
            : (L > 0 ? cfg.eps * cfg.eps / (L * L) : std::numeric_limits<double>::infinity());
    const int budget = cfg.rounds >= 0 ? std::min(cfg.rounds, cfg.ell - 2)
                                       : std::max(cfg.ell - 2, 0);

    Pseudoexpectation conditioned = pe0;
    std::vector<int> conditioned_players;
    try {
      if (budget > 0 && res.delta_before > target) {
        // Best of independent trials; one good conditioning suffices.
        RoundingResult best{pe0, {}};
        best.trace.final_delta = res.delta_before;
        for (int trial = 0; trial < std::max(cfg.trials, 1); ++trial) {
          RoundingResult r = conditioning_round_random(
              pe0, graph, target, budget, mix_seed(cfg.seed + 0x726e64ull + trial));
          if (trial == 0 || r.trace.final_delta < best.trace.final_delta) best = std::move(r);
        }
        conditioned = best.pe;
        res.rounding_trace = best.trace;
        res.rounds_used = best.trace.rounds;
        res.delta_after = best.trace.final_delta;
        res.rounding_converged = best.trace.converged;
        for (const auto& s : best.trace.steps) conditioned_players.push_back(s.player);
      } else {
        res.rounding_converged = res.delta_before <= target;
      }
    } catch (const Error& e) {
      rounding_error = e.what();
      final_exit = kExitRounding;
      status = "rounding_failed";
    }

    if (final_exit == kExitOk) {
      BrpConfig bcfg;
      bcfg.epsilon = cfg.eps;
      bcfg.smallset_cutoff = cfg.smallset_cutoff;
      bcfg.include_conditioned = cfg.include_conditioned;
      bcfg.conditioned_players = conditioned_players;
      res.pursuit = best_response_pursuit(conditioned, game, graph, bcfg);

      res.verification = verify_epsilon_nash(game, res.pursuit.gamma, res.eps_eff);
      res.welfare = social_welfare(game, res.pursuit.gamma);
      res.measured_c = L > 0 && cfg.eps > 0 ? res.pursuit.max_phi / (L * cfg.eps) : 0.0;

      if (!res.pursuit.trace.converged) {
        final_exit = kExitPursuit;
        status = "pursuit_not_converged";
      } else if (!res.verification.pass) {
        final_exit = kExitVerification;
        status = "verification_failed";
      }
    }
  }

  res.exit_code = final_exit;
  res.status = status;
  total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  // Summary (deterministic) and timing sidecar (not).
  {
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("status").value(res.status);
    w.key("exit_code").value(res.exit_code);
    w.key("config");
    w.begin_object();
    w.key("n").value(cfg.n);
    w.key("k").value(cfg.k);
    w.key("p").value(cfg.resolved_p());
    w.key("model").value(cfg.model);
    w.key("l_target").value(cfg.l_target);
    w.key("eps").value(cfg.eps);
    w.key("ell").value(cfg.ell);
    w.key("seed").value(static_cast<std::uint64_t>(cfg.seed));
    w.key("trials").value(cfg.trials);
    w.key("tol").value(cfg.tol);
    w.end_object();
    w.key("game");
    w.begin_object();
    w.key("num_edges").value(game.num_edges);
    w.key("avg_degree").value(game.avg_degree);
    w.key("smoothness_l").value(game.smoothness);
    w.end_object();
    w.key("solver");
    w.begin_object();
    w.key("status").value(status_name(res.solve.status));
    w.key("iterations").value(res.solve.iterations);
    w.key("violations");
    append_violations(w, res.solve.violations);
    w.end_object();
    w.key("rounding");
    w.begin_object();
    w.key("rounds_used").value(res.rounds_used);
    w.key("delta_before").value(res.delta_before);
    w.key("delta_after").value(res.delta_after);
    w.key("converged").value(res.rounding_converged);
    if (!rounding_error.empty()) w.key("error").value(rounding_error);
    w.end_object();
    w.key("pursuit");
    w.begin_object();
    w.key("iterations").value(res.pursuit.trace.termination_iteration);
    w.key("converged").value(res.pursuit.trace.converged);
    w.end_object();
    w.key("max_phi").value(res.pursuit.max_phi);
    w.key("argmax_player").value(res.pursuit.argmax_player);
    w.key("max_phi_conditioned").value(res.pursuit.max_phi_conditioned);
    w.key("eps_eff").value(res.eps_eff);
    w.key("pass").value(res.verification.pass);
    w.key("measured_c").value(res.measured_c);
    w.key("welfare").value(res.welfare);
    w.key("trace_paths");
    w.begin_object();
    if (writing) {
      w.key("rounding_csv").value((dir / "rounding_trace.csv").string());
      w.key("pursuit_csv").value((dir / "pursuit_trace.csv").string());
      w.key("solver_report").value((dir / "solver_report.json").string());
    }
    w.end_object();
    w.end_object();
    res.summary_json = w.str() + "\n";
  }
  {
    JsonWriter w;
    w.begin_object();
    w.key("solve_seconds").value(solve_seconds);
    w.key("total_seconds").value(total_seconds);
    w.end_object();
    res.timings_json = w.str() + "\n";
  }

  if (writing) {
    write_file((dir / "summary.json").string(), res.summary_json);
    write_file((dir / "timings.json").string(), res.timings_json);
    write_file((dir / "solver_report.json").string(), solver_report_json(res.solve));
    write_file((dir / "rounding_trace.csv").string(), rounding_trace_csv(res.rounding_trace));
    write_file((dir / "pursuit_trace.csv").string(), pursuit_trace_csv(res.pursuit.trace));
  }
  return res;
}

}  // namespace polynash
