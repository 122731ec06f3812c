// graphmix: plan, generate and check degree-preserving rewiring ensembles.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "graphmix.hpp"
#include "graphmix/json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace graphmix;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_convergence = 3;
constexpr int manifest_schema = 1;

// Raised for flag combinations CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const CLI::Validator open_unit_interval =
    CLI::Validator([](std::string& s) -> std::string {
      double x = 0;
      std::istringstream in(s);
      if (!(in >> x) || !(x > 0.0 && x < 1.0)) return "must lie strictly between 0 and 1";
      return {};
    },
                   "(0,1)");

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create directory " + dir.string() + ": " + ec.message());
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
}

void write_text(const fs::path& file, const std::string& text) {
  ensure_parent(file);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + file.string());
  out << text;
  if (!out) throw InvalidInput("write failed for " + file.string());
}

std::string fixed(double x, int digits) {
  std::ostringstream out;
  out << std::setprecision(digits) << x;
  return out.str();
}

// "all" or "sample:p". Sampled edges are a fixed-size random subset.
struct TrackSpec {
  bool all = true;
  double fraction = 1.0;
};

TrackSpec parse_track(const std::string& text) {
  if (text == "all") return {};
  const std::string prefix = "sample:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const double p = std::stod(text.substr(prefix.size()), &used);
      if (used == text.size() - prefix.size() && p > 0.0 && p <= 1.0) return {false, p};
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--track expects 'all' or 'sample:p' with p in (0, 1]");
}

std::vector<Edge> tracked_pairs(const Graph& g, const TrackSpec& spec, std::uint64_t seed) {
  auto edges = g.edges();
  if (spec.all) return edges;
  const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.fraction * edges.size())));
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) std::swap(edges[i], edges[i + rng.below(edges.size() - i)]);
  edges.resize(keep);
  std::sort(edges.begin(), edges.end());
  return edges;
}

// Comma list of thinning factors; "4m" or "0.5m" means multiples of the edge count.
std::vector<std::uint64_t> parse_schedule(const std::string& text, std::size_t m) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw UsageError("empty entry in --k-schedule");
    const bool scaled = item.back() == 'm';
    if (scaled) item.pop_back();
    double value = 0;
    std::size_t used = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(value > 0)) throw UsageError("bad --k-schedule entry '" + item + "'");
    const auto k = static_cast<std::uint64_t>(std::llround(scaled ? value * static_cast<double>(m) : value));
    if (k == 0) throw UsageError("--k-schedule entries must be at least 1");
    out.push_back(k);
  }
  if (out.empty()) throw UsageError("--k-schedule is empty");
  return out;
}

json pair_json(const Graph& g, const Edge& e) { return {{"u", g.original_id(e.u)}, {"v", g.original_id(e.v)}}; }

// ---------------------------------------------------------------------------
// plan

struct PlanArgs {
  std::optional<std::size_t> edges;
  std::string input;
  double epsilon = 0;
  SwapMode mode = SwapMode::dd;
};

int cmd_plan(const PlanArgs& a) {
  std::optional<Graph> g;
  std::size_t m = 0;
  if (a.edges) {
    m = *a.edges;
  } else {
    g = load_graph(a.input, true);
    m = g->edge_count();
  }
  const auto steps = stopping_steps(m, a.epsilon, a.mode);
  const double gamma = gamma_lower_bound(m, a.mode);
  std::cout << "mode " << to_string(a.mode) << '\n'
            << "edges " << m << '\n'
            << "epsilon " << fixed(a.epsilon, 6) << '\n'
            << "steps " << steps << '\n'
            << "steps_per_edge " << fixed(static_cast<double>(steps) / static_cast<double>(m), 6) << '\n'
            << "gamma_lower_bound " << fixed(gamma, 6) << '\n';

  // Tolerance reached after N = c * m steps: eps = exp(-N * gamma).
  std::cout << "\nmultiplier epsilon\n";
  for (double c : {0.5, 1.0, 5.0, 7.5, 10.0, 15.0}) {
    std::cout << fixed(c, 3) << "m " << fixed(std::exp(-c * static_cast<double>(m) * gamma), 6) << '\n';
  }

  if (g) {
    const auto profile = degree_profile(*g);
    double gmin = INFINITY, gmax = 0, amin = INFINITY, amax = 0, bmin = INFINITY, bmax = 0;
    for (const auto& e : g->edges()) {
      const auto model = model_for_pair(*g, profile, e.u, e.v, a.mode);
      gmin = std::min(gmin, model.gamma());
      gmax = std::max(gmax, model.gamma());
      amin = std::min(amin, model.alpha);
      amax = std::max(amax, model.alpha);
      bmin = std::min(bmin, model.beta);
      bmax = std::max(bmax, model.beta);
    }
    std::cout << "\nrates over present edges: min max\n"
              << "alpha " << fixed(amin, 6) << ' ' << fixed(amax, 6) << '\n'
              << "beta " << fixed(bmin, 6) << ' ' << fixed(bmax, 6) << '\n'
              << "gamma " << fixed(gmin, 6) << ' ' << fixed(gmax, 6) << '\n';
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string input;
  SwapMode mode = SwapMode::dd;
  std::size_t count = 1;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> steps;
  std::uint64_t seed = 1;
  std::string out_dir;
  unsigned threads = 0;
  bool continuous = false;
};

std::string replica_name(std::size_t i, std::size_t count) {
  const auto width = std::max<std::size_t>(4, std::to_string(count > 0 ? count - 1 : 0).size());
  std::ostringstream out;
  out << "graph_" << std::setw(static_cast<int>(width)) << std::setfill('0') << i << ".edges";
  return out.str();
}

int cmd_generate(const GenerateArgs& a) {
  const Graph input = load_graph(a.input, true);
  const std::size_t m = input.edge_count();
  const std::uint64_t steps = a.steps ? *a.steps : stopping_steps(m, *a.epsilon, a.mode);
  const fs::path dir(a.out_dir);
  ensure_dir(dir);

  std::vector<ChainStats> stats(a.count);
  if (a.continuous) {
    // One chain, sampled every `steps` steps.
    Graph g = input;
    Rng rng(derive_seed(a.seed, 0));
    for (std::size_t i = 0; i < a.count; ++i) {
      stats[i] = run_chain(g, a.mode, steps, rng);
      stats[i].seed = derive_seed(a.seed, 0);
      save_graph((dir / replica_name(i, a.count)).string(), g);
    }
  } else {
    parallel_for(a.count, resolve_threads(a.threads), [&](std::size_t i) {
      Graph g = input;
      stats[i] = run_chain_seeded(g, a.mode, steps, derive_seed(a.seed, i));
      save_graph((dir / replica_name(i, a.count)).string(), g);
    });
  }

  json replicas = json::array();
  for (std::size_t i = 0; i < a.count; ++i) {
    replicas.push_back({{"index", i}, {"file", replica_name(i, a.count)}, {"stats", stats[i]}});
  }
  json manifest = {{"schema", manifest_schema},
                   {"tool", "graphmix"},
                   {"version", std::string(version)},
                   {"command", "generate"},
                   {"input", a.input},
                   {"vertices", input.vertex_count()},
                   {"edges", m},
                   {"mode", std::string(to_string(a.mode))},
                   {"count", a.count},
                   {"steps", steps},
                   {"epsilon", a.epsilon ? json(*a.epsilon) : json(nullptr)},
                   {"seed", a.seed},
                   {"seed_scheme", "derive_seed(seed, i) = mix64(mix64(seed) ^ mix64(i + 1))"},
                   {"continuous", a.continuous},
                   {"replicas", replicas}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "wrote " << a.count << " graphs of " << steps << " steps each to " << dir.string() << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------------------
// diagnose

struct DiagnoseArgs {
  std::string input;
  SwapMode mode = SwapMode::dd;
  std::string schedule;
  std::string track;
  std::optional<std::uint64_t> chain_steps;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;
  std::uint64_t max_order_k = 0;
};

int cmd_diagnose(const DiagnoseArgs& a) {
  Graph g = load_graph(a.input, true);
  const std::size_t m = g.edge_count();
  const auto schedule = a.schedule.empty() ? default_k_schedule(m) : parse_schedule(a.schedule, m);
  const auto track = a.track.empty() ? (m <= 10000 ? TrackSpec{} : TrackSpec{false, 0.1}) : parse_track(a.track);
  const auto max_k = *std::max_element(schedule.begin(), schedule.end());
  const std::uint64_t steps = a.chain_steps ? *a.chain_steps : 10000 * static_cast<std::uint64_t>(m);
  const std::uint64_t fair_coin_length = required_length(0.5, 0.5);
  if (steps / max_k < fair_coin_length) {
    std::cerr << "warning: chain of " << steps << " steps leaves " << steps / max_k << " samples at k = " << max_k
              << ", below " << fair_coin_length << "; slow edges will be reported as too short\n";
  }

  const auto pairs = tracked_pairs(g, track, derive_seed(a.seed, 1));
  SeriesRecorder recorder(g, pairs);
  const auto stats = run_chain_seeded(g, a.mode, steps, derive_seed(a.seed, 0), recorder);
  const auto series = recorder.series();

  SweepOptions opt;
  opt.k_schedule = schedule;
  opt.threads = resolve_threads(a.threads);
  opt.max_order_k = a.max_order_k;
  const auto report = independence_sweep(series, opt);

  json edges = json::array();
  std::size_t too_short = 0;
  for (const auto& e : report.edges) {
    json rec = pair_json(g, e.pair);
    rec["status"] = std::string(to_string(e.status));
    if (e.status == EdgeStatus::unresolved) rec["reason"] = std::string(to_string(e.reason));
    too_short += e.reason == UnresolvedReason::too_short;
    rec["k_prime"] = e.k_prime;
    rec["alpha_hat"] = e.alpha_hat;
    rec["beta_hat"] = e.beta_hat;
    rec["n_prime"] = e.n_prime;
    rec["k_independent"] = e.k_independent ? json(*e.k_independent) : json(nullptr);
    json bic = json::array();
    for (const auto& d : e.delta_bic_at_k) bic.push_back(d ? json(*d) : json(nullptr));
    rec["delta_bic_at_k"] = bic;
    edges.push_back(std::move(rec));
  }
  json doc = {{"schema", manifest_schema},
              {"tool", "graphmix"},
              {"version", std::string(version)},
              {"command", "diagnose"},
              {"input", a.input},
              {"edges", m},
              {"mode", std::string(to_string(a.mode))},
              {"chain_steps", steps},
              {"seed", a.seed},
              {"track", track.all ? std::string("all") : "sample:" + fixed(track.fraction, 6)},
              {"tracked", pairs.size()},
              {"k_schedule", report.k_schedule},
              {"stats", stats},
              {"resolved", report.resolved},
              {"unresolved", report.unresolved},
              {"records", edges}};

  std::ostringstream csv;
  csv << "k,k_over_m,independent,resolved,fraction\n";
  for (const auto& p : report.curve) {
    csv << p.k << ',' << fixed(static_cast<double>(p.k) / static_cast<double>(m), 6) << ',' << p.independent << ','
        << p.resolved << ',' << fixed(p.fraction, 6) << '\n';
  }
  const fs::path out(a.out);
  ensure_dir(out);
  write_text(out / "report.json", doc.dump(2) + "\n");
  write_text(out / "fraction.csv", csv.str());
  std::cout << csv.str();
  if (too_short > 0) std::cerr << "warning: " << too_short << " edges had series shorter than n'\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  std::vector<std::string> files;
  std::string out;
  unsigned threads = 0;
  std::size_t all_pairs_limit = DiameterOptions{}.all_pairs_limit;
  std::size_t max_bfs = DiameterOptions{}.max_bfs;
};

int cmd_metrics(const MetricsArgs& a) {
  struct Row {
    std::string clustering, diameter, exactness, lambda;
    bool converged = true;
  };
  std::vector<Row> rows(a.files.size());
  DiameterOptions dopt;
  dopt.all_pairs_limit = a.all_pairs_limit;
  dopt.max_bfs = a.max_bfs;
  parallel_for(a.files.size(), resolve_threads(a.threads), [&](std::size_t i) {
    const auto csr = load_graph(a.files[i], true).csr();
    Row& row = rows[i];
    try {
      row.clustering = fixed(global_clustering(csr), 12);
    } catch (const UndefinedMetric&) {
      row.clustering = "nan";
    }
    const auto d = diameter(csr, dopt);
    row.diameter = std::to_string(d.value);
    row.exactness = d.exact ? "exact" : "lower_bound";
    try {
      row.lambda = fixed(max_laplacian_eigenvalue(csr), 12);
    } catch (const ConvergenceError& e) {
      row.lambda = fixed(e.best_estimate(), 12);
      row.converged = false;
    } catch (const InvalidInput&) {
      row.lambda = "nan";
    }
  });

  std::ostringstream csv;
  csv << "file,clustering,diameter,diameter_exactness,lambda_max\n";
  bool converged = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv << a.files[i] << ',' << rows[i].clustering << ',' << rows[i].diameter << ',' << rows[i].exactness << ','
        << rows[i].lambda << '\n';
    if (!rows[i].converged) {
      converged = false;
      std::cerr << "warning: eigenvalue iteration did not converge for " << a.files[i] << '\n';
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(a.out, csv.str());
  }
  return converged ? exit_ok : exit_convergence;
}

// ---------------------------------------------------------------------------
// gr

struct GrArgs {
  std::string input;
  SwapMode mode = SwapMode::dd;
  std::optional<std::uint64_t> disperse_steps;
  std::size_t chains = 3;
  std::optional<std::uint64_t> series_length;
  std::uint64_t seed = 1;
  std::string track;
  std::string out;
  double threshold = 1.1;
  unsigned threads = 0;
  bool identical = false;
};

int cmd_gr(const GrArgs& a) {
  if (a.chains < 2) throw UsageError("--chains must be at least 2");
  const Graph input = load_graph(a.input, true);
  const std::size_t m = input.edge_count();
  const std::uint64_t disperse = a.disperse_steps ? *a.disperse_steps : 100 * static_cast<std::uint64_t>(m);
  if (!a.disperse_steps) {
    std::cerr << "warning: using desk-scale --disperse-steps " << disperse
              << " (100 m); full-scale runs use 10000 m\n";
  }
  const std::uint64_t length = a.series_length ? *a.series_length : 50 * static_cast<std::uint64_t>(m);
  if (length < 99) throw UsageError("--series-length must be at least 99");
  const auto track = a.track.empty() ? (m <= 10000 ? TrackSpec{} : TrackSpec{false, 0.1}) : parse_track(a.track);
  const auto pairs = tracked_pairs(input, track, derive_seed(a.seed, 1));

  // Start i is the input after i + 1 chained burns of `disperse` steps.
  std::vector<Graph> starts;
  {
    Graph g = input;
    Rng rng(derive_seed(a.seed, 2));
    for (std::size_t c = 0; c < a.chains; ++c) {
      if (!a.identical || c == 0) run_chain(g, a.mode, disperse, rng);
      starts.push_back(g);
    }
  }

  std::vector<std::vector<EdgeSeries>> per_chain(a.chains);
  parallel_for(a.chains, resolve_threads(a.threads), [&](std::size_t c) {
    Graph g = starts[c];
    SeriesRecorder rec(g, pairs);
    run_chain_seeded(g, a.mode, length, derive_seed(a.seed, 3 + (a.identical ? 0 : c)), rec);
    per_chain[c] = rec.series();
  });

  std::vector<double> values;
  std::ostringstream csv;
  csv << "u,v,r_hat\n";
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    std::vector<EdgeSeries> chains;
    bool moving = false;
    for (std::size_t c = 0; c < a.chains; ++c) {
      chains.push_back(per_chain[c][p]);
      moving = moving || !chains.back().constant();
    }
    const double r = gelman_rubin(chains);
    csv << input.original_id(pairs[p].u) << ',' << input.original_id(pairs[p].v) << ',' << fixed(r, 10) << '\n';
    if (moving) values.push_back(r);
  }
  if (!a.out.empty()) write_text(a.out, csv.str());

  double median = 1.0, max = 1.0;
  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    max = values.back();
  }
  std::cout << "tracked " << pairs.size() << '\n'
            << "non_constant " << values.size() << '\n'
            << "r_hat_median " << fixed(median, 8) << '\n'
            << "r_hat_max " << fixed(max, 8) << '\n';
  if (median > a.threshold) {
    std::cerr << "warning: median R_hat " << median << " exceeds " << a.threshold << '\n';
    return exit_convergence;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-preserving rewiring ensembles and mixing diagnostics"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  // Mode text is parsed after the command line is accepted.
  std::string mode_text = "dd";
  auto add_mode = [&mode_text](CLI::App* cmd, SwapMode&) {
    cmd->add_option("--mode", mode_text, "dd or jdd")->check(CLI::IsMember({"dd", "jdd"}));
  };
  auto add_threads = [](CLI::App* cmd, unsigned& threads) {
    cmd->add_option("--threads", threads, "worker threads (default GRAPHMIX_THREADS or all cores)");
  };

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "stopping time for a tolerance");
  auto* edges_opt = plan_cmd->add_option("--edges", plan.edges, "edge count m")->check(CLI::PositiveNumber);
  auto* input_opt = plan_cmd->add_option("--input", plan.input, "edge list")->check(CLI::ExistingFile);
  edges_opt->excludes(input_opt);
  plan_cmd->add_option("--epsilon", plan.epsilon, "tolerance in (0,1)")->required()->check(open_unit_interval);
  add_mode(plan_cmd, plan.mode);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "ensemble of independent rewired graphs");
  gen_cmd->add_option("--input", gen.input, "edge list")->required();
  add_mode(gen_cmd, gen.mode);
  gen_cmd->add_option("--count", gen.count, "number of graphs")->check(CLI::NonNegativeNumber);
  auto* eps_opt = gen_cmd->add_option("--epsilon", gen.epsilon, "tolerance in (0,1)")->check(open_unit_interval);
  auto* steps_opt = gen_cmd->add_option("--steps", gen.steps, "steps per graph");
  eps_opt->excludes(steps_opt);
  gen_cmd->add_option("--seed", gen.seed, "master seed");
  gen_cmd->add_option("--out-dir", gen.out_dir, "output directory")->required();
  gen_cmd->add_flag("--continuous", gen.continuous, "sample one long chain every N steps");
  add_threads(gen_cmd, gen.threads);

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "per-edge independence sweep over thinning factors");
  diag_cmd->add_option("--input", diag.input, "edge list")->required();
  add_mode(diag_cmd, diag.mode);
  diag_cmd->add_option("--k-schedule", diag.schedule, "comma list, e.g. 1m,2m,4m or 500,1000");
  diag_cmd->add_option("--track", diag.track, "all or sample:p");
  diag_cmd->add_option("--chain-steps", diag.chain_steps, "chain length K (default 10000 m)")
      ->check(CLI::PositiveNumber);
  diag_cmd->add_option("--seed", diag.seed, "master seed");
  diag_cmd->add_option("--out", diag.out, "output directory")->required();
  diag_cmd->add_option("--max-order-k", diag.max_order_k, "cap on the first-order thinning search");
  add_threads(diag_cmd, diag.threads);

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "clustering, diameter and largest Laplacian eigenvalue");
  met_cmd->add_option("files", met.files, "edge lists")->required();
  met_cmd->add_option("--out", met.out, "CSV path (default stdout)");
  met_cmd->add_option("--all-pairs-limit", met.all_pairs_limit, "largest component size for all-pairs BFS");
  met_cmd->add_option("--max-bfs", met.max_bfs, "BFS budget for the fringe search");
  add_threads(met_cmd, met.threads);

  GrArgs gr;
  auto* gr_cmd = app.add_subcommand("gr", "multi-chain potential scale reduction per tracked edge");
  gr_cmd->add_option("--input", gr.input, "edge list")->required();
  add_mode(gr_cmd, gr.mode);
  gr_cmd->add_option("--disperse-steps", gr.disperse_steps, "burn between chain starts (default 100 m)");
  gr_cmd->add_option("--chains", gr.chains, "number of chains, at least 2");
  gr_cmd->add_option("--series-length", gr.series_length, "steps recorded per chain (default 50 m)");
  gr_cmd->add_option("--seed", gr.seed, "master seed");
  gr_cmd->add_option("--track", gr.track, "all or sample:p");
  gr_cmd->add_option("--out", gr.out, "per-edge CSV path");
  gr_cmd->add_option("--threshold", gr.threshold, "median R_hat above this exits with status 3");
  gr_cmd->add_flag("--identical-chains", gr.identical, "start every chain from the same state and seed");
  add_threads(gr_cmd, gr.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  plan.mode = gen.mode = diag.mode = gr.mode = parse_swap_mode(mode_text);
  try {
    if (*plan_cmd) {
      if (!plan.edges && plan.input.empty()) throw UsageError("plan needs --edges or --input");
      return cmd_plan(plan);
    }
    if (*gen_cmd) {
      if (!gen.epsilon && !gen.steps) throw UsageError("generate needs --epsilon or --steps");
      return cmd_generate(gen);
    }
    if (*diag_cmd) return cmd_diagnose(diag);
    if (*met_cmd) return cmd_metrics(met);
    if (*gr_cmd) return cmd_gr(gr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  }
  return exit_usage;
}
