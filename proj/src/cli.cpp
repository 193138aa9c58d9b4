#include "isingdc/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isingdc/bench.hpp"
#include "isingdc/generate.hpp"
#include "isingdc/io.hpp"

namespace isingdc {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string spins_text(const SpinVector& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i] > 0 ? "1" : "-1";
  }
  return out;
}

struct MatvecFlags {
  std::size_t workers = 1;
  std::size_t block_size = 1024;
  MatvecConfig config() const { return {workers, block_size}; }
};

void add_matvec_flags(CLI::App* cmd, MatvecFlags& f) {
  cmd->add_option("--workers", f.workers, "Matvec worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--block-size", f.block_size, "Tile edge for blocked products")
      ->check(CLI::PositiveNumber);
}

struct GenArgs {
  std::string kind = "sk";
  std::size_t n = 0;
  double p = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  bool as_graph = false;
};

struct SolveArgs {
  std::string instance;
  std::string solver = "adoch";
  std::optional<double> eta;
  std::int64_t q = 5;
  std::optional<std::int64_t> iters;
  std::optional<double> seconds;
  std::uint64_t seed = 0;
  std::string trace_out;
  std::string format = "csv";
  std::int64_t stride = 1;
  std::string solution_out;
  MatvecFlags mv;
};

struct BenchArgs {
  std::string spec;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> iters;
  std::optional<double> seconds;
  MatvecFlags mv;
};

int do_gen(const GenArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  spec.kind = generator_kind_from_string(a.kind);
  spec.n = a.n;
  spec.connectivity_pct = a.p;
  spec.seed = a.seed;
  CouplingMatrix M = generate(spec);
  ProblemInstance inst{M, std::nullopt, fs::path(a.out).stem().string(), std::nullopt,
                       std::nullopt};
  if (a.as_graph) {
    // The generated matrix is taken as edge weights W.
    EdgeListGraph g = instance_to_graph(
        ProblemInstance{maxcut_to_ising(M), std::nullopt, {}, std::nullopt, std::nullopt});
    inst = graph_to_instance(g, inst.name);
  }
  save_instance(a.out, inst);
  out << "wrote " << a.out << " (" << to_string(spec.kind) << ", n=" << spec.n << ")\n";
  return 0;
}

int do_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemInstance inst = load_instance(a.instance);
  SolverConfig cfg;
  cfg.kind = solver_kind_from_string(a.solver);
  cfg.eta = a.eta;
  cfg.lookback_q = a.q;
  cfg.iters = a.iters;
  cfg.seconds = a.seconds;
  SolveOptions opts;
  opts.matvec = a.mv.config();
  opts.trace_stride = a.stride;
  const auto format = trace_format_from_string(a.format);
  const PreparedSolver solver(inst, cfg, opts);
  const SolveResult r = solver.run(a.seed);
  if (!a.trace_out.empty()) write_trace_file(a.trace_out, r.trace, format);
  if (!a.solution_out.empty()) {
    std::ofstream f(a.solution_out);
    if (!f) throw std::runtime_error("cannot write '" + a.solution_out + "'");
    f << spins_text(r.spins) << '\n';
  }
  out << "solver " << solver.label() << '\n';
  if (solver.doch_params()) {
    const auto& p = *solver.doch_params();
    out << "eta " << fmt17(p.eta) << "\nalpha " << fmt17(p.alpha) << "\nbeta " << fmt17(p.beta)
        << '\n';
  }
  out << "energy " << fmt17(r.energy) << '\n';
  if (r.cut_value) out << "cut " << fmt17(*r.cut_value) << '\n';
  out << "iterations " << r.iterations << "\nconverged " << (r.converged ? "yes" : "no")
      << "\nelapsed_s " << fmt17(r.elapsed_s) << '\n';
  if (r.spins.size() <= 64) out << "spins " << spins_text(r.spins) << '\n';
  return 0;
}

int do_bench(const BenchArgs& a, std::ostream& out) {
  BenchSpec spec = load_bench_spec(a.spec);
  if (a.seed) spec.seed = *a.seed;
  spec.matvec = a.mv.config();
  for (auto& s : spec.solvers) {
    if (a.iters) s.iters = a.iters;
    if (a.seconds) s.seconds = a.seconds;
  }
  const BenchReport report = run_bench(spec);
  fs::create_directories(a.out_dir);
  const fs::path dir = a.out_dir;
  {
    std::ofstream f(dir / "report.json");
    write_report_json(f, report);
  }
  {
    std::ofstream f(dir / "summary.csv");
    write_summary_csv(f, report);
  }
  {
    std::ofstream f(dir / "traces_long.csv");
    write_long_csv(f, report);
  }
  out << "instance " << report.instance_name << " (n=" << report.n << ")\n";
  if (report.reference_energy) {
    out << "reference " << fmt17(*report.reference_energy) << " (" << report.reference_source
        << ")\n";
  }
  out << std::left << std::setw(10) << "solver" << std::setw(24) << "best" << std::setw(24)
      << "mean" << "tts\n";
  for (const auto& s : report.solvers) {
    out << std::setw(10) << s.label << std::setw(24) << fmt17(s.best_energy) << std::setw(24)
        << fmt17(s.mean_energy) << (s.tts ? s.tts->describe() : std::string("-")) << '\n';
  }
  out << "wrote " << (dir / "report.json").string() << ", summary.csv, traces_long.csv\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ising solvers based on a difference-of-convex Hamiltonian", "isingdc"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark instance");
  gen_cmd->add_option("--kind", gen.kind, "sk | dense_pm1 | sparse_9bit | procedural_sin");
  gen_cmd->add_option("-n,--n", gen.n, "Spin count")->required();
  gen_cmd->add_option("-p,--connectivity", gen.p, "Connectivity percent (sparse_9bit)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("-o,--out", gen.out, ".icsr, .json or edge-list path")->required();
  gen_cmd->add_flag("--as-graph", gen.as_graph, "Treat the matrix as MAX-CUT weights W");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run one solver on an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--solver", solve.solver, "doch | adoch | sa | bsb | simcim | sia");
  solve_cmd->add_option("--eta", solve.eta, "alpha = eta * lambda_max(-J); tuned when unset");
  solve_cmd->add_option("--q", solve.q, "ADOCH look-back depth")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--budget-iters", solve.iters, "Iteration budget");
  solve_cmd->add_option("--budget-seconds", solve.seconds, "Wall-clock budget");
  solve_cmd->add_option("--seed", solve.seed, "Run seed");
  solve_cmd->add_option("--trace-out", solve.trace_out, "Trace file");
  solve_cmd->add_option("--format", solve.format, "Trace format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  solve_cmd->add_option("--stride", solve.stride, "Trace every k iterations")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--solution-out", solve.solution_out, "Write the best spins");
  add_matvec_flags(solve_cmd, solve.mv);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark spec (JSON)");
  bench_cmd->add_option("spec", bench.spec, "Bench spec file")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for report files");
  bench_cmd->add_option("--seed", bench.seed, "Override the base seed");
  bench_cmd->add_option("--budget-iters", bench.iters, "Override every solver's iterations");
  bench_cmd->add_option("--budget-seconds", bench.seconds, "Override every solver's time");
  add_matvec_flags(bench_cmd, bench.mv);

  std::string conv_in, conv_out;
  auto* conv_cmd = app.add_subcommand("convert", "Convert between instance formats");
  conv_cmd->add_option("input", conv_in, "Source (.icsr, .json or edge list)")->required();
  conv_cmd->add_option("output", conv_out, "Destination")->required();

  std::string oracle_in;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact ground state by enumeration (n <= 24)");
  oracle_cmd->add_option("instance", oracle_in, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (*gen_cmd) return do_gen(gen, out);
    if (*solve_cmd) return do_solve(solve, out);
    if (*bench_cmd) return do_bench(bench, out);
    if (*conv_cmd) {
      save_instance(conv_out, load_instance(conv_in));
      out << "wrote " << conv_out << '\n';
      return 0;
    }
    if (*oracle_cmd) {
      const auto g = brute_force_ground_state(load_instance(oracle_in));
      out << "energy " << fmt17(g.energy) << "\nspins " << spins_text(g.spins) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace isingdc
