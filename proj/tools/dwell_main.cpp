#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using dwell::cli::RunConfig;

// Flags shared by every subcommand. Values given on the command line win
// over the config file, which wins over the built-in defaults.
struct Flags {
  RunConfig cli;
  std::string config_path;
  CLI::Option* g = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* bc = nullptr;
  CLI::Option* x_max = nullptr;
  CLI::Option* n_points = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* max_iter = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* table = nullptr;
  CLI::Option* resolution = nullptr;

  void attach(CLI::App& sub) {
    g = sub.add_option("--g", cli.g, "coupling g > 0");
    a = sub.add_option("--a", cli.a, "shape parameter a > 0");
    bc = sub.add_option("--bc", cli.bc, "boundary condition I (f(inf)=1) or II (f(0)=1)");
    x_max = sub.add_option("--x-max", cli.x_max, "right end of the solver grid");
    n_points = sub.add_option("--n-points", cli.n_points, "intervals per grid panel (even)");
    tol = sub.add_option("--tol", cli.tol, "stop when |E_n - E_{n-1}| < tol");
    max_iter = sub.add_option("--max-iter", cli.max_iter, "iteration cap");
    out = sub.add_option("--out", cli.out, "output directory");
    format = sub.add_option("--format", cli.format, "csv or json");
    sub.add_option("--config", config_path, "JSON config file");
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) dwell::cli::load_config_file(c, config_path);
    auto take = [](CLI::Option* o, auto& dst, const auto& src) {
      if (o && o->count() > 0) dst = src;
    };
    take(g, c.g, cli.g);
    take(a, c.a, cli.a);
    take(bc, c.bc, cli.bc);
    take(x_max, c.x_max, cli.x_max);
    take(n_points, c.n_points, cli.n_points);
    take(tol, c.tol, cli.tol);
    take(max_iter, c.max_iter, cli.max_iter);
    take(out, c.out, cli.out);
    take(format, c.format, cli.format);
    take(table, c.table, cli.table);
    take(resolution, c.resolution, cli.resolution);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of V = (g^2/2)(x^2-1)^2(x^2+a) by monotone iteration"};
  app.require_subcommand(1);

  Flags solve_f, table_f, region_f, oracle_f, verify_f;
  auto* solve = app.add_subcommand("solve", "run the iteration for one (g, a, bc)");
  solve_f.attach(*solve);
  auto* table = app.add_subcommand("table", "recompute a reference table (1, 2 or 3) and diff it");
  table_f.attach(*table);
  table_f.table = table->add_option("which,--which", table_f.cli.table, "table number")->check(CLI::Range(1, 3));
  auto* region = app.add_subcommand("region", "trace sign curves and the critical shape");
  region_f.attach(*region);
  region_f.resolution = region->add_option("--resolution", region_f.cli.resolution, "samples of a per curve");
  auto* oracle = app.add_subcommand("oracle", "finite-difference reference ground state");
  oracle_f.attach(*oracle);
  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  verify_f.attach(*verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dwell::cli::kExitConfig;
  }

  auto run = [&](Flags& f, auto cmd) {
    RunConfig c;
    try {
      c = f.resolve();
    } catch (const dwell::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return dwell::cli::kExitConfig;
    }
    return cmd(c, std::cout, std::cerr);
  };
  if (*solve) return run(solve_f, dwell::cli::cmd_solve);
  if (*table) return run(table_f, dwell::cli::cmd_table);
  if (*region) return run(region_f, dwell::cli::cmd_region);
  if (*oracle) return run(oracle_f, dwell::cli::cmd_oracle);
  return run(verify_f, dwell::cli::cmd_verify);
}
