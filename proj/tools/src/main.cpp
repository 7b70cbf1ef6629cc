#include <iostream>

#include "CLI11.hpp"
#include "qrlab_cli/commands.hpp"

namespace {

using qrlab::cli::RunConfig;

void add_map_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--map", c.map, "catalog selector, e.g. radial_stretch:alpha=0.5");
  cmd->add_option("--grid", c.grid, "grid samples CSV (x1..xn,f1..fn)");
  cmd->add_option("--meta", c.meta, "grid JSON sidecar");
  cmd->add_option("--omega", c.omega, "domain, ball:c1,..,cn,R or box:l1,..,ln,h1,..,hn");
}

void add_run_flags(CLI::App* cmd, RunConfig& c) {
  add_map_flags(cmd, c);
  cmd->add_option("--compact", c.compact, "compact set V inside the domain");
  cmd->add_option("--center", c.center, "profile center a");
  cmd->add_option("--k1", c.k1, "override K1");
  cmd->add_option("--k2", c.k2, "override K2");
  cmd->add_option("--alpha", c.alpha, "Hoelder exponent: auto or a value in (0, 1]");
  cmd->add_option("--radii", c.radii, "number of profile radii");
  cmd->add_option("--pairs", c.pairs, "point pairs for the Hoelder estimate");
  cmd->add_option("--samples", c.samples, "differential samples for the distortion checks");
  cmd->add_option("--tol-rel", c.tol_rel, "relative quadrature tolerance");
  cmd->add_option("--budget", c.budget, "integrand evaluations per integral");
}

void add_output_flags(CLI::App* cmd, RunConfig& c, bool with_csv) {
  cmd->add_option("--seed", c.seed, "64-bit seed");
  cmd->add_option("--out", c.out, "JSON report path, - for stdout");
  if (with_csv) cmd->add_option("--csv", c.csv, "CSV output path");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "omit the timestamp from the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrlab: numerical checks for (K1, K2)-quasiregular mappings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QRLAB_VERSION_STRING);

  RunConfig config;
  std::optional<std::size_t> n_filter;
  qrlab::cli::GridExportConfig grid;

  auto* catalog = app.add_subcommand("catalog", "list catalog mappings");
  catalog->add_option("--n", n_filter, "only entries available in dimension n");
  add_output_flags(catalog, config, false);

  auto* analyze = app.add_subcommand("analyze", "run every check on one mapping");
  add_run_flags(analyze, config);
  add_output_flags(analyze, config, true);

  auto* verify = app.add_subcommand("verify", "run check suites; exit 0 iff all pass");
  verify->add_option("--suite", config.suites, "all or comma-separated check names")->take_all();
  add_run_flags(verify, config);
  add_output_flags(verify, config, true);

  auto* fit = app.add_subcommand("fit", "fit the minimal distortion frontier");
  add_map_flags(fit, config);
  fit->add_option("--samples-csv", config.samples_csv, "CSV of a,b rows (a = |J|, b = |Df|^n)");
  fit->add_option("--samples", config.samples, "differential samples drawn from --map");
  add_output_flags(fit, config, true);

  auto* grid_export = app.add_subcommand("grid-export", "sample a catalog mapping onto a grid");
  add_map_flags(grid_export, config);
  grid_export->add_option("--shape", grid.shape, "nodes per axis")->required()->delimiter(',');
  grid_export->add_option("--box", grid.box, "grid box, box:l1,..,ln,h1,..,hn");
  grid_export->add_option("--grid-out", grid.csv_path, "CSV path")->required();
  grid_export->add_option("--meta-out", grid.meta_path, "JSON sidecar path")->required();
  add_output_flags(grid_export, config, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qrlab::cli::kExitUsage;
  }

  try {
    qrlab::cli::CommandResult result;
    if (*catalog) {
      config.command = "catalog";
      result = qrlab::cli::cmd_catalog(config, n_filter);
    } else if (*analyze) {
      config.command = "analyze";
      result = qrlab::cli::cmd_analyze(config);
    } else if (*verify) {
      config.command = "verify";
      result = qrlab::cli::cmd_verify(config);
    } else if (*fit) {
      config.command = "fit";
      result = qrlab::cli::cmd_fit(config);
    } else {
      config.command = "grid-export";
      result = qrlab::cli::cmd_grid_export(config, grid);
    }
    qrlab::cli::emit(config, result);
    return result.exit_code;
  } catch (const qrlab::cli::CheckAborted& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (config.out && *config.out != "-") {
      qrlab::cli::Json j{{"schema", 1}, {"error", {{"check", e.check()}, {"message", e.what()}}}};
      try {
        qrlab::cli::write_atomic(*config.out, j.dump(2) + "\n");
      } catch (const qrlab::Error&) {
      }
    }
    return e.exit_code();
  } catch (const qrlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qrlab::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qrlab::cli::kExitUsage;
  }
}
