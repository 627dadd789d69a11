// Command-line front end: run, table1, spectra, symbols.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fidesp/cli.hpp"
#include "fidesp/errors.hpp"

namespace {

using namespace fidesp;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> mem_budget_mb;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("config", c.config_path, "JSON configuration file")->required();
  sub->add_option("--seed", c.seed, "noise seed (overrides config and FIDESP_SEED)");
  sub->add_option("--out", c.out, "CSV output path (overrides output.csv; '-' for stdout)");
  sub->add_option("--mem-budget-mb", c.mem_budget_mb, "Krylov basis memory budget");
  sub->add_option("--jobs", c.jobs, "cells run concurrently");
}

cli::RunConfig load(const Common& c) {
  cli::RunConfig cfg = cli::load_config(c.config_path);
  cfg.seed = cli::resolve_seed(
      c.seed, cfg.seed_given ? std::optional<std::uint64_t>(cfg.seed) : std::nullopt);
  if (!c.out.empty()) cfg.csv_path = c.out;
  if (c.mem_budget_mb) {
    if (!(*c.mem_budget_mb > 0.0)) throw ConfigError("--mem-budget-mb must be > 0");
    cfg.mem_budget_mb = *c.mem_budget_mb;
  }
  if (c.jobs) {
    if (*c.jobs == 0) throw ConfigError("--jobs must be >= 1");
    cfg.jobs = *c.jobs;
  }
  return cfg;
}

template <class Fn>
int with_csv(const cli::RunConfig& cfg, Fn&& fn) {
  if (cfg.csv_path.empty() || cfg.csv_path == "-") return fn(std::cout);
  std::ofstream out(cfg.csv_path);
  if (!out) throw ConfigError("cannot open output file '" + cfg.csv_path + "'");
  return fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse source reconstruction for a tempered time / Caputo space "
               "fractional diffusion equation"};
  app.require_subcommand(1);

  Common run_opts, table_opts, spectra_opts, symbols_opts;
  auto* run = app.add_subcommand("run", "solve every configured grid cell, one CSV row each");
  add_common(run, run_opts);
  auto* table = app.add_subcommand("table1", "iteration-count table over 2^4..2^8 grids");
  add_common(table, table_opts);
  auto* spectra = app.add_subcommand("spectra", "dense eigen/singular value diagnostics");
  add_common(spectra, spectra_opts);
  auto* symbols = app.add_subcommand("symbols", "sample the generating functions");
  add_common(symbols, symbols_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kConfigError;
  }

  try {
    if (*run) {
      const auto cfg = load(run_opts);
      return with_csv(cfg, [&](std::ostream& os) { return cli::cmd_run(cfg, os, std::cerr); });
    }
    if (*table) {
      const auto cfg = load(table_opts);
      if (cfg.csv_path.empty() || cfg.csv_path == "-") {
        std::ostringstream discard;
        return cli::cmd_table1(cfg, std::cout, discard, std::cerr);
      }
      return with_csv(cfg, [&](std::ostream& os) {
        return cli::cmd_table1(cfg, std::cout, os, std::cerr);
      });
    }
    if (*spectra) {
      const auto cfg = load(spectra_opts);
      return with_csv(cfg, [&](std::ostream& os) { return cli::cmd_spectra(cfg, os, std::cerr); });
    }
    if (*symbols) {
      const auto cfg = load(symbols_opts);
      return with_csv(cfg, [&](std::ostream& os) { return cli::cmd_symbols(cfg, os); });
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const SingularityError& e) {
    std::cerr << "singular system: " << e.what() << '\n';
    return cli::kSingular;
  } catch (const BreakdownError& e) {
    std::cerr << "solver breakdown: " << e.what() << '\n';
    return cli::kSingular;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return cli::kResource;
  }
  return cli::kOk;
}
