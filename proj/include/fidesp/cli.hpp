#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fidesp/krylov.hpp"
#include "fidesp/pipeline.hpp"

namespace fidesp::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSingular = 3,
  kResource = 4,
};

using GridPair = std::pair<std::size_t, std::size_t>;
using OrderPair = std::pair<double, double>;

struct RunConfig {
  // problem
  FractionalParams params;
  std::string coefficient = "x";  ///< "x", "one" or "constant"
  double coefficient_value = 1.0;
  std::string q = "t2";            ///< "t2", "t", "one"
  std::string f_true = "xsinpix";  ///< "xsinpix", "sinpix", "none"
  std::string phi0 = "zero";       ///< "zero", "sinpix"
  // grid
  std::vector<GridPair> grids;
  // solver
  double tol = 1e-8;
  std::optional<std::size_t> maxit;  ///< empty: system size
  std::string precond = "both";      ///< "none", "PN", "SN", "both"
  PrecondSide side = PrecondSide::Left;
  // output
  std::string csv_path;
  std::uint64_t seed = 0;
  bool seed_given = false;  ///< output.seed present in the document
  std::size_t jobs = 1;
  double mem_budget_mb = 2048.0;
  std::string spectra_dir;  ///< per-grid eigenvalue CSVs when nonempty
  double cluster_eps = 1e-6;
  std::size_t symbol_samples = 256;
  std::size_t symbol_order = 10000;
  std::size_t symbol_n = 64;  ///< n used for the tempered step of |h|
  std::vector<OrderPair> orders;  ///< table1 order pairs (empty: all three)
  std::vector<GridPair> table_grids;  ///< table1 grid override

  bool constant_coefficient() const { return coefficient != "x"; }
};

/// Parses a config document. Errors carry the offending field path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Seed precedence: explicit override, config value, FIDESP_SEED, 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config);

ProblemSpec make_problem(const RunConfig& cfg, double xi, double eta,
                         std::size_t m, std::size_t n);

struct RunRow {
  std::size_t m = 0, n = 0;
  double xi = 0, eta = 0, rho = 0, lambda = 0, epsilon = 0;
  std::uint64_t seed = 0;
  PrecondChoice precond = PrecondChoice::None;
  std::size_t iterations = 0;
  bool converged = false;
  double final_relres = 0.0;
  std::optional<double> rel_error_f;
  double wall_time_s = 0.0;
  bool refused = false;  ///< memory budget could not hold a single basis vector
};

inline constexpr const char* kRunHeader =
    "m,n,xi,eta,rho,lambda,epsilon,seed,precond,iterations,converged,"
    "final_relres,rel_error_f,wall_time_s";

std::vector<PrecondChoice> precond_choices(const std::string& s);

/// Runs every (grid, order, precond) cell and returns rows sorted by key.
std::vector<RunRow> run_cells(const RunConfig& cfg,
                              const std::vector<OrderPair>& orders,
                              const std::vector<GridPair>& grids,
                              const std::vector<PrecondChoice>& preconds,
                              std::ostream& log);

void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows);

/// Fixed-width iteration table: rows (m,n), column pairs (-, PN) per order.
void write_table(std::ostream& os, const std::vector<RunRow>& rows,
                 const std::vector<OrderPair>& orders,
                 const std::vector<GridPair>& grids);

int cmd_run(const RunConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_table1(const RunConfig& cfg, std::ostream& table, std::ostream& csv,
               std::ostream& log);
int cmd_spectra(const RunConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_symbols(const RunConfig& cfg, std::ostream& csv);

/// The three order pairs and 2^4..2^8 grids of the reference iteration table.
std::vector<OrderPair> table1_orders();
std::vector<GridPair> table1_grids();

}  // namespace fidesp::cli
