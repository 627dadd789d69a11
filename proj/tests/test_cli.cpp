#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "fidesp/cli.hpp"
#include "fidesp/errors.hpp"

using namespace fidesp;
using namespace fidesp::cli;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(R"({
    "problem": {"xi": 0.2, "eta": 0.8, "lambda": 1e-3},
    "grid": {"pairs": [[16, 32], [64, 16]]},
    "solver": {"tol": 1e-6, "maxit": 50, "precond": "PN", "side": "right"},
    "output": {"csv": "out.csv", "seed": 9, "jobs": 2}
  })");
  CHECK(c.params.xi == 0.2);
  CHECK(c.params.lambda == 1e-3);
  CHECK(c.grids == std::vector<GridPair>{{16, 32}, {64, 16}});
  CHECK(c.maxit == std::optional<std::size_t>(50));
  CHECK(c.side == PrecondSide::Right);
  CHECK(c.seed == 9);
  CHECK(c.seed_given);
  CHECK(c.jobs == 2);

  const RunConfig d = parse_config(R"({"solver": {"maxit": "size"}})");
  CHECK_FALSE(d.maxit.has_value());
  CHECK(d.params.lambda == 5e-3);
  CHECK(d.params.epsilon == 0.01);
}

TEST_CASE("config errors name the field") {
  CHECK(config_error("{not json").find("line") != std::string::npos);
  CHECK(config_error(R"({"problem": {"xi": "half"}})").find("problem.xi") != std::string::npos);
  CHECK(config_error(R"({"problem": {"xi": 1.5}})").find("xi") != std::string::npos);
  CHECK(config_error(R"({"grid": {"pairs": [[16, 24]]}})").find("grid.pairs") != std::string::npos);
  CHECK(config_error(R"({"grid": {"pairs": [[0, 16]]}})").find("grid.pairs") != std::string::npos);
  CHECK(config_error(R"({"solver": {"tol": 0}})").find("solver.tol") != std::string::npos);
  CHECK(config_error(R"({"solver": {"precond": "ILU"}})").find("solver.precond") != std::string::npos);
  CHECK(config_error(R"({"solver": {"maxit": "lots"}})").find("solver.maxit") != std::string::npos);
  CHECK(config_error(R"({"solver": {"precond": "SN"}})").find("coefficient") != std::string::npos);
  CHECK(config_error(R"({"bogus": 1})").find("bogus") != std::string::npos);
  CHECK(config_error(R"({"problem": {"colour": 1}})").find("problem.colour") != std::string::npos);
  CHECK(config_error(R"({"problem": {"xi": 0.5, "eta": 0.5}})").empty());
}

TEST_CASE("seed precedence") {
  ::unsetenv("FIDESP_SEED");
  CHECK(resolve_seed(std::nullopt, std::nullopt) == 0);
  ::setenv("FIDESP_SEED", "77", 1);
  CHECK(resolve_seed(std::nullopt, std::nullopt) == 77);
  CHECK(resolve_seed(std::nullopt, 5) == 5);
  CHECK(resolve_seed(3, 5) == 3);
  ::setenv("FIDESP_SEED", "abc", 1);
  CHECK_THROWS_AS(resolve_seed(std::nullopt, std::nullopt), ConfigError);
  ::unsetenv("FIDESP_SEED");
}

TEST_CASE("empty grid list gives a header-only CSV") {
  RunConfig c = parse_config(R"({"grid": {"pairs": []}})");
  std::ostringstream csv, log;
  CHECK(cmd_run(c, csv, log) == kOk);
  CHECK(csv.str() == std::string(kRunHeader) + "\n");
}

TEST_CASE("run rows at (16,16)") {
  RunConfig c = parse_config(R"({"problem": {"xi": 0.2, "eta": 0.8},
                                 "grid": {"pairs": [[16, 16]]},
                                 "solver": {"precond": "both"}})");
  std::ostringstream csv1, csv2, log;
  REQUIRE(cmd_run(c, csv1, log) == kOk);
  REQUIRE(cmd_run(c, csv2, log) == kOk);
  const auto a = parse_csv(csv1.str()), b = parse_csv(csv2.str());
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  CHECK(a[1][8] == "none");
  CHECK(a[2][8] == "PN");
  const int unprec = std::stoi(a[1][9]), pn = std::stoi(a[2][9]);
  CHECK(std::abs(unprec - 66) <= 10);
  CHECK(std::abs(pn - 15) <= 3);
  CHECK(a[1][10] == "true");
  for (std::size_t r = 0; r < 3; ++r) {
    REQUIRE(a[r].size() == 14);
    for (std::size_t k = 0; k + 1 < 14; ++k) CHECK(a[r][k] == b[r][k]);
  }
}

TEST_CASE("memory budget turns into non-converged or refused rows") {
  RunConfig c = parse_config(R"({"grid": {"pairs": [[16, 16]]}, "solver": {"precond": "none"},
                                 "output": {"mem_budget_mb": 0.03}})");
  std::ostringstream csv, log;
  CHECK(cmd_run(c, csv, log) == kOk);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][10] == "false");

  c.mem_budget_mb = 1e-6;
  std::ostringstream csv2;
  CHECK(cmd_run(c, csv2, log) == kOk);
  CHECK(parse_csv(csv2.str()).size() == 1);
  CHECK(log.str().find("refused") != std::string::npos);
}

TEST_CASE("symbols output") {
  RunConfig c = parse_config(R"({"problem": {"xi": 0.5, "eta": 0.5},
                                 "output": {"symbols": {"samples": 32, "order": 2000}}})");
  std::ostringstream csv;
  CHECK(cmd_symbols(c, csv) == kOk);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 33);
  CHECK(rows[0] == std::vector<std::string>{"theta", "abs_g", "abs_h", "tail_g", "tail_h"});
  for (std::size_t i = 1; i <= 16; ++i) {
    CHECK(std::stod(rows[i][1]) == doctest::Approx(std::stod(rows[33 - i][1])).epsilon(1e-12));
    CHECK(std::stod(rows[i][2]) == doctest::Approx(std::stod(rows[33 - i][2])).epsilon(1e-12));
  }
}

TEST_CASE("spectra report and size cap") {
  RunConfig c = parse_config(R"({"problem": {"xi": 0.5, "eta": 0.5},
                                 "grid": {"pairs": [[4, 4], [8, 8]]}})");
  std::ostringstream csv, log;
  CHECK(cmd_spectra(c, csv, log) == kOk);
  const auto rows = parse_csv(csv.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "m");
  CHECK(rows[0][4] == "outliers");
  CHECK(std::stoul(rows[1][4]) <= 4);
  CHECK(std::stoul(rows[2][4]) <= 8);
  CHECK(std::stod(rows[1][10]) == 0.0);

  c.grids = {{64, 64}};
  std::ostringstream big;
  CHECK_THROWS_AS(cmd_spectra(c, big, log), ResourceError);
}

TEST_CASE("table grids") {
  CHECK(table1_orders().size() == 3);
  CHECK(table1_grids().size() == 25);
  CHECK(table1_grids().front() == GridPair{16, 16});
  CHECK(table1_grids().back() == GridPair{256, 256});
}
