#include "fidesp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fidesp/errors.hpp"
#include "fidesp/operators.hpp"
#include "fidesp/spectra.hpp"
#include "fidesp/symbols.hpp"

namespace fidesp::cli {

using nlohmann::json;

namespace {

// --- config parsing ---------------------------------------------------------

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json* child(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  if (!obj.is_object()) field_error(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) field_error(path + "." + it.key(), "unknown field");
  }
}

void read_number(const json& obj, const std::string& path, const char* key,
                 double& out) {
  if (const json* v = child(obj, path, key)) {
    if (!v->is_number()) field_error(path + "." + key, "expected a number");
    out = v->get<double>();
  }
}

std::size_t as_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    field_error(path, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

void read_count(const json& obj, const std::string& path, const char* key,
                std::size_t& out) {
  if (const json* v = child(obj, path, key)) out = as_count(*v, path + "." + key);
}

void read_string(const json& obj, const std::string& path, const char* key,
                 std::string& out, std::initializer_list<const char*> allowed) {
  const json* v = child(obj, path, key);
  if (!v) return;
  if (!v->is_string()) field_error(path + "." + key, "expected a string");
  out = v->get<std::string>();
  if (allowed.size() == 0) return;
  for (const char* a : allowed)
    if (out == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  field_error(path + "." + key, "'" + out + "' is not one of {" + list + "}");
}

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::vector<GridPair> read_pairs(const json& arr, const std::string& path) {
  if (!arr.is_array()) field_error(path, "expected an array of [m, n] pairs");
  std::vector<GridPair> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2) field_error(p, "expected [m, n]");
    const std::size_t m = as_count(e[0], p + "[0]");
    const std::size_t n = as_count(e[1], p + "[1]");
    if (m == 0 || n == 0) field_error(p, "m and n must be positive");
    if (!is_pow2(m) || !is_pow2(n)) field_error(p, "m and n must be powers of two");
    out.emplace_back(m, n);
  }
  return out;
}

void parse_problem(const json& p, RunConfig& c) {
  const std::string path = "problem";
  reject_unknown(p, path, {"xi", "eta", "rho", "lambda", "epsilon", "T", "coefficient",
                           "coefficient_value", "q", "f_true", "phi0"});
  read_number(p, path, "xi", c.params.xi);
  read_number(p, path, "eta", c.params.eta);
  read_number(p, path, "rho", c.params.rho);
  read_number(p, path, "lambda", c.params.lambda);
  read_number(p, path, "epsilon", c.params.epsilon);
  read_number(p, path, "T", c.params.T);
  read_string(p, path, "coefficient", c.coefficient, {"x", "one", "constant"});
  read_number(p, path, "coefficient_value", c.coefficient_value);
  if (c.coefficient == "one") c.coefficient_value = 1.0;
  if (c.coefficient != "x" && c.coefficient_value == 0.0)
    field_error(path + ".coefficient_value", "must be nonzero");
  read_string(p, path, "q", c.q, {"t2", "t", "one"});
  read_string(p, path, "f_true", c.f_true, {"xsinpix", "sinpix", "none"});
  read_string(p, path, "phi0", c.phi0, {"zero", "sinpix"});
  try {
    c.params.validate();
  } catch (const ParameterError& e) {
    field_error(path, e.what());
  }
}

void parse_solver(const json& s, RunConfig& c) {
  const std::string path = "solver";
  reject_unknown(s, path, {"tol", "maxit", "precond", "side"});
  read_number(s, path, "tol", c.tol);
  if (!(c.tol > 0.0)) field_error(path + ".tol", "must be > 0");
  if (const json* v = child(s, path, "maxit")) {
    if (v->is_string()) {
      if (v->get<std::string>() != "size")
        field_error(path + ".maxit", "expected \"size\" or a positive integer");
      c.maxit.reset();
    } else {
      const std::size_t k = as_count(*v, path + ".maxit");
      if (k == 0) field_error(path + ".maxit", "must be >= 1");
      c.maxit = k;
    }
  }
  read_string(s, path, "precond", c.precond, {"none", "PN", "SN", "both"});
  std::string side = c.side == PrecondSide::Left ? "left" : "right";
  read_string(s, path, "side", side, {"left", "right"});
  c.side = side == "left" ? PrecondSide::Left : PrecondSide::Right;
}

void parse_output(const json& o, RunConfig& c) {
  const std::string path = "output";
  reject_unknown(o, path, {"csv", "seed", "jobs", "mem_budget_mb", "spectra", "symbols"});
  std::string csv = c.csv_path;
  read_string(o, path, "csv", csv, {});
  c.csv_path = csv;
  if (const json* v = child(o, path, "seed")) {
    if (!v->is_number_unsigned() && !v->is_number_integer())
      field_error(path + ".seed", "expected an integer");
    c.seed = v->get<std::uint64_t>();
    c.seed_given = true;
  }
  read_count(o, path, "jobs", c.jobs);
  if (c.jobs == 0) field_error(path + ".jobs", "must be >= 1");
  read_number(o, path, "mem_budget_mb", c.mem_budget_mb);
  if (!(c.mem_budget_mb > 0.0)) field_error(path + ".mem_budget_mb", "must be > 0");
  if (const json* sp = child(o, path, "spectra")) {
    const std::string sp_path = path + ".spectra";
    reject_unknown(*sp, sp_path, {"dir", "cluster_eps"});
    read_string(*sp, sp_path, "dir", c.spectra_dir, {});
    read_number(*sp, sp_path, "cluster_eps", c.cluster_eps);
    if (!(c.cluster_eps > 0.0)) field_error(sp_path + ".cluster_eps", "must be > 0");
  }
  if (const json* sy = child(o, path, "symbols")) {
    const std::string sy_path = path + ".symbols";
    reject_unknown(*sy, sy_path, {"samples", "order", "n"});
    read_count(*sy, sy_path, "samples", c.symbol_samples);
    read_count(*sy, sy_path, "order", c.symbol_order);
    read_count(*sy, sy_path, "n", c.symbol_n);
    if (c.symbol_samples == 0 || c.symbol_order == 0 || c.symbol_n == 0)
      field_error(sy_path, "samples, order and n must be positive");
  }
}

// --- problem construction ---------------------------------------------------

ScalarFunction profile(const std::string& name) {
  if (name == "t2") return [](double t) { return t * t; };
  if (name == "t") return [](double t) { return t; };
  return [](double) { return 1.0; };
}

ScalarFunction space_function(const std::string& name) {
  if (name == "xsinpix")
    return [](double x) { return x * std::sin(std::numbers::pi * x); };
  if (name == "sinpix") return [](double x) { return std::sin(std::numbers::pi * x); };
  if (name == "zero") return [](double) { return 0.0; };
  return {};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int precond_rank(PrecondChoice c) { return static_cast<int>(c); }

bool row_less(const RunRow& a, const RunRow& b) {
  return std::tie(a.m, a.n, a.xi, a.eta) < std::tie(b.m, b.n, b.xi, b.eta) ||
         (std::tie(a.m, a.n, a.xi, a.eta) == std::tie(b.m, b.n, b.xi, b.eta) &&
          precond_rank(a.precond) < precond_rank(b.precond));
}

std::string pow2_label(std::size_t v) {
  std::size_t e = 0;
  while ((std::size_t{1} << e) < v) ++e;
  return (std::size_t{1} << e) == v ? "2^" + std::to_string(e) : std::to_string(v);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "problem" && key != "grid" && key != "solver" && key != "output" &&
        key != "table1") {
      field_error(key, "unknown block");
    }
  }
  RunConfig c;
  if (const json* p = child(doc, "config", "problem")) parse_problem(*p, c);
  if (const json* g = child(doc, "config", "grid")) {
    reject_unknown(*g, "grid", {"pairs"});
    if (const json* pairs = child(*g, "grid", "pairs")) c.grids = read_pairs(*pairs, "grid.pairs");
  }
  if (const json* s = child(doc, "config", "solver")) parse_solver(*s, c);
  if (const json* o = child(doc, "config", "output")) parse_output(*o, c);
  if (const json* t = child(doc, "config", "table1")) {
    reject_unknown(*t, "table1", {"orders", "grids"});
    if (const json* ord = child(*t, "table1", "orders")) {
      if (!ord->is_array()) field_error("table1.orders", "expected an array of [xi, eta]");
      const auto allowed = table1_orders();
      for (std::size_t i = 0; i < ord->size(); ++i) {
        const std::string p = "table1.orders[" + std::to_string(i) + "]";
        const json& e = (*ord)[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          field_error(p, "expected [xi, eta]");
        const OrderPair op{e[0].get<double>(), e[1].get<double>()};
        if (std::find(allowed.begin(), allowed.end(), op) == allowed.end())
          field_error(p, "must be one of [0.2,0.8], [0.5,0.5], [0.8,0.2]");
        c.orders.push_back(op);
      }
    }
    if (const json* pairs = child(*t, "table1", "grids")) {
      c.table_grids = read_pairs(*pairs, "table1.grids");
      for (std::size_t i = 0; i < c.table_grids.size(); ++i) {
        const auto [m, n] = c.table_grids[i];
        if (m < 16 || m > 256 || n < 16 || n > 256)
          field_error("table1.grids[" + std::to_string(i) + "]",
                      "m and n must lie in 2^4..2^8");
      }
    }
  }
  if (c.precond == "SN" && !c.constant_coefficient()) {
    field_error("solver.precond", "SN requires a constant coefficient");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("FIDESP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("FIDESP_SEED is not an integer");
    return v;
  }
  return 0;
}

ProblemSpec make_problem(const RunConfig& cfg, double xi, double eta,
                         std::size_t m, std::size_t n) {
  ProblemSpec s;
  s.params = cfg.params;
  s.params.xi = xi;
  s.params.eta = eta;
  s.params.validate();
  s.grid = Grid::make(m, n, s.params.T);
  if (cfg.coefficient == "x") {
    s.a = [](double x) { return x; };
  } else {
    const double v = cfg.coefficient_value;
    s.a = [v](double) { return v; };
  }
  s.q = profile(cfg.q);
  s.phi0 = space_function(cfg.phi0);
  s.f_true = space_function(cfg.f_true);
  s.seed = cfg.seed;
  return s;
}

std::vector<PrecondChoice> precond_choices(const std::string& s) {
  if (s == "both") return {PrecondChoice::None, PrecondChoice::Block};
  return {parse_precond(s)};
}

std::vector<RunRow> run_cells(const RunConfig& cfg,
                              const std::vector<OrderPair>& orders,
                              const std::vector<GridPair>& grids,
                              const std::vector<PrecondChoice>& preconds,
                              std::ostream& log) {
  struct Cell {
    OrderPair order;
    GridPair grid;
  };
  std::vector<Cell> cells;
  for (const auto& g : grids)
    for (const auto& o : orders) cells.push_back({o, g});

  std::vector<std::vector<RunRow>> results(cells.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      try {
        const auto [xi, eta] = cells[idx].order;
        const auto [m, n] = cells[idx].grid;
        const ProblemSpec spec = make_problem(cfg, xi, eta, m, n);
        const FinalData data = manufacture_final_data(spec);
        const std::size_t size = spec.grid.unknowns();
        const double budget_bytes = cfg.mem_budget_mb * 1024.0 * 1024.0;
        const auto basis_cap = static_cast<std::size_t>(
            budget_bytes / (8.0 * static_cast<double>(size)));

        for (PrecondChoice pc : preconds) {
          RunRow row;
          row.m = m;
          row.n = n;
          row.xi = xi;
          row.eta = eta;
          row.rho = spec.params.rho;
          row.lambda = spec.params.lambda;
          row.epsilon = spec.params.epsilon;
          row.seed = spec.seed;
          row.precond = pc;
          if (basis_cap < 2) {
            row.refused = true;
            std::lock_guard<std::mutex> lock(log_mutex);
            log << "refused cell m=" << m << " n=" << n << " precond="
                << to_string(pc) << ": memory budget below one basis vector\n";
            results[idx].push_back(row);
            continue;
          }
          GmresOptions opts;
          opts.tol = cfg.tol;
          opts.side = cfg.side;
          opts.record_residuals = false;
          opts.maxit = std::min(cfg.maxit.value_or(size), basis_cap - 1);
          const auto t0 = std::chrono::steady_clock::now();
          const InverseResult res = solve_inverse(spec, data.phi_eps, pc, opts);
          const auto t1 = std::chrono::steady_clock::now();
          row.iterations = res.report.iterations;
          row.converged = res.report.converged;
          row.final_relres = res.report.final_relres;
          row.rel_error_f = res.rel_error_f;
          row.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
          {
            std::lock_guard<std::mutex> lock(log_mutex);
            log << "m=" << m << " n=" << n << " xi=" << xi << " eta=" << eta
                << " precond=" << to_string(pc) << " iterations=" << row.iterations
                << (row.converged ? "" : " (not converged)") << '\n';
            if (!row.converged && opts.maxit < cfg.maxit.value_or(size)) {
              log << "  stopped by memory budget at " << opts.maxit
                  << " basis vectors\n";
            }
          }
          results[idx].push_back(row);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RunRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

void write_run_csv(std::ostream& os, const std::vector<RunRow>& rows) {
  os << kRunHeader << '\n';
  for (const RunRow& r : rows) {
    if (r.refused) continue;  // logged when refused; no measurement to report
    os << r.m << ',' << r.n << ',' << fmt17(r.xi) << ',' << fmt17(r.eta) << ','
       << fmt17(r.rho) << ',' << fmt17(r.lambda) << ',' << fmt17(r.epsilon) << ','
       << r.seed << ',' << to_string(r.precond) << ',' << r.iterations << ','
       << (r.converged ? "true" : "false") << ',' << fmt17(r.final_relres) << ','
       << (r.rel_error_f ? fmt17(*r.rel_error_f) : std::string()) << ','
       << fmt17(r.wall_time_s) << '\n';
  }
}

std::vector<OrderPair> table1_orders() { return {{0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}}; }

std::vector<GridPair> table1_grids() {
  std::vector<GridPair> g;
  for (std::size_t m = 16; m <= 256; m *= 2)
    for (std::size_t n = 16; n <= 256; n *= 2) g.emplace_back(m, n);
  return g;
}

void write_table(std::ostream& os, const std::vector<RunRow>& rows,
                 const std::vector<OrderPair>& orders,
                 const std::vector<GridPair>& grids) {
  std::map<std::tuple<std::size_t, std::size_t, double, double, int>, const RunRow*> index;
  for (const RunRow& r : rows)
    index[{r.m, r.n, r.xi, r.eta, precond_rank(r.precond)}] = &r;

  char buf[64];
  os << "             ";
  for (const auto& [xi, eta] : orders) {
    std::snprintf(buf, sizeof buf, "  xi=%-4g eta=%-4g", xi, eta);
    os << buf;
  }
  os << "\n   m      n  ";
  for (std::size_t i = 0; i < orders.size(); ++i) os << "        -       PN";
  os << '\n';
  auto cell = [&](const RunRow* r) -> std::string {
    if (r == nullptr || r->refused) return "-";
    return std::to_string(r->iterations) + (r->converged ? "" : "*");
  };
  for (const auto& [m, n] : grids) {
    std::snprintf(buf, sizeof buf, "%4s   %4s  ", pow2_label(m).c_str(),
                  pow2_label(n).c_str());
    os << buf;
    for (const auto& [xi, eta] : orders) {
      auto find = [&](PrecondChoice pc) -> const RunRow* {
        auto it = index.find({m, n, xi, eta, precond_rank(pc)});
        return it == index.end() ? nullptr : it->second;
      };
      std::snprintf(buf, sizeof buf, " %8s %8s", cell(find(PrecondChoice::None)).c_str(),
                    cell(find(PrecondChoice::Block)).c_str());
      os << buf;
    }
    os << '\n';
  }
}

int cmd_run(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  const auto rows = run_cells(cfg, {{cfg.params.xi, cfg.params.eta}}, cfg.grids,
                              precond_choices(cfg.precond), log);
  write_run_csv(csv, rows);
  return kOk;
}

int cmd_table1(const RunConfig& cfg, std::ostream& table, std::ostream& csv,
               std::ostream& log) {
  const auto orders = cfg.orders.empty() ? table1_orders() : cfg.orders;
  const auto grids = cfg.table_grids.empty() ? table1_grids() : cfg.table_grids;
  const auto rows = run_cells(cfg, orders, grids,
                              {PrecondChoice::None, PrecondChoice::Block}, log);
  write_table(table, rows, orders, grids);
  write_run_csv(csv, rows);
  return kOk;
}

int cmd_spectra(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
  for (const auto& [m, n] : cfg.grids) {
    const std::size_t size = (n + 1) * m;
    if (size > kDenseLimit) {
      throw ResourceError("spectra: grid m=" + std::to_string(m) + " n=" +
                          std::to_string(n) + " gives N=" + std::to_string(size) +
                          " above the dense limit " + std::to_string(kDenseLimit));
    }
  }
  csv << "m,n,N,nu,outliers,cluster_eps,nonunit_bound,dist_AN,dist_Bm,dist_Un,"
         "max_abs_eig_Bm_minus_1\n";
  for (const auto& [m, n] : cfg.grids) {
    const ProblemSpec spec = make_problem(cfg, cfg.params.xi, cfg.params.eta, m, n);
    const AllAtOnceOperator op(spec.blocks(), spec.params.lambda);
    const SpectralReport cluster = preconditioned_cluster(op, cfg.cluster_eps);
    const SpectralReport dist_a =
        distribution_check(op, spec.params, spec.grid, spec.a, cfg.symbol_order);
    const SpectralReport dist_b = toeplitz_distribution(
        op.blocks().space, space_symbol(spec.params.eta, cfg.symbol_order));
    const SpectralReport dist_u = toeplitz_distribution(
        op.blocks().time,
        time_symbol(spec.params.xi, spec.params.rho * spec.grid.dt, cfg.symbol_order));
    double bm_dev = 0.0;
    for (const auto& e : eig_dense(op.blocks().space.dense()))
      bm_dev = std::max(bm_dev, std::abs(e - 1.0));

    csv << m << ',' << n << ',' << op.size() << ',' << fmt17(cluster.nu) << ','
        << cluster.outlier_count << ',' << fmt17(cluster.epsilon) << ',' << m << ','
        << fmt17(dist_a.distance) << ',' << fmt17(dist_b.distance) << ','
        << fmt17(dist_u.distance) << ',' << fmt17(bm_dev) << '\n';
    log << "m=" << m << " n=" << n << " outliers=" << cluster.outlier_count
        << " (bound " << m << ")\n";

    if (!cfg.spectra_dir.empty()) {
      std::filesystem::create_directories(cfg.spectra_dir);
      const std::string stem = cfg.spectra_dir + "/m" + std::to_string(m) + "_n" +
                               std::to_string(n);
      std::ofstream eig(stem + "_precond_eigs.csv");
      write_spectral_csv(eig, cluster);
      std::ofstream dist(stem + "_AN_sigma.csv");
      write_spectral_csv(dist, dist_a);
    }
  }
  return kOk;
}

int cmd_symbols(const RunConfig& cfg, std::ostream& csv) {
  const double tau = cfg.params.rho * cfg.params.T / static_cast<double>(cfg.symbol_n);
  write_symbol_csv(csv, space_symbol(cfg.params.eta, cfg.symbol_order),
                   time_symbol(cfg.params.xi, tau, cfg.symbol_order),
                   cfg.symbol_samples);
  return kOk;
}

}  // namespace fidesp::cli
