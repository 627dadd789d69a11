#include "fidesp/pipeline.hpp"

#include <cmath>
#include <numbers>

#include "fidesp/errors.hpp"
#include "fidesp/precond.hpp"

namespace fidesp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double uniform_noise(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ index);
  // (k + 0.5) / 2^53 lies strictly inside (0, 1).
  const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

std::vector<double> uniform_noise_vector(std::uint64_t seed, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = uniform_noise(seed, i);
  return out;
}

ProblemSpec ProblemSpec::benchmark(double xi, double eta, std::size_t m,
                                   std::size_t n, std::uint64_t seed) {
  ProblemSpec s;
  s.params.xi = xi;
  s.params.eta = eta;
  s.params.validate();
  s.grid = Grid::make(m, n, s.params.T);
  s.a = [](double x) { return x; };
  s.q = [](double t) { return t * t; };
  s.phi0 = [](double) { return 0.0; };
  s.f_true = [](double x) { return x * std::sin(std::numbers::pi * x); };
  s.seed = seed;
  return s;
}

SpaceTimeBlocks ProblemSpec::blocks() const {
  return SpaceTimeBlocks::make(params, grid, a, q);
}

std::vector<double> ProblemSpec::sample_space(const ScalarFunction& fn) const {
  std::vector<double> v(grid.m, 0.0);
  if (!fn) return v;
  for (std::size_t i = 0; i < grid.m; ++i) v[i] = fn(grid.x(i + 1));
  return v;
}

namespace {

// Blocks j = 1..n of b_{j-1} e^{-j rho dt} phi0.
std::vector<double> initial_history(const ProblemSpec& spec) {
  const std::size_t m = spec.grid.m;
  const std::size_t n = spec.grid.n;
  const L1Weights w = time_weights(spec.params.xi, n);
  const std::vector<double> phi0 = spec.sample_space(spec.phi0);
  std::vector<double> out(n * m);
  for (std::size_t j = 1; j <= n; ++j) {
    const double c = w.weights[j - 1] *
                     std::exp(-static_cast<double>(j) * spec.params.rho * spec.grid.dt);
    for (std::size_t i = 0; i < m; ++i) out[(j - 1) * m + i] = c * phi0[i];
  }
  return out;
}

}  // namespace

std::vector<double> forward_rhs(const ProblemSpec& spec,
                                std::span<const double> f) {
  if (f.size() != spec.grid.m) throw ParameterError("forward_rhs: source length mismatch");
  spec.params.validate();
  const Scalings s = scalings(spec.params, spec.grid);
  std::vector<double> b = initial_history(spec);
  const std::size_t m = spec.grid.m;
  for (std::size_t j = 1; j <= spec.grid.n; ++j) {
    const double w = s.alpha * spec.q(spec.grid.t(j));
    for (std::size_t i = 0; i < m; ++i) b[(j - 1) * m + i] += w * f[i];
  }
  return b;
}

FinalData manufacture_final_data(const ProblemSpec& spec) {
  const std::vector<double> f = spec.sample_space(spec.f_true);
  const DirectOperator direct(spec.blocks());
  const std::vector<double> u = direct.solve(forward_rhs(spec, f));
  const std::size_t m = spec.grid.m;
  FinalData out;
  out.phi.assign(u.end() - static_cast<std::ptrdiff_t>(m), u.end());
  out.phi_eps = out.phi;
  if (spec.params.epsilon != 0.0) {
    for (std::size_t i = 0; i < m; ++i)
      out.phi_eps[i] += spec.params.epsilon * uniform_noise(spec.seed, i);
  }
  return out;
}

std::vector<double> assemble_rhs(const ProblemSpec& spec,
                                 std::span<const double> phi_eps) {
  if (phi_eps.size() != spec.grid.m) {
    throw ParameterError("assemble_rhs: final data must have length m");
  }
  std::vector<double> z = initial_history(spec);
  z.insert(z.end(), phi_eps.begin(), phi_eps.end());
  return z;
}

std::string to_string(PrecondChoice c) {
  switch (c) {
    case PrecondChoice::None: return "none";
    case PrecondChoice::Block: return "PN";
    case PrecondChoice::Strang: return "SN";
  }
  return "?";
}

PrecondChoice parse_precond(const std::string& s) {
  if (s == "none") return PrecondChoice::None;
  if (s == "PN") return PrecondChoice::Block;
  if (s == "SN") return PrecondChoice::Strang;
  throw ConfigError("unknown preconditioner '" + s + "' (expected none, PN, SN)");
}

double weighted_norm(std::span<const double> v, double dx) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(dx * s);
}

InverseResult solve_all_at_once(const ProblemSpec& spec,
                                std::span<const double> rhs,
                                PrecondChoice precond,
                                const GmresOptions& opts) {
  const AllAtOnceOperator op(spec.blocks(), spec.params.lambda);
  if (rhs.size() != op.size()) {
    throw ParameterError("all-at-once right-hand side has wrong length");
  }
  const LinearAction apply_a = [&op](std::span<const double> x,
                                     std::span<double> y) { op.apply(x, y); };

  GmresReport report;
  switch (precond) {
    case PrecondChoice::None:
      report = gmres(apply_a, rhs, opts);
      break;
    case PrecondChoice::Block: {
      const BlockTriangularPreconditioner pre(op);
      report = gmres(apply_a, rhs, opts,
                     [&pre](std::span<const double> x, std::span<double> y) {
                       pre.solve(x, y);
                     });
      break;
    }
    case PrecondChoice::Strang: {
      const CirculantPreconditioner pre(op);
      report = gmres(apply_a, rhs, opts,
                     [&pre](std::span<const double> x, std::span<double> y) {
                       pre.solve(x, y);
                     });
      break;
    }
  }

  InverseResult out;
  const std::size_t nm = spec.grid.n * spec.grid.m;
  out.u.assign(report.solution.begin(),
               report.solution.begin() + static_cast<std::ptrdiff_t>(nm));
  out.f_rec.assign(report.solution.begin() + static_cast<std::ptrdiff_t>(nm),
                   report.solution.end());
  if (spec.f_true) {
    const std::vector<double> f = spec.sample_space(spec.f_true);
    std::vector<double> diff(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) diff[i] = out.f_rec[i] - f[i];
    const double denom = weighted_norm(f, spec.grid.dx);
    if (denom > 0.0) out.rel_error_f = weighted_norm(diff, spec.grid.dx) / denom;
  }
  out.report = std::move(report);
  return out;
}

InverseResult solve_inverse(const ProblemSpec& spec,
                            std::span<const double> phi_eps,
                            PrecondChoice precond, const GmresOptions& opts) {
  return solve_all_at_once(spec, assemble_rhs(spec, phi_eps), precond, opts);
}

}  // namespace fidesp
