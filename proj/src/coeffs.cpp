#include "fidesp/coeffs.hpp"

#include <cmath>
#include <string>

#include "fidesp/errors.hpp"

namespace fidesp {

namespace {

void require_order(double order, const char* name) {
  if (!(order > 0.0 && order < 1.0)) {
    throw ParameterError(std::string(name) + " must lie in (0,1), got " +
                         std::to_string(order));
  }
}

// (l+1)^p - l^p without the cancellation of the naive difference.
double power_increment(double p, std::size_t l) {
  if (l == 0) return 1.0;
  const double ld = static_cast<double>(l);
  return std::pow(ld, p) * std::expm1(p * std::log1p(1.0 / ld));
}

}  // namespace

void FractionalParams::validate() const {
  require_order(xi, "xi");
  require_order(eta, "eta");
  if (!(rho > 0.0)) throw ParameterError("rho must be > 0");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (!(T > 0.0)) throw ParameterError("T must be > 0");
}

Grid Grid::make(std::size_t m, std::size_t n, double T) {
  if (m == 0 || n == 0) throw ParameterError("grid requires m >= 1 and n >= 1");
  if (!(T > 0.0)) throw ParameterError("T must be > 0");
  Grid g;
  g.m = m;
  g.n = n;
  g.dx = 1.0 / static_cast<double>(m + 1);
  g.dt = T / static_cast<double>(n);
  return g;
}

L1Weights l1_weights(double order, std::size_t count) {
  require_order(order, "order");
  if (count == 0) throw ParameterError("weight sequence length must be >= 1");
  const double p = 1.0 - order;
  L1Weights w;
  w.weights.resize(count);
  w.diffs.resize(count);
  for (std::size_t l = 0; l < count; ++l) w.weights[l] = power_increment(p, l);
  w.diffs[0] = w.weights[0];
  for (std::size_t l = 1; l < count; ++l) {
    w.diffs[l] = w.weights[l] - w.weights[l - 1];
  }
  return w;
}

L1Weights time_weights(double xi, std::size_t n) { return l1_weights(xi, n); }

L1Weights space_weights(double eta, std::size_t m) { return l1_weights(eta, m); }

Scalings scalings(const FractionalParams& params, const Grid& grid) {
  params.validate();
  Scalings s;
  s.alpha = std::pow(grid.dt, params.xi) * std::tgamma(2.0 - params.xi);
  s.beta = std::pow(grid.dx, params.eta) * std::tgamma(2.0 - params.eta);
  return s;
}

CoeffTables make_coeff_tables(const FractionalParams& params,
                              const Grid& grid) {
  const Scalings s = scalings(params, grid);
  CoeffTables c;
  c.time = time_weights(params.xi, grid.n);
  c.space = space_weights(params.eta, grid.m);
  c.alpha = s.alpha;
  c.beta = s.beta;
  return c;
}

}  // namespace fidesp
