#pragma once

#include <cstddef>
#include <vector>

namespace fidesp {

/// Physical and regularization parameters of the tempered time / Caputo space
/// fractional diffusion problem.
struct FractionalParams {
  double xi = 0.5;        ///< time fractional order, in (0,1)
  double eta = 0.5;       ///< space fractional order, in (0,1)
  double rho = 1.0;       ///< tempering rate, > 0
  double lambda = 5e-3;   ///< quasi-boundary regularization parameter, > 0
  double epsilon = 0.01;  ///< noise level, >= 0
  double T = 1.0;         ///< final time, > 0

  /// Throws ParameterError when any invariant is violated.
  void validate() const;
};

/// Uniform space-time mesh: m interior nodes on (0,1), n steps on (0,T].
struct Grid {
  std::size_t m = 0;
  std::size_t n = 0;
  double dx = 0.0;
  double dt = 0.0;

  static Grid make(std::size_t m, std::size_t n, double T = 1.0);

  std::size_t unknowns() const noexcept { return (n + 1) * m; }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx; }
  double t(std::size_t j) const noexcept { return static_cast<double>(j) * dt; }
};

/// L1 quadrature weights w_l = (l+1)^{1-order} - l^{1-order} and their
/// first differences (diff_0 = w_0, diff_l = w_l - w_{l-1}).
struct L1Weights {
  std::vector<double> weights;
  std::vector<double> diffs;

  std::size_t size() const noexcept { return weights.size(); }
};

/// Weights of length `count` for the given order in (0,1).
L1Weights l1_weights(double order, std::size_t count);

/// Time weights (b, gamma) of length n.
L1Weights time_weights(double xi, std::size_t n);

/// Space weights (d, delta) of length m.
L1Weights space_weights(double eta, std::size_t m);

struct Scalings {
  double alpha = 0.0;  ///< (dt)^xi Gamma(2 - xi)
  double beta = 0.0;   ///< (dx)^eta Gamma(2 - eta)
};

Scalings scalings(const FractionalParams& params, const Grid& grid);

/// Everything the discrete operators need from the coefficient layer.
struct CoeffTables {
  L1Weights time;
  L1Weights space;
  double alpha = 0.0;
  double beta = 0.0;
};

CoeffTables make_coeff_tables(const FractionalParams& params, const Grid& grid);

}  // namespace fidesp
