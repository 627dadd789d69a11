#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace fidesp {

/// y = Op(x); x and y never alias.
using LinearAction =
    std::function<void(std::span<const double>, std::span<double>)>;

enum class PrecondSide {
  Left,   ///< iterate on P^{-1} A; converge on the preconditioned residual
  Right,  ///< iterate on A P^{-1}; converge on the true residual
};

struct GmresOptions {
  double tol = 1e-8;
  std::size_t maxit = 1000;
  bool record_residuals = true;
  PrecondSide side = PrecondSide::Left;
  /// Second Gram-Schmidt pass when the estimated loss of orthogonality of a
  /// new basis vector exceeds 1e-8.
  bool reorthogonalize = true;

  void validate() const;
};

struct GmresReport {
  std::size_t iterations = 0;
  bool converged = false;
  /// Relative residual of the iterated system, starting with 1 at iteration
  /// 0. Preconditioned residual for Left, true residual otherwise.
  std::vector<double> residual_history;
  std::vector<double> solution;
  double final_relres = 0.0;
  /// ||b - A x|| / ||b|| recomputed from the returned solution.
  double true_relres = 0.0;
};

/// Full (unrestarted) GMRES from a zero initial guess: Arnoldi with modified
/// Gram-Schmidt and Givens rotations. `precond_solve`, if set, applies P^{-1}.
/// maxit without convergence yields a report with converged = false; an
/// Arnoldi breakdown above tolerance throws BreakdownError.
GmresReport gmres(const LinearAction& apply_a, std::span<const double> b,
                  const GmresOptions& opts,
                  const LinearAction& precond_solve = {});

/// "iteration,relative_residual" CSV.
void write_residual_history(std::ostream& os, const GmresReport& report);

}  // namespace fidesp
