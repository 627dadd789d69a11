#include "fidesp/krylov.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "fidesp/errors.hpp"

namespace fidesp {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

void GmresOptions::validate() const {
  if (!(tol > 0.0)) throw ParameterError("gmres tol must be > 0");
  if (maxit < 1) throw ParameterError("gmres maxit must be >= 1");
}

GmresReport gmres(const LinearAction& apply_a, std::span<const double> b,
                  const GmresOptions& opts, const LinearAction& precond_solve) {
  opts.validate();
  const std::size_t n = b.size();
  const bool left = precond_solve && opts.side == PrecondSide::Left;
  const bool right = precond_solve && opts.side == PrecondSide::Right;

  GmresReport report;
  report.solution.assign(n, 0.0);

  const double bnorm_true = norm2(b);
  if (bnorm_true == 0.0) {
    report.converged = true;
    if (opts.record_residuals) report.residual_history.push_back(0.0);
    return report;
  }

  std::vector<double> r0(b.begin(), b.end());
  if (left) precond_solve(b, r0);
  const double beta = norm2(r0);
  if (beta == 0.0) throw BreakdownError("preconditioned right-hand side is zero");

  std::vector<double> tmp(n);
  // Operator applied to a basis vector, as iterated.
  auto apply_op = [&](std::span<const double> v, std::span<double> out) {
    if (left) {
      apply_a(v, tmp);
      precond_solve(tmp, out);
    } else if (right) {
      precond_solve(v, tmp);
      apply_a(tmp, out);
    } else {
      apply_a(v, out);
    }
  };

  std::vector<std::vector<double>> basis;
  basis.emplace_back(r0);
  for (auto& x : basis.back()) x /= beta;

  // Column-stored Hessenberg factor, Givens rotations, rotated rhs.
  std::vector<std::vector<double>> hcols;
  std::vector<double> cs, sn, g{beta};

  if (opts.record_residuals) report.residual_history.push_back(1.0);

  const double orth_threshold =
      std::numeric_limits<double>::epsilon() / 1e-8;
  double relres = 1.0;
  std::size_t k = 0;
  bool happy = false;
  while (k < opts.maxit) {
    std::vector<double> w(n);
    apply_op(basis[k], w);
    std::vector<double> h(k + 2, 0.0);
    const double wnorm0 = norm2(w);
    for (std::size_t i = 0; i <= k; ++i) {
      h[i] = dot(w, basis[i]);
      axpy(-h[i], basis[i], w);
    }
    double wnorm = norm2(w);
    if (opts.reorthogonalize && wnorm < orth_threshold * wnorm0) {
      for (std::size_t i = 0; i <= k; ++i) {
        const double c = dot(w, basis[i]);
        h[i] += c;
        axpy(-c, basis[i], w);
      }
      wnorm = norm2(w);
    }
    h[k + 1] = wnorm;

    for (std::size_t i = 0; i < k; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double denom = std::hypot(h[k], h[k + 1]);
    if (denom == 0.0) throw BreakdownError("GMRES: singular Hessenberg column");
    cs.push_back(h[k] / denom);
    sn.push_back(h[k + 1] / denom);
    h[k] = denom;
    h[k + 1] = 0.0;
    g.push_back(-sn[k] * g[k]);
    g[k] = cs[k] * g[k];
    h.pop_back();
    hcols.push_back(std::move(h));
    ++k;

    relres = std::abs(g[k]) / beta;
    if (opts.record_residuals) report.residual_history.push_back(relres);
    if (relres < opts.tol) break;

    if (wnorm <= 1e-14 * wnorm0 || wnorm == 0.0) {
      happy = true;
      break;
    }
    for (auto& x : w) x /= wnorm;
    basis.push_back(std::move(w));
  }

  // Back substitution y = R^{-1} g, then x = V y (or P^{-1} V y).
  std::vector<double> y(k);
  for (std::size_t ii = k; ii-- > 0;) {
    double s = g[ii];
    for (std::size_t jj = ii + 1; jj < k; ++jj) s -= hcols[jj][ii] * y[jj];
    y[ii] = s / hcols[ii][ii];
  }
  std::vector<double> update(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) axpy(y[i], basis[i], update);
  if (right) {
    precond_solve(update, report.solution);
  } else {
    report.solution = std::move(update);
  }

  report.iterations = k;
  report.final_relres = relres;
  report.converged = relres < opts.tol;

  std::vector<double> ax(n);
  apply_a(report.solution, ax);
  for (std::size_t i = 0; i < n; ++i) ax[i] = b[i] - ax[i];
  report.true_relres = norm2(ax) / bnorm_true;

  if (happy && !report.converged) {
    throw BreakdownError("GMRES: Arnoldi breakdown with relative residual " +
                         std::to_string(relres) + " above tolerance");
  }
  return report;
}

void write_residual_history(std::ostream& os, const GmresReport& report) {
  os << "iteration,relative_residual\n";
  char buf[40];
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", report.residual_history[i]);
    os << i << ',' << buf << '\n';
  }
}

}  // namespace fidesp
