#include "fidesp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fidesp/errors.hpp"
#include "fidesp/precond.hpp"

namespace fidesp {

namespace {

using cplx = std::complex<double>;

void require_dense(const Eigen::MatrixXd& m, std::size_t limit) {
  if (m.rows() != m.cols()) throw ParameterError("matrix must be square");
  if (static_cast<std::size_t>(m.rows()) > limit) {
    throw ResourceError("dense spectral computation of size " +
                        std::to_string(m.rows()) + " exceeds limit " +
                        std::to_string(limit));
  }
}

bool is_lower_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 1; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

bool is_upper_triangular(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != 0.0) return false;
  return true;
}

void sort_complex(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

// Largest divisor of m not exceeding sqrt(m).
std::size_t balanced_factor(std::size_t m) {
  std::size_t best = 1;
  for (std::size_t d = 1; d * d <= m; ++d)
    if (m % d == 0) best = d;
  return best;
}

}  // namespace

std::vector<cplx> eig_dense(const Eigen::MatrixXd& m, std::size_t limit) {
  require_dense(m, limit);
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  if (is_lower_triangular(m) || is_upper_triangular(m)) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m(i, i), 0.0);
    return out;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ResourceError("dense eigensolver did not converge");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

std::vector<double> singular_values_dense(const Eigen::MatrixXd& m,
                                          std::size_t limit) {
  require_dense(m, limit);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t cluster_count(std::span<const cplx> values, cplx center,
                          double eps) {
  if (!(eps > 0.0)) throw ParameterError("cluster radius must be > 0");
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(),
                    [&](const cplx& v) { return std::abs(v - center) >= eps; }));
}

Eigen::MatrixXd preconditioned_dense(const AllAtOnceOperator& op,
                                     std::size_t limit) {
  if (op.size() > limit) {
    throw ResourceError("preconditioned matrix of size " +
                        std::to_string(op.size()) + " exceeds limit " +
                        std::to_string(limit));
  }
  const BlockTriangularPreconditioner pre(op);
  const std::size_t m = op.blocks().m();
  const std::size_t n = op.blocks().n();
  const auto size = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(size, size);
  // A - P is nonzero only in the source columns of the first n block rows.
  std::vector<double> col(op.size());
  for (std::size_t c = 0; c < m; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      col[j * m + c] = -op.blocks().alpha * op.blocks().q[j];
    const std::vector<double> w = pre.solve(col);
    const auto jc = static_cast<Eigen::Index>(n * m + c);
    for (Eigen::Index i = 0; i < size; ++i)
      out(i, jc) += w[static_cast<std::size_t>(i)];
  }
  return out;
}

SpectralReport preconditioned_cluster(const AllAtOnceOperator& op, double eps) {
  SpectralReport r;
  r.eigenvalues = eig_dense(preconditioned_dense(op));
  sort_complex(r.eigenvalues);
  r.epsilon = eps;
  r.outlier_count = cluster_count(r.eigenvalues, {1.0, 0.0}, eps);
  r.nu = op.blocks().ratio();
  return r;
}

SpectralReport toeplitz_distribution(const LowerToeplitz& t,
                                     const SymbolSeries& symbol) {
  SpectralReport r;
  r.singular_values = singular_values_dense(t.dense());
  r.reference = symbol.sorted_abs_samples(t.size());
  r.distance = quantile_distance(r.singular_values, r.reference);
  return r;
}

SpectralReport kron_identity_distribution(const LowerToeplitz& t,
                                          std::size_t copies,
                                          const SymbolSeries& symbol) {
  if (copies == 0) throw ParameterError("copies must be >= 1");
  const Eigen::MatrixXd td = t.dense();
  const auto s = td.rows();
  const auto c = static_cast<Eigen::Index>(copies);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(s * c, s * c);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      if (td(i, j) != 0.0)
        k.block(i * c, j * c, c, c).diagonal().setConstant(td(i, j));
  SpectralReport r;
  r.singular_values = singular_values_dense(k);
  r.reference = symbol.sorted_abs_samples(t.size() * copies);
  r.distance = quantile_distance(r.singular_values, r.reference);
  return r;
}

SpectralReport distribution_check(const AllAtOnceOperator& op,
                                  const FractionalParams& params,
                                  const Grid& grid, const ScalarFunction& a,
                                  std::size_t symbol_order) {
  SpectralReport r;
  r.singular_values = singular_values_dense(op.dense());
  r.nu = op.blocks().ratio();

  CompositeSymbol sym{time_symbol(params.xi, params.rho * grid.dt, symbol_order),
                      space_symbol(params.eta, symbol_order), r.nu, a};
  const std::size_t mx = balanced_factor(grid.m);
  const std::size_t m2 = grid.m / mx;
  const std::vector<double> th1 = uniform_angles(grid.n + 1);
  const std::vector<double> th2 = uniform_angles(m2);

  std::vector<cplx> h(th1.size()), g(th2.size());
  for (std::size_t i = 0; i < th1.size(); ++i) h[i] = sym.time(th1[i]);
  for (std::size_t i = 0; i < th2.size(); ++i) g[i] = sym.space(th2[i]);

  r.reference.reserve(op.size());
  for (std::size_t ix = 0; ix < mx; ++ix) {
    const double x = (static_cast<double>(ix) + 0.5) / static_cast<double>(mx);
    const double ax = a ? a(x) : 0.0;
    for (const cplx& hv : h)
      for (const cplx& gv : g) r.reference.push_back(std::abs(hv + r.nu * ax * gv));
  }
  std::sort(r.reference.begin(), r.reference.end());
  r.distance = quantile_distance(r.singular_values, r.reference);
  return r;
}

std::size_t correction_rank(const AllAtOnceOperator& op, double tol) {
  const BlockTriangularPreconditioner pre(op);
  const Eigen::MatrixXd diff = op.dense() - pre.dense();
  const std::vector<double> s = singular_values_dense(diff);
  if (s.empty() || s.back() == 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [&](double v) { return v > tol * s.back(); }));
}

void write_spectral_csv(std::ostream& os, const SpectralReport& report) {
  os << "index,re,im,sigma,reference\n";
  const std::size_t rows =
      std::max({report.eigenvalues.size(), report.singular_values.size(),
                report.reference.size()});
  char buf[48];
  auto field = [&](bool present, double v) {
    os << ',';
    if (present) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << buf;
    }
  };
  for (std::size_t i = 0; i < rows; ++i) {
    os << i;
    const bool has_eig = i < report.eigenvalues.size();
    field(has_eig, has_eig ? report.eigenvalues[i].real() : 0.0);
    field(has_eig, has_eig ? report.eigenvalues[i].imag() : 0.0);
    const bool has_sv = i < report.singular_values.size();
    field(has_sv, has_sv ? report.singular_values[i] : 0.0);
    const bool has_ref = i < report.reference.size();
    field(has_ref, has_ref ? report.reference[i] : 0.0);
    os << '\n';
  }
}

}  // namespace fidesp
