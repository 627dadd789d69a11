#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fidesp/operators.hpp"
#include "fidesp/symbols.hpp"

namespace fidesp {

inline constexpr double kClusterRadius = 1e-6;

/// Sorted spectral data of one matrix, plus what it was compared with.
struct SpectralReport {
  std::vector<std::complex<double>> eigenvalues;  ///< sorted by (re, im)
  std::vector<double> singular_values;            ///< ascending
  std::vector<double> reference;                  ///< sorted symbol samples
  std::size_t outlier_count = 0;
  double epsilon = kClusterRadius;
  double distance = 0.0;  ///< quantile sup-distance, when a reference exists
  double nu = 0.0;        ///< alpha/beta, for all-at-once reports
};

/// Eigenvalues of a dense matrix (Hessenberg + shifted QR). Triangular input
/// returns its diagonal exactly. Throws ResourceError above `limit`.
std::vector<std::complex<double>> eig_dense(const Eigen::MatrixXd& m,
                                            std::size_t limit = kDenseLimit);

/// Singular values, ascending.
std::vector<double> singular_values_dense(const Eigen::MatrixXd& m,
                                          std::size_t limit = kDenseLimit);

/// Number of values with |value - center| >= eps.
std::size_t cluster_count(std::span<const std::complex<double>> values,
                          std::complex<double> center, double eps);

/// Dense P_N^{-1} A_N, formed as I + P_N^{-1}(A_N - P_N).
Eigen::MatrixXd preconditioned_dense(const AllAtOnceOperator& op,
                                     std::size_t limit = kDenseLimit);

/// Eigenvalues of P_N^{-1} A_N and the number outside the eps-disk at 1.
SpectralReport preconditioned_cluster(const AllAtOnceOperator& op,
                                      double eps = kClusterRadius);

/// Singular values of the lower Toeplitz matrix vs |symbol| at size() angles.
SpectralReport toeplitz_distribution(const LowerToeplitz& t,
                                     const SymbolSeries& symbol);

/// Singular values of T (x) I_copies vs |symbol| at size()*copies angles.
SpectralReport kron_identity_distribution(const LowerToeplitz& t,
                                          std::size_t copies,
                                          const SymbolSeries& symbol);

/// Singular values of the dense all-at-once matrix vs
/// |h(theta1) + nu a(x) g(theta2)| on a uniform (x, theta1, theta2) lattice
/// with exactly (n+1)m points; nu is the actual alpha/beta of the operator.
SpectralReport distribution_check(const AllAtOnceOperator& op,
                                  const FractionalParams& params,
                                  const Grid& grid, const ScalarFunction& a,
                                  std::size_t symbol_order = kDefaultSymbolOrder);

/// Number of singular values of A_N - P_N above tol * ||A_N - P_N||.
std::size_t correction_rank(const AllAtOnceOperator& op, double tol = 1e-12);

/// "index,re,im,sigma,reference" CSV of a report (empty fields when absent).
void write_spectral_csv(std::ostream& os, const SpectralReport& report);

}  // namespace fidesp
