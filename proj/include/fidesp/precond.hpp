#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fidesp/operators.hpp"

namespace fidesp {

/// The all-at-once operator with its upper-right source coupling dropped:
///
///   [ U (x) I + I (x) (alpha/beta) G      0           ]
///   [ e_n^T (x) I                 (lambda/beta) G     ]
///
/// Inverted exactly by block forward substitution.
class BlockTriangularPreconditioner {
 public:
  BlockTriangularPreconditioner(SpaceTimeBlocks blocks, double lambda);
  explicit BlockTriangularPreconditioner(const AllAtOnceOperator& op)
      : BlockTriangularPreconditioner(op.blocks(), op.lambda()) {}

  std::size_t size() const noexcept { return (blocks_.n() + 1) * blocks_.m(); }

  void solve(std::span<const double> r, std::span<double> w) const;
  std::vector<double> solve(std::span<const double> r) const;

  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

  Eigen::MatrixXd dense(std::size_t limit = kDenseLimit) const;

 private:
  SpaceTimeBlocks blocks_;
  double lambda_;
};

/// Eigenvalues of the Strang circulant of a lower Toeplitz matrix: first
/// column c_k = t_k for k <= floor(s/2), zero elsewhere (there is no upper
/// triangle to wrap). Eigenvalue k is sum_j c_j e^{-2 pi i jk/s}.
std::vector<std::complex<double>> strang_eigs(const LowerToeplitz& t);

/// Strang-circulant variant of the block preconditioner, for a constant
/// coefficient a(x) = a. Inverted with FFTs in O(nm log nm).
class CirculantPreconditioner {
 public:
  CirculantPreconditioner(const SpaceTimeBlocks& blocks, double lambda);
  explicit CirculantPreconditioner(const AllAtOnceOperator& op)
      : CirculantPreconditioner(op.blocks(), op.lambda()) {}

  std::size_t size() const noexcept { return (n_ + 1) * m_; }

  void solve(std::span<const double> r, std::span<double> w) const;
  std::vector<double> solve(std::span<const double> r) const;

  /// Forward action S_N v (used for round-trip checks).
  std::vector<double> apply(std::span<const double> v) const;

  const std::vector<std::complex<double>>& time_eigs() const { return eig_time_; }
  const std::vector<std::complex<double>>& space_eigs() const { return eig_space_; }

 private:
  void space_circulant_solve(double scale, std::span<const double> rhs,
                             std::span<double> out) const;

  std::size_t m_ = 0;
  std::size_t n_ = 0;
  double a_ = 0.0;
  double ratio_ = 0.0;
  double final_scale_ = 0.0;
  std::vector<std::complex<double>> eig_time_;
  std::vector<std::complex<double>> eig_space_;
  std::vector<std::complex<double>> combined_;
};

}  // namespace fidesp
