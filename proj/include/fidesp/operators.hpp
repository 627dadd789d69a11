#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fidesp/coeffs.hpp"
#include "fidesp/toeplitz.hpp"

namespace fidesp {

using ScalarFunction = std::function<double(double)>;

/// Default size cap for dense materialization.
inline constexpr std::size_t kDenseLimit = 4096;

/// Samples a(x_i), i = 1..m, of the variable coefficient. Every sample must
/// be nonzero so that the space block D(a) B is invertible.
class DiagonalSampler {
 public:
  DiagonalSampler() = default;

  static DiagonalSampler sample(const ScalarFunction& a, const Grid& grid);
  static DiagonalSampler from_values(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// True when all samples are equal (the Strang variant needs this).
  bool is_constant() const noexcept;

 private:
  explicit DiagonalSampler(std::vector<double> values);
  std::vector<double> values_;
};

/// Space block B_m: lower Toeplitz with first column delta_0..delta_{m-1}.
LowerToeplitz space_toeplitz(const L1Weights& space);

/// Time block U_n: first column gamma_k e^{-k rho dt}.
LowerToeplitz time_toeplitz(const L1Weights& time, double rho, double dt);

/// D(a) (B v).
std::vector<double> apply_space_block(const DiagonalSampler& a,
                                      const LowerToeplitz& space,
                                      std::span<const double> v);

/// The structured pieces shared by the all-at-once operator, the direct
/// operator and the preconditioners.
struct SpaceTimeBlocks {
  LowerToeplitz time;     ///< U_n
  LowerToeplitz space;    ///< B_m
  DiagonalSampler coeff;  ///< a(x_i)
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> q;  ///< q(t_j), j = 1..n

  static SpaceTimeBlocks make(const FractionalParams& params, const Grid& grid,
                              const ScalarFunction& a,
                              const ScalarFunction& q_fn);

  std::size_t m() const noexcept { return space.size(); }
  std::size_t n() const noexcept { return time.size(); }
  double ratio() const noexcept { return alpha / beta; }

  /// Checks that every diagonal entry gamma_0 + ratio a_i delta_0 of the
  /// time-step block is nonzero; throws SingularityError otherwise.
  void check_step_diagonal() const;

  /// Forward substitution with gamma_0 I + ratio D(a) B (lower triangular).
  void solve_step_block(std::span<const double> rhs,
                        std::span<double> out) const;

  /// Forward substitution with scale D(a) B.
  void solve_scaled_space_block(double scale, std::span<const double> rhs,
                                std::span<double> out) const;

  /// out += sum_{l<j} U[j,l] x^{(l)} for the given step j (0-based), where
  /// x holds n stacked blocks of length m.
  void accumulate_history(std::size_t j, std::span<const double> x,
                          std::span<double> out) const;
};

/// Matrix-free all-at-once operator of size (n+1)m acting on
/// [u^(1); ...; u^(n); f].
class AllAtOnceOperator {
 public:
  AllAtOnceOperator(SpaceTimeBlocks blocks, double lambda);

  std::size_t size() const noexcept { return (blocks_.n() + 1) * blocks_.m(); }
  const SpaceTimeBlocks& blocks() const noexcept { return blocks_; }
  double lambda() const noexcept { return lambda_; }

  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> v) const;

  /// Throws ResourceError when size() > limit.
  Eigen::MatrixXd dense(std::size_t limit = kDenseLimit) const;

 private:
  SpaceTimeBlocks blocks_;
  double lambda_;
};

/// Block lower-triangular operator of the forward problem, size nm.
class DirectOperator {
 public:
  explicit DirectOperator(SpaceTimeBlocks blocks);

  std::size_t size() const noexcept { return blocks_.n() * blocks_.m(); }
  const SpaceTimeBlocks& blocks() const noexcept { return blocks_; }

  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;

  /// Exact block forward substitution. Throws SingularityError naming the
  /// offending spatial index if a diagonal entry vanishes.
  std::vector<double> solve(std::span<const double> rhs) const;

  Eigen::MatrixXd dense(std::size_t limit = kDenseLimit) const;

 private:
  SpaceTimeBlocks blocks_;
};

/// One row per line, whitespace separated, 17 significant digits.
void write_dense(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace fidesp
