#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fidesp {

/// Lower-triangular Toeplitz matrix T[i][j] = t_{i-j} (i >= j), 0 above the
/// diagonal, stored by its first column. The DFT of the zero-padded
/// circulant embedding is computed once at construction.
class LowerToeplitz {
 public:
  LowerToeplitz() = default;
  explicit LowerToeplitz(std::vector<double> first_col);

  std::size_t size() const noexcept { return col_.size(); }
  const std::vector<double>& first_col() const noexcept { return col_; }
  double operator[](std::size_t k) const { return col_[k]; }

  double entry(std::size_t i, std::size_t j) const {
    return i >= j ? col_[i - j] : 0.0;
  }

  /// y = T v via circulant embedding of size next_pow2(2s-1) and FFT.
  std::vector<double> apply(std::span<const double> v) const;
  void apply(std::span<const double> v, std::span<double> out) const;

  Eigen::MatrixXd dense() const;

 private:
  std::vector<double> col_;
  std::vector<std::complex<double>> spectrum_;
};

/// Free-function form of LowerToeplitz::apply.
std::vector<double> toeplitz_matvec(const LowerToeplitz& t,
                                    std::span<const double> v);

}  // namespace fidesp
