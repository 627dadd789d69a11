#include "fidesp/toeplitz.hpp"

#include "fidesp/errors.hpp"
#include "fidesp/fft.hpp"

namespace fidesp {

LowerToeplitz::LowerToeplitz(std::vector<double> first_col)
    : col_(std::move(first_col)) {
  if (col_.empty()) throw ParameterError("Toeplitz matrix must be nonempty");
  const std::size_t len = fft::next_pow2(2 * col_.size() - 1);
  spectrum_.assign(len, {0.0, 0.0});
  for (std::size_t k = 0; k < col_.size(); ++k) spectrum_[k] = col_[k];
  fft::transform(spectrum_, fft::Direction::Forward);
}

std::vector<double> LowerToeplitz::apply(std::span<const double> v) const {
  std::vector<double> out(size());
  apply(v, out);
  return out;
}

void LowerToeplitz::apply(std::span<const double> v,
                          std::span<double> out) const {
  const std::size_t s = size();
  if (v.size() != s || out.size() != s) {
    throw ParameterError("Toeplitz matvec: dimension mismatch");
  }
  std::vector<std::complex<double>> work(spectrum_.size(), {0.0, 0.0});
  for (std::size_t k = 0; k < s; ++k) work[k] = v[k];
  fft::transform(work, fft::Direction::Forward);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] *= spectrum_[k];
  fft::transform(work, fft::Direction::Inverse);
  for (std::size_t k = 0; k < s; ++k) out[k] = work[k].real();
}

Eigen::MatrixXd LowerToeplitz::dense() const {
  const auto s = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s, s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      m(i, j) = col_[static_cast<std::size_t>(i - j)];
  return m;
}

std::vector<double> toeplitz_matvec(const LowerToeplitz& t,
                                    std::span<const double> v) {
  return t.apply(v);
}

}  // namespace fidesp
