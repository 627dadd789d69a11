#include "fidesp/precond.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fidesp/errors.hpp"
#include "fidesp/fft.hpp"

namespace fidesp {

namespace {

using cplx = std::complex<double>;

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ParameterError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

constexpr double kSingularRelTol = 1e-13;

}  // namespace

BlockTriangularPreconditioner::BlockTriangularPreconditioner(
    SpaceTimeBlocks blocks, double lambda)
    : blocks_(std::move(blocks)), lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw ParameterError("lambda must be > 0");
  blocks_.check_step_diagonal();
}

std::vector<double> BlockTriangularPreconditioner::solve(
    std::span<const double> r) const {
  std::vector<double> w(size());
  solve(r, w);
  return w;
}

void BlockTriangularPreconditioner::solve(std::span<const double> r,
                                          std::span<double> w) const {
  require_size(r.size(), size(), "preconditioner input");
  require_size(w.size(), size(), "preconditioner output");
  const std::size_t m = blocks_.m();
  const std::size_t n = blocks_.n();
  std::vector<double> work(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(work.begin(), work.end(), 0.0);
    blocks_.accumulate_history(j, w.first(n * m), work);
    for (std::size_t i = 0; i < m; ++i) work[i] = r[j * m + i] - work[i];
    blocks_.solve_step_block(work, w.subspan(j * m, m));
  }
  for (std::size_t i = 0; i < m; ++i)
    work[i] = r[n * m + i] - w[(n - 1) * m + i];
  blocks_.solve_scaled_space_block(lambda_ / blocks_.beta, work,
                                   w.subspan(n * m, m));
}

std::vector<double> BlockTriangularPreconditioner::apply(
    std::span<const double> v) const {
  std::vector<double> out(size());
  apply(v, out);
  return out;
}

void BlockTriangularPreconditioner::apply(std::span<const double> v,
                                          std::span<double> out) const {
  require_size(v.size(), size(), "preconditioner input");
  require_size(out.size(), size(), "preconditioner output");
  // Same as the all-at-once action with a zero source coupling in the first
  // n block rows.
  SpaceTimeBlocks uncoupled = blocks_;
  std::fill(uncoupled.q.begin(), uncoupled.q.end(), 0.0);
  AllAtOnceOperator(std::move(uncoupled), lambda_).apply(v, out);
}

Eigen::MatrixXd BlockTriangularPreconditioner::dense(std::size_t limit) const {
  Eigen::MatrixXd p = AllAtOnceOperator(blocks_, lambda_).dense(limit);
  const auto m = static_cast<Eigen::Index>(blocks_.m());
  const auto n = static_cast<Eigen::Index>(blocks_.n());
  p.block(0, n * m, n * m, m).setZero();
  return p;
}

// ---------------------------------------------------------------------------

std::vector<cplx> strang_eigs(const LowerToeplitz& t) {
  const std::size_t s = t.size();
  std::vector<cplx> c(s, {0.0, 0.0});
  for (std::size_t k = 0; k <= s / 2 && k < s; ++k) c[k] = t[k];
  fft::transform(c, fft::Direction::Forward);
  return c;
}

CirculantPreconditioner::CirculantPreconditioner(const SpaceTimeBlocks& blocks,
                                                 double lambda)
    : m_(blocks.m()), n_(blocks.n()) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
  if (!blocks.coeff.is_constant()) {
    throw ConfigError(
        "circulant preconditioner requires a constant coefficient a(x)");
  }
  a_ = blocks.coeff[0];
  ratio_ = blocks.ratio();
  final_scale_ = lambda / blocks.beta * a_;
  eig_time_ = strang_eigs(blocks.time);
  eig_space_ = strang_eigs(blocks.space);

  combined_.resize(n_ * m_);
  double largest = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t i = 0; i < m_; ++i) {
      combined_[j * m_ + i] = eig_time_[j] + ratio_ * a_ * eig_space_[i];
      largest = std::max(largest, std::abs(combined_[j * m_ + i]));
    }
  for (std::size_t k = 0; k < combined_.size(); ++k) {
    if (std::abs(combined_[k]) < kSingularRelTol * largest) {
      throw SingularityError("Strang space-time block is numerically singular",
                             k);
    }
  }
  double largest_space = 0.0;
  for (const auto& e : eig_space_) largest_space = std::max(largest_space, std::abs(e));
  for (std::size_t i = 0; i < m_; ++i) {
    if (std::abs(eig_space_[i]) < kSingularRelTol * largest_space) {
      throw SingularityError("Strang space block is numerically singular", i);
    }
  }
}

void CirculantPreconditioner::space_circulant_solve(
    double scale, std::span<const double> rhs, std::span<double> out) const {
  std::vector<cplx> work(rhs.begin(), rhs.end());
  fft::transform(work, fft::Direction::Forward);
  for (std::size_t i = 0; i < m_; ++i) work[i] /= scale * eig_space_[i];
  fft::transform(work, fft::Direction::Inverse);
  for (std::size_t i = 0; i < m_; ++i) out[i] = work[i].real();
}

std::vector<double> CirculantPreconditioner::solve(
    std::span<const double> r) const {
  std::vector<double> w(size());
  solve(r, w);
  return w;
}

void CirculantPreconditioner::solve(std::span<const double> r,
                                    std::span<double> w) const {
  require_size(r.size(), size(), "preconditioner input");
  require_size(w.size(), size(), "preconditioner output");
  const std::size_t nm = n_ * m_;
  std::vector<cplx> work(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(nm));
  fft::transform_2d(work, n_, m_, fft::Direction::Forward);
  for (std::size_t k = 0; k < nm; ++k) work[k] /= combined_[k];
  fft::transform_2d(work, n_, m_, fft::Direction::Inverse);
  for (std::size_t k = 0; k < nm; ++k) w[k] = work[k].real();

  std::vector<double> rhs(m_);
  for (std::size_t i = 0; i < m_; ++i) rhs[i] = r[nm + i] - w[nm - m_ + i];
  space_circulant_solve(final_scale_, rhs, w.subspan(nm, m_));
}

std::vector<double> CirculantPreconditioner::apply(
    std::span<const double> v) const {
  require_size(v.size(), size(), "preconditioner input");
  const std::size_t nm = n_ * m_;
  std::vector<double> out(size());
  std::vector<cplx> work(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nm));
  fft::transform_2d(work, n_, m_, fft::Direction::Forward);
  for (std::size_t k = 0; k < nm; ++k) work[k] *= combined_[k];
  fft::transform_2d(work, n_, m_, fft::Direction::Inverse);
  for (std::size_t k = 0; k < nm; ++k) out[k] = work[k].real();

  std::vector<cplx> f(v.begin() + static_cast<std::ptrdiff_t>(nm), v.end());
  fft::transform(f, fft::Direction::Forward);
  for (std::size_t i = 0; i < m_; ++i) f[i] *= final_scale_ * eig_space_[i];
  fft::transform(f, fft::Direction::Inverse);
  for (std::size_t i = 0; i < m_; ++i) out[nm + i] = v[nm - m_ + i] + f[i].real();
  return out;
}

}  // namespace fidesp
