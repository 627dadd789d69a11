#include "fidesp/operators.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "fidesp/errors.hpp"

namespace fidesp {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ParameterError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " + std::to_string(got));
  }
}

void require_dense_limit(std::size_t size, std::size_t limit) {
  if (size > limit) {
    throw ResourceError("dense materialization of size " +
                        std::to_string(size) + " exceeds limit " +
                        std::to_string(limit));
  }
}

bool negligible_pivot(double pivot, double scale) {
  return pivot == 0.0 || std::abs(pivot) <= 1e-14 * scale;
}

// Time-coupling part: out[j] += sum_{l<=j} U[j,l] x^{(l)} over n stacked
// blocks, done as m Toeplitz products of length n.
void add_time_coupling(const LowerToeplitz& time, std::size_t m,
                       std::span<const double> x, std::span<double> out) {
  const std::size_t n = time.size();
  std::vector<double> lane(n), image(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) lane[j] = x[j * m + i];
    time.apply(lane, image);
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] += image[j];
  }
}

}  // namespace

DiagonalSampler::DiagonalSampler(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.0 || !std::isfinite(values_[i])) {
      throw ParameterError("coefficient sample a(x_" + std::to_string(i + 1) +
                           ") must be finite and nonzero");
    }
  }
}

DiagonalSampler DiagonalSampler::sample(const ScalarFunction& a,
                                        const Grid& grid) {
  std::vector<double> values(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) values[i] = a(grid.x(i + 1));
  return DiagonalSampler(std::move(values));
}

DiagonalSampler DiagonalSampler::from_values(std::vector<double> values) {
  return DiagonalSampler(std::move(values));
}

bool DiagonalSampler::is_constant() const noexcept {
  for (double v : values_)
    if (v != values_.front()) return false;
  return true;
}

LowerToeplitz space_toeplitz(const L1Weights& space) {
  return LowerToeplitz(space.diffs);
}

LowerToeplitz time_toeplitz(const L1Weights& time, double rho, double dt) {
  std::vector<double> col(time.size());
  for (std::size_t k = 0; k < col.size(); ++k) {
    col[k] = time.diffs[k] * std::exp(-static_cast<double>(k) * rho * dt);
  }
  return LowerToeplitz(std::move(col));
}

std::vector<double> apply_space_block(const DiagonalSampler& a,
                                      const LowerToeplitz& space,
                                      std::span<const double> v) {
  require_size(a.size(), space.size(), "space block sampler");
  require_size(v.size(), space.size(), "space block input");
  std::vector<double> out = space.apply(v);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= a[i];
  return out;
}

// ---------------------------------------------------------------------------

SpaceTimeBlocks SpaceTimeBlocks::make(const FractionalParams& params,
                                      const Grid& grid,
                                      const ScalarFunction& a,
                                      const ScalarFunction& q_fn) {
  const CoeffTables c = make_coeff_tables(params, grid);
  SpaceTimeBlocks b;
  b.time = time_toeplitz(c.time, params.rho, grid.dt);
  b.space = space_toeplitz(c.space);
  b.coeff = DiagonalSampler::sample(a, grid);
  b.alpha = c.alpha;
  b.beta = c.beta;
  b.q.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) b.q[j] = q_fn(grid.t(j + 1));
  return b;
}

void SpaceTimeBlocks::check_step_diagonal() const {
  const double r = ratio();
  for (std::size_t i = 0; i < m(); ++i) {
    const double coupling = r * coeff[i] * space[0];
    if (negligible_pivot(time[0] + coupling,
                         std::abs(time[0]) + std::abs(coupling))) {
      throw SingularityError("time-step block has a zero diagonal entry", i);
    }
  }
}

void SpaceTimeBlocks::solve_step_block(std::span<const double> rhs,
                                       std::span<double> out) const {
  const std::size_t mm = m();
  const double r = ratio();
  for (std::size_t i = 0; i < mm; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) acc += space[i - k] * out[k];
    const double pivot = time[0] + r * coeff[i] * space[0];
    out[i] = (rhs[i] - r * coeff[i] * acc) / pivot;
  }
}

void SpaceTimeBlocks::solve_scaled_space_block(double scale,
                                               std::span<const double> rhs,
                                               std::span<double> out) const {
  const std::size_t mm = m();
  for (std::size_t i = 0; i < mm; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < i; ++k) acc += space[i - k] * out[k];
    const double s = scale * coeff[i];
    out[i] = (rhs[i] - s * acc) / (s * space[0]);
  }
}

void SpaceTimeBlocks::accumulate_history(std::size_t j,
                                         std::span<const double> x,
                                         std::span<double> out) const {
  const std::size_t mm = m();
  for (std::size_t l = 0; l < j; ++l) {
    const double w = time[j - l];
    const double* src = x.data() + l * mm;
    for (std::size_t i = 0; i < mm; ++i) out[i] += w * src[i];
  }
}

// ---------------------------------------------------------------------------

AllAtOnceOperator::AllAtOnceOperator(SpaceTimeBlocks blocks, double lambda)
    : blocks_(std::move(blocks)), lambda_(lambda) {
  require_size(blocks_.coeff.size(), blocks_.m(), "coefficient samples");
  require_size(blocks_.q.size(), blocks_.n(), "time profile samples");
  if (!(lambda_ > 0.0)) throw ParameterError("lambda must be > 0");
}

std::vector<double> AllAtOnceOperator::apply(std::span<const double> v) const {
  std::vector<double> out(size());
  apply(v, out);
  return out;
}

void AllAtOnceOperator::apply(std::span<const double> v,
                              std::span<double> out) const {
  require_size(v.size(), size(), "all-at-once input");
  require_size(out.size(), size(), "all-at-once output");
  const std::size_t m = blocks_.m();
  const std::size_t n = blocks_.n();
  const double r = blocks_.ratio();
  const auto f = v.subspan(n * m, m);

  std::fill(out.begin(), out.end(), 0.0);
  add_time_coupling(blocks_.time, m, v.first(n * m), out.first(n * m));

  for (std::size_t j = 0; j < n; ++j) {
    const auto gu =
        apply_space_block(blocks_.coeff, blocks_.space, v.subspan(j * m, m));
    const double fw = blocks_.alpha * blocks_.q[j];
    double* dst = out.data() + j * m;
    for (std::size_t i = 0; i < m; ++i) dst[i] += r * gu[i] - fw * f[i];
  }

  const auto gf = apply_space_block(blocks_.coeff, blocks_.space, f);
  const double s = lambda_ / blocks_.beta;
  double* last = out.data() + n * m;
  const double* un = v.data() + (n - 1) * m;
  for (std::size_t i = 0; i < m; ++i) last[i] = un[i] + s * gf[i];
}

Eigen::MatrixXd AllAtOnceOperator::dense(std::size_t limit) const {
  require_dense_limit(size(), limit);
  const auto m = static_cast<Eigen::Index>(blocks_.m());
  const auto n = static_cast<Eigen::Index>(blocks_.n());
  const Eigen::MatrixXd g =
      Eigen::Map<const Eigen::VectorXd>(blocks_.coeff.values().data(), m)
          .asDiagonal() *
      blocks_.space.dense();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m * (n + 1), m * (n + 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < j; ++l) {
      a.block(j * m, l * m, m, m) =
          blocks_.time[static_cast<std::size_t>(j - l)] * eye;
    }
    a.block(j * m, j * m, m, m) = blocks_.time[0] * eye + blocks_.ratio() * g;
    a.block(j * m, n * m, m, m) =
        -blocks_.alpha * blocks_.q[static_cast<std::size_t>(j)] * eye;
  }
  a.block(n * m, (n - 1) * m, m, m) = eye;
  a.block(n * m, n * m, m, m) = (lambda_ / blocks_.beta) * g;
  return a;
}

// ---------------------------------------------------------------------------

DirectOperator::DirectOperator(SpaceTimeBlocks blocks)
    : blocks_(std::move(blocks)) {
  require_size(blocks_.coeff.size(), blocks_.m(), "coefficient samples");
}

std::vector<double> DirectOperator::apply(std::span<const double> u) const {
  std::vector<double> out(size());
  apply(u, out);
  return out;
}

void DirectOperator::apply(std::span<const double> u,
                           std::span<double> out) const {
  require_size(u.size(), size(), "direct operator input");
  require_size(out.size(), size(), "direct operator output");
  const std::size_t m = blocks_.m();
  std::fill(out.begin(), out.end(), 0.0);
  add_time_coupling(blocks_.time, m, u, out);
  for (std::size_t j = 0; j < blocks_.n(); ++j) {
    const auto gu =
        apply_space_block(blocks_.coeff, blocks_.space, u.subspan(j * m, m));
    for (std::size_t i = 0; i < m; ++i) out[j * m + i] += blocks_.ratio() * gu[i];
  }
}

std::vector<double> DirectOperator::solve(std::span<const double> rhs) const {
  require_size(rhs.size(), size(), "direct operator right-hand side");
  blocks_.check_step_diagonal();
  const std::size_t m = blocks_.m();
  std::vector<double> u(size());
  std::vector<double> work(m);
  for (std::size_t j = 0; j < blocks_.n(); ++j) {
    std::fill(work.begin(), work.end(), 0.0);
    blocks_.accumulate_history(j, u, work);
    for (std::size_t i = 0; i < m; ++i) work[i] = rhs[j * m + i] - work[i];
    blocks_.solve_step_block(work, std::span(u).subspan(j * m, m));
  }
  return u;
}

Eigen::MatrixXd DirectOperator::dense(std::size_t limit) const {
  require_dense_limit(size(), limit);
  const auto m = static_cast<Eigen::Index>(blocks_.m());
  const auto n = static_cast<Eigen::Index>(blocks_.n());
  const Eigen::MatrixXd g =
      Eigen::Map<const Eigen::VectorXd>(blocks_.coeff.values().data(), m)
          .asDiagonal() *
      blocks_.space.dense();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m * n, m * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < j; ++l)
      a.block(j * m, l * m, m, m) =
          blocks_.time[static_cast<std::size_t>(j - l)] * eye;
    a.block(j * m, j * m, m, m) = blocks_.time[0] * eye + blocks_.ratio() * g;
  }
  return a;
}

void write_dense(std::ostream& os, const Eigen::MatrixXd& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace fidesp
