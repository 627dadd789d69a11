#include <doctest.h>

#include <sstream>
#include <string>

#include "fidesp/coeffs.hpp"
#include "fidesp/errors.hpp"
#include "fidesp/precond.hpp"
#include "fidesp/spectra.hpp"
#include "oracles.hpp"

using namespace fidesp;

namespace {

struct Case {
  FractionalParams params;
  Grid grid;
  AllAtOnceOperator op;
};

Case make_case(double xi, double eta, std::size_t m, std::size_t n) {
  FractionalParams p;
  p.xi = xi;
  p.eta = eta;
  const Grid g = Grid::make(m, n, p.T);
  auto blocks = SpaceTimeBlocks::make(p, g, [](double x) { return x; },
                                      [](double t) { return t * t; });
  return {p, g, AllAtOnceOperator(std::move(blocks), p.lambda)};
}

}  // namespace

TEST_CASE("dense eigenvalues") {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) L(i, j) = 0.1 * (i + 1) + 0.37 * j;
  const auto d = eig_dense(L);
  REQUIRE(d.size() == 5);
  for (int i = 0; i < 5; ++i) {
    bool found = false;
    for (const auto& e : d) found = found || e == std::complex<double>(L(i, i), 0.0);
    CHECK(found);
  }

  Eigen::MatrixXd S(2, 2);
  S << 0, 1, 1, 0;
  auto e2 = eig_dense(S);
  std::sort(e2.begin(), e2.end(), [](auto a, auto b) { return a.real() < b.real(); });
  CHECK(std::abs(e2[0] + 1.0) < 1e-15);
  CHECK(std::abs(e2[1] - 1.0) < 1e-15);

  const auto v = oracle::random_vector(2500, 1);
  const Eigen::MatrixXd R = Eigen::Map<const Eigen::MatrixXd>(v.data(), 50, 50);
  std::complex<double> sum = 0;
  for (const auto& e : eig_dense(R)) sum += e;
  CHECK(std::abs(sum - R.trace()) <= 1e-9 * std::max(1.0, std::abs(R.trace())));

  CHECK_THROWS_AS(eig_dense(Eigen::MatrixXd::Identity(10, 10), 9), ResourceError);
}

TEST_CASE("cluster counting") {
  const std::vector<std::complex<double>> same(4, {1.0, 0.0});
  CHECK(cluster_count(same, 1.0, 1e-6) == 0);
  std::vector<std::complex<double>> one = same;
  one[2] += 2e-6;
  CHECK(cluster_count(one, 1.0, 1e-6) == 1);
}

TEST_CASE("preconditioned spectrum clusters at one") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 4}, {8, 8}, {16, 16}, {8, 16}}) {
    const Case c = make_case(0.5, 0.5, m, n);
    const SpectralReport r = preconditioned_cluster(c.op, 1e-8);
    CHECK(r.eigenvalues.size() == c.op.size());
    CHECK(r.outlier_count <= m);
    CHECK(cluster_count(r.eigenvalues, 1.0, 1e-6) <= m);
  }
  // The explicit preconditioned matrix agrees with a dense solve.
  const Case c = make_case(0.2, 0.8, 4, 4);
  const Eigen::MatrixXd A = c.op.dense();
  const Eigen::MatrixXd P = BlockTriangularPreconditioner(c.op).dense();
  CHECK((preconditioned_dense(c.op) - P.partialPivLu().solve(A)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the preconditioner differs from the operator by at most m ranks") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 8}, {16, 16}, {32, 8}})
    CHECK(correction_rank(make_case(0.5, 0.5, m, n).op) <= m);
}

TEST_CASE("singular value distributions") {
  const SpectralReport u = kron_identity_distribution(
      time_toeplitz(time_weights(0.2, 256), 1.0, 1.0 / 256), 4, time_symbol(0.2, 1.0 / 256));
  CHECK(u.distance <= 0.1);
  CHECK(u.singular_values.size() == 1024);

  std::vector<double> dist;
  for (std::size_t m : {4u, 8u, 16u, 32u}) {
    const Case c = make_case(0.5, 0.5, m, m);
    const SpectralReport r = distribution_check(c.op, c.params, c.grid, [](double x) { return x; });
    CHECK(r.reference.size() == c.op.size());
    CHECK(r.nu == doctest::Approx(c.op.blocks().ratio()));
    dist.push_back(r.distance);
  }
  for (std::size_t k = 1; k < dist.size(); ++k) CHECK(dist[k] <= 1.15 * dist[k - 1]);
}

TEST_CASE("Toeplitz structure of the blocks") {
  for (const LowerToeplitz& t : {space_toeplitz(space_weights(0.3, 40)),
                                 time_toeplitz(time_weights(0.6, 40), 1.0, 0.025)}) {
    const Eigen::MatrixXd M = t.dense();
    for (int i = 0; i + 1 < 40; ++i)
      for (int j = 0; j + 1 < 40; ++j) CHECK(M(i, j) == M(i + 1, j + 1));
  }
}

TEST_CASE("spectral CSV") {
  SpectralReport r;
  r.singular_values = {0.5, 1.5};
  r.reference = {0.4, 1.6};
  std::ostringstream os;
  write_spectral_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,re,im,sigma,reference");
  std::getline(in, line);
  CHECK(line.rfind("0,,,", 0) == 0);
}
