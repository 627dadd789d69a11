#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fidesp/coeffs.hpp"
#include "fidesp/errors.hpp"
#include "fidesp/spectra.hpp"
#include "fidesp/symbols.hpp"
#include "oracles.hpp"

using namespace fidesp;

namespace {

// Independent partial sum sum_{k<=K} c_k e^{ik theta} with 50-digit weights
// accumulated in long double.
std::complex<long double> long_partial_sum(double order, double tau, std::size_t K,
                                           double theta) {
  long double re = 0, im = 0;
  for (std::size_t k = 0; k <= K; ++k) {
    const long double c =
        static_cast<long double>(oracle::diff_hp(order, k)) * std::exp(-static_cast<long double>(k) * tau);
    re += c * std::cos(static_cast<long double>(k) * theta);
    im += c * std::sin(static_cast<long double>(k) * theta);
  }
  return {re, im};
}

}  // namespace

TEST_CASE("truncated space symbol at zero telescopes to d_K") {
  for (double eta : {0.2, 0.5, 0.8}) {
    for (std::size_t K : {1u, 10u, 1000u}) {
      const SymbolSeries g = space_symbol(eta, K);
      const double dK = static_cast<double>(oracle::weight_hp(eta, K));
      CHECK(g(0.0).real() == doctest::Approx(dK).epsilon(1e-11));
      CHECK(std::abs(g(0.0).imag()) < 1e-14);
    }
  }
  // d_K -> 0, so the full symbol vanishes at theta = 0.
  CHECK(std::abs(space_symbol(0.5, 100000)(0.0)) < 2e-3);
}

TEST_CASE("space symbol matches a much longer partial sum within its tail bound") {
  const SymbolSeries g = space_symbol(0.5, 10000);
  const auto ref = long_partial_sum(0.5, 0.0, 100000, std::numbers::pi);
  const double diff = std::abs(std::abs(g(std::numbers::pi)) -
                               static_cast<double>(std::abs(ref)));
  CHECK(diff <= g.tail_bound());
}

TEST_CASE("time symbol") {
  SUBCASE("leading coefficient is one") {
    for (double xi : {0.1, 0.5, 0.9})
      for (double tau : {0.0, 0.1, 2.0}) CHECK(time_symbol(xi, tau, 10).coeffs()[0] == 1.0);
  }
  SUBCASE("untempered value at zero is b_K") {
    const SymbolSeries h = time_symbol(0.3, 0.0, 500);
    CHECK(h(0.0).real() == doctest::Approx(static_cast<double>(oracle::weight_hp(0.3, 500))).epsilon(1e-11));
  }
  SUBCASE("tempered series agrees with a longer sum within the tail bound") {
    const SymbolSeries h = time_symbol(0.5, 0.1, 1000);
    const auto ref = long_partial_sum(0.5, 0.1, 100000, 0.0);
    CHECK(std::abs(h(0.0) - std::complex<double>(ref)) <= h.tail_bound() + 1e-14);
  }
  CHECK_THROWS_AS(time_symbol(0.5, 0.1, 0), ParameterError);
  CHECK_THROWS_AS(space_symbol(0.5, 0), ParameterError);
  CHECK_THROWS_AS(time_symbol(0.5, -1.0, 10), ParameterError);
}

TEST_CASE("tail bound dominates the exact telescoped tail and the next block") {
  for (double eta : {0.2, 0.5, 0.8}) {
    for (std::size_t K : {1u, 5u, 100u, 10000u}) {
      const SymbolSeries g = space_symbol(eta, K);
      // Negative differences for k >= 1 sum to -d_K.
      const double exact_tail = static_cast<double>(oracle::weight_hp(eta, K));
      CHECK(g.tail_bound() >= exact_tail);
      double block = 0.0;
      const L1Weights w = space_weights(eta, 2 * K + 1);
      for (std::size_t k = K + 1; k <= 2 * K; ++k) block += std::abs(w.diffs[k]);
      CHECK(block <= g.tail_bound());
    }
  }
}

TEST_CASE("absolute coefficient sums converge") {
  for (double eta : {0.2, 0.5, 0.8}) {
    const L1Weights w = space_weights(eta, 100001);
    double sum = 1.0, prev_inc = 2.0;
    bool monotone = true;
    for (std::size_t k = 1; k <= 100000; ++k) {
      const double inc = std::abs(w.diffs[k]);
      monotone = monotone && inc < prev_inc;
      prev_inc = inc;
      sum += inc;
      // Partial sums telescope: 1 + sum_{j<=k} |delta_j| = 2 - d_k.
      if (k == 10000 || k == 100000)
        CHECK(sum == doctest::Approx(2.0 - static_cast<double>(oracle::weight_hp(eta, k))).epsilon(1e-12));
    }
    CHECK(monotone);
    CHECK(sum < 2.0);
    // Remaining mass beyond 10^5 is exactly d_{10^5}.
    CHECK(2.0 - sum < 0.2);
  }
}

TEST_CASE("evaluation is 2 pi periodic and conjugate symmetric") {
  const SymbolSeries g = space_symbol(0.5, 2000);
  for (double th : {-3.0, -1.2, 0.3, 2.9}) {
    CHECK(std::abs(g(th) - g(th + 2.0 * std::numbers::pi)) < 1e-12);
    CHECK(std::abs(g(-th) - std::conj(g(th))) < 1e-12);
  }
}

TEST_CASE("composite symbol") {
  const CompositeSymbol zero_a{time_symbol(0.5, 0.1, 200), space_symbol(0.5, 200), 1.3,
                               [](double) { return 0.0; }};
  CHECK(composite_eval(zero_a, 0.4, 0.7, -1.1) == zero_a.time(0.7));

  const CompositeSymbol zero_nu{time_symbol(0.5, 0.1, 200), space_symbol(0.5, 200), 0.0,
                                [](double x) { return x; }};
  CHECK(composite_eval(zero_nu, 0.4, 0.7, -1.1) == zero_nu.time(0.7));

  // x = 1, a(x) = x, theta = 0: b_K + nu d_K.
  const std::size_t K = 20000;
  const double nu = 0.8;
  const CompositeSymbol sym{time_symbol(0.4, 0.0, K), space_symbol(0.6, K), nu,
                            [](double x) { return x; }};
  const double expected = static_cast<double>(oracle::weight_hp(0.4, K)) +
                          nu * static_cast<double>(oracle::weight_hp(0.6, K));
  CHECK(composite_eval(sym, 1.0, 0.0, 0.0).real() == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected < 0.02);
}

TEST_CASE("quantile distance") {
  const std::vector<double> v{0.1, 0.5, 0.9, 1.4};
  CHECK(quantile_distance(v, v) == 0.0);
  std::vector<double> shifted = v;
  for (auto& x : shifted) x += 0.25;
  CHECK(quantile_distance(v, shifted) == doctest::Approx(0.25));
  CHECK_THROWS_AS(quantile_distance(v, std::vector<double>{1.0}), ParameterError);
}

TEST_CASE("singular values of the space Toeplitz matrix follow |g| (m = 256)") {
  const SymbolSeries g = space_symbol(0.5);
  const SpectralReport r = toeplitz_distribution(LowerToeplitz(space_weights(0.5, 256).diffs), g);
  CHECK(r.distance <= 0.1);
}

TEST_CASE("symbol CSV has the fixed header and symmetric |g|") {
  std::ostringstream os;
  write_symbol_csv(os, space_symbol(0.5, 500), time_symbol(0.5, 0.01, 500), 64);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,abs_g,abs_h,tail_g,tail_h");
  std::vector<double> abs_g;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string theta, g;
    std::getline(row, theta, ',');
    std::getline(row, g, ',');
    abs_g.push_back(std::stod(g));
  }
  REQUIRE(abs_g.size() == 64);
  for (std::size_t i = 0; i < 32; ++i) CHECK(abs_g[i] == doctest::Approx(abs_g[63 - i]).epsilon(1e-12));
}
