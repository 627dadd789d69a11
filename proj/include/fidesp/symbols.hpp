#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace fidesp {

inline constexpr std::size_t kDefaultSymbolOrder = 10000;

/// Truncated one-sided Fourier series s(theta) = sum_{k=0}^{K} c_k e^{ik theta}
/// of a lower-triangular Toeplitz generating function, together with an
/// upper bound on the l1 norm of the discarded tail sum_{k>K} |c_k|.
class SymbolSeries {
 public:
  SymbolSeries() = default;
  SymbolSeries(std::vector<double> coeffs, double tail_bound);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double tail_bound() const noexcept { return tail_bound_; }

  std::complex<double> operator()(double theta) const;

  /// |s| at count uniform midpoints of [-pi, pi], sorted ascending.
  std::vector<double> sorted_abs_samples(std::size_t count) const;

 private:
  std::vector<double> coeffs_;
  double tail_bound_ = 0.0;
};

/// Generating function of the space block: coefficients delta_0..delta_K.
SymbolSeries space_symbol(double eta, std::size_t K = kDefaultSymbolOrder);

/// Generating function of the time block with tempered step tau = rho dt:
/// coefficients gamma_k e^{-k tau}.
SymbolSeries time_symbol(double xi, double tau,
                         std::size_t K = kDefaultSymbolOrder);

/// h(theta1) + nu a(x) g(theta2), the symbol of the all-at-once sequence.
struct CompositeSymbol {
  SymbolSeries time;
  SymbolSeries space;
  double nu = 0.0;
  std::function<double(double)> a;
};

std::complex<double> composite_eval(const CompositeSymbol& sym, double x,
                                    double theta1, double theta2);

/// Sup distance between two ascending sequences of equal length (the
/// empirical quantile functions). Throws ParameterError on length mismatch.
double quantile_distance(std::span<const double> values,
                         std::span<const double> symbol_samples);

/// Midpoint grid theta_j = -pi + (2j+1) pi / count.
std::vector<double> uniform_angles(std::size_t count);

/// theta,abs_g,abs_h,tail_g,tail_h rows over `count` uniform angles.
void write_symbol_csv(std::ostream& os, const SymbolSeries& space,
                      const SymbolSeries& time, std::size_t count);

}  // namespace fidesp
