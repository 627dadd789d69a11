#include "fidesp/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "fidesp/coeffs.hpp"
#include "fidesp/errors.hpp"

namespace fidesp {

namespace {

// sum_{k>K} |c_k| <= int_K^inf C x^{-1-order} dx with C = 1.05 |order(order-1)|.
double tail_estimate(double order, std::size_t K) {
  const double c = 1.05 * std::abs(order * (order - 1.0));
  return c * std::pow(static_cast<double>(K), -order) / order;
}

void require_order(std::size_t K) {
  if (K == 0) throw ParameterError("symbol truncation order must be >= 1");
}

}  // namespace

SymbolSeries::SymbolSeries(std::vector<double> coeffs, double tail_bound)
    : coeffs_(std::move(coeffs)), tail_bound_(tail_bound) {
  if (coeffs_.empty()) throw ParameterError("symbol needs at least one coefficient");
  if (!(tail_bound_ >= 0.0)) throw ParameterError("tail bound must be >= 0");
}

std::complex<double> SymbolSeries::operator()(double theta) const {
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const double phase = static_cast<double>(k) * theta;
    re += coeffs_[k] * std::cos(phase);
    im += coeffs_[k] * std::sin(phase);
  }
  return {re, im};
}

std::vector<double> SymbolSeries::sorted_abs_samples(std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (double th : uniform_angles(count)) out.push_back(std::abs((*this)(th)));
  std::sort(out.begin(), out.end());
  return out;
}

SymbolSeries space_symbol(double eta, std::size_t K) {
  require_order(K);
  L1Weights w = space_weights(eta, K + 1);
  return SymbolSeries(std::move(w.diffs), tail_estimate(eta, K));
}

SymbolSeries time_symbol(double xi, double tau, std::size_t K) {
  require_order(K);
  if (!(tau >= 0.0)) throw ParameterError("tempered step tau must be >= 0");
  L1Weights w = time_weights(xi, K + 1);
  for (std::size_t k = 0; k <= K; ++k)
    w.diffs[k] *= std::exp(-static_cast<double>(k) * tau);
  const double damp = std::exp(-static_cast<double>(K + 1) * tau);
  return SymbolSeries(std::move(w.diffs), tail_estimate(xi, K) * damp);
}

std::complex<double> composite_eval(const CompositeSymbol& sym, double x,
                                    double theta1, double theta2) {
  const std::complex<double> h = sym.time(theta1);
  if (sym.nu == 0.0) return h;
  const double ax = sym.a ? sym.a(x) : 0.0;
  if (ax == 0.0) return h;
  return h + sym.nu * ax * sym.space(theta2);
}

double quantile_distance(std::span<const double> values,
                         std::span<const double> symbol_samples) {
  if (values.size() != symbol_samples.size()) {
    throw ParameterError("quantile_distance: length mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    d = std::max(d, std::abs(values[i] - symbol_samples[i]));
  return d;
}

std::vector<double> uniform_angles(std::size_t count) {
  std::vector<double> th(count);
  for (std::size_t j = 0; j < count; ++j) {
    th[j] = -std::numbers::pi + (2.0 * static_cast<double>(j) + 1.0) *
                                    std::numbers::pi / static_cast<double>(count);
  }
  return th;
}

void write_symbol_csv(std::ostream& os, const SymbolSeries& space,
                      const SymbolSeries& time, std::size_t count) {
  os << "theta,abs_g,abs_h,tail_g,tail_h\n";
  char buf[160];
  for (double th : uniform_angles(count)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", th,
                  std::abs(space(th)), std::abs(time(th)), space.tail_bound(),
                  time.tail_bound());
    os << buf << '\n';
  }
}

}  // namespace fidesp
