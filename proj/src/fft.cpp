#include "fidesp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fidesp/errors.hpp"

namespace fidesp::fft {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape and never destroyed.
class PlanCache {
 public:
  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<fftw_complex> scratch(rows * cols);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan =
        rows == 1 ? fftw_plan_dft_1d(static_cast<int>(cols), scratch.data(),
                                     scratch.data(), sign, flags)
                  : fftw_plan_dft_2d(static_cast<int>(rows),
                                     static_cast<int>(cols), scratch.data(),
                                     scratch.data(), sign, flags);
    if (plan == nullptr) throw ResourceError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<cplx> data, std::size_t rows, std::size_t cols,
         Direction dir) {
  if (data.size() != rows * cols) {
    throw ParameterError("fft: buffer size does not match shape");
  }
  if (data.empty()) return;
  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = cache().get(rows, cols, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
  if (dir == Direction::Inverse) {
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
  }
}

}  // namespace

void transform(std::span<cplx> data, Direction dir) {
  run(data, 1, data.size(), dir);
}

void transform_2d(std::span<cplx> data, std::size_t rows, std::size_t cols,
                  Direction dir) {
  run(data, rows, cols, dir);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace fidesp::fft
