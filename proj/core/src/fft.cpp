#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>
#include <vector>

namespace nlslab::detail {
namespace {

// The FFTW planner is not thread safe; execution with new-array functions is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
public:
  ~PlanCache() {
    std::lock_guard lock(planner_mutex());
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }

  const PlanPair& get(int N) {
    auto it = plans_.find(N);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(N)), b(static_cast<std::size_t>(N));
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    {
      std::lock_guard lock(planner_mutex());
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      p.fwd = fftw_plan_dft_1d(N, pa, pb, FFTW_FORWARD, flags);
      p.bwd = fftw_plan_dft_1d(N, pa, pb, FFTW_BACKWARD, flags);
    }
    return plans_.emplace(N, p).first->second;
  }

private:
  std::unordered_map<int, PlanPair> plans_;
};

PlanCache& cache() {
  thread_local PlanCache c;
  return c;
}

}  // namespace

void fft_backward(const std::complex<double>* in, std::complex<double>* out, int N) {
  fftw_execute_dft(cache().get(N).bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void fft_forward(const std::complex<double>* in, std::complex<double>* out, int N) {
  fftw_execute_dft(cache().get(N).fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace nlslab::detail
