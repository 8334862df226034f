#include "kernels.hpp"

#include <algorithm>
#include <vector>

#include "fft.hpp"

namespace nlslab::detail {
namespace {

struct Scratch {
  std::vector<cplx> a, b;
  void resize(int N) {
    if (static_cast<int>(a.size()) < N) {
      a.resize(static_cast<std::size_t>(N));
      b.resize(static_cast<std::size_t>(N));
    }
  }
};

Scratch& scratch(int N) {
  thread_local Scratch s;
  s.resize(N);
  return s;
}

inline int wrap(int k, int N) { return k < 0 ? k + N : k; }

}  // namespace

void to_physical(const cplx* c, int n, int N, cplx* out) {
  auto& s = scratch(N);
  std::fill(s.a.begin(), s.a.begin() + N, cplx{});
  for (int k = -n; k <= n; ++k) s.a[static_cast<std::size_t>(wrap(k, N))] = c[k + n];
  fft_backward(s.a.data(), s.b.data(), N);
  std::copy(s.b.begin(), s.b.begin() + N, out);
}

void from_physical(const cplx* x, int N, int n, cplx* c) {
  auto& s = scratch(N);
  std::copy(x, x + N, s.a.begin());
  fft_forward(s.a.data(), s.b.data(), N);
  const double inv = 1.0 / N;
  for (int k = -n; k <= n; ++k) c[k + n] = s.b[static_cast<std::size_t>(wrap(k, N))] * inv;
}

void cubic(const cplx* c, int n, int N, cplx* out) {
  auto& s = scratch(N);
  std::fill(s.a.begin(), s.a.begin() + N, cplx{});
  for (int k = -n; k <= n; ++k) s.a[static_cast<std::size_t>(wrap(k, N))] = c[k + n];
  fft_backward(s.a.data(), s.b.data(), N);
  for (int j = 0; j < N; ++j) {
    const cplx u = s.b[static_cast<std::size_t>(j)];
    s.b[static_cast<std::size_t>(j)] = std::norm(u) * u;
  }
  fft_forward(s.b.data(), s.a.data(), N);
  const double inv = 1.0 / N;
  for (int k = -n; k <= n; ++k) out[k + n] = s.a[static_cast<std::size_t>(wrap(k, N))] * inv;
}

}  // namespace nlslab::detail
