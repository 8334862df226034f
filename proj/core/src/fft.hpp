#pragma once

#include <complex>

namespace nlslab::detail {

// out_j = sum_q in_q exp(+2 pi i q j / N)
void fft_backward(const std::complex<double>* in, std::complex<double>* out, int N);
// out_q = sum_j in_j exp(-2 pi i q j / N)
void fft_forward(const std::complex<double>* in, std::complex<double>* out, int N);

}  // namespace nlslab::detail
