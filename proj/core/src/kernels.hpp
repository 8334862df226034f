#pragma once

#include <complex>

namespace nlslab::detail {

using cplx = std::complex<double>;

// Spectral coefficients c[k+n], |k| <= n, to values on N uniform points.
void to_physical(const cplx* c, int n, int N, cplx* out);
// Values on N points to coefficients |k| <= n (modes beyond n dropped).
void from_physical(const cplx* x, int N, int n, cplx* c);
// out = P_n(|u|^2 u) computed on N >= 4n+1 points. out may alias c.
void cubic(const cplx* c, int n, int N, cplx* out);

}  // namespace nlslab::detail
