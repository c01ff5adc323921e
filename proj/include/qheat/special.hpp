#pragma once

#include "qheat/types.hpp"

namespace qheat {

// psi^(k)(z) for k = 1, 2, 3 (trigamma, tetragamma, pentagamma), z off the
// non-positive real axis.
cplx polygamma(int k, cplx z);

inline cplx trigamma(cplx z) { return polygamma(1, z); }

// Generalized exponential integral E_n(z) = int_1^inf e^{-zt} t^{-n} dt for
// n >= 1 and Re z >= 0 (z = 0 allowed for n >= 2).
cplx expint_en(int n, cplx z);

}  // namespace qheat
