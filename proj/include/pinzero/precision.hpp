#pragma once

#include <algorithm>
#include <cmath>

#include <mpfr.h>

namespace pinzero {

// Working-precision schedule.  Partition-polynomial coefficients span roughly
// N*log2(1/K(1)) bits of dynamic range, so degree-N work gets base_bits plus
// per_degree_bits extra bits per unit of degree, never below 128.
struct PrecisionPolicy {
  long base_bits = 256;
  double per_degree_bits = 1.5;
  double quadrature_tol = 1e-30;

  mpfr_prec_t bits_for_degree(long n) const {
    long p = base_bits + (long)std::ceil(per_degree_bits * (double)n);
    return (mpfr_prec_t)std::max<long>(p, 128);
  }
};

}  // namespace pinzero
