#pragma once

#include <cmath>
#include <stdexcept>

#include "pinzero/bigcomplex.hpp"

namespace pinzero {
namespace detail {

// Maclaurin series for erf, evaluated with guard bits sized to the expected
// cancellation (~1.45*|z|^2 bits).
inline BigComplex erf_series(const BigComplex& z, mpfr_prec_t out_prec) {
  double zz = norm(z).to_double();
  mpfr_prec_t work = out_prec + 64 + (mpfr_prec_t)std::ceil(1.4427 * zz);
  BigComplex zw = z.round_to(work);
  BigComplex z2 = zw * zw;
  BigComplex term = zw;  // z^(2n+1)/n!
  BigComplex acc(work);
  BigFloat tr(work), ti(work);
  BigFloat thresh = BigFloat::pow2(-(long)work - 8, 64);
  BigFloat max_mag(work);
  long n = 0;
  while (true) {
    mpfr_div_si(tr.raw(), term.re().raw(), 2 * n + 1, MPFR_RNDN);
    mpfr_div_si(ti.raw(), term.im().raw(), 2 * n + 1, MPFR_RNDN);
    acc.re() += tr;
    acc.im() += ti;
    BigFloat mag = abs(term.re()) + abs(term.im());
    if (mag > max_mag) max_mag = mag;
    if (n > (long)zz && (mag.is_zero() || mag < thresh * max_mag)) break;
    term *= z2;
    mpfr_div_si(term.re().raw(), term.re().raw(), -(n + 1), MPFR_RNDN);
    mpfr_div_si(term.im().raw(), term.im().raw(), -(n + 1), MPFR_RNDN);
    ++n;
    if (n > 100000) throw std::runtime_error("erf_series: no convergence");
  }
  acc = acc * (2.0 / BigFloat::sqrt_pi(work));
  return acc.round_to(out_prec);
}

// DLMF 7.9.1 continued fraction, valid for Re(z) > 0; evaluated with the
// modified Lentz scheme.  Returns erfc(z) directly.
inline BigComplex erfc_lentz(const BigComplex& z, mpfr_prec_t out_prec) {
  mpfr_prec_t work = out_prec + 32;
  BigComplex zw = z.round_to(work);
  BigComplex z2 = zw * zw;
  BigFloat tiny = BigFloat::pow2(-(long)work * 2, 64);
  BigFloat eps = BigFloat::pow2(-(long)work - 4, 64);
  BigComplex f(BigFloat(0.0, work) + tiny, BigFloat(0.0, work));
  BigComplex C = f;
  BigComplex D(work);
  const BigComplex one(BigFloat(1.0, work), BigFloat(0.0, work));
  for (long m = 1; m <= 200000; ++m) {
    BigComplex a = (m == 1) ? zw : BigComplex(BigFloat(0.5 * (double)(m - 1), work), BigFloat(0.0, work));
    const BigComplex& b = (m % 2 == 1) ? z2 : one;
    D = b + a * D;
    if (abs(D) < tiny) D = BigComplex(tiny, BigFloat(0.0, work));
    C = b + a / C;
    if (abs(C) < tiny) C = BigComplex(tiny, BigFloat(0.0, work));
    D = one / D;
    BigComplex delta = C * D;
    f = f * delta;
    if (abs(delta - one) < eps && m > 4)
      return (f * exp(-z2) / BigFloat::sqrt_pi(work)).round_to(out_prec);
  }
  throw std::runtime_error("erfc_lentz: continued fraction stalled");
}

}  // namespace detail

// Complementary error function on the whole plane.  Power series below
// |z| = 4, continued fraction above it, with the reflection
// erfc(-z) = 2 - erfc(z) keeping Re(argument) >= 0.  The fraction degrades
// near the imaginary axis, so the sliver Re(z) < 1, |z| > 4 falls back to
// the guarded series.
inline BigComplex erfc_complex(const BigComplex& z) {
  mpfr_prec_t p = z.prec();
  if (z.re().sign() < 0) return 2.0 - erfc_complex(-z);
  double r2 = norm(z).to_double();
  if (r2 <= 16.0 || z.re() < 1.0)
    return 1.0 - detail::erf_series(z, p);
  return detail::erfc_lentz(z, p);
}

inline BigComplex erf_complex(const BigComplex& z) { return 1.0 - erfc_complex(z); }

// Li_s(x) = sum x^n / n^s for x in (0,1), summed directly.  The summand is
// unimodal in n; the loop stops once it has decreased for 50 consecutive
// terms and the geometric tail bound drops below tol (relative).
inline BigFloat polylog_direct(const BigFloat& s, const BigFloat& x, const BigFloat& tol) {
  if (x.sign() <= 0 || x >= 1.0) throw std::domain_error("polylog_direct: x must be in (0,1)");
  mpfr_prec_t p = std::max(s.prec(), x.prec());
  BigFloat lx = log(x);
  BigFloat acc(p);
  BigFloat prev_mag(p);
  int decreasing = 0;
  for (long n = 1;; ++n) {
    BigFloat term = exp(BigFloat((double)n, p) * lx - s * log(BigFloat((double)n, p)));
    acc += term;
    BigFloat mag = abs(term);
    if (n > 1 && mag < prev_mag)
      ++decreasing;
    else
      decreasing = 0;
    if (decreasing >= 50) {
      // ratio of consecutive summands; past the peak it only shrinks further
      BigFloat r = mag / prev_mag;
      if (r < x) r = x;
      if (r < 1.0) {
        BigFloat tail = mag * r / (1.0 - r);
        if (tail < tol * abs(acc)) return acc;
      }
    }
    prev_mag = mag;
    if (n > 50000000) throw std::runtime_error("polylog_direct: no convergence");
  }
}

inline BigFloat zeta2(mpfr_prec_t prec) {
  BigFloat pi = BigFloat::pi(prec);
  return pi * pi / 6.0;
}
inline BigFloat zeta4(mpfr_prec_t prec) {
  BigFloat pi = BigFloat::pi(prec);
  return pi * pi * pi * pi / 90.0;
}

}  // namespace pinzero
