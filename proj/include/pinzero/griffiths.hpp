#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "pinzero/scaling.hpp"
#include "pinzero/special.hpp"
#include "pinzero/zeros.hpp"

namespace pinzero {

// Constants of the large-k law for the reduced-model Taylor coefficients,
//   k t_k ~ C1 C2^k exp(A sqrt(k)) Gamma(k/2 + 1) cos(a k + b sqrt(k) + c),
// assembled from the closest-zero expansion (z0, z1, z2) at alpha = 1/2.
// The oscillation and tilt enter through the expansion of arg and modulus of
// sqrt(n) h_{n,1} around z0; averaging the tilted window against the Gaussian
// profile of p^n n^{alpha k} (window scale beta = alpha k) contributes the
// alpha (C^2 - d^2)/2 and alpha C d factors folded into C1 and c below.
struct GriffithsConstants {
  double p = 0.5;
  BigComplex z0, z1, z2;
  BigFloat a, b, c, d, A, B, C, b1, b2, C1, C2;
};

inline GriffithsConstants griffiths_constants(double p, const BigComplex& z0) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("griffiths_constants: p in (0,1)");
  const double alpha = 0.5;  // the law is derived in the alpha = 1/2 framework
  mpfr_prec_t prec = z0.prec();
  GriffithsConstants g;
  g.p = p;
  g.z0 = z0;
  ZeroExpansion e = zero_expansion(z0);
  g.z1 = e.z1;
  g.z2 = e.z2;
  BigFloat logp = abs(log(BigFloat(p, prec)));
  BigFloat logp2 = logp * logp;
  BigFloat cp = sqrt(logp / alpha);
  BigComplex r1 = g.z1 / z0;
  BigComplex beta2 = g.z2 / z0 - g.z1 * g.z1 / (2.0 * z0 * z0);
  g.a = arg(z0);
  g.b1 = r1.im();
  g.b2 = beta2.im();
  g.b = g.b1 * cp;
  g.d = -0.5 * g.b1 * cp * cp * cp;
  g.A = -r1.re() * cp;
  g.B = -beta2.re() * cp * cp;
  g.C = 0.5 * r1.re() * cp * cp * cp;
  g.c = g.b2 * cp * cp + alpha * g.C * g.d / logp2;
  g.C1 = -(2.0 / logp) * exp(g.B + alpha * (g.C * g.C - g.d * g.d) / (2.0 * logp2));
  g.C2 = 1.0 / (abs(z0) * sqrt(logp));
  return g;
}

// Prediction for k t_k = partial^k f_p / (k-1)! at h = 0.
inline BigFloat griffiths_prediction(const GriffithsConstants& g, long k) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(g.a.prec(), 128);
  BigFloat kk((double)k, p);
  BigFloat phase = g.a * kk + g.b * sqrt(kk) + g.c;
  return g.C1 * exp(kk * log(g.C2)) * exp(g.A * sqrt(kk)) * gamma_real(kk / 2.0 + 1.0) *
         cos(phase);
}

inline BigFloat griffiths_cosine(const GriffithsConstants& g, long k) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(g.a.prec(), 128);
  BigFloat kk((double)k, p);
  return cos(g.a * kk + g.b * sqrt(kk) + g.c);
}

// Zero store and bookkeeping for the reduced disordered model
// f_p(h) = sum_{n >= n0} p^n sum_j log(1 - h/h_{n,j}).
struct GriffithsRun {
  double p = 0.5;
  int n0 = 3;
  int n_max = 0;
  std::map<int, ZeroSet> zero_store;

  void add(ZeroSet zs) {
    n_max = std::max(n_max, zs.N);
    zero_store.emplace(zs.N, std::move(zs));
  }

  // window the truncated tail analysis needs: n_{p,k} + l_k
  long required_n(long k) const {
    double a = std::fabs(std::log(p));
    long npk = (long)std::floor(0.5 * (double)k / a);
    long lk = (long)std::ceil(std::sqrt((double)k) * std::log((double)k));
    return npk + lk;
  }
};

// t_k = (1/k!) f_p^{(k)}(0) = -(1/k) sum_n p^n sum_j h_{n,j}^{-k}, summed in
// log-polar form with conjugate pairs combined into 2 |h|^{-k} cos(k arg h)
// so the result is exactly real.  Working precision >= k + 128 bits.
inline BigFloat taylor_coefficient(const GriffithsRun& run, long k) {
  if (k < 1) throw std::domain_error("taylor_coefficient: k >= 1");
  long need = run.required_n(k);
  if (run.n_max < need)
    throw std::runtime_error("taylor_coefficient: zero store reaches n = " +
                             std::to_string(run.n_max) + " but k = " + std::to_string(k) +
                             " requires n_max >= " + std::to_string(need));
  mpfr_prec_t p = std::max<mpfr_prec_t>((mpfr_prec_t)(k + 128), 192);
  BigFloat logp = log(BigFloat(run.p, p));
  BigFloat acc(p);
  BigFloat kk((double)k, p);
  for (const auto& [n, zs] : run.zero_store) {
    if (n < run.n0) continue;
    BigFloat pn = BigFloat((double)n, p) * logp;
    for (const ZeroRecord& r : zs.zeros) {
      if (r.h.im().sign() < 0) continue;  // conjugate partner handled by the cosine
      BigFloat mod = abs(r.h).round_to(p);
      BigFloat th = arg(r.h).round_to(p);
      BigFloat mag = exp(pn - kk * log(mod));
      BigFloat term = mag * cos(kk * th);
      // zeros on the Im = pi line are their own conjugates in the cylinder
      bool self_conjugate = BigFloat::pi(r.h.prec()) - r.h.im() < BigFloat::pow2(-40, 64);
      acc += self_conjugate ? term : 2.0 * term;
    }
  }
  return -acc / kk;
}

// Unpaired complex route: every zero enters as h^{-k}, except that a zero on
// the Im = pi line is its own conjugate in the cylinder and stands for the
// two representatives x +- i pi of the entire function, so it enters as
// their average.  The imaginary part must then cancel to rounding, which the
// reality test asserts.
inline BigComplex taylor_coefficient_complex(const GriffithsRun& run, long k) {
  mpfr_prec_t p = std::max<mpfr_prec_t>((mpfr_prec_t)(k + 128), 192);
  BigFloat logp = log(BigFloat(run.p, p));
  BigComplex acc(p);
  BigFloat kk((double)k, p);
  for (const auto& [n, zs] : run.zero_store) {
    if (n < run.n0) continue;
    BigFloat pn = BigFloat((double)n, p) * logp;
    for (const ZeroRecord& r : zs.zeros) {
      BigFloat mod = abs(r.h).round_to(p);
      BigFloat th = arg(r.h).round_to(p);
      BigFloat mag = exp(pn - kk * log(mod));
      BigFloat s(p), c(p);
      BigFloat ang = -kk * th;
      mpfr_sin_cos(s.raw(), c.raw(), ang.raw(), MPFR_RNDN);
      bool self_conjugate = BigFloat::pi(r.h.prec()) - r.h.im() < BigFloat::pow2(-40, 64);
      if (self_conjugate)
        acc += BigComplex(mag * c, BigFloat(0.0, p));  // average of the pair x +- i pi
      else
        acc += BigComplex(mag * c, mag * s);
    }
  }
  return -(acc / kk);
}

enum class WindowModulator { One, ExpCos, ExpSin };

struct WindowSumResult {
  BigFloat window_sum;  // sum over |n - n_beta| <= l_beta of p^n n^beta H((n-n_beta)/sqrt(beta))
  BigFloat full_sum;    // same summand over all n >= 1
  BigFloat prediction;  // T_beta * Gaussian average of H
};

// Modified polylogarithm sums: H(x) = exp(C x) h(d x) with h = 1, cos or
// sin.  The prediction is T_beta exp((C^2-d^2)/(2 log^2 p)) h(C d / log^2 p),
// the Gaussian-window average of the tilt.
inline WindowSumResult polylog_window_sum(double beta, double p, WindowModulator kind, double Cc,
                                          double dd, mpfr_prec_t prec = 256) {
  if (beta < 10.0) throw std::domain_error("polylog_window_sum: beta >= 10 required");
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("polylog_window_sum: p in (0,1)");
  BigFloat logp = log(BigFloat(p, prec));
  BigFloat a = abs(logp);
  double n_beta = beta / std::fabs(std::log(p));
  double l_beta = std::sqrt(beta) * std::log(beta);
  BigFloat bb(beta, prec);
  BigFloat sqb = sqrt(bb);
  auto H = [&](const BigFloat& x) {
    BigFloat v = exp(Cc * x);
    if (kind == WindowModulator::ExpCos) v *= cos(dd * x);
    if (kind == WindowModulator::ExpSin) v *= sin(dd * x);
    return v;
  };
  auto summand = [&](long n) {
    BigFloat nn((double)n, prec);
    return exp(nn * logp + bb * log(nn)) * H((nn - n_beta) / sqb);
  };
  WindowSumResult out;
  out.window_sum = BigFloat(prec);
  long lo = std::max(1L, (long)std::ceil(n_beta - l_beta));
  long hi = (long)std::floor(n_beta + l_beta);
  for (long n = lo; n <= hi; ++n) out.window_sum += summand(n);
  out.full_sum = BigFloat(prec);
  long far = (long)std::ceil(std::max(4.0 * n_beta, n_beta + 40.0 * std::sqrt(beta)));
  for (long n = 1; n <= far; ++n) out.full_sum += summand(n);
  BigFloat tb = exp(log_gamma_real(1.0 + bb) - (1.0 + bb) * log(a));
  BigFloat gauss = exp((Cc * Cc - dd * dd) / (2.0 * logp * logp));
  BigFloat hval(1.0, prec);
  BigFloat phase = Cc * dd / (logp * logp);
  if (kind == WindowModulator::ExpCos) hval = cos(phase);
  if (kind == WindowModulator::ExpSin) hval = sin(phase);
  out.prediction = tb * gauss * hval;
  return out;
}

// Kolmogorov-Smirnov distance of {(a k + b sqrt(k) + c) mod 2pi, k <= n}
// from the uniform law on the circle.  Degenerate lattices (b = 0 with
// a/(2pi) rational) are rejected.
inline double equidistribution_ks(double a, double b, double c, long n) {
  if (b == 0.0) {
    const double two_pi = 6.283185307179586476925287;
    for (int q = 1; q <= 64; ++q) {
      double v = a * q / two_pi;
      if (std::fabs(v - std::round(v)) < 1e-9)
        throw std::domain_error("equidistribution_ks: degenerate lattice (b = 0, a/2pi = " +
                                std::to_string(std::round(v)) + "/" + std::to_string(q) + ")");
    }
  }
  const double two_pi = 6.283185307179586476925287;
  std::vector<double> u(n);
  for (long k = 1; k <= n; ++k) {
    double v = std::fmod(a * (double)k + b * std::sqrt((double)k) + c, two_pi);
    if (v < 0) v += two_pi;
    u[k - 1] = v / two_pi;
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (long i = 0; i < n; ++i) {
    ks = std::max(ks, std::fabs((double)(i + 1) / (double)n - u[i]));
    ks = std::max(ks, std::fabs(u[i] - (double)i / (double)n));
  }
  return ks;
}

}  // namespace pinzero
