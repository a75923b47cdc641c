#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pinzero/partition.hpp"
#include "pinzero/special.hpp"
#include "pinzero/zeros.hpp"

namespace pinzero {

// F0(zeta) = zeta e^{zeta^2} erfc(-zeta) + 1/sqrt(pi), the alpha = 1/2
// scaling limit of sqrt(N) Z_{N, zeta/sqrt(N)}.  Entire.
inline BigComplex f0(const BigComplex& zeta) {
  mpfr_prec_t p = zeta.prec();
  return zeta * exp(zeta * zeta) * erfc_complex(-zeta) + BigComplex(1.0 / BigFloat::sqrt_pi(p));
}

// F0'(zeta) = 2 zeta / sqrt(pi) + e^{zeta^2} (1 + 2 zeta^2) (1 + erf(zeta))
inline BigComplex f0_prime(const BigComplex& zeta) {
  mpfr_prec_t p = zeta.prec();
  return 2.0 * zeta / BigFloat::sqrt_pi(p) +
         exp(zeta * zeta) * (1.0 + 2.0 * zeta * zeta) * erfc_complex(-zeta);
}

// First finite-size correction F1 in
// sqrt(N) Z_{N, zeta/sqrt(N)} = F0 + F1/sqrt(N) + F2/N + O(N^{-3/2}).
inline BigComplex f1_scaling(const BigComplex& z) {
  mpfr_prec_t p = z.prec();
  BigComplex z2 = z * z;
  BigComplex erfp1 = erfc_complex(-z);  // 1 + erf(z)
  return -0.5 * z *
         (exp(z2) * z * (2.0 * z2 + 3.0) * erfp1 + 2.0 * (z2 + 1.0) / BigFloat::sqrt_pi(p));
}

// Second finite-size correction F2.
inline BigComplex f2_scaling(const BigComplex& z) {
  mpfr_prec_t p = z.prec();
  BigComplex z2 = z * z;
  BigComplex z4 = z2 * z2;
  BigComplex z6 = z4 * z2;
  BigComplex erfp1 = erfc_complex(-z);
  return (2.0 * exp(z2) * (6.0 * z4 + 31.0 * z2 + 26.0) * z2 * z * erfp1 +
          (12.0 * z6 + 56.0 * z4 + 30.0 * z2 - 3.0) / BigFloat::sqrt_pi(p)) /
         24.0;
}

// F0 and F0' together from a single erfc evaluation; the certification
// contours evaluate both at every node, and erfc dominates the cost.
inline std::pair<BigComplex, BigComplex> f0_pair(const BigComplex& zeta) {
  mpfr_prec_t p = zeta.prec();
  BigComplex e2 = exp(zeta * zeta);
  BigComplex ec = erfc_complex(-zeta);
  BigFloat isp = 1.0 / BigFloat::sqrt_pi(p);
  BigComplex v = zeta * e2 * ec + BigComplex(isp);
  BigComplex d = 2.0 * zeta * isp + e2 * (1.0 + 2.0 * zeta * zeta) * ec;
  return {v, d};
}

// Asymptotic seed for the n-th zero of F0 (positive-imaginary branch),
// lambda_n = sqrt(pi (n + 1/8)).
inline BigComplex asymptotic_zero_seed(int n, mpfr_prec_t prec = 128) {
  if (n < 1) throw std::domain_error("asymptotic_zero_seed: n >= 1");
  BigFloat lam = sqrt(BigFloat::pi(prec) * ((double)n + 0.125));
  BigFloat corr = log(8.0 * sqrt(2.0 * BigFloat::pi(prec)) * lam * lam * lam) / (4.0 * lam);
  return BigComplex(lam - corr, lam + corr);
}

struct ScalingZero {
  int index = 0;
  BigComplex zeta;   // positive-imaginary representative
  BigComplex seed;   // asymptotic seed it was refined from
  BigFloat residual; // |F0(zeta)|
  bool certified = false;  // winding count 1 in a disk of radius 0.2
};

// Damped Newton on F0: the function grows like e^{zeta^2}, so steps that
// increase |F0| are halved.
inline BigComplex newton_f0(const BigComplex& seed, const BigFloat& tol, int max_iters = 200) {
  BigComplex z = seed;
  BigFloat fmag = abs(f0(z));
  for (int it = 0; it < max_iters; ++it) {
    auto [v, d] = f0_pair(z);
    BigComplex step = v / d;
    double damp = 1.0;
    for (int tries = 0; tries < 40; ++tries) {
      BigComplex cand = z - step * damp;
      BigFloat m = abs(f0(cand));
      if (m < fmag || tries == 39) {
        z = cand;
        fmag = m;
        break;
      }
      damp *= 0.5;
    }
    if (abs(step) * damp < tol) return z;
  }
  throw std::runtime_error("newton_f0: no convergence from the given seed");
}

inline AnalyticEvaluator f0_evaluator() {
  return [](const BigComplex& z) { return f0_pair(z); };
}

// The first n_max zeros of F0 with positive imaginary part: Newton from the
// asymptotic seeds at the requested precision, each certified by an
// argument-principle count of 1 on a disk of radius 0.2, plus a sweep of the
// rectangle (0, Re zeta_{n_max}+1) x (0, Im zeta_{n_max}+1) certifying that
// its total zero count matches the refined occupancy (so nothing was
// missed).  Zeros beyond n_max are refined too, uncertified, because the
// rectangle can contain them.  Counting is topological, so the certification
// contours run at 128 bits.
inline std::vector<ScalingZero> f0_zeros(int n_max, mpfr_prec_t prec = 256, bool certify = true,
                                         int quad_points = 256, int threads = 1) {
  if (n_max < 1) throw std::domain_error("f0_zeros: n_max >= 1");
  BigFloat tol = BigFloat::pow2(-(long)prec / 2, 64);
  std::vector<ScalingZero> out;
  std::vector<BigComplex> extended;
  double sweep_xmax = 0.0, sweep_ymax = 0.0;
  for (int n = 1; n <= 4 * n_max + 16; ++n) {
    mpfr_prec_t np = n <= n_max ? prec : 160;  // extras only mark occupancy
    BigComplex seed = asymptotic_zero_seed(n, np);
    BigComplex zeta = newton_f0(seed, BigFloat::pow2(-(long)np / 2, 64));
    if (zeta.re().sign() <= 0 || zeta.im().sign() <= 0)
      throw std::runtime_error("f0_zeros: refined zero left the open first quadrant");
    extended.push_back(zeta);
    if (n <= n_max) {
      ScalingZero sz;
      sz.index = n;
      sz.zeta = zeta;
      sz.seed = seed;
      sz.residual = abs(f0(zeta));
      out.push_back(sz);
      if (n == n_max) {
        sweep_xmax = zeta.re().to_double() + 1.0;
        sweep_ymax = zeta.im().to_double() + 1.0;
      }
    } else if (zeta.re().to_double() > sweep_xmax + 0.5 && zeta.im().to_double() > sweep_ymax + 0.5) {
      break;  // later zeros lie strictly beyond the sweep rectangle
    }
  }
  if (!certify) return out;
  const mpfr_prec_t cert_prec = 128;
  AnalyticEvaluator ev = f0_evaluator();
  std::vector<std::string> failures((size_t)n_max);
  parallel_for(n_max, threads, [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      ScalingZero& sz = out[i];
      int cnt = count_zeros_in_disk(ev, sz.zeta.round_to(cert_prec), BigFloat(0.2, cert_prec),
                                    quad_points);
      if (cnt != 1)
        failures[i] = "f0_zeros: disk certification failed at index " + std::to_string(sz.index);
      else
        sz.certified = true;
    }
  });
  for (const std::string& f : failures)
    if (!f.empty()) throw std::runtime_error(f);
  // global sweep: one rectangle, edges kept off the axes (F0 has no zeros
  // there) and away from every refined zero
  double xmax = sweep_xmax;
  double ymax = sweep_ymax;
  for (int attempt = 0; attempt < 6; ++attempt) {
    double min_edge_dist = 1e9;
    for (const BigComplex& z : extended) {
      double x = z.re().to_double(), y = z.im().to_double();
      min_edge_dist = std::min({min_edge_dist, std::fabs(xmax - x), std::fabs(ymax - y)});
    }
    if (min_edge_dist >= 0.05) break;
    xmax += 0.073;
    ymax += 0.061;
  }
  int expected = 0;
  for (const BigComplex& z : extended) {
    double x = z.re().to_double(), y = z.im().to_double();
    if (x > 0.02 && x <= xmax && y > 0.02 && y <= ymax) ++expected;
  }
  int total = count_zeros_in_rect(ev, 0.02, xmax, 0.02, ymax, cert_prec, 2 * quad_points);
  if (total != expected)
    throw std::runtime_error("f0_zeros: sweep count " + std::to_string(total) +
                             " does not match the refined occupancy " + std::to_string(expected));
  return out;
}

struct ZeroExpansion {
  BigComplex z0, z1, z2;
};

// Coefficients of the closest-zero expansion
// sqrt(N) h_{N,j} = z0 + z1/sqrt(N) + z2/N + O(N^{-3/2}), obtained by solving
// F0 + F1/sqrt(N) + F2/N = 0 order by order at a simple zero z0 of F0:
//   z1 = -F1(z0)/F0'(z0) = z0^2/2,
//   z2 = -((1/2)F0''(z0) z1^2 + F1'(z0) z1 + F2(z0)) / F0'(z0)
//      = z0 (2 z0^2 - 3)/24,
// using F0'(z0) = -1/(z0 sqrt(pi)), F0''(z0) = -2/sqrt(pi),
// F1'(z0) = (z0^2+2)/sqrt(pi), F1(z0) = z0/(2 sqrt(pi)) and
// F2(z0) = -(6 z0^4 + 22 z0^2 + 3)/(24 sqrt(pi)).
inline ZeroExpansion zero_expansion(const BigComplex& z0) {
  ZeroExpansion e;
  e.z0 = z0;
  e.z1 = 0.5 * z0 * z0;
  e.z2 = z0 * (2.0 * z0 * z0 - 3.0) / 24.0;
  return e;
}

// max over the grid of |sqrt(N) Z_{N, zeta/sqrt(N)} - F0(zeta)|.
inline BigFloat scaling_limit_check(const PartitionPolynomial& poly,
                                    std::span<const BigComplex> zeta_grid) {
  mpfr_prec_t p = zeta_grid.empty() ? 128 : zeta_grid[0].prec();
  BigFloat rootN = sqrt(BigFloat((double)poly.N(), p));
  BigFloat worst(p);
  for (const BigComplex& zeta : zeta_grid) {
    BigComplex z = poly.value(zeta / rootN);
    BigFloat dev = abs(rootN * z - f0(zeta));
    if (dev > worst) worst = dev;
  }
  return worst;
}

}  // namespace pinzero
