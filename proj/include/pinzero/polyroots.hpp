#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinzero/bigcomplex.hpp"
#include "pinzero/parallel.hpp"

namespace pinzero {

struct EaOptions {
  mpfr_prec_t prec = 256;
  int max_iters = 600;
  int threads = 1;
};

struct EaRoot {
  BigComplex w;
  BigFloat residual_rel;  // |P(w)| / sum_j |c_j||w|^j, backward-error units
  bool converged = false;
};

struct EaResult {
  std::vector<EaRoot> roots;
  int iters = 0;
  bool all_converged = false;
  std::vector<std::pair<int, int>> duplicate_pairs;  // multiplicity report
};

namespace detail {

struct HornerEval {
  BigComplex newton;      // P/P'
  BigFloat residual_rel;  // |P| relative to the magnitude sum
};

// Newton correction and backward-error residual for a real-coefficient
// polynomial at complex w.  Reversed Horner in 1/w for |w| > 1 keeps all
// intermediates at unit scale.
inline HornerEval horner_dual(std::span<const BigFloat> c, const BigComplex& w) {
  const long d = (long)c.size() - 1;
  mpfr_prec_t p = w.prec();
  mpfr_prec_t ps = 96;
  HornerEval out{BigComplex(p), BigFloat(ps)};
  BigFloat aw = abs(w);
  if (aw <= 1.0) {
    BigComplex val{BigFloat(c[d]), BigFloat(0.0, p)};
    BigComplex der(p);
    BigFloat scale = abs(c[d]).round_to(ps);
    BigFloat aw_s = aw.round_to(ps);
    for (long j = d - 1; j >= 0; --j) {
      der = der * w + val;
      val = val * w;
      val.re() += c[j];
      scale = scale * aw_s + abs(c[j]).round_to(ps);
    }
    if (der.is_zero()) der = BigComplex(BigFloat::pow2(-(long)p, p), BigFloat(0.0, p));
    out.newton = val / der;
    out.residual_rel = abs(val).round_to(ps) / scale;
    return out;
  }
  BigComplex u = 1.0 / w;
  BigFloat au = abs(u).round_to(ps);
  BigComplex rv{BigFloat(c[0]), BigFloat(0.0, p)};  // R(u) = sum c_{d-i} u^i
  BigComplex rd(p);
  BigFloat scale = abs(c[0]).round_to(ps);
  for (long i = d - 1; i >= 0; --i) {
    rd = rd * u + rv;
    rv = rv * u;
    rv.re() += c[d - i];
    scale = scale * au + abs(c[d - i]).round_to(ps);
  }
  // P/P' = w R / (d R - u R')
  BigComplex den = BigFloat((double)d, p) * rv - u * rd;
  if (den.is_zero()) den = BigComplex(BigFloat::pow2(-(long)p, p), BigFloat(0.0, p));
  out.newton = w * rv / den;
  out.residual_rel = abs(rv).round_to(ps) / scale;
  return out;
}

// Bini-style starting points: root moduli estimated from the upper convex
// hull of (i, log2|c_i|), points spread on the corresponding circles.
inline std::vector<BigComplex> newton_polygon_start(std::span<const BigFloat> c, mpfr_prec_t prec) {
  const long d = (long)c.size() - 1;
  std::vector<double> L(d + 1);
  for (long i = 0; i <= d; ++i) {
    if (c[i].is_zero()) {
      L[i] = -1e300;
      continue;
    }
    long e;
    double m = mpfr_get_d_2exp(&e, c[i].raw(), MPFR_RNDN);
    L[i] = std::log2(std::fabs(m)) + (double)e;
  }
  std::vector<long> hull;  // indices of upper hull vertices
  for (long i = 0; i <= d; ++i) {
    if (L[i] < -1e290) continue;
    while (hull.size() >= 2) {
      long a = hull[hull.size() - 2], b = hull .back();
      if ((L[b] - L[a]) * (double)(i - a) <= (L[i] - L[a]) * (double)(b - a))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<BigComplex> w;
  w.reserve(d);
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    long i0 = hull[k], i1 = hull[k + 1];
    long len = i1 - i0;
    double log2r = (L[i0] - L[i1]) / (double)len;
    BigFloat r = pow(BigFloat(2.0, prec), BigFloat(log2r, prec));
    for (long j = 0; j < len; ++j) {
      double angle = 2.0 * 3.14159265358979323846 * ((double)j + 0.5) / (double)len + 0.7 * (double)k;
      BigFloat s(prec), co(prec);
      BigFloat th(angle, prec);
      mpfr_sin_cos(s.raw(), co.raw(), th.raw(), MPFR_RNDN);
      w.emplace_back(r * co, r * s);
    }
  }
  while ((long)w.size() < d) w.emplace_back(BigFloat(1.0, prec), BigFloat((double)w.size() * 1e-3 + 0.5, prec));
  w.resize(d);
  return w;
}

}  // namespace detail

// Simultaneous root finding for a real-coefficient polynomial
// sum_{i=0}^{d} c_i w^i with c_0 != 0 and c_d != 0, by Ehrlich-Aberth
// iteration in Jacobi style (all corrections computed from the previous
// iterate, then applied at once).
inline EaResult ehrlich_aberth(std::span<const BigFloat> coeffs, const EaOptions& opt) {
  const long d = (long)coeffs.size() - 1;
  if (d < 1) throw std::domain_error("ehrlich_aberth: degree must be >= 1");
  if (coeffs[0].is_zero() || coeffs[d].is_zero())
    throw std::domain_error("ehrlich_aberth: zero leading or constant coefficient");
  const mpfr_prec_t p = opt.prec;
  std::vector<BigComplex> w = detail::newton_polygon_start(coeffs, p);
  std::vector<char> done(d, 0);
  std::vector<BigComplex> sums(d, BigComplex(p));
  std::vector<BigComplex> corr(d, BigComplex(p));
  std::vector<BigFloat> resid(d, BigFloat(96));
  BigFloat stop = BigFloat::pow2(-(long)p / 2, 64);
  // evaluation noise floor: Horner backward error is ~ 2d ulp of the scale
  BigFloat floor_rel = BigFloat(4.0 * (double)d, 96) * BigFloat::pow2(-(long)p, 96);

  EaResult res;
  res.roots.resize(d);
  int iter = 0;
  for (; iter < opt.max_iters; ++iter) {
    // pairwise reciprocal sums, each unordered pair once; rows are strided
    // across workers to balance the triangular loop
    {
      int T = std::max(1, opt.threads);
      std::vector<std::vector<BigComplex>> part((size_t)T);
      std::vector<std::thread> pool;
      for (int t = 0; t < T; ++t) {
        part[t].assign(d, BigComplex(p));
        pool.emplace_back([&, t] {
          std::vector<BigComplex>& acc = part[t];
          for (long i = t; i < d; i += T)
            for (long j = i + 1; j < d; ++j) {
              BigComplex diff = w[i] - w[j];
              if (diff.is_zero()) diff = BigComplex(BigFloat::pow2(-(long)p, p), BigFloat(0.0, p));
              BigComplex inv = 1.0 / diff;
              acc[i] += inv;
              acc[j] -= inv;
            }
        });
      }
      for (auto& th : pool) th.join();
      for (long i = 0; i < d; ++i) {
        sums[i] = BigComplex(p);
        for (int t = 0; t < T; ++t) sums[i] += part[t][i];
      }
    }

    std::vector<char> newly_done(d, 0);
    parallel_for(d, opt.threads, [&](long lo, long hi) {
      for (long i = lo; i < hi; ++i) {
        if (done[i]) {
          corr[i] = BigComplex(p);
          continue;
        }
        detail::HornerEval ev = detail::horner_dual(coeffs, w[i]);
        resid[i] = ev.residual_rel;
        if (ev.residual_rel <= floor_rel) {
          newly_done[i] = 1;
          corr[i] = BigComplex(p);
          continue;
        }
        BigComplex denom = 1.0 - ev.newton * sums[i];
        BigComplex c = (abs(denom) < BigFloat::pow2(-(long)p + 8, 64)) ? ev.newton
                                                                       : ev.newton / denom;
        corr[i] = c;
        if (abs(c) < stop * (1.0 + abs(w[i]))) newly_done[i] = 1;
      }
    });
    bool all = true;
    for (long i = 0; i < d; ++i) {
      if (!done[i]) w[i] -= corr[i];
      if (newly_done[i]) done[i] = 1;
      all = all && done[i];
    }
    if (all) {
      ++iter;
      break;
    }
  }
  res.iters = iter;
  res.all_converged = true;
  for (long i = 0; i < d; ++i) {
    detail::HornerEval ev = detail::horner_dual(coeffs, w[i]);
    res.roots[i].w = w[i];
    res.roots[i].residual_rel = ev.residual_rel + floor_rel;
    res.roots[i].converged = done[i] != 0;
    res.all_converged = res.all_converged && done[i];
  }
  // duplicate detection within certificate radii (simple roots expected)
  std::vector<long> order(d);
  for (long i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](long a, long b) {
    int c0 = cmp(res.roots[a].w.re(), res.roots[b].w.re());
    if (c0 != 0) return c0 < 0;
    return cmp(res.roots[a].w.im(), res.roots[b].w.im()) < 0;
  });
  BigFloat dup_tol = BigFloat::pow2(-(long)p / 4, 64);
  for (long k = 0; k + 1 < d; ++k) {
    long i = order[k], j = order[k + 1];
    if (abs(res.roots[i].w - res.roots[j].w) < dup_tol * (1.0 + abs(res.roots[i].w)))
      res.duplicate_pairs.emplace_back((int)i, (int)j);
  }
  return res;
}

}  // namespace pinzero
