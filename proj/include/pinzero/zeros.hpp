#pragma once

#include <algorithm>
#include <climits>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinzero/critcurve.hpp"
#include "pinzero/partition.hpp"
#include "pinzero/polyroots.hpp"
#include "pinzero/precision.hpp"

namespace pinzero {

struct ZeroRecord {
  BigComplex h;       // in the cylinder, Im in (-pi, pi]
  BigFloat residual;  // certified |P_N(e^h)| relative to the coefficient scale
  bool converged = true;
};

// The N-1 zeros of Z_{N,h} in the cylinder: modulus-nondecreasing, conjugate
// pairs adjacent with the Im > 0 representative first, zeros on the Im = pi
// line self-paired.  No zero is real (Z is positive on the real axis).
struct ZeroSet {
  int N = 0;
  mpfr_prec_t prec = 128;
  std::string law_descriptor;
  std::vector<ZeroRecord> zeros;
  bool all_converged = true;

  std::vector<BigComplex> points() const {
    std::vector<BigComplex> v;
    v.reserve(zeros.size());
    for (const ZeroRecord& r : zeros) v.push_back(r.h);
    return v;
  }
};

namespace detail {

struct PairUnit {
  BigComplex upper;  // Im >= 0 representative
  BigFloat residual;
  bool self_conjugate;
  bool converged;
};

inline ZeroSet assemble_zero_set(int N, mpfr_prec_t prec, const std::string& law,
                                 std::vector<PairUnit> units) {
  // order units by |h| (ties by argument ascending), emit upper then mirror
  std::sort(units.begin(), units.end(), [](const PairUnit& a, const PairUnit& b) {
    BigFloat ma = abs(a.upper), mb = abs(b.upper);
    int c = cmp(ma, mb);
    if (c != 0) return c < 0;
    return cmp(arg(a.upper), arg(b.upper)) < 0;
  });
  ZeroSet zs;
  zs.N = N;
  zs.prec = prec;
  zs.law_descriptor = law;
  for (const PairUnit& u : units) {
    zs.zeros.push_back({u.upper, u.residual, u.converged});
    zs.all_converged = zs.all_converged && u.converged;
    if (!u.self_conjugate) zs.zeros.push_back({conj(u.upper), u.residual, u.converged});
  }
  if ((int)zs.zeros.size() != N - 1)
    throw std::runtime_error("zero set assembly produced " + std::to_string(zs.zeros.size()) +
                             " zeros, expected " + std::to_string(N - 1));
  return zs;
}

}  // namespace detail

// All zeros of P_N(w)/w by Ehrlich-Aberth in w-coordinates, mapped into the
// cylinder by the principal Log and symmetrized into exact conjugate pairs.
inline ZeroSet find_all_zeros(const PartitionPolynomial& poly, const PrecisionPolicy& policy,
                              int threads = 1) {
  const int N = poly.N();
  if (N < 2) throw std::domain_error("find_all_zeros: degree >= 2 required");
  EaOptions opt;
  opt.prec = policy.bits_for_degree(N);
  opt.threads = threads;
  EaResult ea = ehrlich_aberth(poly.coeffs(), opt);
  if (!ea.duplicate_pairs.empty())
    throw std::runtime_error("find_all_zeros: " + std::to_string(ea.duplicate_pairs.size()) +
                             " root pairs within certificate radius (multiplicity suspected)");
  const mpfr_prec_t p = opt.prec;
  BigFloat snap_tol = BigFloat::pow2(-(long)p / 3, 64);
  std::vector<const EaRoot*> upper, lower;
  std::vector<detail::PairUnit> units;
  for (const EaRoot& r : ea.roots) {
    BigFloat im_rel = abs(r.w.im()) / (1.0 + abs(r.w.re()));
    if (im_rel < snap_tol) {
      if (r.w.re().sign() > 0)
        throw std::runtime_error("find_all_zeros: positive real root contradicts positivity");
      // negative real axis root: h = log|w| + i pi, its own conjugate in the cylinder
      BigComplex h(log(abs(r.w.re())), BigFloat::pi(p));
      BigFloat rr = abs(poly.value(h)).round_to(96) / poly.abs_scale(h);
      units.push_back({h, rr, true, r.converged});
    } else if (r.w.im().sign() > 0) {
      upper.push_back(&r);
    } else {
      lower.push_back(&r);
    }
  }
  if (upper.size() != lower.size())
    throw std::runtime_error("find_all_zeros: conjugate pairing failed (count mismatch)");
  auto key = [](const EaRoot* r) { return r->w; };
  std::sort(upper.begin(), upper.end(), [&](const EaRoot* a, const EaRoot* b) {
    int c = cmp(key(a).re(), key(b).re());
    if (c != 0) return c < 0;
    return cmp(key(a).im(), key(b).im()) < 0;
  });
  std::sort(lower.begin(), lower.end(), [&](const EaRoot* a, const EaRoot* b) {
    int c = cmp(key(a).re(), key(b).re());
    if (c != 0) return c < 0;
    return cmp(-key(a).im(), -key(b).im()) < 0;
  });
  BigFloat pair_tol = BigFloat::pow2(-(long)p / 4, 64);
  for (size_t k = 0; k < upper.size(); ++k) {
    const EaRoot* u = upper[k];
    const EaRoot* l = lower[k];
    if (abs(u->w - conj(l->w)) > pair_tol * (1.0 + abs(u->w)))
      throw std::runtime_error("find_all_zeros: conjugate partner mismatch");
    BigComplex h = log(u->w);  // Im in (0, pi)
    BigFloat rr = abs(poly.value(h)).round_to(96) / poly.abs_scale(h);
    units.push_back({h, rr, false, u->converged && l->converged});
  }
  return detail::assemble_zero_set(N, p, poly.law_descriptor(), std::move(units));
}

struct NewtonResult {
  BigComplex h;
  BigFloat last_step;
  BigFloat residual;
  int iters = 0;
};

// Newton iteration h <- h - Z/Z' on the partition function; O(N) per step.
// The caller owns seed quality (the default closest-zero seed is zeta_1/sqrt(N)).
inline NewtonResult refine_zero_newton(const PartitionPolynomial& poly, const BigComplex& seed,
                                       const BigFloat& tol, int max_iters = 200) {
  BigComplex h = seed;
  BigFloat prev_mag(1e300, 64);
  NewtonResult out;
  for (int it = 0; it < max_iters; ++it) {
    BigComplex z = poly.value(h);
    BigComplex zp = poly.derivative(h);
    if (zp.is_zero()) throw std::runtime_error("refine_zero_newton: vanishing derivative");
    BigComplex step = z / zp;
    h -= step;
    out.iters = it + 1;
    BigFloat mag = abs(step);
    if (mag < tol) {
      out.h = h;
      out.last_step = mag;
      out.residual = abs(poly.value(h)).round_to(96) / poly.abs_scale(h);
      return out;
    }
    if (mag > 4.0 * prev_mag && it > 3)
      throw std::runtime_error("refine_zero_newton: diverging iteration");
    prev_mag = mag;
  }
  throw std::runtime_error("refine_zero_newton: no convergence within iteration budget");
}

inline NewtonResult refine_zero_newton(const RenewalTable& table, int N, const BigComplex& seed,
                                       const BigFloat& tol, int max_iters = 200) {
  return refine_zero_newton(PartitionPolynomial::from_table(table, N), seed, tol, max_iters);
}

// (value, derivative) evaluator used by the winding counters.
using AnalyticEvaluator = std::function<std::pair<BigComplex, BigComplex>(const BigComplex&)>;

struct ContourError : std::runtime_error {
  double min_modulus;
  explicit ContourError(double m)
      : std::runtime_error("count_zeros: contour passes too close to a zero (min |f| = " +
                           std::to_string(m) + ")"),
        min_modulus(m) {}
};

namespace detail {

inline int winding_from_samples(const AnalyticEvaluator& f, const std::vector<BigComplex>& pts,
                                const std::vector<BigComplex>& tangents, double guard) {
  mpfr_prec_t p = pts.empty() ? 64 : pts[0].prec();
  BigComplex acc(p);
  BigFloat minmod(1e300, 64);
  for (size_t k = 0; k < pts.size(); ++k) {
    auto [v, d] = f(pts[k]);
    BigFloat m = abs(v);
    if (m < minmod) minmod = m;
    acc += d / v * tangents[k];
  }
  if (minmod.to_double() < guard) throw ContourError(minmod.to_double());
  // acc approximates oint f'/f dz; winding = acc / (2 pi i)
  double w = (acc.im() / (2.0 * BigFloat::pi(p))).to_double();
  double nearest = std::round(w);
  if (std::fabs(w - nearest) > 0.1) return INT_MIN;  // caller refines
  return (int)nearest;
}

}  // namespace detail

// Argument-principle count over the circle |z - center| = radius by
// trapezoidal quadrature of f'/f, with the sample count doubled until the
// rounded winding number stabilizes.
inline int count_zeros_in_disk(const AnalyticEvaluator& f, const BigComplex& center,
                               const BigFloat& radius, int quadrature_points = 4096,
                               double guard = 1e-60) {
  mpfr_prec_t p = center.prec();
  int prev = INT_MIN;
  for (int q = quadrature_points; q <= (1 << 22); q *= 2) {
    std::vector<BigComplex> pts, tans;
    pts.reserve(q);
    tans.reserve(q);
    BigFloat two_pi = 2.0 * BigFloat::pi(p);
    for (int k = 0; k < q; ++k) {
      BigFloat th = two_pi * (double)k / (double)q;
      BigFloat s(p), c(p);
      mpfr_sin_cos(s.raw(), c.raw(), th.raw(), MPFR_RNDN);
      BigComplex e(c, s);
      pts.push_back(center + radius * e);
      // dz = i r e^{i theta} dtheta, dtheta = 2 pi / q
      tans.push_back(BigComplex(BigFloat(0.0, p), radius * (two_pi / (double)q)) * e);
    }
    int w = detail::winding_from_samples(f, pts, tans, guard);
    if (w != INT_MIN && w == prev) return w;
    prev = w;
  }
  throw std::runtime_error("count_zeros_in_disk: winding value did not stabilize");
}

// Same count over an axis-aligned rectangle [x0,x1] x [y0,y1].
inline int count_zeros_in_rect(const AnalyticEvaluator& f, double x0, double x1, double y0,
                               double y1, mpfr_prec_t prec, int points_per_edge = 1024,
                               double guard = 1e-60) {
  int prev = INT_MIN;
  for (int q = points_per_edge; q <= (1 << 22); q *= 2) {
    std::vector<BigComplex> pts, tans;
    pts.reserve(4 * q);
    tans.reserve(4 * q);
    auto edge = [&](double ax, double ay, double bx, double by) {
      BigComplex a(ax, ay, prec), b(bx, by, prec);
      BigComplex step = (b - a) / (double)q;
      for (int k = 0; k < q; ++k) {
        pts.push_back(a + step * (double)k + step * 0.5);
        tans.push_back(step);
      }
    };
    edge(x0, y0, x1, y0);
    edge(x1, y0, x1, y1);
    edge(x1, y1, x0, y1);
    edge(x0, y1, x0, y0);
    int w = detail::winding_from_samples(f, pts, tans, guard);
    if (w != INT_MIN && w == prev) return w;
    prev = w;
  }
  throw std::runtime_error("count_zeros_in_rect: winding value did not stabilize");
}

// mu_N: the zero set with uniform weight 1/(N-1).
struct EmpiricalMeasure {
  std::vector<BigComplex> atoms;
  double weight;
};

inline EmpiricalMeasure empirical_measure(const ZeroSet& zs) {
  return {zs.points(), 1.0 / (double)(zs.N - 1)};
}

struct DistanceStats {
  struct PerZero {
    std::complex<double> h;
    double distance;
    double theta;     // projection parameter on the upper half-curve
    double s;         // arc length of the projection foot
    bool deloc_side;  // zero lies on the delocalized side of the curve
  };
  std::vector<PerZero> per_zero;
  double max_distance = 0.0;
  double mean_distance = 0.0;
  double deloc_fraction = 0.0;
};

// Distance from each zero to the curve (conjugates folded onto the upper
// half), with projection foot parameters for the arclength statistics.
inline DistanceStats distance_stats(const ZeroSet& zs, const CurveModel& curve) {
  DistanceStats out;
  double sum = 0.0;
  int deloc = 0;
  for (const ZeroRecord& r : zs.zeros) {
    std::complex<double> z = r.h.to_complex_double();
    if (z.imag() < 0.0) z = std::conj(z);
    CurveModel::Projection prj = curve.project(z);
    // normal to the curve pointing into the localized side is -i * tangent
    std::complex<double> tangent =
        curve_derivative(BigFloat(curve.alpha(), 128), BigFloat(std::max(prj.theta, 1e-12), 128))
            .to_complex_double();
    std::complex<double> n_loc = std::complex<double>(0.0, -1.0) * tangent;
    double side = std::real(std::conj(n_loc) * (z - prj.foot));
    bool deloc_side = side < 0.0;
    if (deloc_side) ++deloc;
    out.per_zero.push_back({z, prj.distance, prj.theta, prj.s, deloc_side});
    sum += prj.distance;
    out.max_distance = std::max(out.max_distance, prj.distance);
  }
  out.mean_distance = sum / (double)zs.zeros.size();
  out.deloc_fraction = (double)deloc / (double)zs.zeros.size();
  return out;
}

}  // namespace pinzero
