#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinzero/quadrature.hpp"
#include "pinzero/renewal.hpp"
#include "pinzero/special.hpp"

namespace pinzero {

// h(theta) = -Log(1 - (1 - e^{-i theta})^alpha), the critical curve C_alpha,
// with the imaginary part normalized into (-pi, pi].
inline BigComplex curve_point(const BigFloat& alpha, const BigFloat& theta) {
  mpfr_prec_t p = std::max(alpha.prec(), theta.prec());
  if (theta.is_zero()) return BigComplex(p);
  BigComplex i_theta(BigFloat(0.0, p), theta);
  BigComplex eta = pow(1.0 - exp(-i_theta), alpha);
  BigComplex h = -log(1.0 - eta);
  if (h.im() <= -BigFloat::pi(p)) h.im() += 2.0 * BigFloat::pi(p);
  return h;
}

inline BigComplex curve_point(double alpha, double theta, mpfr_prec_t prec) {
  return curve_point(BigFloat(alpha, prec), BigFloat(theta, prec));
}

// dh/dtheta on the curve; blows up like theta^{alpha-1} at the corner.
inline BigComplex curve_derivative(const BigFloat& alpha, const BigFloat& theta) {
  mpfr_prec_t p = std::max(alpha.prec(), theta.prec());
  BigComplex i_theta(BigFloat(0.0, p), theta);
  BigComplex em = exp(-i_theta);
  BigComplex base = 1.0 - em;
  BigComplex eta = pow(base, alpha);
  BigComplex etap = BigComplex(BigFloat(0.0, p), alpha) * em * pow(base, alpha - 1.0);
  return etap / (1.0 - eta);
}

// Parametric coordinates (f1, f2) of the curve for theta in (0, pi]; the
// printed form, with arctan0 mapping into [0, pi].
inline std::pair<BigFloat, BigFloat> curve_xy(const BigFloat& alpha, const BigFloat& theta) {
  mpfr_prec_t p = std::max(alpha.prec(), theta.prec());
  if (theta.is_zero()) return {BigFloat(p), BigFloat(p)};  // limit point, corner
  BigFloat pi = BigFloat::pi(p);
  BigFloat s_half = sin(theta / 2.0);
  BigFloat phi = alpha * (pi - theta) / 2.0;
  BigFloat m = pow(BigFloat(2.0, p), alpha) * pow(s_half, alpha);
  BigFloat num = m * sin(phi);
  BigFloat den = 1.0 - m * cos(phi);
  BigFloat f1 = -0.5 * log(num * num + den * den);
  BigFloat f2 = atan(num / den);
  if (den.sign() < 0) f2 += pi;
  return {f1, f2};
}

// z_{alpha,h} = 1 - (1 - e^{-h})^{1/alpha}: pole of the z-transform for
// h in L_alpha, on the unit circle for h on the curve.
inline BigComplex pole_location(const BigFloat& alpha, const BigComplex& h) {
  if (h.is_zero()) throw std::domain_error("pole_location: h = 0 is the singular point");
  return 1.0 - pow(1.0 - exp(-h), 1.0 / alpha);
}

// Complex continuation of the free energy, analytic off (-oo, 0]:
// F(h) = -Log z_{alpha,h}.
inline BigComplex free_energy_complex(const BigFloat& alpha, const BigComplex& h) {
  if (h.im().is_zero() && h.re().sign() <= 0)
    throw std::domain_error("free_energy_complex: h on the branch cut (-oo, 0]");
  return -log(pole_location(alpha, h));
}

enum class RegionLabel { Localized, Delocalized, Critical };

inline RegionLabel classify(const BigFloat& alpha, const BigComplex& h, double tol);

// Physical free energy: Re F on the localized region, zero on the
// delocalized region and on the curve itself.
inline BigFloat free_energy_physical(const BigFloat& alpha, const BigComplex& h,
                                     double tol = 1e-9);

// Region classification by monotone inversion of the curve: solve
// f2(theta*) = |Im h| by bisection and compare Re h with f1(theta*).
inline RegionLabel classify(const BigFloat& alpha, const BigComplex& h, double tol = 1e-9) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(h.prec(), 192);
  BigFloat a = alpha.round_to(p);
  if (h.re().sign() <= 0) return RegionLabel::Delocalized;
  BigFloat y = abs(h.im()).round_to(p);
  BigFloat pi = BigFloat::pi(p);
  BigFloat x_star(p);
  if (y.is_zero()) {
    // positive real axis: curve meets it only at the corner
    x_star = BigFloat(0.0, p);
  } else if (y >= pi) {
    x_star = -log(pow(BigFloat(2.0, p), a) - 1.0);
  } else {
    BigFloat lo(1e-30, p), hi = pi;
    for (int it = 0; it < 300; ++it) {
      BigFloat mid = (lo + hi) / 2.0;
      if (curve_xy(a, mid).second < y)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < BigFloat::pow2(-130, p)) break;
    }
    x_star = curve_xy(a, (lo + hi) / 2.0).first;
  }
  BigFloat diff = h.re().round_to(p) - x_star;
  if (diff > tol) return RegionLabel::Localized;
  if (diff < -tol) return RegionLabel::Delocalized;
  return RegionLabel::Critical;
}

inline BigFloat free_energy_physical(const BigFloat& alpha, const BigComplex& h, double tol) {
  if (classify(alpha, h, tol) != RegionLabel::Localized) return BigFloat(h.prec());
  return free_energy_complex(alpha, h).re();
}

// Algebraic cross-check: h is localized iff |z_{alpha,h}| < 1 together with
// the branch guard |Arg(1 - e^{-h})| < alpha*pi (rotated branch copies of the
// pole equation otherwise leak in for alpha < 2/3).
inline bool localized_algebraic(const BigFloat& alpha, const BigComplex& h) {
  if (h.is_zero()) return false;
  BigComplex eta = 1.0 - exp(-h);
  if (eta.is_zero()) return false;
  mpfr_prec_t p = h.prec();
  if (abs(arg(eta)) >= alpha * BigFloat::pi(p)) return false;
  return abs(1.0 - pow(eta, 1.0 / alpha)) < 1.0;
}

// Arc length s(theta) = int_0^theta |h'| from the corner, adaptive with the
// analytic derivative; the integrand's theta^{alpha-1} endpoint blowup is
// integrable and handled by the tanh-sinh rule.
inline BigFloat arclength(const BigFloat& alpha, const BigFloat& theta, const BigFloat& tol) {
  mpfr_prec_t p = std::max(alpha.prec(), theta.prec());
  if (theta.is_zero()) return BigFloat(p);
  auto speed = [&](const BigFloat& t) { return abs(curve_derivative(alpha, t)); };
  return tanh_sinh(speed, BigFloat(0.0, p), theta, tol, p);
}

// Probability density of the limit zero measure mu with respect to arc
// length.  Exactly |F'(h)|/(2 pi) = 1/(2 pi |h'(theta)|); mu is the image of
// the uniform measure d(theta)/(2 pi) under gamma.
inline BigFloat mu_density_theta(const BigFloat& alpha, const BigFloat& theta) {
  mpfr_prec_t p = std::max(alpha.prec(), theta.prec());
  return 1.0 / (2.0 * BigFloat::pi(p) * abs(curve_derivative(alpha, theta)));
}

// alpha = 1/2 exact density against the x = Re h coordinate of the curve
// point; domain (0, log(1+sqrt 2)).
inline BigFloat mu_density_x_half(const BigFloat& x) {
  mpfr_prec_t p = x.prec();
  BigFloat xmax = log(1.0 + sqrt(BigFloat(2.0, p)));
  if (x.sign() < 0 || x >= xmax)
    throw std::domain_error("mu_density_x_half: x must lie in [0, log(1+sqrt2))");
  if (x.is_zero()) return BigFloat(p);
  BigFloat e2 = exp(2.0 * x), e4 = e2 * e2;
  BigFloat radicand = 6.0 * e2 - e4 - 1.0;
  return 8.0 * exp(x) * sinh(x) / sqrt(radicand) / (2.0 * BigFloat::pi(p));
}

// alpha = 1/2 exact density in arc length, expressed through the x-coordinate
// of the curve point: dmu/ds = sqrt(2) (1 - e^{-2 x}) / (2 pi).
inline BigFloat mu_density_s_half_from_x(const BigFloat& x) {
  mpfr_prec_t p = x.prec();
  return sqrt(BigFloat(2.0, p)) * (-expm1(-2.0 * x)) / (2.0 * BigFloat::pi(p));
}

// Small-s law for general alpha: dmu/ds ~ s^{(1-alpha)/alpha} / (2 pi alpha).
inline BigFloat mu_density_small_s(const BigFloat& alpha, const BigFloat& s) {
  mpfr_prec_t p = std::max(alpha.prec(), s.prec());
  return pow(s, (1.0 - alpha) / alpha) / (2.0 * BigFloat::pi(p) * alpha);
}

// Sampled upper-half curve with cumulative arc length, for projection and
// density queries.  Sampling is uniform in u = theta^alpha, which makes the
// arc-length increments roughly uniform through the corner.
class CurveModel {
 public:
  CurveModel(double alpha, int resolution = 2048, mpfr_prec_t prec = 192)
      : alpha_(alpha), resolution_(resolution) {
    if (resolution < 16) throw std::domain_error("CurveModel: resolution too small");
    theta_.resize(resolution + 1);
    h_.resize(resolution + 1);
    s_.resize(resolution + 1);
    BigFloat a(alpha, prec);
    const double pi_d = 3.14159265358979323846;
    double ua_max = std::pow(pi_d, alpha);
    for (int i = 0; i <= resolution; ++i) {
      double u = ua_max * (double)i / resolution;
      double th = std::pow(u, 1.0 / alpha);
      if (i == resolution) th = pi_d;
      theta_[i] = th;
      h_[i] = (i == 0) ? std::complex<double>(0.0, 0.0)
                       : curve_point(a, BigFloat(th, prec)).to_complex_double();
    }
    s_[0] = 0.0;
    for (int i = 1; i <= resolution; ++i) {
      double u0 = std::pow(theta_[i - 1], alpha), u1 = std::pow(theta_[i], alpha);
      auto speed_u = [&](double u) {
        double th = std::pow(u, 1.0 / alpha);
        double dth_du = (1.0 / alpha) * std::pow(u, (1.0 - alpha) / alpha);
        BigFloat t(th, 128);
        return abs(curve_derivative(BigFloat(alpha, 128), t)).to_double() * dth_du;
      };
      s_[i] = s_[i - 1] + gauss16(speed_u, u0, u1);
    }
  }

  double alpha() const { return alpha_; }
  int resolution() const { return resolution_; }
  double total_length() const { return s_.back(); }
  const std::vector<double>& thetas() const { return theta_; }
  const std::vector<std::complex<double>>& points() const { return h_; }
  const std::vector<double>& arclengths() const { return s_; }

  struct Projection {
    double theta;
    double distance;
    double s;
    std::complex<double> foot;
  };

  // Nearest curve point to z (upper half; callers fold Im < 0 first), by a
  // coarse scan plus golden-section refinement.
  Projection project(std::complex<double> z) const {
    int best = 0;
    double bd = 1e300;
    for (int i = 0; i <= resolution_; ++i) {
      double d = std::abs(z - h_[i]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    double lo = theta_[std::max(0, best - 1)];
    double hi = theta_[std::min(resolution_, best + 1)];
    auto dist = [&](double th) {
      return std::abs(z - curve_point(BigFloat(alpha_, 128), BigFloat(th, 128)).to_complex_double());
    };
    const double gr = 0.6180339887498949;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = dist(c), fd = dist(d);
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = dist(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = dist(d);
      }
    }
    Projection prj;
    prj.theta = 0.5 * (lo + hi);
    prj.foot = curve_point(BigFloat(alpha_, 128), BigFloat(prj.theta, 128)).to_complex_double();
    prj.distance = std::abs(z - prj.foot);
    prj.s = s_of_theta(prj.theta);
    return prj;
  }

  double s_of_theta(double th) const {
    if (th <= 0.0) return 0.0;
    if (th >= theta_.back()) return s_.back();
    int lo = 0, hi = resolution_;
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (theta_[mid] <= th)
        lo = mid;
      else
        hi = mid;
    }
    double t = (th - theta_[lo]) / (theta_[hi] - theta_[lo]);
    return s_[lo] + t * (s_[hi] - s_[lo]);
  }

  double theta_of_s(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= s_.back()) return theta_.back();
    int lo = 0, hi = resolution_;
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (s_[mid] <= s)
        lo = mid;
      else
        hi = mid;
    }
    double t = (s - s_[lo]) / (s_[hi] - s_[lo]);
    return theta_[lo] + t * (theta_[hi] - theta_[lo]);
  }

  // Limit CDF of mu restricted to the upper half-curve (normalized to 1):
  // mass of the arc [0, gamma(s)] is theta/(2 pi), so the normalized CDF is
  // theta(s)/pi.
  double limit_cdf_of_s(double s) const { return theta_of_s(s) / 3.14159265358979323846; }

 private:
  double alpha_;
  int resolution_;
  std::vector<double> theta_;
  std::vector<std::complex<double>> h_;
  std::vector<double> s_;
};

// Re F(h) recovered from the limit zero measure: the measure is the image of
// d(theta)/(2 pi), so
//   Re F(h) = log(alpha) + (1/2pi) int_0^{2pi} log|e^h - e^{gamma(theta)}| d(theta),
// folded onto (0, pi) by conjugation symmetry.  The integrand has a
// half-power corner at theta = 0, which the tanh-sinh rule absorbs.
inline BigFloat free_energy_from_density(const BigFloat& alpha, const BigComplex& h,
                                         const BigFloat& tol) {
  mpfr_prec_t p = h.prec();
  BigFloat pi = BigFloat::pi(p);
  BigComplex eh = exp(h);
  BigFloat aw = alpha.round_to(p);
  auto integrand = [&](const BigFloat& theta) {
    BigComplex g = curve_point(aw, theta);
    return log(abs(eh - exp(g))) + log(abs(eh - exp(conj(g))));
  };
  BigFloat acc = tanh_sinh(integrand, BigFloat(0.0, p), pi, tol, p);
  return log(aw) + acc / (2.0 * pi);
}

// Empirical-atom form of the same representation, from a finite zero set.
inline BigFloat free_energy_from_zeros(const BigFloat& alpha, const BigComplex& h,
                                       std::span<const BigComplex> zeros) {
  mpfr_prec_t p = h.prec();
  BigComplex eh = exp(h);
  BigFloat acc(p);
  for (const BigComplex& z : zeros) acc += log(abs(eh - exp(z)));
  return log(alpha.round_to(p)) + acc / (double)zeros.size();
}

// Bisection solve of sum_n K(n) exp(-n F) = exp(-h) on the truncated law,
// for real h > 0.  Returns the solution and a truncation-tail bound on it.
struct FreeEnergySolve {
  BigFloat value;
  BigFloat tail_bound;
};

inline FreeEnergySolve free_energy_general(const InterArrivalLaw& law, const BigFloat& h) {
  if (h.sign() <= 0) throw std::domain_error("free_energy_general: requires h > 0");
  mpfr_prec_t p = std::max<mpfr_prec_t>(h.prec(), law.prec());
  long M = law.truncation_N();
  std::vector<BigFloat> K;
  K.reserve(M);
  for (long n = 1; n <= M; ++n) K.push_back(law.k_value(n).round_to(p));
  BigFloat target = exp(-h);
  auto lhs = [&](const BigFloat& F) {
    BigFloat acc(p);
    BigFloat q = exp(-F);
    BigFloat qn(1.0, p);
    for (long n = 1; n <= M; ++n) {
      qn *= q;
      acc += K[n - 1] * qn;
    }
    return acc;
  };
  BigFloat lo(0.0, p), hi(1.0, p);
  while (lhs(hi) > target) hi *= 2.0;
  for (int it = 0; it < (int)p + 32; ++it) {
    BigFloat mid = (lo + hi) / 2.0;
    if (lhs(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  FreeEnergySolve out;
  out.value = (lo + hi) / 2.0;
  // the dropped tail shifts the root by at most tail_mass e^{-M F} / |dG/dF|,
  // and |dG/dF| >= K(1) e^{-F}
  BigFloat tail = law.tail_mass();
  out.tail_bound = tail * exp(-(double)M * out.value) / (K[0] * exp(-out.value));
  return out;
}

}  // namespace pinzero
