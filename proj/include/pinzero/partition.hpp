#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinzero/critcurve.hpp"
#include "pinzero/quadrature.hpp"
#include "pinzero/renewal.hpp"

namespace pinzero {

namespace detail {

// sum_{j=1}^{N} c_j w^j at w = e^h.  Horner in w when |w| <= 1, reversed
// Horner in 1/w otherwise, so w^N never overflows the intermediate scale and
// the relative error stays O(N ulp).  weight_by_j switches to the derivative
// sum_j j c_j w^j.
inline BigComplex eval_exp_series(std::span<const BigFloat> c, const BigComplex& h,
                                  bool weight_by_j) {
  const long N = (long)c.size();
  mpfr_prec_t p = std::max<mpfr_prec_t>(h.prec(), c.empty() ? 64 : c[0].prec());
  BigComplex w = exp(h.round_to(p));
  auto coeff = [&](long j) {
    if (!weight_by_j) return c[j - 1];
    BigFloat v = c[j - 1];
    mpfr_mul_si(v.raw(), v.raw(), j, MPFR_RNDN);
    return v;
  };
  if (abs(w) <= 1.0) {
    BigComplex acc{coeff(N), BigFloat(0.0, p)};
    for (long j = N - 1; j >= 1; --j) {
      acc = acc * w;
      acc.re() += coeff(j);
    }
    return acc * w;
  }
  BigComplex u = 1.0 / w;
  BigComplex acc{coeff(1), BigFloat(0.0, p)};
  for (long j = 2; j <= N; ++j) {
    acc = acc * u;
    acc.re() += coeff(j);
  }
  return acc * exp(BigFloat((double)N, p) * h.round_to(p));
}

// Magnitude scale sum_j |c_j| |w|^j at low precision, the natural backward
// error unit for residual certificates.
inline BigFloat eval_abs_scale(std::span<const BigFloat> c, const BigFloat& abs_w) {
  const long N = (long)c.size();
  mpfr_prec_t p = 96;
  BigFloat aw = abs_w.round_to(p);
  if (aw <= 1.0) {
    BigFloat acc = c[N - 1].round_to(p);
    for (long j = N - 1; j >= 1; --j) acc = acc * aw + c[j - 1].round_to(p);
    return acc * aw;
  }
  BigFloat u = 1.0 / aw;
  BigFloat acc = c[0].round_to(p);
  for (long j = 2; j <= N; ++j) acc = acc * u + c[j - 1].round_to(p);
  return acc * exp(BigFloat((double)N, p) * log(aw));
}

}  // namespace detail

// P_N(w) = Z_{N, log w} = sum_{j=1}^N P(tau_j = N) w^j; degree N, leading
// coefficient K(1)^N, positive coefficients, simple zero at the origin.
class PartitionPolynomial {
 public:
  static PartitionPolynomial from_table(const RenewalTable& table, int N) {
    if (N > table.N()) throw std::out_of_range("partition_polynomial: N exceeds table");
    PartitionPolynomial poly;
    poly.N_ = N;
    poly.law_descriptor_ = table.law().descriptor();
    poly.coeffs_.reserve(N);
    for (int j = 1; j <= N; ++j) poly.coeffs_.push_back(table.prob(j, N));
    return poly;
  }

  // Closed-form route for the alpha = 1/2 special family; O(N) build, so it
  // scales to the N ~ 10^4 regimes the asymptotic checks need.
  static PartitionPolynomial special_half(long N, mpfr_prec_t prec) {
    PartitionPolynomial poly;
    poly.N_ = (int)N;
    poly.law_descriptor_ = "special:alpha=0.5:closed-form";
    poly.coeffs_ = special_half_coeffs(N, prec);
    return poly;
  }

  int N() const { return N_; }
  const std::vector<BigFloat>& coeffs() const { return coeffs_; }
  const std::string& law_descriptor() const { return law_descriptor_; }

  BigComplex value(const BigComplex& h) const {
    return detail::eval_exp_series(coeffs_, h, false);
  }
  BigComplex derivative(const BigComplex& h) const {
    return detail::eval_exp_series(coeffs_, h, true);
  }
  BigFloat abs_scale(const BigComplex& h) const {
    return detail::eval_abs_scale(coeffs_, exp(h.re()));
  }

 private:
  int N_ = 0;
  std::string law_descriptor_;
  std::vector<BigFloat> coeffs_;
};

inline PartitionPolynomial partition_polynomial(const RenewalTable& table, int N) {
  return PartitionPolynomial::from_table(table, N);
}

// Z_{N,h} = sum_j e^{h j} P(tau_j = N)
inline BigComplex partition_value(const RenewalTable& table, int N, const BigComplex& h) {
  return PartitionPolynomial::from_table(table, N).value(h);
}

// Z'_{N,h} = sum_j j e^{h j} P(tau_j = N)
inline BigComplex partition_derivative(const RenewalTable& table, int N, const BigComplex& h) {
  return PartitionPolynomial::from_table(table, N).derivative(h);
}

// Delocalized-side asymptotic K(N) e^h / (1 - e^h)^2.
inline BigComplex asymptotic_deloc(const InterArrivalLaw& law, long N, const BigComplex& h) {
  mpfr_prec_t p = h.prec();
  BigComplex eh = exp(h);
  BigComplex d = 1.0 - eh;
  if (abs(d) < BigFloat::pow2(-(long)p / 2, p))
    throw std::domain_error("asymptotic_deloc: pole at e^h = 1");
  return BigComplex(law.k_value(N).round_to(p)) * eh / (d * d);
}

// Localized-side asymptotic (1-e^{-h})^{(1-alpha)/alpha} / (alpha e^h) *
// z_{alpha,h}^{-(N+1)}.
inline BigComplex asymptotic_loc(const BigFloat& alpha, long N, const BigComplex& h) {
  if (classify(alpha, h) != RegionLabel::Localized)
    throw std::domain_error("asymptotic_loc: h is not in the localized region");
  mpfr_prec_t p = h.prec();
  BigComplex z = pole_location(alpha, h);
  BigComplex pre = pow(1.0 - exp(-h), (1.0 - alpha) / alpha) / (alpha.round_to(p) * exp(h));
  return pre * exp(BigFloat(-(double)(N + 1), p) * log(z));
}

// On-curve asymptotic: N-independent oscillating term plus the
// N^{-(1+alpha)} contribution of the essential singularity.
inline BigComplex asymptotic_crit(const BigFloat& alpha, long N, const BigComplex& h) {
  if (h.is_zero()) throw std::domain_error("asymptotic_crit: h = 0 is the singular point");
  mpfr_prec_t p = h.prec();
  BigComplex z = pole_location(alpha, h);
  BigComplex pre = pow(1.0 - exp(-h), (1.0 - alpha) / alpha) / (alpha.round_to(p) * exp(h));
  BigFloat phase = -BigFloat((double)(N + 1), p) * arg(z);
  BigComplex osc = pre * exp(BigComplex(BigFloat(0.0, p), phase));
  BigComplex eh = exp(h);
  BigComplex d = 1.0 - eh;
  BigComplex tail = eh / (neg_gamma_neg_alpha(alpha.round_to(p)) * d * d) *
                    pow(BigFloat((double)N, p), -(1.0 + alpha));
  return osc + tail;
}

// Moment representation of Z_{N,h} for the alpha = 1/2 special family:
// an absolutely continuous part on (0,1) with a sqrt(x(1-x))
// weight, plus an atom at e^{2h}/(2e^h - 1) when Re h > 0.  Independent of
// the renewal-table route, which is the point: it serves as an oracle.
struct MomentOracleResult {
  BigComplex integral;
  BigComplex atom;
  BigComplex total;
};

inline MomentOracleResult moment_oracle_half(const BigComplex& h, long N, const BigFloat& tol) {
  mpfr_prec_t p = h.prec();
  if (abs(h.re()) < 0.05)
    throw std::domain_error(
        "moment_oracle_half: |Re h| < 0.05; the representation degenerates near the imaginary "
        "axis");
  BigComplex a = exp(h);
  BigComplex a2 = a * a;
  BigComplex one_minus_2a = 1.0 - 2.0 * a;
  auto integrand = [&](const BigFloat& x) -> BigComplex {
    // x^{N-1/2} (1-x)^{1/2} / den, assembled in log form so the endpoints
    // evaluate cleanly
    BigComplex den = BigComplex(x) * one_minus_2a + a2;
    BigFloat mag = exp((BigFloat((double)N, p) - 0.5) * log(x) + 0.5 * log1p(-x));
    return BigComplex(mag) / den;
  };
  MomentOracleResult out;
  BigFloat zero(0.0, p), one(1.0, p);
  BigFloat split = 1.0 - 10.0 * norm(h);
  BigComplex integral(p);
  if (split > 0.1 && split < 0.9) {
    integral = tanh_sinh(integrand, zero, split, tol, p) +
               tanh_sinh(integrand, split, one, tol, p);
  } else {
    integral = tanh_sinh(integrand, zero, one, tol, p);
  }
  out.integral = integral * a / BigFloat::pi(p);
  out.atom = BigComplex(p);
  if (h.re().sign() > 0) {
    BigComplex loc = a2 / (2.0 * a - 1.0);
    out.atom = 2.0 * (a - 1.0) / (2.0 * a - 1.0) * exp(BigFloat((double)N, p) * log(loc));
  }
  out.total = out.integral + out.atom;
  return out;
}

// Atom contribution at h = zeta/sqrt(N); approaches 2 zeta e^{zeta^2}/sqrt(N).
inline BigComplex moment_atom_scaled(const BigComplex& zeta, long N) {
  mpfr_prec_t p = zeta.prec();
  BigFloat rootN = sqrt(BigFloat((double)N, p));
  BigComplex eh = exp(zeta / rootN);
  return 2.0 * (eh - 1.0) * exp(2.0 * zeta * rootN) /
         exp(BigFloat((double)(N + 1), p) * log(2.0 * eh - 1.0));
}

}  // namespace pinzero
