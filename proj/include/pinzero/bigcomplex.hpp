#pragma once

#include <complex>
#include <stdexcept>

#include "pinzero/bigfloat.hpp"

namespace pinzero {

// Complex number over BigFloat.  The principal logarithm returns an imaginary
// part in (-pi, pi], with Log z = log|z| + i*pi on the negative real axis
// (arguments with an exact zero imaginary part are treated as approaching
// from above).
class BigComplex {
 public:
  BigComplex() = default;
  explicit BigComplex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
  BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(BigFloat re) : re_(std::move(re)), im_(re_.prec()) {}
  BigComplex(double re, double im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}

  const BigFloat& re() const { return re_; }
  const BigFloat& im() const { return im_; }
  BigFloat& re() { return re_; }
  BigFloat& im() { return im_; }
  mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend BigComplex operator-(const BigComplex& a) { return {-a.re_, -a.im_}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend BigComplex operator*(const BigComplex& a, const BigFloat& s) {
    return {a.re_ * s, a.im_ * s};
  }
  friend BigComplex operator*(const BigFloat& s, const BigComplex& a) { return a * s; }
  friend BigComplex operator*(const BigComplex& a, double s) { return {a.re_ * s, a.im_ * s}; }
  friend BigComplex operator*(double s, const BigComplex& a) { return a * s; }
  friend BigComplex operator/(const BigComplex& a, const BigFloat& s) {
    return {a.re_ / s, a.im_ / s};
  }
  friend BigComplex operator/(const BigComplex& a, double s) { return {a.re_ / s, a.im_ / s}; }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
  }
  friend BigComplex operator/(const BigFloat& a, const BigComplex& b) {
    BigFloat n = b.re_ * b.re_ + b.im_ * b.im_;
    return {a * b.re_ / n, -(a * b.im_) / n};
  }
  friend BigComplex operator/(double a, const BigComplex& b) {
    return BigFloat(a, b.prec()) / b;
  }
  friend BigComplex operator+(const BigComplex& a, const BigFloat& s) {
    return {a.re_ + s, a.im_};
  }
  friend BigComplex operator+(const BigComplex& a, double s) { return {a.re_ + s, a.im_}; }
  friend BigComplex operator-(const BigComplex& a, double s) { return {a.re_ - s, a.im_}; }
  friend BigComplex operator-(double s, const BigComplex& a) { return {s - a.re_, -a.im_}; }
  friend BigComplex operator+(double s, const BigComplex& a) { return a + s; }

  BigComplex& operator+=(const BigComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  BigComplex& operator-=(const BigComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  BigComplex& operator*=(const BigComplex& o) {
    *this = *this * o;
    return *this;
  }

  friend BigComplex conj(const BigComplex& a) { return {a.re_, -a.im_}; }
  friend BigFloat abs(const BigComplex& a) { return hypot(a.re_, a.im_); }
  friend BigFloat norm(const BigComplex& a) { return a.re_ * a.re_ + a.im_ * a.im_; }

  // Principal argument in (-pi, pi]; a zero imaginary part on the negative
  // real axis yields +pi.
  friend BigFloat arg(const BigComplex& a) {
    if (a.im_.is_zero()) {
      if (a.re_.sign() < 0) return BigFloat::pi(a.prec());
      return BigFloat(a.prec());
    }
    return atan2(a.im_, a.re_);
  }

  friend BigComplex exp(const BigComplex& a) {
    mpfr_prec_t p = a.prec();
    BigFloat m = exp(a.re_);
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.raw(), c.raw(), a.im_.raw(), MPFR_RNDN);
    return {m * c, m * s};
  }

  friend BigComplex log(const BigComplex& a) {
    if (a.is_zero()) throw std::domain_error("log: zero argument");
    return {log(abs(a)), arg(a)};
  }

  friend BigComplex sqrt(const BigComplex& a) { return pow(a, 0.5); }

  // z^c := exp(c Log z) for real c, principal branch.
  friend BigComplex pow(const BigComplex& a, const BigFloat& c) {
    if (a.is_zero()) {
      if (c.sign() <= 0) throw std::domain_error("pow: 0^c with c <= 0");
      return BigComplex(a.prec());
    }
    return exp(BigComplex(c * log(abs(a)), c * arg(a)));
  }
  friend BigComplex pow(const BigComplex& a, double c) {
    return pow(a, BigFloat(c, a.prec()));
  }

  std::complex<double> to_complex_double() const {
    return {re_.to_double(), im_.to_double()};
  }

  BigComplex round_to(mpfr_prec_t prec) const {
    return {re_.round_to(prec), im_.round_to(prec)};
  }

 private:
  BigFloat re_, im_;
};

inline BigComplex complex_pow(const BigComplex& z, const BigFloat& c) { return pow(z, c); }
inline BigComplex complex_pow(const BigComplex& z, double c) { return pow(z, c); }

}  // namespace pinzero
