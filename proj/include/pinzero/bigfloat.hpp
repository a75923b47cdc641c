#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace pinzero {

// Arbitrary-precision binary float backed by MPFR.  Every value carries its
// own mantissa width; binary operations produce a result at the larger of the
// two operand precisions.  Rounding is to nearest throughout.
class BigFloat {
 public:
  BigFloat() {
    mpfr_init2(v_, kMinPrec);
    mpfr_set_zero(v_, 1);
  }
  explicit BigFloat(mpfr_prec_t prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double x, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigFloat(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, kMinPrec);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from_string(const std::string& s, mpfr_prec_t prec, int base = 10) {
    BigFloat r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), base, MPFR_RNDN) != 0)
      throw std::invalid_argument("BigFloat: unparsable literal '" + s + "'");
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Decimal representation with round-trip-stable digit count.
  std::string to_string(int digits = 0) const {
    if (digits <= 0) digits = (int)(prec() * 0.3010299957) + 3;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%%.%dRe", digits);
    char* out = nullptr;
    if (mpfr_asprintf(&out, buf, v_) < 0) throw std::runtime_error("mpfr_asprintf failed");
    std::string s(out);
    mpfr_free_str(out);
    return s;
  }

  // Exact textual form: "<sign> <hex mantissa> <base-16 exponent> <prec>".
  std::string to_hex() const {
    if (mpfr_zero_p(v_)) return "0 0 0 " + std::to_string((long)prec());
    if (!mpfr_number_p(v_)) throw std::runtime_error("BigFloat::to_hex: non-finite");
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 16, 0, v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    std::string sign = "+";
    if (!mant.empty() && mant[0] == '-') {
      sign = "-";
      mant.erase(0, 1);
    }
    return sign + " " + mant + " " + std::to_string((long)e) + " " + std::to_string((long)prec());
  }
  static BigFloat from_hex(const std::string& line) {
    char sign = 0;
    char mant[20000];
    long e = 0, p = 0;
    if (std::sscanf(line.c_str(), "%c %19999s %ld %ld", &sign, mant, &e, &p) != 4)
      throw std::invalid_argument("BigFloat::from_hex: bad record '" + line + "'");
    BigFloat r((mpfr_prec_t)p);
    if (sign == '0') return r;
    std::string lit = std::string(sign == '-' ? "-0." : "0.") + mant + "@" + std::to_string(e);
    if (mpfr_set_str(r.v_, lit.c_str(), 16, MPFR_RNDN) != 0)
      throw std::invalid_argument("BigFloat::from_hex: unparsable '" + line + "'");
    return r;
  }

  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static BigFloat sqrt_pi(mpfr_prec_t prec) {
    BigFloat r = pi(prec);
    mpfr_sqrt(r.v_, r.v_, MPFR_RNDN);
    return r;
  }
  static BigFloat log2_const(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
  }
  // 2^e as a BigFloat, exact.
  static BigFloat pow2(long e, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.v_, 1, (mpfr_exp_t)e, MPFR_RNDN);
    return r;
  }

  BigFloat& operator+=(const BigFloat& o) {
    grow(o.prec());
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    grow(o.prec());
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    grow(o.prec());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    grow(o.prec());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend BigFloat operator+(const BigFloat& a, double b) {
    BigFloat r(a.prec());
    mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator+(double a, const BigFloat& b) { return b + a; }
  friend BigFloat operator-(const BigFloat& a, double b) {
    BigFloat r(a.prec());
    mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator-(double a, const BigFloat& b) {
    BigFloat r(b.prec());
    mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(const BigFloat& a, double b) {
    BigFloat r(a.prec());
    mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator*(double a, const BigFloat& b) { return b * a; }
  friend BigFloat operator/(const BigFloat& a, double b) {
    BigFloat r(a.prec());
    mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigFloat operator/(double a, const BigFloat& b) {
    BigFloat r(b.prec());
    mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !mpfr_equal_p(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

#define PINZERO_UNARY(name, fn)                 \
  friend BigFloat name(const BigFloat& a) {     \
    BigFloat r(a.prec());                       \
    fn(r.v_, a.v_, MPFR_RNDN);                  \
    return r;                                   \
  }
  PINZERO_UNARY(abs, mpfr_abs)
  PINZERO_UNARY(sqrt, mpfr_sqrt)
  PINZERO_UNARY(exp, mpfr_exp)
  PINZERO_UNARY(expm1, mpfr_expm1)
  PINZERO_UNARY(log, mpfr_log)
  PINZERO_UNARY(log1p, mpfr_log1p)
  PINZERO_UNARY(sin, mpfr_sin)
  PINZERO_UNARY(cos, mpfr_cos)
  PINZERO_UNARY(tan, mpfr_tan)
  PINZERO_UNARY(atan, mpfr_atan)
  PINZERO_UNARY(sinh, mpfr_sinh)
  PINZERO_UNARY(cosh, mpfr_cosh)
  PINZERO_UNARY(asinh, mpfr_asinh)
  PINZERO_UNARY(floor, mpfr_rint_floor)
#undef PINZERO_UNARY

  friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(joint(y, x));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat pow(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat pow(const BigFloat& a, long n) {
    BigFloat r(a.prec());
    mpfr_pow_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend BigFloat pow(const BigFloat& a, double b) {
    return pow(a, BigFloat(b, a.prec()));
  }
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b) {
    BigFloat r(joint(a, b));
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat fma(const BigFloat& a, const BigFloat& b, const BigFloat& c) {
    BigFloat r(std::max(joint(a, b), c.prec()));
    mpfr_fma(r.v_, a.v_, b.v_, c.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat min(const BigFloat& a, const BigFloat& b) { return a < b ? a : b; }
  friend BigFloat max(const BigFloat& a, const BigFloat& b) { return a > b ? a : b; }

  // value = mantissa * 2^exp with mantissa in [0.5, 1); exponent of zero is 0.
  long exponent2() const { return mpfr_zero_p(v_) ? 0 : (long)mpfr_get_exp(v_); }

  BigFloat round_to(mpfr_prec_t prec) const {
    BigFloat r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

 private:
  static constexpr mpfr_prec_t kMinPrec = 64;
  static mpfr_prec_t clamp(mpfr_prec_t p) { return p < kMinPrec ? kMinPrec : p; }
  static mpfr_prec_t joint(const BigFloat& a, const BigFloat& b) {
    return std::max(a.prec(), b.prec());
  }
  void grow(mpfr_prec_t p) {
    if (p > prec()) {
      mpfr_t t;
      mpfr_init2(t, p);
      mpfr_set(t, v_, MPFR_RNDN);
      mpfr_swap(t, v_);
      mpfr_clear(t);
    }
  }
  mpfr_t v_;
};

inline BigFloat log_gamma_real(const BigFloat& x) {
  if (x.sign() <= 0) throw std::domain_error("log_gamma_real: requires x > 0");
  BigFloat r(x.prec());
  int sgn = 0;
  mpfr_lgamma(r.raw(), &sgn, x.raw(), MPFR_RNDN);
  return r;
}

inline BigFloat gamma_real(const BigFloat& x) {
  BigFloat r(x.prec());
  mpfr_gamma(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace pinzero
