#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinzero/precision.hpp"
#include "pinzero/special.hpp"

namespace pinzero {

enum class LawKind { SpecialFamily, MixturePowerLaw, MixtureLacunary, CustomTable };

// -Gamma(-alpha) = Gamma(1-alpha)/alpha, positive for alpha in (0,1).
inline BigFloat neg_gamma_neg_alpha(const BigFloat& alpha) {
  return gamma_real(1.0 - alpha) / alpha;
}

// K(n) of the special family via the Gamma-function form; independent of the
// telescoping product used by the materialized table.
inline BigFloat k_special_gamma(const BigFloat& alpha, long n) {
  mpfr_prec_t p = alpha.prec();
  BigFloat nn((double)n, p);
  return exp(log_gamma_real(nn - alpha) - log_gamma_real(nn + 1.0) - log_gamma_real(1.0 - alpha) +
             log(alpha));
}

// Inter-arrival distribution K(.) on N.  Values up to truncation_N are
// materialized at construction; the object is immutable afterwards.
class InterArrivalLaw {
 public:
  static InterArrivalLaw special_family(double alpha, long truncation_N, mpfr_prec_t prec) {
    return InterArrivalLaw(LawKind::SpecialFamily, alpha, truncation_N, prec, {});
  }
  static InterArrivalLaw mixture_power_law(double alpha, long truncation_N, mpfr_prec_t prec) {
    return InterArrivalLaw(LawKind::MixturePowerLaw, alpha, truncation_N, prec, {});
  }
  static InterArrivalLaw mixture_lacunary(double alpha, long truncation_N, mpfr_prec_t prec) {
    return InterArrivalLaw(LawKind::MixtureLacunary, alpha, truncation_N, prec, {});
  }
  // Custom mass table; the caller must supply the tail exponent used by the
  // normalization diagnostics (it cannot be inferred from a finite table).
  static InterArrivalLaw custom_table(std::vector<BigFloat> values, double tail_alpha,
                                      mpfr_prec_t prec) {
    long count = (long)values.size();
    return InterArrivalLaw(LawKind::CustomTable, tail_alpha, count, prec, std::move(values));
  }

  LawKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  long truncation_N() const { return truncation_N_; }
  mpfr_prec_t prec() const { return prec_; }

  // K(n); n beyond the materialized range is served by the closed Gamma form
  // (special family / mixtures) and is zero for custom tables.
  BigFloat k_value(long n) const {
    if (n < 1) throw std::domain_error("k_value: n must be >= 1");
    if (n <= (long)table_.size()) return table_[n - 1];
    BigFloat a(alpha_, prec_);
    switch (kind_) {
      case LawKind::SpecialFamily:
        return k_special_gamma(a, n);
      case LawKind::MixturePowerLaw:
        return 0.5 * (k_special_gamma(a, n) + k2_power(n));
      case LawKind::MixtureLacunary:
        return 0.5 * (k_special_gamma(a, n) + k2_lacunary(n));
      case LawKind::CustomTable:
        return BigFloat(prec_);
    }
    throw std::logic_error("k_value: bad kind");
  }

  // 1 - sum_{n<=truncation_N} K(n), the truncation residual.
  BigFloat tail_mass() const {
    BigFloat s(prec_);
    for (const BigFloat& k : table_) s += k;
    return 1.0 - s;
  }

  // Effective tail constant c: K(n) ~ c n^{-(1+alpha)}.  The mixtures halve
  // the special-family constant; recorded as metadata, not renormalized.
  BigFloat effective_c() const {
    BigFloat a(alpha_, prec_);
    BigFloat c = 1.0 / neg_gamma_neg_alpha(a);
    if (kind_ == LawKind::MixturePowerLaw || kind_ == LawKind::MixtureLacunary) c = c / 2.0;
    return c;
  }

  std::string descriptor() const {
    char buf[96];
    const char* name = kind_ == LawKind::SpecialFamily     ? "special"
                       : kind_ == LawKind::MixturePowerLaw ? "mixture-power"
                       : kind_ == LawKind::MixtureLacunary ? "mixture-lacunary"
                                                           : "custom";
    std::snprintf(buf, sizeof buf, "%s:alpha=%.17g:trunc=%ld", name, alpha_, truncation_N_);
    return buf;
  }

  // Same law rematerialized at a higher working precision (custom tables are
  // rounded; they carry no generating formula to re-evaluate).
  InterArrivalLaw rescaled(mpfr_prec_t prec) const {
    if (prec <= prec_) return *this;
    if (kind_ == LawKind::CustomTable) {
      std::vector<BigFloat> vals;
      vals.reserve(table_.size());
      for (const BigFloat& v : table_) vals.push_back(v.round_to(prec));
      return custom_table(std::move(vals), alpha_, prec);
    }
    return InterArrivalLaw(kind_, alpha_, truncation_N_, prec, {});
  }

 private:
  InterArrivalLaw(LawKind kind, double alpha, long truncation_N, mpfr_prec_t prec,
                  std::vector<BigFloat> custom)
      : kind_(kind), alpha_(alpha), truncation_N_(truncation_N), prec_(prec) {
    if (kind != LawKind::CustomTable && (alpha <= 0.0 || alpha >= 1.0))
      throw std::domain_error("InterArrivalLaw: alpha must be in (0,1)");
    if (truncation_N < 1) throw std::domain_error("InterArrivalLaw: truncation_N must be >= 1");
    if (kind == LawKind::CustomTable) {
      table_ = std::move(custom);
      for (const BigFloat& k : table_)
        if (k.sign() < 0) throw std::domain_error("InterArrivalLaw: negative mass");
      if (table_.empty() || table_[0].is_zero())
        throw std::domain_error("InterArrivalLaw: K(1) must be positive");
      return;
    }
    BigFloat a(alpha, prec);
    table_.reserve(truncation_N);
    BigFloat k1 = a;  // K(1) = alpha, exactly
    table_.push_back(k1);
    for (long n = 1; n < truncation_N; ++n)
      table_.push_back(table_.back() * (BigFloat((double)n, prec) - a) / BigFloat((double)(n + 1), prec));
    if (kind == LawKind::MixturePowerLaw || kind == LawKind::MixtureLacunary) {
      for (long n = 1; n <= truncation_N; ++n) {
        BigFloat k2 = (kind == LawKind::MixturePowerLaw) ? k2_power(n) : k2_lacunary(n);
        table_[n - 1] = 0.5 * (table_[n - 1] + k2);
      }
    }
  }

  BigFloat k2_power(long n) const {
    return 1.0 / (BigFloat((double)n, prec_) * BigFloat((double)n, prec_) * zeta2(prec_));
  }
  BigFloat k2_lacunary(long n) const {
    long r = (long)std::llround(std::sqrt((double)n));
    if (r * r != n) return BigFloat(prec_);
    return 1.0 / (BigFloat((double)n, prec_) * BigFloat((double)n, prec_) * zeta4(prec_));
  }

  LawKind kind_;
  double alpha_;
  long truncation_N_;
  mpfr_prec_t prec_;
  std::vector<BigFloat> table_;
};

inline BigFloat k_value(const InterArrivalLaw& law, long n) { return law.k_value(n); }

// z-transform of the special family: 1 - (1-z)^alpha, principal power.
// The branch cut [1, oo) is rejected; z = 1 returns 1 by continuity.
inline BigComplex khat(const BigFloat& alpha, const BigComplex& z) {
  if (z.im().is_zero() && z.re() >= 1.0) {
    if (z.re() == BigFloat(1.0, z.prec()))
      return BigComplex(BigFloat(1.0, z.prec()), BigFloat(0.0, z.prec()));
    throw std::domain_error("khat: z on the branch cut [1, oo)");
  }
  return 1.0 - pow(1.0 - z, alpha);
}

// Triangular renewal mass table P(tau_j = n), 1 <= j <= n <= N, built by the
// column recursion P(tau_{j+1} = n+1) = sum_{m=j}^{n} P(tau_j = m) K(n+1-m).
// Rows (fixed j) are stored contiguously so the recursion inner loop streams.
class RenewalTable {
 public:
  static RenewalTable build(const InterArrivalLaw& law, int N, const PrecisionPolicy& policy) {
    RenewalTable t;
    t.N_ = N;
    t.prec_ = policy.bits_for_degree(N);
    t.law_ = std::make_shared<InterArrivalLaw>(law);
    if (N < 1) throw std::domain_error("renewal_table: N >= 1 required");
    InterArrivalLaw source = law.rescaled(t.prec_);
    std::vector<BigFloat> K;
    K.reserve(N);
    for (long n = 1; n <= N; ++n) K.push_back(source.k_value(n).round_to(t.prec_));
    t.rows_.resize(N);
    t.rows_[0] = K;
    BigFloat tiny = BigFloat::pow2(-(long)t.prec_, 64);
    for (int j = 1; j < N; ++j) {
      // row index j holds P(tau_{j+1} = n) for n = j+1..N
      const std::vector<BigFloat>& prev = t.rows_[j - 1];
      std::vector<BigFloat>& cur = t.rows_[j];
      cur.reserve(N - j);
      BigFloat acc(t.prec_);
      for (int n = j + 1; n <= N; ++n) {
        mpfr_set_zero(acc.raw(), 1);
        // m runs over the support of tau_j, K index is n-m
        for (int m = j; m <= n - 1; ++m)
          mpfr_fma(acc.raw(), prev[m - j].raw(), K[n - m - 1].raw(), acc.raw(), MPFR_RNDN);
        if (!acc.is_zero() && acc < tiny) ++t.underflow_count_;
        cur.push_back(acc);
      }
    }
    return t;
  }

  static RenewalTable from_rows(const InterArrivalLaw& law, int N, mpfr_prec_t prec,
                                std::vector<std::vector<BigFloat>> rows) {
    RenewalTable t;
    t.N_ = N;
    t.prec_ = prec;
    t.law_ = std::make_shared<InterArrivalLaw>(law);
    t.rows_ = std::move(rows);
    return t;
  }

  int N() const { return N_; }
  mpfr_prec_t prec() const { return prec_; }
  const InterArrivalLaw& law() const { return *law_; }
  long underflow_count() const { return underflow_count_; }
  const std::vector<std::vector<BigFloat>>& rows() const { return rows_; }

  // P(tau_j = n)
  const BigFloat& prob(int j, int n) const {
    if (j < 1 || n < j || n > N_) throw std::out_of_range("RenewalTable::prob");
    return rows_[j - 1][n - j];
  }

  // P(n in tau) = Z_{n,0} = sum_j P(tau_j = n)
  BigFloat contact_probability(int n) const {
    BigFloat s(prec_);
    for (int j = 1; j <= n; ++j) s += prob(j, n);
    return s;
  }

 private:
  int N_ = 0;
  mpfr_prec_t prec_ = 128;
  long underflow_count_ = 0;
  std::shared_ptr<const InterArrivalLaw> law_;
  std::vector<std::vector<BigFloat>> rows_;
};

inline RenewalTable renewal_table(const InterArrivalLaw& law, int N, const PrecisionPolicy& policy) {
  return RenewalTable::build(law, N, policy);
}

// Closed form for the alpha = 1/2 special family:
// P(tau_j = n) = (j/(2n-j)) 2^{-2n+j} binom(2n-j, n).
inline BigFloat special_half_closed(long j, long n, mpfr_prec_t prec) {
  BigFloat lg = log_gamma_real(BigFloat((double)(2 * n - j + 1), prec)) -
                log_gamma_real(BigFloat((double)(n + 1), prec)) -
                log_gamma_real(BigFloat((double)(n - j + 1), prec));
  BigFloat l = log(BigFloat((double)j, prec)) - log(BigFloat((double)(2 * n - j), prec)) +
               BigFloat((double)(j - 2 * n), prec) * BigFloat::log2_const(prec) + lg;
  return exp(l);
}

// Whole coefficient column c_j = P(tau_j = N), j = 1..N, for alpha = 1/2,
// via one Gamma evaluation and an exact rational ratio recurrence.
inline std::vector<BigFloat> special_half_coeffs(long N, mpfr_prec_t prec) {
  std::vector<BigFloat> c;
  c.reserve(N);
  c.push_back(special_half_closed(1, N, prec));
  for (long j = 1; j < N; ++j) {
    // c_{j+1}/c_j = 2 (j+1)(N-j) / (j (2N-j-1))
    BigFloat next = c.back();
    mpfr_mul_si(next.raw(), next.raw(), 2 * (j + 1), MPFR_RNDN);
    mpfr_mul_si(next.raw(), next.raw(), N - j, MPFR_RNDN);
    mpfr_div_si(next.raw(), next.raw(), j, MPFR_RNDN);
    mpfr_div_si(next.raw(), next.raw(), 2 * N - j - 1, MPFR_RNDN);
    c.push_back(next);
  }
  return c;
}

// g_{1/2}(x) = exp(-1/(4x)) / sqrt(4 pi x^3)
inline BigFloat stable_density_half(const BigFloat& x) {
  if (x.sign() <= 0) throw std::domain_error("stable_density_half: x > 0 required");
  mpfr_prec_t p = x.prec();
  return exp(-1.0 / (4.0 * x)) / sqrt(4.0 * BigFloat::pi(p) * x * x * x);
}

enum class DensitySide { Zero, Infinity };

// Diagnostic asymptotic forms of the positive stable density g_alpha.
inline BigFloat stable_density_asymptotics(const BigFloat& alpha, const BigFloat& x,
                                           DensitySide side) {
  if (x.sign() <= 0) throw std::domain_error("stable_density_asymptotics: x > 0 required");
  mpfr_prec_t p = std::max(alpha.prec(), x.prec());
  BigFloat pi = BigFloat::pi(p);
  if (side == DensitySide::Infinity)
    return gamma_real(1.0 + alpha) * sin(pi * alpha) / pi * pow(x, -(1.0 + alpha));
  BigFloat ax = alpha / x;
  BigFloat one_m = 1.0 - alpha;
  return pow(2.0 * pi * alpha * one_m, BigFloat(-0.5, p)) *
         pow(ax, (2.0 - alpha) / (2.0 * one_m)) * exp(-one_m * pow(ax, alpha / one_m));
}

}  // namespace pinzero
