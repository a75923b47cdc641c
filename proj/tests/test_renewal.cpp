#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinzero/io.hpp"
#include "pinzero/quadrature.hpp"
#include "pinzero/renewal.hpp"

#include <filesystem>

using namespace pinzero;

namespace {
const mpfr_prec_t P = 256;
}

TEST_CASE("special family point masses") {
  for (double alpha : {0.2, 0.5, 0.8}) {
    InterArrivalLaw law = InterArrivalLaw::special_family(alpha, 64, P);
    BigFloat a(alpha, P);
    CHECK(law.k_value(1) == a);  // K(1) = alpha exactly
    BigFloat k2 = law.k_value(2);
    BigFloat want = a * (1.0 - a) / 2.0;
    CHECK(std::abs((k2 / want).to_double() - 1.0) < 1e-70);
    CHECK_THROWS_AS(law.k_value(0), std::domain_error);
  }
}

TEST_CASE("special family product route agrees with the Gamma route") {
  InterArrivalLaw law = InterArrivalLaw::special_family(0.37, 5000, P);
  for (long n : {1L, 2L, 17L, 421L, 4999L}) {
    BigFloat product = law.k_value(n);
    BigFloat gamma = k_special_gamma(BigFloat(0.37, P), n);
    CHECK(std::abs((product / gamma).to_double() - 1.0) < 1e-70);
  }
}

TEST_CASE("special family tail constant at n = 10^6") {
  // K(n) * (-Gamma(-alpha)) * n^{1+alpha} -> 1; the next-order term is O(1/n)
  BigFloat a(0.5, P);
  BigFloat k = k_special_gamma(a, 1000000);
  BigFloat ratio = k * neg_gamma_neg_alpha(a) * pow(BigFloat(1e6, P), 1.5);
  CHECK(std::abs(ratio.to_double() - 1.0) < 1e-5);
}

TEST_CASE("khat values and branch handling") {
  BigFloat a(0.5, P);
  CHECK(khat(a, BigComplex(P)).is_zero());
  // z -> 1^- along the reals: normalization sum K = 1
  BigFloat along = abs(khat(a, BigComplex(0.999999999, 0.0, P)) - 1.0);
  CHECK(along.to_double() < 1e-4);
  CHECK(abs(khat(a, BigComplex(1.0, 0.0, P)) - 1.0).to_double() == 0.0);
  BigComplex v = khat(a, BigComplex(0.5, 0.0, P));
  BigFloat want = 1.0 - sqrt(BigFloat(0.5, P));
  CHECK(std::abs((v.re() / want).to_double() - 1.0) < 1e-70);
  CHECK_THROWS_AS(khat(a, BigComplex(1.5, 0.0, P)), std::domain_error);
}

TEST_CASE("khat agrees with the truncated series oracle") {
  InterArrivalLaw law = InterArrivalLaw::special_family(0.5, 10000, P);
  for (auto [re, im] : {std::pair{0.5, 0.0}, {0.3, 0.6}, {-0.8, 0.2}, {0.0, 0.9}}) {
    BigComplex z(re, im, P);
    BigComplex series(P);
    BigComplex zn(1.0, 0.0, P);
    for (long n = 1; n <= 10000; ++n) {
      zn *= z;
      series += zn * law.k_value(n);
    }
    BigComplex closed = khat(BigFloat(0.5, P), z);
    // truncation tail ~ sum_{n>10^4} K(n) |z|^n <= |z|^{10^4}; at |z| <= 0.9
    // it is far below the assertion level
    CHECK((abs(series - closed)).to_double() < 1e-6);
  }
}

TEST_CASE("renewal table base row and convolution") {
  PrecisionPolicy pol;
  InterArrivalLaw law = InterArrivalLaw::special_family(0.5, 40, P);
  RenewalTable t = renewal_table(law, 10, pol);
  for (int n = 1; n <= 10; ++n) CHECK(t.prob(1, n) == law.k_value(n).round_to(t.prec()));
  // P(tau_2 = 2) = K(1)^2 = 1/4
  BigFloat p22 = t.prob(2, 2);
  CHECK(std::abs(p22.to_double() - 0.25) < 1e-70);
  // column identity: Z_{N,0} in (0, 1]
  for (int n = 1; n <= 10; ++n) {
    BigFloat z = t.contact_probability(n);
    CHECK(z.sign() > 0);
    CHECK(z <= 1.0);
  }
}

TEST_CASE("recursion matches the alpha = 1/2 closed form up to N = 200") {
  PrecisionPolicy pol;
  InterArrivalLaw law = InterArrivalLaw::special_family(0.5, 220, P);
  RenewalTable t = renewal_table(law, 200, pol);
  BigFloat bound = BigFloat::pow2(-((long)t.prec() - 20), 64);
  double worst = 0.0;
  for (int n = 1; n <= 200; n += 7)
    for (int j = 1; j <= n; j += 3) {
      BigFloat closed = special_half_closed(j, n, t.prec());
      BigFloat rel = abs(t.prob(j, n) - closed) / closed;
      worst = std::max(worst, rel.to_double());
      CHECK(rel < bound);
    }
  CHECK(worst < bound.to_double());
}

TEST_CASE("closed-form coefficient column ends at K(1)^N") {
  std::vector<BigFloat> c = special_half_coeffs(500, 1024);
  BigFloat lead = c.back() * BigFloat::pow2(500, 1024);
  CHECK(std::abs(lead.to_double() - 1.0) < 1e-60);
  // against the direct closed form at a few j
  for (long j : {1L, 123L, 499L}) {
    BigFloat direct = special_half_closed(j, 500, 1024);
    CHECK(std::abs((c[j - 1] / direct).to_double() - 1.0) < 1e-60);
  }
}

TEST_CASE("mixture laws normalize to a power-law tail") {
  long M = 4000;
  for (auto kind : {LawKind::MixturePowerLaw, LawKind::MixtureLacunary}) {
    InterArrivalLaw law = kind == LawKind::MixturePowerLaw
                              ? InterArrivalLaw::mixture_power_law(0.5, M, P)
                              : InterArrivalLaw::mixture_lacunary(0.5, M, P);
    BigFloat tail = law.tail_mass();
    CHECK(tail.sign() > 0);
    // 1 - sum <= C M^{-alpha} with C from the halved special-family constant
    // plus the n^-2 (or lacunary) component
    double cap = 3.0 / std::sqrt((double)M);
    CHECK(tail.to_double() < cap);
  }
  // lacunary: K2 supported on squares only
  InterArrivalLaw lac = InterArrivalLaw::mixture_lacunary(0.5, 100, P);
  InterArrivalLaw pure = InterArrivalLaw::special_family(0.5, 100, P);
  BigFloat diff3 = lac.k_value(3) - 0.5 * pure.k_value(3);
  CHECK(diff3.to_double() == doctest::Approx(0.0));
  BigFloat diff4 = lac.k_value(4) - 0.5 * pure.k_value(4);
  BigFloat want4 = 0.5 / (16.0 * zeta4(P));
  CHECK(std::abs((diff4 / want4).to_double() - 1.0) < 1e-60);
}

TEST_CASE("custom table requires its own tail exponent and positivity") {
  std::vector<BigFloat> vals{BigFloat(0.5, P), BigFloat(0.25, P), BigFloat(0.125, P)};
  InterArrivalLaw law = InterArrivalLaw::custom_table(vals, 0.5, P);
  CHECK(law.k_value(2).to_double() == doctest::Approx(0.25));
  CHECK(law.k_value(7).is_zero());
  std::vector<BigFloat> bad{BigFloat(0.0, P)};
  CHECK_THROWS(InterArrivalLaw::custom_table(bad, 0.5, P));
}

TEST_CASE("stable density g_{1/2} values") {
  BigFloat x(0.25, P);
  BigFloat got = stable_density_half(x);
  BigFloat want = 4.0 * exp(BigFloat(-1.0, P)) / BigFloat::sqrt_pi(P);
  CHECK(std::abs((got / want).to_double() - 1.0) < 1e-70);
  CHECK(want.to_double() == doctest::Approx(0.8302).epsilon(1e-3));
  CHECK_THROWS_AS(stable_density_half(BigFloat(-1.0, P)), std::domain_error);
}

TEST_CASE("stable density tail matches Gamma(3/2) sin(pi/2)/pi") {
  // g(x) x^{3/2} -> 1/sqrt(4 pi) as x -> oo
  BigFloat x(1e8, P);
  BigFloat v = stable_density_half(x) * pow(x, BigFloat(1.5, P));
  BigFloat want = 1.0 / sqrt(4.0 * BigFloat::pi(P));
  CHECK(std::abs((v / want).to_double() - 1.0) < 1e-7);
}

TEST_CASE("stable density integrates to one") {
  // quadrature oracle: int_0^1 g + int_0^1 g(1/u)/u^2 du
  BigFloat tol(1e-12, P);
  auto g = [](const BigFloat& x) {
    return x.is_zero() ? BigFloat(x.prec()) : stable_density_half(x);
  };
  BigFloat left = tanh_sinh(g, BigFloat(0.0, P), BigFloat(1.0, P), tol, P);
  auto g_inv = [&](const BigFloat& u) {
    if (u.is_zero()) return BigFloat(u.prec());
    return stable_density_half(1.0 / u) / (u * u);
  };
  BigFloat right = tanh_sinh(g_inv, BigFloat(0.0, P), BigFloat(1.0, P), tol, P);
  CHECK(std::abs((left + right).to_double() - 1.0) < 1e-8);
}

TEST_CASE("asymptotic forms of the stable density") {
  // zero side at alpha = 1/2 is exactly g_{1/2}
  for (double x : {0.05, 0.4, 2.0}) {
    BigFloat xx(x, P);
    BigFloat asy = stable_density_asymptotics(BigFloat(0.5, P), xx, DensitySide::Zero);
    CHECK(std::abs((asy / stable_density_half(xx)).to_double() - 1.0) < 1e-60);
  }
  // far tail within 1% at x = 100
  BigFloat far = stable_density_asymptotics(BigFloat(0.5, P), BigFloat(100.0, P),
                                            DensitySide::Infinity);
  CHECK(std::abs((far / stable_density_half(BigFloat(100.0, P))).to_double() - 1.0) < 0.01);
  // well-formed positive values at alpha = 1/3
  for (double x : {0.3, 3.0}) {
    BigFloat z = stable_density_asymptotics(BigFloat(1.0 / 3.0, P), BigFloat(x, P),
                                            DensitySide::Zero);
    BigFloat i = stable_density_asymptotics(BigFloat(1.0 / 3.0, P), BigFloat(x, P),
                                            DensitySide::Infinity);
    CHECK(z.sign() > 0);
    CHECK(i.sign() > 0);
    CHECK(z.is_finite());
    CHECK(i.is_finite());
  }
}

TEST_CASE("table export/import roundtrip is exact") {
  PrecisionPolicy pol;
  pol.base_bits = 192;
  InterArrivalLaw law = InterArrivalLaw::mixture_lacunary(0.5, 24, 192);
  RenewalTable t = renewal_table(law, 12, pol);
  auto path = std::filesystem::temp_directory_path() / "pinzero_table_test.bin";
  io::save_table(t, path);
  RenewalTable back = io::load_table(law, path);
  CHECK(back.N() == t.N());
  CHECK(back.prec() == t.prec());
  for (int n = 1; n <= 12; ++n)
    for (int j = 1; j <= n; ++j) CHECK(back.prob(j, n) == t.prob(j, n));
  std::filesystem::remove(path);
}
