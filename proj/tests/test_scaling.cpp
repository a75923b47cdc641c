#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pinzero/scaling.hpp"

using namespace pinzero;

namespace {
const mpfr_prec_t P = 256;

double rel_err(const BigComplex& got, const BigComplex& want) {
  return (abs(got - want) / abs(want)).to_double();
}

// quadrature oracle for the integral representation
BigComplex quadrature_integral(const BigComplex& zeta) {
  mpfr_prec_t p = zeta.prec();
  BigComplex z2 = zeta * zeta;
  auto f = [&](const BigFloat& x) {
    BigFloat x2 = x * x;
    return BigComplex(exp(-x2) * x2) / (BigComplex(x2) + z2);
  };
  // the integrand is ~ e^{-144} at x = 12; the remainder is far below tol
  BigComplex i = tanh_sinh(f, BigFloat(0.0, p), BigFloat(12.0, p), BigFloat(1e-30, p), p);
  return i * (2.0 / BigFloat::pi(p));
}
}  // namespace

TEST_CASE("F0 at the origin and near its first zero") {
  BigComplex at0 = f0(BigComplex(P));
  CHECK(std::abs(at0.re().to_double() - 0.5641895835477563) < 1e-16);
  CHECK(at0.im().is_zero());
  BigComplex near(1.225, 2.547, P);
  CHECK(abs(f0(near)).to_double() < 1e-2);
}

TEST_CASE("integral representations on both half planes") {
  // Re < 0: the integral equals F0
  BigComplex zm(-1.0, 1.0, P);
  CHECK(rel_err(quadrature_integral(zm), f0(zm)) < 1e-25);
  // Re > 0: the integral equals F0 - 2 zeta e^{zeta^2}
  BigComplex zp(1.0, 1.0, P);
  BigComplex want = f0(zp) - 2.0 * zp * exp(zp * zp);
  CHECK((abs(quadrature_integral(zp) - want) / abs(quadrature_integral(zp))).to_double() < 1e-25);
}

TEST_CASE("F0 derivative formula") {
  CHECK(std::abs(f0_prime(BigComplex(P)).re().to_double() - 1.0) < 1e-60);
  // central finite difference oracle
  BigComplex z(0.5, 0.5, P);
  BigFloat eps(1e-12, P);
  BigComplex fd = (f0(z + BigComplex(eps, BigFloat(0.0, P))) -
                   f0(z - BigComplex(eps, BigFloat(0.0, P)))) /
                  (2.0 * eps);
  CHECK(rel_err(fd, f0_prime(z)) < 1e-8);
  // and the pair evaluator is consistent with the standalone functions
  auto [v, d] = f0_pair(z);
  CHECK(rel_err(v, f0(z)) < 1e-70);
  CHECK(rel_err(d, f0_prime(z)) < 1e-70);
}

TEST_CASE("asymptotic seeds reproduce the printed values") {
  struct Row {
    int n;
    double re, im;
  } rows[] = {{1, 1.229, 2.531}, {2, 2.018, 3.149}, {7, 4.326, 5.136}};
  for (const Row& r : rows) {
    BigComplex s = asymptotic_zero_seed(r.n, P);
    CHECK(std::abs(s.re().to_double() - r.re) < 1e-3);
    CHECK(std::abs(s.im().to_double() - r.im) < 1e-3);
  }
}

TEST_CASE("the first seven zeros and seed gaps match the reference table") {
  auto zs = f0_zeros(7, 256, false);
  struct Row {
    double re, im, gap;
  } rows[] = {{1.225, 2.547, 0.017}, {2.026, 3.162, 0.015}, {2.629, 3.656, 0.013},
              {3.132, 4.083, 0.011}, {3.573, 4.466, 0.010}, {3.969, 4.817, 0.009},
              {4.332, 5.141, 0.008}};
  for (int i = 0; i < 7; ++i) {
    CHECK(std::abs(zs[i].zeta.re().to_double() - rows[i].re) < 1e-3);
    CHECK(std::abs(zs[i].zeta.im().to_double() - rows[i].im) < 1e-3);
    double gap = abs(zs[i].zeta - zs[i].seed).to_double();
    CHECK(std::abs(gap - rows[i].gap) < 1e-3);
  }
  // gaps shrink with n
  for (int i = 0; i + 1 < 7; ++i)
    CHECK(abs(zs[i + 1].zeta - zs[i + 1].seed) < abs(zs[i].zeta - zs[i].seed));
}

TEST_CASE("certification: winding counts and residuals") {
  auto zs = f0_zeros(2, 256, true, 256, 2);
  for (const ScalingZero& z : zs) {
    CHECK(z.certified);
    CHECK((z.residual / abs(f0_prime(z.zeta))).to_double() < 1e-12);
    CHECK(z.zeta.re().sign() > 0);
    CHECK(z.zeta.im().sign() > 0);
    // simple-zero identity F0'(zeta) = -1/(zeta sqrt(pi))
    BigComplex want = -1.0 / (z.zeta * BigFloat::sqrt_pi(P));
    CHECK(rel_err(f0_prime(z.zeta), want) < 1e-10);
  }
}

TEST_CASE("F1 and F2 simplify at the zeros") {
  auto zs = f0_zeros(3, 256, false);
  for (const ScalingZero& z : zs) {
    const BigComplex& z0 = z.zeta;
    BigComplex f1v = f1_scaling(z0);
    BigComplex want1 = z0 / (2.0 * BigFloat::sqrt_pi(P));
    CHECK(rel_err(f1v, want1) < 1e-20);
    BigComplex f2v = f2_scaling(z0);
    BigComplex z2 = z0 * z0;
    BigComplex want2 = -(6.0 * z2 * z2 + 22.0 * z2 + 3.0) / (24.0 * BigFloat::sqrt_pi(P));
    CHECK(rel_err(f2v, want2) < 1e-20);
  }
}

TEST_CASE("expansion coefficients solve the order-by-order system") {
  // independent oracle: solve F0 + F1/sqrt(N) + F2/N = 0 order by order with
  // finite-difference derivatives of F0' and F1
  auto zs = f0_zeros(1, 320, false);
  BigComplex z0 = zs[0].zeta;
  BigFloat eps(1e-20, 320);
  BigComplex de(eps, BigFloat(0.0, 320));
  BigComplex f0pp = (f0_prime(z0 + de) - f0_prime(z0 - de)) / (2.0 * eps);
  BigComplex f1p = (f1_scaling(z0 + de) - f1_scaling(z0 - de)) / (2.0 * eps);
  BigComplex f0p = f0_prime(z0);
  BigComplex z1_oracle = -f1_scaling(z0) / f0p;
  BigComplex z2_oracle = -(0.5 * f0pp * z1_oracle * z1_oracle + f1p * z1_oracle + f2_scaling(z0)) / f0p;
  ZeroExpansion e = zero_expansion(z0);
  CHECK(rel_err(e.z1, z1_oracle) < 1e-25);
  CHECK(rel_err(e.z2, z2_oracle) < 1e-15);
  // frozen closed-form values for the first zero
  CHECK(e.z1.re().to_double() == doctest::Approx(-2.4934256412).epsilon(1e-9));
  CHECK(e.z1.im().to_double() == doctest::Approx(3.1206319780).epsilon(1e-9));
  CHECK(e.z2.re().to_double() == doctest::Approx(-1.9870591860).epsilon(1e-7));
  CHECK(e.z2.im().to_double() == doctest::Approx(-0.7396926577).epsilon(1e-7));
  // consistency used throughout: F0'(z0) (-z0 sqrt(pi)) = 1
  CHECK(rel_err(f0p * (-z0) * BigFloat::sqrt_pi(320), BigComplex(1.0, 0.0, 320)) < 1e-20);
}

TEST_CASE("finite-N corrections have the stated first-order term") {
  // sqrt(N) Z - F0 = F1/sqrt(N) + F2/N + O(N^{-3/2}) at zeta = 1 + 2i
  BigComplex zeta(1.0, 2.0, 320);
  long N = 10000;
  auto poly = PartitionPolynomial::special_half(N, 320);
  BigFloat rootN = sqrt(BigFloat((double)N, 320));
  BigComplex dev = rootN * poly.value(zeta / rootN) - f0(zeta);
  BigComplex first = f1_scaling(zeta) / rootN;
  CHECK((abs(dev - first)).to_double() < 2.0 * abs(f2_scaling(zeta)).to_double() / (double)N);
}

TEST_CASE("scaling limit convergence on a grid") {
  std::vector<BigComplex> grid;
  for (double x : {-2.0, 0.0, 2.0})
    for (double y : {-2.0, 0.0, 2.0}) grid.emplace_back(x, y, 320);
  auto p1 = PartitionPolynomial::special_half(1000, 320);
  auto p2 = PartitionPolynomial::special_half(4000, 320);
  BigFloat d1 = scaling_limit_check(p1, grid);
  BigFloat d2 = scaling_limit_check(p2, grid);
  double ratio = (d1 / d2).to_double();
  CHECK(ratio > 1.4);  // ~ sqrt(4) = 2 expected
  CHECK(ratio < 3.0);
  // at zeta = 0: sqrt(N) Z_{N,0} -> 1/sqrt(pi)
  for (long N : {1000L, 10000L}) {
    auto poly = PartitionPolynomial::special_half(N, 320);
    BigFloat rootN = sqrt(BigFloat((double)N, 320));
    double dev = std::abs((rootN * poly.value(BigComplex(320))).re().to_double() -
                          0.5641895835477563);
    CHECK(dev < 1.0 / std::sqrt((double)N));
    if (N == 10000L) CHECK(dev < 0.006);
  }
}

TEST_CASE("derivative scaling limit trend") {
  // Z'_{N, zeta/sqrt(N)} -> F0'(zeta) at alpha = 1/2; trend only
  BigComplex zeta(320);
  double prev = 1e9;
  for (long N : {1000L, 10000L}) {
    auto poly = PartitionPolynomial::special_half(N, 320);
    BigFloat rootN = sqrt(BigFloat((double)N, 320));
    BigComplex zp = poly.derivative(zeta / rootN);
    double dev = (abs(zp - f0_prime(zeta))).to_double();
    CHECK(dev < prev);
    prev = dev;
  }
}
