#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "ldg/amap.hpp"
#include "ldg/basis.hpp"
#include "ldg/nfunction.hpp"
#include "ldg/quadrature.hpp"

using namespace ldg;

namespace {
const std::vector<double> kFamilyP = {1.25, 4.0 / 3.0, 1.5, 5.0 / 3.0, 1.8,
                                      2.0,  2.25,      2.5, 3.0,       4.0};

Tensor2 random_tensor(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Tensor2 P;
  for (double& e : P.e) e = scale * g(rng);
  return P;
}
}  // namespace

TEST_CASE("phi value matches quadrature of phi'") {
  for (double p : {1.25, 1.5, 2.0, 2.7, 4.0}) {
    for (double delta : {0.0, 1e-4, 1e-3, 0.1, 1.0}) {
      const NFunction nf(p, delta);
      for (double t : {1e-8, 1e-3, 0.5, 1.0, 7.3, 1e4}) {
        const double oracle = integrate_adaptive(
            [&](double s) { return nf.prime(s); }, 0.0, t, 1e-14 * (1.0 + t));
        CHECK(nf.value(t) == doctest::Approx(oracle).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("phi basics: N-function properties and special cases") {
  const NFunction nf(2.0, 0.0);
  CHECK(nf.value(0.0) == 0.0);
  CHECK(nf.value(3.0) == doctest::Approx(4.5));  // t^2/2
  CHECK(nf.prime(3.0) == doctest::Approx(3.0));

  // delta = 0: p-Laplacian scaling t^p / p
  const NFunction plap(3.0, 0.0);
  CHECK(plap.value(2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(plap.prime(2.0) == doctest::Approx(4.0));

  // monotone increasing, convex
  const NFunction gen(1.5, 1e-3);
  double prev = 0.0;
  for (double t = 0.1; t < 10.0; t += 0.1) {
    CHECK(gen.prime(t) > prev);
    prev = gen.prime(t);
  }
}

TEST_CASE("balanced characteristics gamma1 phi' <= t phi'' <= gamma2 phi'") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logt(-6.0, 6.0);
  for (double p : kFamilyP) {
    const NFunction nf(p, 1e-3);
    for (int i = 0; i < 2000; ++i) {
      const double t = std::pow(10.0, logt(rng));
      const double lhs = t * nf.second(t);
      CHECK(lhs >= nf.gamma1() * nf.prime(t) * (1.0 - 1e-12));
      CHECK(lhs <= nf.gamma2() * nf.prime(t) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("second derivative matches FD of prime") {
  for (double p : {1.25, 2.0, 3.5}) {
    const NFunction nf(p, 1e-2);
    for (double t : {1e-3, 0.3, 2.0, 50.0}) {
      const double h = 1e-6 * t;
      const double fd = (nf.prime(t + h) - nf.prime(t - h)) / (2.0 * h);
      CHECK(nf.second(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("second derivative singularity guard") {
  const NFunction nf(1.5, 0.0);
  CHECK_THROWS_AS((void)nf.second(0.0), std::domain_error);
  const NFunction ok(1.5, 1e-3);
  CHECK(std::isfinite(ok.second(0.0)));
}

TEST_CASE("conjugate inversion round-trip on a log grid") {
  for (double p : kFamilyP) {
    for (double delta : {0.0, 1e-3, 1.0}) {
      const NFunction nf(p, delta);
      for (double e = -8.0; e <= 8.0; e += 0.25) {
        const double t = std::pow(10.0, e);
        const double back = nf.conjugate_prime(nf.prime(t));
        CHECK(std::abs(back - t) / t <= 1e-10);
      }
    }
  }
}

TEST_CASE("conjugate value: Legendre identity and p-Laplacian closed form") {
  // delta=0: phi(t)=t^p/p, phi*(s)=s^{p'}/p'
  const double p = 3.0, pp = 1.5;
  const NFunction nf(p, 0.0);
  for (double s : {0.5, 1.0, 4.0}) {
    CHECK(nf.conjugate_value(s) == doctest::Approx(std::pow(s, pp) / pp));
  }
  // general: phi*(s) = sup_t (st - phi(t)) attained at t = (phi')^{-1}(s)
  const NFunction gen(1.5, 1e-3);
  for (double s : {1e-3, 0.7, 12.0}) {
    const double t = gen.conjugate_prime(s);
    CHECK(gen.conjugate_value(s) == doctest::Approx(s * t - gen.value(t)));
    // nearby t values must not do better
    for (double f : {0.9, 0.99, 1.01, 1.1})
      CHECK(s * (f * t) - gen.value(f * t) <= gen.conjugate_value(s) + 1e-12);
  }
}

TEST_CASE("Young's inequality t*s <= phi(t) + phi*(s), sampled") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> loga(-6.0, 6.0);
  for (double p : kFamilyP) {
    const NFunction nf(p, 1e-3);
    int violations = 0;
    for (int i = 0; i < 20000; ++i) {
      const double t = std::pow(10.0, loga(rng));
      const double s = std::pow(10.0, loga(rng));
      const double lhs = t * s;
      const double rhs = nf.value(t) + nf.conjugate_value(s);
      if (lhs > rhs * (1.0 + 1e-10) + 1e-300) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("shifted N-function: prime formula and quadrature value") {
  const NFunction base(2.5, 1e-3);
  for (double a : {0.0, 0.3, 2.0}) {
    const ShiftedNFunction sh(base, a);
    for (double t : {0.1, 1.0, 5.0}) {
      CHECK(sh.prime(t) ==
            doctest::Approx(base.prime(a + t) * t / (a + t)));
      const double oracle = integrate_adaptive(
          [&](double s) { return sh.prime(s); }, 0.0, t, 1e-13);
      CHECK(sh.value(t) == doctest::Approx(oracle).epsilon(1e-9));
    }
    // shift a=0 recovers the base function
    if (a == 0.0)
      for (double t : {0.2, 3.0})
        CHECK(sh.value(t) == doctest::Approx(base.value(t)).epsilon(1e-9));
  }
}

TEST_CASE("op_A closed form and F/F* compatibility") {
  std::mt19937_64 rng(17);
  for (double p : {1.25, 2.0, 3.0}) {
    const NFunction nf(p, 1e-3);
    for (int i = 0; i < 200; ++i) {
      const Tensor2 P = random_tensor(rng, i % 2 ? 10.0 : 0.1);
      const double r = P.norm();
      const Tensor2 A = op_A(nf, P);
      // A(P) = (delta + |P|)^(p-2) P
      for (int m = 0; m < 4; ++m)
        CHECK(A.e[m] ==
              doctest::Approx(std::pow(1e-3 + r, p - 2.0) * P.e[m]).epsilon(1e-12));
      // |F(P)|^2 = phi'(|P|) |P|
      const Tensor2 F = map_F(nf, P);
      CHECK(F.dot(F) == doctest::Approx(nf.prime(r) * r).epsilon(1e-11));
      // F*(A(P)) = F(P): the natural distance identity
      const Tensor2 Fs = map_Fstar(nf, A);
      for (int m = 0; m < 4; ++m)
        CHECK(Fs.e[m] == doctest::Approx(F.e[m]).epsilon(1e-9));
    }
  }
  // zero extension
  const NFunction nf(1.5, 0.0);
  CHECK(op_A(nf, Tensor2{}).norm() == 0.0);
  CHECK(map_F(nf, Tensor2{}).norm() == 0.0);
  CHECK(map_Fstar(nf, Tensor2{}).norm() == 0.0);
}

TEST_CASE("op_A monotonicity pairing (A(P)-A(Q)) : (P-Q) >= 0") {
  std::mt19937_64 rng(23);
  for (double p : kFamilyP) {
    const NFunction nf(p, 1e-3);
    for (int i = 0; i < 500; ++i) {
      const Tensor2 P = random_tensor(rng, 3.0);
      const Tensor2 Q = random_tensor(rng, 3.0);
      const Tensor2 dA = op_A(nf, P) - op_A(nf, Q);
      const Tensor2 dP = P - Q;
      CHECK(dA.dot(dP) >= -1e-13 * dA.norm() * dP.norm());
    }
  }
}

TEST_CASE("op_A_jacobian matches central differences") {
  std::mt19937_64 rng(31);
  for (double p : kFamilyP) {
    const NFunction nf(p, 1e-3);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Tensor2 P = random_tensor(rng);
      const Tensor4 J = op_A_jacobian(nf, P);
      const double h = 1e-6 * (1.0 + P.norm());
      for (int n = 0; n < 4; ++n) {
        Tensor2 Pp = P, Pm = P;
        Pp.e[n] += h;
        Pm.e[n] -= h;
        const Tensor2 fd = (1.0 / (2.0 * h)) * (op_A(nf, Pp) - op_A(nf, Pm));
        for (int m = 0; m < 4; ++m)
          worst = std::max(worst,
                           std::abs(J(m, n) - fd.e[m]) / (1.0 + std::abs(J(m, n))));
      }
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("op_A_jacobian symmetry and singular-case policy") {
  std::mt19937_64 rng(37);
  const NFunction nf(1.5, 1e-3);
  for (int i = 0; i < 100; ++i) {
    const Tensor2 P = random_tensor(rng);
    const Tensor4 J = op_A_jacobian(nf, P);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < m; ++n)
        CHECK(J(m, n) == doctest::Approx(J(n, m)).epsilon(1e-12));
  }
  // P=0, delta=0, p<2, eps=0 is genuinely singular
  const NFunction sing(1.5, 0.0);
  CHECK_THROWS_AS((void)op_A_jacobian(sing, Tensor2{}, 0.0), std::domain_error);
  // with the default floor it is usable
  CHECK(std::isfinite(op_A_jacobian(sing, Tensor2{})(0, 0)));
  // p=2 at the origin is the identity (delta-independent)
  const NFunction lap(2.0, 0.7);
  const Tensor4 J0 = op_A_jacobian(lap, Tensor2{});
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      CHECK(J0(m, n) == doctest::Approx(m == n ? 1.0 : 0.0));
}

TEST_CASE("shifted operator: value, jacobian FD, and shift derivative FD") {
  std::mt19937_64 rng(41);
  for (double p : {1.25, 2.25, 4.0}) {
    const NFunction nf(p, 1e-3);
    for (int i = 0; i < 300; ++i) {
      const Tensor2 P = random_tensor(rng, 2.0);
      const double a = std::abs(random_tensor(rng).e[0]);
      const double r = P.norm();
      // A_a(P) = phi'(a+r)/(a+r) P
      const Tensor2 Aa = op_A_shifted(nf, a, P);
      for (int m = 0; m < 4; ++m)
        CHECK(Aa.e[m] ==
              doctest::Approx(nf.prime(a + r) / (a + r) * P.e[m]).epsilon(1e-12));
      // a = 0 recovers op_A
      const Tensor2 A0 = op_A_shifted(nf, 0.0, P);
      const Tensor2 A = op_A(nf, P);
      for (int m = 0; m < 4; ++m)
        CHECK(A0.e[m] == doctest::Approx(A.e[m]).epsilon(1e-12));

      // tensor-argument jacobian vs FD
      const Tensor4 J = op_A_shifted_jacobian(nf, a, P);
      const double h = 1e-6 * (1.0 + r);
      for (int n = 0; n < 4; ++n) {
        Tensor2 Pp = P, Pm = P;
        Pp.e[n] += h;
        Pm.e[n] -= h;
        const Tensor2 fd =
            (1.0 / (2.0 * h)) * (op_A_shifted(nf, a, Pp) - op_A_shifted(nf, a, Pm));
        for (int m = 0; m < 4; ++m)
          CHECK(std::abs(J(m, n) - fd.e[m]) / (1.0 + std::abs(J(m, n))) <= 1e-5);
      }
      // shift derivative vs FD in a
      if (a > 1e-3) {
        const double ha = 1e-6 * (1.0 + a);
        const Tensor2 da = op_A_shifted_da(nf, a, P);
        const Tensor2 fd = (1.0 / (2.0 * ha)) *
                           (op_A_shifted(nf, a + ha, P) - op_A_shifted(nf, a - ha, P));
        for (int m = 0; m < 4; ++m)
          CHECK(std::abs(da.e[m] - fd.e[m]) / (1.0 + std::abs(da.e[m])) <= 1e-5);
      }
    }
  }
}

TEST_CASE("quadrature building blocks") {
  // Gauss rule integrates high-degree monomials exactly
  const GaussRule1d g = gauss_legendre_unit(8);
  for (int d = 0; d <= 15; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.points.size(); ++i)
      s += g.weights[i] * std::pow(g.points[i], d);
    CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
  }
  // triangle rule: interior nodes, exact monomial moments
  const TriangleRule tr = triangle_rule(9);
  double wsum = 0.0;
  for (std::size_t q = 0; q < tr.size(); ++q) {
    wsum += tr.weights[q];
    CHECK(tr.xi[q] > 0.0);
    CHECK(tr.eta[q] > 0.0);
    CHECK(tr.xi[q] + tr.eta[q] < 1.0);
  }
  CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
  for (int a = 0; a <= 9; ++a)
    for (int b = 0; a + b <= 9; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < tr.size(); ++q)
        s += tr.weights[q] * std::pow(tr.xi[q], a) * std::pow(tr.eta[q], b);
      CHECK(s == doctest::Approx(reference_monomial_integral(a, b)).epsilon(1e-12));
    }
}
