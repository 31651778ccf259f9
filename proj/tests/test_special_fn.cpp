#include <doctest.h>

#include <cmath>
#include <numbers>

#include "matgeom/special_fn.hpp"

using namespace matgeom;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("scalar gamma against the standard library") {
    for (double x : {0.3, 1.0, 2.5, 7.25, 20.0, -0.5, -2.7})
        CHECK(gamma_fn(x).real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    // Gamma(1/2 + i) |^2 = pi / cosh(pi)
    Complex g = gamma_fn(Complex(0.5, 1.0));
    CHECK(std::norm(g) == doctest::Approx(kPi / std::cosh(kPi)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(-3.0), Error);
}

TEST_CASE("siegel gamma values") {
    CHECK(siegel_gamma(2, 1.5).real() == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(siegel_gamma(2, 2.0).real() == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(siegel_gamma(1, 4.0).real() == doctest::Approx(6.0).epsilon(1e-14));
    auto p = siegel_gamma(2, 0.5);
    CHECK(p.is_pole());
    CHECK(p.pole_index() == 1);
    CHECK_THROWS_AS(p.value(), Error);
}

TEST_CASE("cone beta") {
    CHECK(siegel_beta(2, 2.0, 2.0).real() == doctest::Approx(kPi / 45).epsilon(1e-13));
    CHECK(siegel_beta(1, 2.0, 3.0).real() == doctest::Approx(1.0 / 12).epsilon(1e-13));
}

TEST_CASE("splitting identities") {
    // Gamma_m(a) = pi^{(m-1)/2} Gamma(a) Gamma_{m-1}(a - 1/2)
    //            = pi^{(m-1)/2} Gamma_{m-1}(a) Gamma(a - (m-1)/2)
    for (int m = 2; m <= 4; ++m)
        for (double a : {1.9, 2.6, 4.1}) {
            Complex gm = siegel_gamma(m, a).value();
            Complex s1 = std::pow(kPi, 0.5 * (m - 1)) * std::tgamma(a) * siegel_gamma(m - 1, a - 0.5).value();
            Complex s2 = std::pow(kPi, 0.5 * (m - 1)) * siegel_gamma(m - 1, a).value() * std::tgamma(a - 0.5 * (m - 1));
            CHECK(std::abs(gm - s1) <= 1e-12 * std::abs(gm));
            CHECK(std::abs(gm - s2) <= 1e-12 * std::abs(gm));
        }
}

TEST_CASE("pochhammer ratio") {
    // Gamma_m(a + 1) / Gamma_m(a) = prod_i (a - i/2)
    for (int m = 1; m <= 4; ++m) {
        Complex a(3.3, 0.4);
        Complex ratio = siegel_gamma(m, a + 1.0).value() / siegel_gamma(m, a).value();
        Complex prod = 1.0;
        for (int i = 0; i < m; ++i) prod *= a - 0.5 * i;
        CHECK(std::abs(ratio - prod) <= 1e-12 * std::abs(prod));
    }
    CHECK(pochhammer(2.0, 3).real() == 24.0);
}

TEST_CASE("stiefel volumes") {
    CHECK(stiefel_volume(2, 1) == doctest::Approx(2 * kPi));
    CHECK(stiefel_volume(3, 1) == doctest::Approx(4 * kPi));
    // V_{n,n} = O(n): vol O(2) = 2 * 2 pi
    CHECK(stiefel_volume(2, 2) == doctest::Approx(4 * kPi));
    CHECK(named_const(NamedConst::CNM, {4, 2, 0, 0}).real() == doctest::Approx(2 * kPi * kPi * kPi));
    CHECK(named_const(NamedConst::C2, {4, 2, 1, 0}).real() == doctest::Approx(2.0));
}

TEST_CASE("riesz constant poles") {
    CHECK(riesz_const(6, 2, 1.5).is_pole() == false);
    CHECK(riesz_const(6, 2, 1.0).is_pole());
    CHECK(riesz_const(6, 2, 0.0).is_pole());
    CHECK(riesz_const(4, 2, 4.0).is_pole());
}

TEST_CASE("k-bessel at m = 1 matches the classical function") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-10;
    for (double nu : {-1.5, 0.3, 2.0})
        for (double r : {0.2, 1.0, 3.5}) {
            auto e = k_bessel(1, nu, PosDefMatrix(SmallMat::Constant(1, 1, r)), spec);
            double ref = 2 * std::pow(r, nu / 2) * std::cyl_bessel_k(std::abs(nu), 2 * std::sqrt(r));
            CHECK(e.value.real() == doctest::Approx(ref).epsilon(1e-8));
        }
}

TEST_CASE("k-bessel forms agree at m = 2") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    SmallMat a(2, 2);
    a << 1.2, 0.3, 0.3, 0.8;
    PosDefMatrix r(a);
    for (double nu : {-0.7, 1.4}) {
        auto k1 = k_bessel(2, nu, r, spec, KForm::K1);
        auto k2 = k_bessel(2, nu, r, spec, KForm::K2);
        CHECK(std::abs(k1.value - k2.value) <= 1e-6 * std::abs(k1.value));
    }
    // nearly singular r and complex order
    SmallMat b(2, 2);
    b << 0.2, 0.1, 0.1, 0.08;
    PosDefMatrix rs(b);
    for (Complex nu : {Complex(-1.0, 0.0), Complex(0.6, -0.4)}) {
        auto k1 = k_bessel(2, nu, rs, spec, KForm::K1);
        auto k2 = k_bessel(2, nu, rs, spec, KForm::K2);
        CHECK(std::abs(k1.value - k2.value) <= 1e-6 * std::abs(k1.value));
    }
}

TEST_CASE("k-bessel monte carlo agrees with quadrature") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    SmallMat a(2, 2);
    a << 1.0, 0.2, 0.2, 0.6;
    PosDefMatrix r(a);
    auto q = k_bessel(2, 0.8, r, spec);
    QuadratureSpec mc = spec;
    mc.strategy = Strategy::MonteCarlo;
    mc.samples = 100000;
    Rng rng(1);
    auto e = k_bessel(2, 0.8, r, mc, KForm::K1, &rng);
    CHECK(std::abs(e.value - q.value) <= 4 * e.std_error);
}

TEST_CASE("bernstein factor as a product of b polynomials") {
    for (int m : {1, 2, 3})
        for (int n : {m, m + 2, 6})
            for (double lam : {0.5, 2.0, 3.7}) {
                Complex lhs = bernstein_cal_B(lam, n, m);
                Complex rhs = std::pow(4.0, m) * bernstein_b(lam / 2, m) * bernstein_b(0.5 * (n + lam) - 0.5 * (m + 1), m);
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
            }
    CHECK(bernstein_b(2.0, 2).real() == doctest::Approx(5.0));
}
