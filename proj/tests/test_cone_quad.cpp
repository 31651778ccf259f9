#include <doctest.h>

#include <cmath>
#include <numbers>

#include "matgeom/cone_quad.hpp"

using namespace matgeom;

namespace {
constexpr double kPi = std::numbers::pi;

RadialFn gamma_integrand(double alpha, int m) {
    RadialFn g;
    double d = 0.5 * (m + 1);
    g.f0 = [=](const PosDefMatrix& r) { return std::exp(-r.mat().trace() + (alpha - d) * std::log(r.det())); };
    g.meta.det_power = alpha;
    return g;
}
}  // namespace

TEST_CASE("cone integral reproduces the siegel gamma") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    for (double a : {1.2, 2.0, 3.5}) {
        auto e = integrate_cone(gamma_integrand(a, 2), 2, spec);
        CHECK(e.value == doctest::Approx(siegel_gamma(2, a).real()).epsilon(1e-7));
    }
    auto e1 = integrate_cone(gamma_integrand(2.5, 1), 1, spec);
    CHECK(e1.value == doctest::Approx(std::tgamma(2.5)).epsilon(1e-9));
}

TEST_CASE("cone integral by monte carlo at m = 3") {
    QuadratureSpec spec;
    spec.samples = 100000;
    Rng rng(4);
    auto e = integrate_cone(gamma_integrand(2.5, 3), 3, spec, &rng);
    double ref = siegel_gamma(3, 2.5).real();
    CHECK(std::abs(e.value - ref) <= 4 * e.std_error);
    CHECK(e.std_error < 0.02 * ref);
}

TEST_CASE("divergent metadata is refused") {
    QuadratureSpec spec;
    try {
        integrate_cone(gamma_integrand(0.4, 2), 2, spec);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonIntegrable);
    }
}

TEST_CASE("bounded cone beta integral") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) {
        SmallMat c = SmallMat::Identity(2, 2) - r.mat();
        return std::sqrt(std::max(0.0, r.det() * c.determinant()));
    };
    auto e = integrate_bounded_cone(g, std::nullopt, PosDefMatrix::identity(2), spec);
    CHECK(e.value == doctest::Approx(kPi / 45).epsilon(1e-7));

    RadialFn one;
    one.f0 = [](const PosDefMatrix&) { return 1.0; };
    CHECK(integrate_bounded_cone(one, std::nullopt, PosDefMatrix::identity(1), spec).value ==
          doctest::Approx(1.0));
}

TEST_CASE("bounded cone shift invariance and empty region") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-8;
    SmallMat am(2, 2), bm(2, 2);
    am << 0.5, 0.1, 0.1, 0.4;
    bm << 2.0, 0.3, 0.3, 1.5;
    PosDefMatrix a(am), b(bm), diff(SmallMat(bm - am));
    RadialFn g;
    g.f0 = [](const PosDefMatrix& s) { return std::exp(-0.5 * s.mat().trace()) * s.det(); };
    RadialFn gs;
    gs.f0 = [&](const PosDefMatrix& s) { return g.f0(PosDefMatrix(SmallMat(s.mat() + am))); };
    auto x = integrate_bounded_cone(g, a, b, spec);
    auto y = integrate_bounded_cone(gs, std::nullopt, diff, spec);
    CHECK(x.value == doctest::Approx(y.value).epsilon(1e-8));
    try {
        integrate_bounded_cone(g, b, a, spec);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyRegion);
    }
}

TEST_CASE("stiefel volume by monte carlo") {
    QuadratureSpec spec;
    spec.samples = 2000;
    Rng rng(1);
    auto e = integrate_stiefel([](const Mat&) { return 1.0; }, 5, 2, spec, rng);
    CHECK(e.value == doctest::Approx(stiefel_volume(5, 2)));
    // E|v_11|^2 = 1/n
    auto f = integrate_stiefel([](const Mat& v) { return v(0, 0) * v(0, 0); }, 4, 2, QuadratureSpec{}, rng);
    CHECK(std::abs(f.value - stiefel_volume(4, 2) / 4) <= 4 * f.std_error);
}

TEST_CASE("polar identity for a radial gaussian") {
    // int_{M_{n,m}} f0(x'x) dx = 2^{-m} sigma_{n,m} int_P f0(r) |r|^{n/2-d} dr
    const int n = 4, m = 2;
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) { return std::exp(-r.mat().trace() + 0.5 * std::log(r.det())); };
    auto cone = integrate_cone(g, m, spec);
    double lhs = std::pow(kPi, 0.5 * n * m);
    CHECK(std::pow(2.0, -m) * stiefel_volume(n, m) * cone.value == doctest::Approx(lhs).epsilon(1e-8));
}

TEST_CASE("inversion change of variables") {
    // dr = |s|^{-m-1} ds for s = r^{-1}
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) { return std::exp(-r.mat().trace() - r.mat().inverse().trace()); };
    RadialFn h;
    h.f0 = [&](const PosDefMatrix& s) { return g.f0(PosDefMatrix(SmallMat(s.mat().inverse()))) * std::pow(s.det(), -3); };
    auto a = integrate_cone(g, 2, spec);
    auto b = integrate_cone(h, 2, spec);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-7));
}

TEST_CASE("gaussian mixture closed forms") {
    GaussianMixture g = GaussianMixture::gaussian(3, 2);
    TestFunction f = g.to_test_function();
    CHECK(g.mass() == doctest::Approx(std::pow(kPi, 3)));
    CHECK(f.is_radial());

    Mat x0(3, 2);
    x0 << 0.3, -0.2, 0.5, 0.1, -0.4, 0.7;
    SmallMat qm(2, 2);
    qm << 1.3, 0.4, 0.4, 0.9;
    GaussianMixture mix(3, 2);
    mix.add(0.7, PosDefMatrix(qm), x0).add(1.5, PosDefMatrix::identity(2), Mat::Zero(3, 2));
    CHECK_NOTHROW(mix.validate());
    CHECK_FALSE(mix.to_test_function().is_radial());

    SmallMat tau(2, 2);
    tau << 0.8, 0.1, 0.1, 0.5;
    auto h = GaussianMixture::heat_kernel(5, PosDefMatrix(tau));
    CHECK(h.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW(h.validate());
    // W_t h_tau = h_{t + tau}
    SmallMat t(2, 2);
    t << 0.4, 0.0, 0.0, 0.3;
    Mat x = Mat::Constant(5, 2, 0.2);
    auto h2 = GaussianMixture::heat_kernel(5, PosDefMatrix(SmallMat(tau + t)));
    CHECK(h.heat(x, PosDefMatrix(t)) == doctest::Approx(h2.value(x)).epsilon(1e-12));
}

TEST_CASE("gaussian mixture radon integrates planes") {
    // for k = n - 1 planes the transform is a direct 1-row integral; check mass
    // conservation: int over t of the plane integrals equals the total mass
    const int n = 3, m = 1;
    GaussianMixture g(n, m);
    Mat x0(3, 1);
    x0 << 0.2, -0.5, 0.4;
    SmallMat q = SmallMat::Constant(1, 1, 0.8);
    g.add(1.1, PosDefMatrix(q), x0);
    Rng rng(2);
    Mat xi = haar_stiefel(rng, n, 2).mat();
    std::vector<quad::Axis> axes(2, quad::Axis::RealLine);
    auto e = quad::integrate<double>(axes, [&](const double* t) {
        Mat tt(2, 1);
        tt << t[0], t[1];
        return g.radon(xi, tt);
    });
    CHECK(e.value == doctest::Approx(g.mass()).epsilon(1e-9));
}

TEST_CASE("matrix space integration") {
    QuadratureSpec spec;
    spec.samples = 1000;
    Rng rng(3);
    auto f = GaussianMixture::gaussian(3, 2).to_test_function();
    auto e = integrate_matrix_space(f, spec, rng);
    CHECK(e.value == doctest::Approx(std::pow(kPi, 3)).epsilon(1e-12));
    auto h = GaussianMixture::heat_kernel(4, PosDefMatrix::identity(2)).to_test_function();
    auto eh = integrate_matrix_space(h, spec, rng);
    CHECK(eh.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("appendix identities at m = 2") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-7;
    spec.samples = 200000;
    Rng rng(5);
    AppendixParams p;
    SmallMat s(2, 2);
    s << 1.5, 0.4, 0.4, 0.9;
    p.s = PosDefMatrix(s);
    for (auto id : {AppendixId::A1, AppendixId::A2, AppendixId::A3, AppendixId::A4}) {
        Report r = verify_appendix(id, p, spec, rng);
        CHECK_MESSAGE(r.pass, r.id);
        CHECK(relative_error(r.lhs, r.rhs) < 1e-4);
    }
    p.monte_carlo = true;
    Report r = verify_appendix(AppendixId::A4, p, spec, rng);
    CHECK(r.pass);
    CHECK(r.rhs.real() == doctest::Approx(kPi * kPi * kPi / 3));
}

TEST_CASE("appendix A1 at m = 1 is a scalar beta integral") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-9;
    Rng rng(1);
    AppendixParams p;
    p.m = 1;
    p.alpha = 1.5;
    p.gamma = 4.0;
    p.s = PosDefMatrix(SmallMat::Constant(1, 1, 2.0));
    Report r = verify_appendix(AppendixId::A1, p, spec, rng);
    double ref = std::pow(2.0, -2.5) * std::tgamma(1.5) * std::tgamma(2.5) / std::tgamma(4.0);
    CHECK(r.lhs.real() == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("appendix parameter checks") {
    QuadratureSpec spec;
    Rng rng(1);
    AppendixParams p;
    p.lambda = 3.5;
    try {
        verify_appendix(AppendixId::A3, p, spec, rng);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParameterOutOfRange);
    }
}

TEST_CASE("monte carlo reports are reproducible") {
    QuadratureSpec spec;
    spec.samples = 5000;
    AppendixParams p;
    p.monte_carlo = true;
    Rng a(99), b(99);
    Report x = verify_appendix(AppendixId::A4, p, spec, a);
    Report y = verify_appendix(AppendixId::A4, p, spec, b);
    CHECK(x.lhs == y.lhs);
    CHECK(x.std_error == y.std_error);
}
