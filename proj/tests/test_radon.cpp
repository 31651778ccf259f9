#include <doctest.h>

#include <cmath>
#include <numbers>

#include "matgeom/radon.hpp"

using namespace matgeom;

namespace {
constexpr double kPi = std::numbers::pi;

PosDefMatrix pd(double a, double b, double c) {
    SmallMat s(2, 2);
    s << a, b, b, c;
    return PosDefMatrix(s);
}

Mat point(int n, int m, double scale) {
    Mat x(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) x(i, j) = scale * std::cos(0.4 + 1.3 * i + 0.8 * j);
    return x;
}

MatrixPlane plane(Rng& rng, int n, int m, int k, double scale) {
    return MatrixPlane(haar_stiefel(rng, n, n - k), point(n - k, m, scale));
}

// anisotropic, off-centre mixture without a closed-form shortcut
TestFunction bumpy(int n) {
    GaussianMixture mix(n, 2);
    mix.add_heat(1.0, pd(1.0, 0.2, 0.7), point(n, 2, 0.3));
    mix.add(0.5, pd(1.5, -0.3, 0.9), point(n, 2, -0.4));
    return mix.to_test_function();
}
}  // namespace

TEST_CASE("heat kernel plane integral has the closed form") {
    Rng rng(1);
    auto tau = pd(1.0, 0.3, 0.8);
    auto f = heat_family(4, tau);
    auto pl = plane(rng, 4, 2, 1, 0.5);
    QuadratureSpec spec;
    auto cf = radon_transform(f, pl, spec, rng);
    const int p = 3;
    SmallMat ti = tau.mat().inverse();
    double ref = std::pow(4 * kPi, -0.5 * p * 2) * std::pow(tau.det(), -0.5 * p) *
                 std::exp(-0.25 * (ti * pl.t.transpose() * pl.t).trace());
    CHECK(cf.value == doctest::Approx(ref).epsilon(1e-13));
    spec.samples = 50000;
    auto mc = radon_transform(f, pl, spec, rng, RadonMethod::MonteCarlo);
    CHECK(std::abs(mc.value - ref) <= 3 * mc.std_error);
}

TEST_CASE("plane basis completes the frame") {
    Rng rng(2);
    StiefelFrame xi = haar_stiefel(rng, 5, 2);
    Mat b = plane_basis(xi);
    CHECK(b.cols() == 3);
    CHECK((b.transpose() * b - Mat::Identity(3, 3)).norm() < 1e-12);
    CHECK((xi.mat().transpose() * b).norm() < 1e-12);
    CHECK_THROWS_AS(MatrixPlane(haar_stiefel(rng, 3, 3), Mat::Zero(3, 1)), Error);
}

TEST_CASE("mass is conserved on every plane family") {
    QuadratureSpec spec;
    spec.samples = 40000;
    Rng rng(3);
    auto f = bumpy(4);
    for (int i = 0; i < 3; ++i) {
        auto r = verify_radon_mass(f, haar_stiefel(rng, 4, 2), spec, rng);
        CHECK(r.pass);
        CHECK(r.extra["rel_error"].get<double>() < 1e-2);
    }
    // no closed form: joint Monte Carlo over the plane and its offset
    GaussianMixture one(4, 2);
    one.add(1.0, pd(1.2, 0.2, 0.8), point(4, 2, 0.3));
    TestFunction g = one.to_test_function();
    g.mixture.reset();
    spec.samples = 400000;
    auto r = verify_radon_mass(g, haar_stiefel(rng, 4, 3), spec, rng);
    CHECK(r.pass);
    CHECK(r.extra["rel_error"].get<double>() < 1e-2);
}

TEST_CASE("evenness") {
    QuadratureSpec spec;
    spec.samples = 20000;
    Rng rng(4);
    auto f = bumpy(4);
    auto pl = plane(rng, 4, 2, 2, 0.4);
    Mat theta = haar_stiefel(rng, 2, 2).mat();
    auto cf = verify_radon_evenness(f, pl, theta, spec, rng);
    CHECK(cf.pass);
    CHECK(std::abs(cf.lhs - cf.rhs) < 1e-13 * std::abs(cf.rhs));
    auto mc = verify_radon_evenness(f, pl, theta, spec, rng, RadonMethod::MonteCarlo);
    CHECK(mc.pass);
    CHECK(mc.std_error > 0);
}

TEST_CASE("shift and affine laws") {
    QuadratureSpec spec;
    Rng rng(5);
    auto f = bumpy(4);
    auto pl = plane(rng, 4, 2, 1, 0.2);
    auto r0 = verify_shift_equivariance(f, pl, Mat::Zero(4, 2), spec, rng);
    CHECK(r0.lhs == r0.rhs);
    for (int i = 0; i < 3; ++i) {
        auto r = verify_shift_equivariance(f, pl, gaussian_matrix(rng, 4, 2), spec, rng);
        CHECK(r.pass);
    }
    Mat gamma = haar_rotation(rng, 4).mat();
    Mat beta = haar_stiefel(rng, 2, 2).mat();
    CHECK(verify_affine_law(f, pl, gamma, Mat::Identity(2, 2), Mat::Zero(4, 2), spec, rng).pass);
    CHECK(verify_affine_law(f, pl, gamma, beta, gaussian_matrix(rng, 4, 2), spec, rng).pass);
    CHECK_THROWS_AS(verify_affine_law(f, pl, 2.0 * gamma, beta, Mat::Zero(4, 2), spec, rng), Error);
}

TEST_CASE("the transform does not depend on the completion") {
    QuadratureSpec spec;
    spec.samples = 40000;
    Rng rng(6);
    auto f = bumpy(5);
    auto pl = plane(rng, 5, 2, 3, 0.3);
    auto r = verify_completion_independence(f, pl, spec, rng);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - f.mixture->radon(pl.xi.mat(), pl.t)) <= 3 * r.std_error);
}

TEST_CASE("dual transform") {
    QuadratureSpec spec;
    spec.samples = 5000;
    Rng rng(7);
    PlaneFn one = [](const Mat&, const Mat&) { return 2.5; };
    CHECK(dual_radon(one, point(4, 2, 1.0), 1, spec, rng).value == doctest::Approx(2.5).epsilon(1e-15));
    // phi(xi, t) = psi(t) with psi(0) read off at x = 0
    PlaneFn psi = [](const Mat&, const Mat& t) { return std::exp(-t.squaredNorm()); };
    CHECK(dual_radon(psi, Mat::Zero(4, 2), 2, spec, rng).value == doctest::Approx(1.0).epsilon(1e-15));
    // common frames give a reproducible value
    auto frames = haar_frames(rng, 4, 3, 100);
    Mat x = point(4, 2, 0.5);
    CHECK(dual_radon(psi, x, frames).value == dual_radon(psi, x, frames).value);
}

TEST_CASE("duality") {
    QuadratureSpec spec;
    spec.samples = 100000;
    Rng rng(8);
    auto f = GaussianMixture::shifted_gaussian(point(4, 2, 0.3)).to_test_function();
    for (double s : {0.5, 1.5})
        for (double shift : {0.0, 0.6}) {
            auto phi = radon_function(GaussianMixture::heat_kernel(4, pd(s, 0, s)).shifted(point(4, 2, shift)).to_test_function());
            auto r = verify_duality(f, phi, 1, spec, rng);
            CHECK(r.pass);
        }
}

TEST_CASE("radon data export") {
    Rng rng(9);
    auto f = heat_family(3, PosDefMatrix(SmallMat::Constant(1, 1, 1.0)));
    auto pl = plane(rng, 3, 1, 1, 0.2);
    QuadratureSpec spec;
    RadonDatum d{pl.xi.mat(), pl.t, radon_transform(f, pl, spec, rng)};
    auto j = radon_data_json({d, d});
    CHECK(j.size() == 2);
    CHECK(j[0]["xi"].size() == 6);
    CHECK(j[0]["xi"][1].get<double>() == pl.xi.mat()(0, 1));
    CHECK(j[0]["t"].size() == 2);
    CHECK(j[0]["stderr"].get<double>() == 0.0);
}

TEST_CASE("fuglede identity") {
    QuadratureSpec spec;
    spec.samples = 40000;
    Rng rng(10);
    auto h = heat_family(4, PosDefMatrix::identity(2));
    auto a = fuglede_check(h, Mat::Zero(4, 2), 1, spec, rng);
    CHECK(a.pass);
    CHECK(a.extra["route"] == "stiefel");
    auto a2 = fuglede_check(h, point(4, 2, 0.5), 1, spec, rng);
    CHECK(a2.pass);
    CHECK(a2.std_error > 0);

    auto h6 = heat_family(6, PosDefMatrix::identity(2));
    auto b = fuglede_check(h6, Mat::Zero(6, 2), 2, spec, rng);
    CHECK(b.pass);
    CHECK(b.extra["route"] == "heat");
    CHECK(fuglede_check(heat_family(6, pd(1.0, 0.3, 0.8)), point(6, 2, 0.4), 2, spec, rng).pass);

    auto h3 = heat_family(3, PosDefMatrix(SmallMat::Constant(1, 1, 0.7)));
    Mat x(3, 1);
    x << 0.2, -0.4, 0.1;
    CHECK(fuglede_check(h3, x, 1, spec, rng).pass);
    // no heat form: the polar route
    TestFunction g = bumpy(6);
    g.heat = nullptr;
    auto c = fuglede_check(g, point(6, 2, 0.2), 3, spec, rng);
    CHECK(c.pass);
    CHECK(c.extra["route"] == "direct");

    try {
        fuglede_check(h, Mat::Zero(4, 2), 3, spec, rng);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RangeViolation);
    }
}

TEST_CASE("even k inversion") {
    QuadratureSpec spec;
    spec.samples = 40000;
    Rng rng(11);
    auto h = heat_family(6, PosDefMatrix::identity(2));
    auto r = verify_even_k_inversion(h, Mat::Zero(6, 2), 2, spec, rng);
    CHECK(r.pass);
    // every frame gives the same Laplacian at the centre of a radial f, up to
    // finite-difference rounding
    CHECK(r.std_error < 1e-6 * r.rhs.real());
    // m = 1 classical case: -Laplacian of the backprojection
    auto h3 = heat_family(3, PosDefMatrix(SmallMat::Constant(1, 1, 0.5)));
    Mat x(3, 1);
    x << 0.1, 0.2, -0.1;
    CHECK(verify_even_k_inversion(h3, x, 2, spec, rng).pass);
    // a shifted kernel is recovered at its peak
    Mat y = point(6, 2, 0.3);
    auto s = GaussianMixture::heat_kernel(6, PosDefMatrix::identity(2)).shifted(-y).to_test_function();
    auto p = verify_even_k_inversion(s, y, 2, spec, rng);
    CHECK(p.pass);
    CHECK_THROWS_AS(invert_radon_even_k(radon_function(h), Mat::Zero(6, 2), 3, 6, 2, spec, rng), Error);
    try {
        invert_radon_even_k(radon_function(h), Mat::Zero(6, 2), 6, 6, 2, spec, rng);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StripViolation);
    }
}
