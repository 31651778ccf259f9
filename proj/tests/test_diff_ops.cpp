#include <doctest.h>

#include <cmath>

#include "matgeom/diff_ops.hpp"

using namespace matgeom;

namespace {

// Haar frame times a well-conditioned square factor
Mat conditioned_point(Rng& rng, int n, int m, double lo, double hi) {
    Mat v = haar_stiefel(rng, n, m).mat();
    Mat g = haar_rotation(rng, m).mat();
    Mat d = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) d(i, i) = lo + (hi - lo) * uniform01(rng);
    return v * g * d * g.transpose();
}

double det_gram(const Mat& x) { return (x.transpose() * x).determinant(); }

}  // namespace

TEST_CASE("laplacian of |x|^2 at m = 1 is 2n") {
    auto f = det_power_function(4, 1, 2.0);
    Mat x(4, 1);
    x << 0.3, -1.2, 0.5, 2.0;
    CHECK(cayley_laplace(f, RectMatrix(x)) == doctest::Approx(8.0).epsilon(1e-8));
}

TEST_CASE("cayley-laplace of a constant vanishes") {
    TestFunction c;
    c.n = 3;
    c.m = 2;
    c.f = [](const Mat&) { return 2.5; };
    Rng rng(1);
    CHECK(std::abs(cayley_laplace(c, RectMatrix(gaussian_matrix(rng, 3, 2)))) < 1e-8);
    CHECK(std::abs(cayley_laplace_power(c, RectMatrix(gaussian_matrix(rng, 3, 2)), 2, DiffSpec{0.1, 2})) < 1e-4);
}

TEST_CASE("bernstein identity for the determinant power") {
    Rng rng(2);
    DiffSpec ds{0.05, 3};
    for (int n : {4, 5, 6})
        for (double lam : {2.0, 2.5, 4.0})
            for (int t = 0; t < 3; ++t) {
                Mat x = gaussian_matrix(rng, n, 2);
                if (sigma_min_ratio(x) < 0.3) continue;
                double ref = bernstein_cal_B(lam, n, 2).real() * std::pow(det_gram(x), 0.5 * lam - 1.0);
                double v = cayley_laplace(det_power_function(n, 2, lam), RectMatrix(x), ds);
                double tol = lam == 2.0 || lam == 4.0 ? 1e-6 : 1e-3;
                CHECK(std::abs(v / ref - 1) < tol);
            }
    // polynomial case is constant in x
    CHECK(bernstein_cal_B(2.0, 4, 2).real() == doctest::Approx(72.0));
}

TEST_CASE("near-singular points are refused for singular powers") {
    Mat x = Mat::Zero(4, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 0.05;
    try {
        cayley_laplace(det_power_function(4, 2, 1.5), RectMatrix(x));
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NearSingularSet);
    }
}

TEST_CASE("row permutation does not change the stencil result") {
    Rng rng(3);
    auto f = GaussianMixture::shifted_gaussian(gaussian_matrix(rng, 4, 2) * 0.3).to_test_function();
    Mat x = gaussian_matrix(rng, 4, 2) * 0.5;
    Eigen::PermutationMatrix<Eigen::Dynamic> p(4);
    p.indices() << 2, 0, 3, 1;
    TestFunction g = f;
    g.f = [&](const Mat& y) { return f.f(p.transpose() * y); };
    DiffSpec ds{0.05, 3};
    double a = cayley_laplace(f, RectMatrix(x), ds);
    double b = cayley_laplace(g, RectMatrix(Mat(p * x)), ds);
    CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
}

TEST_CASE("D on an exponential") {
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) { return std::exp(-r.mat().trace()); };
    SmallMat r(2, 2);
    r << 1.1, 0.3, 0.3, 0.7;
    double v = d_operator(g, PosDefMatrix(r), DiffSpec{0.05, 3});
    CHECK(v == doctest::Approx(std::exp(-1.8)).epsilon(1e-7));

    SmallMat z(2, 2);
    z << 1.5, 0.4, 0.4, 0.8;
    RadialFn gz;
    gz.f0 = [&](const PosDefMatrix& s) { return std::exp(-(s.mat() * z).trace()); };
    double vz = d_operator(gz, PosDefMatrix(r), DiffSpec{0.05, 3});
    CHECK(vz == doctest::Approx(z.determinant() * std::exp(-(r * z).trace())).epsilon(1e-7));
}

TEST_CASE("D on determinant powers") {
    // D|r|^a = b(a)|r|^{a-1}, b(a) = a(a + 1/2) at m = 2
    RadialFn g;
    const double a = 2.5;
    g.f0 = [&](const PosDefMatrix& r) { return std::pow(r.det(), a); };
    double v = d_operator(g, PosDefMatrix::identity(2), DiffSpec{0.05, 3});
    CHECK(v == doctest::Approx(bernstein_b(a, 2).real()).epsilon(1e-7));
    // normalized power is mapped to the next one
    SmallMat r(2, 2);
    r << 1.4, -0.2, -0.2, 0.9;
    const double al = 3.3, d = 1.5;
    RadialFn h;
    h.f0 = [&](const PosDefMatrix& s) { return std::pow(s.det(), al - d) / siegel_gamma(2, al).real(); };
    double lhs = d_operator(h, PosDefMatrix(r), DiffSpec{0.05, 3});
    double rhs = std::pow(r.determinant(), al - 1 - d) / siegel_gamma(2, al - 1).real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("D is d/dr at m = 1") {
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) { return std::sin(r(0, 0)); };
    double v = d_operator(g, PosDefMatrix(SmallMat::Constant(1, 1, 0.8)));
    CHECK(v == doctest::Approx(std::cos(0.8)).epsilon(1e-9));
}

TEST_CASE("radial part on r at m = 1 gives 2n") {
    RadialFn g;
    g.f0 = [](const PosDefMatrix& r) { return r(0, 0); };
    CHECK(radial_part_L(g, PosDefMatrix(SmallMat::Constant(1, 1, 1.7)), 5) == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("radial part agrees with the cayley-laplace operator") {
    Rng rng(4);
    const int n = 5;
    auto f = GaussianMixture::gaussian(n, 2).to_test_function();
    RadialFn f0;
    f0.f0 = f.radial_profile;
    DiffSpec ds{0.05, 3};
    for (int t = 0; t < 5; ++t) {
        Mat x = conditioned_point(rng, n, 2, 0.5, 1.2);
        double a = cayley_laplace(f, RectMatrix(x), ds);
        double b = radial_part_L(f0, PosDefMatrix(SmallMat(x.transpose() * x)), n, ds);
        CHECK(std::abs(a - b) <= 1e-3 * std::abs(a));
    }
}

TEST_CASE("radial part reproduces the bernstein factor") {
    Rng rng(5);
    RadialFn f0;
    const double lam = 2.5;
    f0.f0 = [&](const PosDefMatrix& r) { return std::pow(r.det(), 0.5 * lam); };
    for (int n : {4, 6}) {
        Mat x = conditioned_point(rng, n, 2, 0.8, 1.5);
        SmallMat r = x.transpose() * x;
        double v = radial_part_L(f0, PosDefMatrix(r), n, DiffSpec{0.05, 3});
        double ref = bernstein_cal_B(lam, n, 2).real() * std::pow(r.determinant(), 0.5 * lam - 1.0);
        CHECK(std::abs(v / ref - 1) < 1e-6);
    }
}

TEST_CASE("iterated bernstein identity") {
    Rng rng(6);
    const int n = 6;
    DiffSpec ds{0.1, 2};
    for (double al : {3.5, 4.2}) {
        auto f = det_power_function(n, 2, al + 4 - n);
        Mat x = conditioned_point(rng, n, 2, 1.0, 1.2);
        double g = std::sqrt(det_gram(x));
        double ref = bernstein_Bk(al, 2, n, 2).real() * std::pow(g, al - n);
        // oracle: two applications of the single-step factor
        double comp = bernstein_cal_B(al + 4 - n, n, 2).real() * bernstein_cal_B(al + 2 - n, n, 2).real();
        CHECK(comp == doctest::Approx(bernstein_Bk(al, 2, n, 2).real()).epsilon(1e-12));
        double v = cayley_laplace_power(f, RectMatrix(x), 2, ds);
        CHECK(std::abs(v / ref - 1) < 1e-3);
    }
    // B_2 vanishes at alpha = 3 for n = 6
    CHECK(bernstein_Bk(3.0, 2, 6, 2).real() == 0.0);
}

TEST_CASE("B_k symmetry") {
    for (double a : {0.7, 2.5, 3.3})
        CHECK(bernstein_Bk(a, 2, 6, 2).real() ==
              doctest::Approx(bernstein_Bk(6 - a - 4, 2, 6, 2).real()).epsilon(1e-12));
}
