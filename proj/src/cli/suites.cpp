#include "matgeom/suites.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <type_traits>

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kStreamsPerSuite = 1000;
// Floor for comparisons of two deterministic quadratures, as a multiple of
// the integrator tolerance.
constexpr double kQuadratureFloor = 10.0;

class Runner {
public:
    Runner(const SuiteConfig& cfg, std::uint64_t suite_index, std::vector<Report>& out)
        : cfg_(cfg), base_(suite_index * kStreamsPerSuite), out_(out) {}

    QuadratureSpec spec(double rel_tol, std::size_t samples = 200'000) const {
        QuadratureSpec s;
        s.rel_tol = cfg_.rel_tol.value_or(rel_tol);
        s.abs_tol = cfg_.abs_tol.value_or(0.0);
        s.samples = cfg_.samples.value_or(samples);
        s.workers = cfg_.workers;
        return s;
    }

    // body(rng) returns a Report or a vector of them.
    template <class F>
    void check(const std::string& id, F&& body) {
        Rng rng = make_stream(cfg_.seed, base_ + next_++);
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<Report> rs;
        try {
            using R = std::invoke_result_t<F, Rng&>;
            if constexpr (std::is_same_v<R, Report>)
                rs.push_back(body(rng));
            else
                rs = body(rng);
        } catch (const std::exception& e) {
            Report r;
            r.extra["error"] = e.what();
            rs = {r};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        for (auto& r : rs) {
            r.id = id;
            r.seed = cfg_.seed;
            r.wall_ms = cfg_.timing ? ms / double(rs.size()) : 0.0;
            out_.push_back(std::move(r));
        }
    }

private:
    const SuiteConfig& cfg_;
    std::uint64_t base_;
    std::uint64_t next_ = 0;
    std::vector<Report>& out_;
};

PosDefMatrix pd(double a, double b, double c) {
    SmallMat s(2, 2);
    s << a, b, b, c;
    return PosDefMatrix(s);
}

PosDefMatrix scalar_pd(double a) { return PosDefMatrix(SmallMat::Constant(1, 1, a)); }

Mat point(int n, int m, double scale) {
    Mat x(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) x(i, j) = scale * std::sin(0.7 + 1.9 * i - 1.1 * j);
    return x;
}

// Haar frame times a well-conditioned symmetric factor.
Mat conditioned_point(Rng& rng, int n, int m, double lo, double hi) {
    Mat v = haar_stiefel(rng, n, m).mat();
    Mat g = haar_rotation(rng, m).mat();
    Mat d = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) d(i, i) = lo + (hi - lo) * uniform01(rng);
    return v * g * d * g.transpose();
}

PosDefMatrix random_pd2(Rng& rng, double lo, double hi) {
    Mat g = haar_rotation(rng, 2).mat();
    SmallMat d = SmallMat::Zero(2, 2);
    for (int i = 0; i < 2; ++i) d(i, i) = lo * std::pow(hi / lo, uniform01(rng));
    return PosDefMatrix(SmallMat(g * d * g.transpose()));
}

TestFunction gaussian(int n, int m) { return GaussianMixture::gaussian(n, m).to_test_function(); }

TestFunction shifted(int n, int m) {
    Mat x0(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) x0(i, j) = 0.3 * std::cos(1.0 + i + 2.0 * j);
    return GaussianMixture::shifted_gaussian(x0).to_test_function();
}

TestFunction bumpy(int n) {
    GaussianMixture mix(n, 2);
    mix.add_heat(1.0, pd(1.0, 0.2, 0.7), point(n, 2, 0.3));
    mix.add(0.5, pd(1.5, -0.3, 0.9), point(n, 2, -0.4));
    return mix.to_test_function();
}

double cnm(int n, int m) { return named_const(NamedConst::CNM, {n, m, 0, 0.0}).real(); }

Report compare(Complex lhs, Complex rhs, double rel_tol) {
    Report r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.pass = relative_pass(lhs, rhs, rel_tol);
    r.extra["rel_error"] = relative_error(lhs, rhs);
    r.extra["rel_tol"] = rel_tol;
    return r;
}

// Worst case over a family of exact cross-checks.
struct Worst {
    Complex lhs{}, rhs{};
    double err = -1.0;
    void add(Complex a, Complex b) {
        double e = relative_error(a, b);
        if (e > err) lhs = a, rhs = b, err = e;
    }
};

RadialFn gamma_integrand(double alpha, int m) {
    RadialFn g;
    double d = 0.5 * (m + 1);
    g.f0 = [=](const PosDefMatrix& r) { return std::exp(-r.mat().trace() + (alpha - d) * std::log(r.det())); };
    g.meta.det_power = alpha;
    return g;
}

void suite_gamma(Runner& run) {
    const auto spec = run.spec(1e-9);
    for (double a : {1.2, 2.0, 3.5})
        run.check("gamma-cone", [&](Rng&) {
            auto e = integrate_cone(gamma_integrand(a, 2), 2, spec);
            Report r = compare(e.value, siegel_gamma(2, a).real(), 1e-6);
            r.params = {{"m", 2}, {"alpha", a}};
            r.std_error = e.std_error;
            r.n_samples = e.n_samples;
            return r;
        });
    for (int m = 1; m <= 3; ++m)
        run.check("gamma-pochhammer", [&](Rng&) {
            Worst w;
            for (double a : {1.3, 2.7}) {
                Complex lhs = (m % 2 ? -1.0 : 1.0) * siegel_gamma(m, 1 - a / 2).value() / siegel_gamma(m, -a / 2).value();
                w.add(lhs, std::pow(2.0, -m) * pochhammer(a, m));
            }
            Report r = compare(w.lhs, w.rhs, 1e-12);
            r.params = {{"m", m}, {"alpha", {1.3, 2.7}}};
            return r;
        });
    for (int m = 2; m <= 4; ++m)
        for (int k = 1; k < m; ++k) {
            run.check("gamma-splitting-product", [&](Rng&) {
                Worst w;
                for (double a : {1.9, 2.6, 4.1})
                    w.add(siegel_gamma(m, a).value(), std::pow(kPi, 0.5 * k * (m - k)) * siegel_gamma(k, a).value() *
                                                          siegel_gamma(m - k, a - 0.5 * k).value());
                Report r = compare(w.lhs, w.rhs, 1e-12);
                r.params = {{"m", m}, {"k", k}, {"alpha", {1.9, 2.6, 4.1}}};
                return r;
            });
            run.check("gamma-splitting-ratio", [&](Rng&) {
                Worst w;
                for (double a : {1.9, 2.6, 4.1})
                    w.add(siegel_gamma(m, a).value() / siegel_gamma(m, a + 0.5 * k).value(),
                          siegel_gamma(k, a + 0.5 * (k - m)).value() / siegel_gamma(k, a + 0.5 * k).value());
                Report r = compare(w.lhs, w.rhs, 1e-12);
                r.params = {{"m", m}, {"k", k}, {"alpha", {1.9, 2.6, 4.1}}};
                return r;
            });
        }
}

void suite_beta(Runner& run) {
    const auto spec = run.spec(1e-8);
    for (auto [a, b] : {std::pair{2.0, 2.0}, std::pair{3.0, 2.5}})
        run.check("beta-bounded-cone", [&](Rng&) {
            RadialFn g;
            g.f0 = [a, b](const PosDefMatrix& s) {
                double ds = s.det();
                double dc = (SmallMat::Identity(2, 2) - s.mat()).determinant();
                if (ds <= 0 || dc <= 0) return 0.0;
                return std::exp((a - 1.5) * std::log(ds) + (b - 1.5) * std::log(dc));
            };
            auto e = integrate_bounded_cone(g, std::nullopt, PosDefMatrix::identity(2), spec);
            Report r = compare(e.value, siegel_beta(2, a, b).real(), 1e-5);
            r.params = {{"m", 2}, {"alpha", a}, {"beta", b}};
            r.std_error = e.std_error;
            r.n_samples = e.n_samples;
            if (a == 2.0 && b == 2.0) {
                r.extra["closed_form"] = kPi / 45;
                r.pass = r.pass && relative_pass(e.value, kPi / 45, 1e-5);
            }
            return r;
        });
}

void suite_bessel(Runner& run) {
    const auto spec = run.spec(1e-8);
    const PosDefMatrix r0 = pd(1.2, 0.3, 0.8);
    for (Complex nu : {Complex(-0.7), Complex(1.4), Complex(0.6, -0.4)})
        run.check("k-bessel-forms", [&](Rng&) {
            auto k1 = k_bessel(2, nu, r0, spec, KForm::K1);
            auto k2 = k_bessel(2, nu, r0, spec, KForm::K2);
            Report r;
            r.params = {{"m", 2}, {"nu", complex_to_json(nu)}, {"r", matrix_to_json(r0.mat())}};
            r.lhs = k1.value;
            r.rhs = k2.value;
            r.std_error = combined_error(k1.std_error, k2.std_error);
            r.n_samples = k1.n_samples + k2.n_samples;
            r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error,
                                     kQuadratureFloor * spec.rel_tol * std::abs(r.lhs));
            return r;
        });

    // 20 orders spread over the three regimes, d - 1 = 1/2 at m = 2
    const double d = 1.5;
    const double eps = 0.5;
    run.check("k-bessel-bound", [&](Rng& rng) {
        std::vector<Report> out;
        for (int i = 0; i < 20; ++i) {
            double re;
            std::string regime;
            if (i % 3 == 0) {
                re = (d - 1) + 0.1 + 3.0 * uniform01(rng);
                regime = "above";
            } else if (i % 3 == 1) {
                re = (1 - d) - 0.1 - 3.0 * uniform01(rng);
                regime = "below";
            } else {
                re = (1 - d) + 2 * (d - 1) * uniform01(rng);
                regime = "middle";
            }
            Complex nu(re, 2.0 * uniform01(rng) - 1.0);
            PosDefMatrix r = random_pd2(rng, 0.05, 4.0);
            auto k = k_bessel(2, nu, r, spec, KForm::K1);
            double bound;
            if (regime == "above")
                bound = siegel_gamma(2, re).real();
            else if (regime == "below")
                bound = siegel_gamma(2, -re).real() * std::pow(r.det(), re);
            else
                bound = siegel_gamma(2, d).real() +
                        std::pow(r.det(), 1 - d - eps) * siegel_gamma(2, d - 1 + eps).real();
            Report rep;
            rep.params = {{"m", 2}, {"nu", complex_to_json(nu)}, {"r", matrix_to_json(r.mat())}, {"regime", regime}};
            rep.lhs = std::abs(k.value);
            rep.rhs = bound;
            rep.std_error = k.std_error;
            rep.n_samples = k.n_samples;
            rep.pass = std::abs(k.value) <= bound + 3 * k.std_error;
            if (regime == "middle") rep.params["eps"] = eps;
            out.push_back(rep);
        }
        return out;
    });

    // eps^{-m nu} K_nu(eps r) -> Gamma_m(-nu) |r|^nu at nu = -2
    run.check("k-bessel-limit", [&](Rng&) {
        const double nu = -2.0;
        const double ref = siegel_gamma(2, -nu).real() * std::pow(r0.det(), nu);
        json trend = json::array();
        double ratio = 0, err = 0, prev = INFINITY;
        bool monotone = true;
        for (double e : {1e-1, 1e-2, 1e-3}) {
            auto k = k_bessel(2, nu, PosDefMatrix(SmallMat(e * r0.mat())), spec, KForm::K1);
            double c = std::pow(e, -2 * nu) / ref;
            ratio = k.value.real() * c;
            err = k.std_error * c;
            monotone = monotone && std::abs(ratio - 1) < prev;
            prev = std::abs(ratio - 1);
            trend.push_back({{"eps", e}, {"ratio", ratio}});
        }
        Report r = compare(ratio, 1.0, 1e-2);
        r.params = {{"m", 2}, {"nu", nu}, {"eps", 1e-3}, {"r", matrix_to_json(r0.mat())}};
        r.std_error = err;
        r.extra["trend"] = trend;
        r.pass = r.pass && monotone;
        return r;
    });
}

void suite_appendix(Runner& run) {
    const auto spec = run.spec(1e-7, 200'000);
    AppendixParams p;
    p.s = pd(1.5, 0.4, 0.9);
    for (auto id : {AppendixId::A1, AppendixId::A2, AppendixId::A3, AppendixId::A4})
        run.check("appendix-" + to_string(id), [&](Rng& rng) { return verify_appendix(id, p, spec, rng); });
}

void suite_bernstein(Runner& run) {
    const DiffSpec ds{0.05, 3};
    for (int n : {4, 6})
        for (double lam : {2.0, 2.5})
            run.check("bernstein", [&](Rng& rng) {
                std::vector<Report> out;
                const double tol = lam == 2.0 ? 1e-6 : 1e-3;
                const double b = bernstein_cal_B(lam, n, 2).real();
                for (int i = 0; i < 5; ++i) {
                    Mat x = conditioned_point(rng, n, 2, 0.8, 1.5);
                    double g = (x.transpose() * x).determinant();
                    double v = cayley_laplace(det_power_function(n, 2, lam), RectMatrix(x), ds);
                    Report r = compare(v, b * std::pow(g, 0.5 * lam - 1.0), tol);
                    r.params = {{"n", n}, {"m", 2}, {"lambda", lam}, {"x", matrix_to_json(x)}};
                    out.push_back(r);
                }
                return out;
            });
    const int n = 6;
    for (double al : {3.5, 4.2})
        run.check("bernstein-iterated", [&](Rng& rng) {
            Mat x = conditioned_point(rng, n, 2, 1.0, 1.2);
            double g = std::sqrt((x.transpose() * x).determinant());
            double v = cayley_laplace_power(det_power_function(n, 2, al + 4 - n), RectMatrix(x), 2, DiffSpec{0.1, 2});
            Report r = compare(v, bernstein_Bk(al, 2, n, 2).real() * std::pow(g, al - n), 1e-3);
            r.params = {{"n", n}, {"m", 2}, {"k", 2}, {"alpha", al}, {"x", matrix_to_json(x)}};
            return r;
        });
}

void suite_radial(Runner& run) {
    const int n = 5;
    run.check("radial-part", [&](Rng& rng) {
        auto f = gaussian(n, 2);
        RadialFn f0;
        f0.f0 = f.radial_profile;
        const DiffSpec ds{0.05, 3};
        std::vector<Report> out;
        for (int i = 0; i < 5; ++i) {
            Mat x = conditioned_point(rng, n, 2, 0.5, 1.2);
            double a = cayley_laplace(f, RectMatrix(x), ds);
            double b = radial_part_L(f0, PosDefMatrix(SmallMat(x.transpose() * x)), n, ds);
            Report r = compare(a, b, 1e-3);
            r.params = {{"n", n}, {"m", 2}, {"x", matrix_to_json(x)}};
            out.push_back(r);
        }
        return out;
    });
}

void suite_zeta(Runner& run) {
    const auto quad = run.spec(1e-9);
    for (double a : {1.5, 2.0, 2.5})
        run.check("zeta-gaussian", [&](Rng& rng) {
            auto z = zeta_integral(gaussian(4, 2), a, quad, rng);
            Report r = compare(z.value.value, cnm(4, 2) * siegel_gamma(2, a / 2).value(), 1e-6);
            r.params = {{"n", 4}, {"m", 2}, {"alpha", a}};
            r.std_error = z.value.std_error;
            r.n_samples = z.value.n_samples;
            r.extra["method"] = z.method;
            return r;
        });
    const auto mc = run.spec(1e-8, 32'000);
    run.check("zeta-regularized", [&](Rng& rng) { return verify_eq_3_5(gaussian(4, 2), 2.0, 0.5, mc, rng); });
}

void suite_functional_eq(Runner& run) {
    const auto spec = run.spec(1e-8, 100'000);
    run.check("functional-eq-gaussian",
              [&](Rng& rng) { return verify_functional_equation(gaussian(4, 2), 2.0, spec, rng); });
    run.check("functional-eq-shifted", [&](Rng& rng) {
        Report r = verify_functional_equation(shifted(4, 2), 2.0, spec, rng);
        double rel = r.std_error / std::abs(r.rhs);
        r.extra["rel_stderr"] = rel;
        r.pass = r.pass && rel <= 1e-2;
        return r;
    });
}

void suite_wallach(Runner& run) {
    const auto spec = run.spec(1e-8, 100'000);
    run.check("wallach-zero", [&](Rng& rng) {
        auto g = gaussian(4, 2);
        auto z = normalized_zeta(g, 0.0, spec, rng);
        Report r = compare(z.value.value, std::pow(kPi, 4) * g.f(Mat::Zero(4, 2)) / siegel_gamma(2, 2.0).value(), 1e-6);
        r.params = {{"n", 4}, {"m", 2}, {"alpha", 0}};
        r.extra["method"] = z.method;
        return r;
    });
    const std::vector<WallachRoute> routes = {WallachRoute::R1, WallachRoute::Znk, WallachRoute::R2, WallachRoute::R3};
    run.check("wallach-routes", [&](Rng& rng) {
        auto f = shifted(4, 2);
        std::vector<ComplexEstimate> v;
        for (auto route : routes) v.push_back(zeta_wallach(f, 1, spec, rng, route).value);
        std::vector<Report> out;
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b) {
                Report r;
                r.params = {{"n", 4}, {"m", 2}, {"k", 1}, {"routes", {to_string(routes[a]), to_string(routes[b])}}};
                r.lhs = v[a].value;
                r.rhs = v[b].value;
                r.std_error = combined_error(v[a].std_error, v[b].std_error);
                r.n_samples = v[a].n_samples + v[b].n_samples;
                r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
                out.push_back(r);
            }
        return out;
    });
    run.check("wallach-gaussian", [&](Rng& rng) {
        auto g = gaussian(4, 2);
        std::vector<Report> out;
        auto add = [&](const ZetaResult& z, json params) {
            Report r = compare(z.value.value, cnm(4, 2), 1e-2);
            r.params = std::move(params);
            r.std_error = z.value.std_error;
            r.n_samples = z.value.n_samples;
            r.extra["method"] = z.method;
            out.push_back(r);
        };
        for (auto route : routes) add(zeta_wallach(g, 1, spec, rng, route), {{"k", 1}, {"route", to_string(route)}});
        for (int k : {2, 3, 4}) add(zeta_wallach(g, k, spec, rng), {{"k", k}, {"route", "r1"}});
        for (double a : {1.5, 3.0}) add(normalized_zeta(g, a, spec, rng), {{"alpha", a}});
        return out;
    });
}

void suite_heat(Runner& run) {
    const auto spec = run.spec(1e-9, 40'000);
    for (auto t : {pd(1, 0, 1), pd(1, 0, 3), pd(1.0, 0.4, 2.0)})
        run.check("heat-mass", [&](Rng& rng) { return verify_heat_mass(4, t, spec, rng); });
    for (int i = 0; i < 5; ++i)
        run.check("heat-semigroup", [&](Rng& rng) {
            return verify_heat_semigroup(4, pd(0.6, 0.1, 0.9), pd(1.0, -0.2, 0.5), point(4, 2, 0.3 * i), spec, rng);
        });
    run.check("heat-fourier", [&](Rng& rng) { return verify_heat_fourier(pd(0.5, 0.1, 0.7), point(4, 2, 0.8), spec, rng); });
}

void suite_riesz(Runner& run) {
    const auto spec = run.spec(1e-8, 100'000);
    const auto f = heat_family(6, pd(1.0, 0.3, 0.8));
    for (double a : {1.5, 2.0, 2.5})
        for (double s : {0.0, 0.5})
            run.check("riesz-two-route", [&](Rng& rng) {
                Report r = verify_riesz_two_route(f, point(6, 2, s), a, spec, rng);
                r.pass = r.pass && r.extra.value("heat_rel_stderr", 1.0) <= 1e-3;
                return r;
            });
    run.check("riesz-heat-probe", [&](Rng& rng) { return verify_rgg(f, point(6, 2, 0.3), 2.0, pd(1, 0, 1), spec, rng); });
    const auto h = heat_family(6, pd(1, 0, 1));
    const auto sg = run.spec(1e-8, 50'000);
    run.check("riesz-semigroup",
              [&](Rng& rng) { return verify_riesz_semigroup(h, Mat::Zero(6, 2), 2.0, 2.0, sg, rng); });
    run.check("riesz-laplacian-inverse",
              [&](Rng&) { return verify_delta_inverts_riesz(f, point(6, 2, 0.4), 1, run.spec(1e-8)); });
    const auto wt = run.spec(1e-8, 200'000);
    run.check("riesz-weighted",
              [&](Rng& rng) { return verify_weighted_identity(gaussian(4, 2), 1, 5.0, wt, rng); });
}

void suite_radon(Runner& run) {
    const auto spec = run.spec(1e-8, 40'000);
    const auto f = bumpy(4);
    run.check("radon-mass", [&](Rng& rng) {
        std::vector<Report> out;
        for (int i = 0; i < 3; ++i) out.push_back(verify_radon_mass(f, haar_stiefel(rng, 4, 2), spec, rng));
        return out;
    });
    for (auto method : {RadonMethod::ClosedForm, RadonMethod::MonteCarlo})
        run.check("radon-evenness", [&](Rng& rng) {
            MatrixPlane pl(haar_stiefel(rng, 4, 2), point(2, 2, 0.4));
            Mat theta = haar_stiefel(rng, 2, 2).mat();
            return verify_radon_evenness(f, pl, theta, spec, rng, method);
        });
    const auto dual = run.spec(1e-8, 100'000);
    const auto g = GaussianMixture::shifted_gaussian(point(4, 2, 0.3)).to_test_function();
    for (double s : {0.5, 1.5})
        for (double shift : {0.0, 0.6})
            run.check("radon-duality", [&](Rng& rng) {
                auto phi = radon_function(
                    GaussianMixture::heat_kernel(4, pd(s, 0, s)).shifted(point(4, 2, shift)).to_test_function());
                Report r = verify_duality(g, phi, 1, dual, rng);
                r.params["phi_scale"] = s;
                r.params["phi_shift"] = shift;
                return r;
            });
    const auto h = heat_family(4, pd(1.0, 0.3, 0.8));
    run.check("radon-shift", [&](Rng& rng) {
        std::vector<Report> out;
        for (int i = 0; i < 3; ++i) {
            MatrixPlane pl(haar_stiefel(rng, 4, 3), point(3, 2, 0.2));
            out.push_back(verify_shift_equivariance(h, pl, gaussian_matrix(rng, 4, 2), spec, rng));
        }
        return out;
    });
    run.check("radon-affine", [&](Rng& rng) {
        MatrixPlane pl(haar_stiefel(rng, 4, 3), point(3, 2, 0.2));
        Mat gamma = haar_rotation(rng, 4).mat();
        Mat beta = haar_stiefel(rng, 2, 2).mat();
        return verify_affine_law(f, pl, gamma, beta, gaussian_matrix(rng, 4, 2), spec, rng);
    });
    run.check("radon-completion", [&](Rng& rng) {
        MatrixPlane pl(haar_stiefel(rng, 5, 2), point(2, 2, 0.3));
        return verify_completion_independence(bumpy(5), pl, spec, rng);
    });
}

void suite_fuglede(Runner& run) {
    const auto spec = run.spec(1e-8, 40'000);
    const auto h4 = heat_family(4, PosDefMatrix::identity(2));
    run.check("fuglede", [&](Rng& rng) { return fuglede_check(h4, Mat::Zero(4, 2), 1, spec, rng); });
    run.check("fuglede", [&](Rng& rng) { return fuglede_check(h4, point(4, 2, 0.5), 1, spec, rng); });
    const auto h6 = heat_family(6, PosDefMatrix::identity(2));
    run.check("fuglede", [&](Rng& rng) { return fuglede_check(h6, Mat::Zero(6, 2), 2, spec, rng); });
    run.check("fuglede", [&](Rng& rng) { return fuglede_check(h6, point(6, 2, 0.4), 2, spec, rng); });
    run.check("fuglede", [&](Rng& rng) {
        Mat x(3, 1);
        x << 0.2, -0.4, 0.1;
        return fuglede_check(heat_family(3, scalar_pd(0.7)), x, 1, spec, rng);
    });
}

void suite_inversion(Runner& run) {
    const auto spec = run.spec(1e-8, 40'000);
    run.check("inversion", [&](Rng& rng) {
        return verify_even_k_inversion(heat_family(6, PosDefMatrix::identity(2)), Mat::Zero(6, 2), 2, spec, rng);
    });
    run.check("inversion", [&](Rng& rng) {
        Mat x(3, 1);
        x << 0.1, 0.2, -0.1;
        return verify_even_k_inversion(heat_family(3, scalar_pd(0.5)), x, 2, spec, rng);
    });
}

using SuiteFn = void (*)(Runner&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r = {
        {"gamma", suite_gamma},         {"beta", suite_beta},
        {"bessel", suite_bessel},       {"appendix", suite_appendix},
        {"bernstein", suite_bernstein}, {"radial", suite_radial},
        {"zeta", suite_zeta},           {"functional-eq", suite_functional_eq},
        {"wallach", suite_wallach},     {"heat", suite_heat},
        {"riesz", suite_riesz},         {"radon", suite_radon},
        {"fuglede", suite_fuglede},     {"inversion", suite_inversion},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [id, fn] : registry()) v.push_back(id);
        return v;
    }();
    return ids;
}

SuiteReport run_suite(const std::string& id, const SuiteConfig& config) {
    validate(config);
    const auto& reg = registry();
    SuiteReport out;
    out.id = id;
    out.seed = config.seed;
    const auto t0 = std::chrono::steady_clock::now();
    bool found = false;
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (id != "all" && reg[i].first != id) continue;
        found = true;
        Runner run(config, i, out.reports);
        reg[i].second(run);
    }
    if (!found) throw Error(ErrorKind::UnknownSuite, "unknown suite '" + id + "'");
    for (const auto& r : out.reports) (r.pass ? out.passed : out.failed)++;
    if (config.timing)
        out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

json to_json(const SuiteReport& s) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["version"] = s.version;
    j["suite"] = s.id;
    j["seed"] = s.seed;
    j["passed"] = s.passed;
    j["failed"] = s.failed;
    j["wall_ms"] = s.wall_ms;
    j["reports"] = json::array();
    for (const auto& r : s.reports) j["reports"].push_back(to_json(r));
    return j;
}

void validate(const SuiteConfig& c) {
    if (c.workers < 1) throw Error(ErrorKind::ConfigError, "workers must be at least 1");
    if (c.rel_tol && !(*c.rel_tol > 0)) throw Error(ErrorKind::ConfigError, "rel_tol must be positive");
    if (c.abs_tol && !(*c.abs_tol >= 0)) throw Error(ErrorKind::ConfigError, "abs_tol must be nonnegative");
    if (c.samples && *c.samples < 2) throw Error(ErrorKind::ConfigError, "samples must be at least 2");
}

SuiteConfig config_from_json(const json& j, SuiteConfig base) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
    auto count = [](const json& v, const std::string& k) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw Error(ErrorKind::ConfigError, k + " must be a nonnegative integer");
        return v.get<std::uint64_t>();
    };
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            const auto& v = it.value();
            if (k == "seed") {
                base.seed = count(v, k);
            } else if (k == "workers") {
                base.workers = unsigned(count(v, k));
            } else if (k == "samples") {
                base.samples = count(v, k);
            } else if (k == "rel_tol") {
                base.rel_tol = v.get<double>();
            } else if (k == "abs_tol") {
                base.abs_tol = v.get<double>();
            } else if (k == "timing") {
                base.timing = v.get<bool>();
            } else if (k == "suites") {
                base.suites = v.get<std::vector<std::string>>();
            } else {
                throw Error(ErrorKind::ConfigError, "unknown config key '" + k + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("bad config value: ") + e.what());
    }
    validate(base);
    return base;
}

}  // namespace matgeom
