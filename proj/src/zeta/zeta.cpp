#include "matgeom/zeta.hpp"

#include <cmath>
#include <numbers>

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative floor for comparisons where both sides are exact up to roundoff.
constexpr double kRoundoff = 1e-12;
// Each K-Bessel sample costs a nested quadrature; the right side of the
// regularized identity draws this fraction of the sample budget.
constexpr std::size_t kBesselSampleDivisor = 16;
constexpr std::size_t kMinBesselSamples = 1000;

bool integer_alpha(Complex alpha, int& k) {
    if (alpha.imag() != 0.0) return false;
    double r = std::round(alpha.real());
    if (std::abs(alpha.real() - r) > kPoleTol) return false;
    k = int(r);
    return true;
}

void check_function(const TestFunction& f) {
    if (!f.f || f.n < f.m || f.m < 1) throw Error(ErrorKind::InvalidArgument, "zeta: bad test function");
    if (!(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "zeta: test function lacks decay metadata");
}

// Gaussian draw with density (c/pi)^{rows cols/2} exp(-c |w|^2); returns c |w|^2.
double gaussian_draw(Rng& rng, int rows, int cols, double c, Mat& w) {
    w = gaussian_matrix(rng, rows, cols) * std::sqrt(0.5 / c);
    return c * w.squaredNorm();
}

double gaussian_norm(int dim, double c) { return std::pow(kPi / c, 0.5 * dim); }

Complex gamma_ratio_closed_form(const TestFunction& f, Complex alpha) {
    if (!f.mixture || !f.mixture->radial())
        throw Error(ErrorKind::InvalidArgument, "closed form needs a radial Gaussian mixture");
    const double cnm = named_const(NamedConst::CNM, {f.n, f.m, 0, 0.0}).real();
    Complex s = 0.0;
    for (const auto& c : f.mixture->components()) {
        double ld = std::log(c.q.determinant());
        s += c.amplitude * cnm * std::exp(-0.5 * alpha * ld);
    }
    return s;
}

ComplexEstimate zeta_polar_mc(const std::function<Complex(const Mat&)>& g, int n, int m,
                              Complex alpha, double rate, const QuadratureSpec& spec, Rng& rng) {
    ZetaProposal prop(n, m, alpha.real(), rate);
    const double im = alpha.imag();
    auto sampler = [&](Rng& gen) -> Complex {
        Mat y;
        double ly = prop.sample(gen, y);
        Complex w = g(y) * std::exp(rate * y.squaredNorm());
        if (im != 0.0) w *= std::polar(1.0, im * ly);
        return w;
    };
    return scale(mc_mean<Complex>(rng, spec.samples, spec.workers, sampler), prop.norm());
}

Report make_report(const std::string& id, const TestFunction& f, double alpha) {
    Report r;
    r.id = id;
    r.params = {{"n", f.n}, {"m", f.m}, {"alpha", alpha}};
    r.extra["alpha"] = json::array({alpha, 0.0});
    return r;
}

}  // namespace

ZetaProposal::ZetaProposal(int n, int p, double a, double c) : n_(n), p_(p), a_(a), c_(c) {
    if (!(n >= p && p >= 1)) throw Error(ErrorKind::InvalidArgument, "zeta proposal needs n >= p >= 1");
    if (!(a > p - 1)) throw Error(ErrorKind::OutOfRegularRegion, "zeta proposal needs a > p - 1");
    if (!(c > 0)) throw Error(ErrorKind::InvalidArgument, "zeta proposal needs a positive rate");
    norm_ = std::pow(2.0, -p) * stiefel_volume(n, p) * siegel_gamma(p, 0.5 * a).real() *
            std::pow(c, -0.5 * p * a);
}

double ZetaProposal::sample(Rng& rng, Mat& y) const {
    SmallMat t = cone_gamma_factor(rng, p_, 0.5 * a_) / std::sqrt(c_);
    y = haar_stiefel(rng, n_, p_).mat() * t;
    return t.diagonal().array().log().sum();
}

std::string to_string(ZetaRoute r) {
    switch (r) {
        case ZetaRoute::RegularQuadrature: return "regular-quadrature";
        case ZetaRoute::WallachMeasure: return "wallach-measure";
        case ZetaRoute::GaussianClosedForm: return "gaussian-closed-form";
    }
    return "?";
}

std::string to_string(WallachRoute r) {
    switch (r) {
        case WallachRoute::R1: return "r1";
        case WallachRoute::Znk: return "znk";
        case WallachRoute::R2: return "r2";
        case WallachRoute::R3: return "r3";
    }
    return "?";
}

WallachRoute wallach_route_from_string(const std::string& s) {
    if (s == "r1") return WallachRoute::R1;
    if (s == "znk") return WallachRoute::Znk;
    if (s == "r2") return WallachRoute::R2;
    if (s == "r3") return WallachRoute::R3;
    throw Error(ErrorKind::InvalidArgument, "unknown Wallach route " + s);
}

ZetaResult zeta_integral(const TestFunction& f, Complex alpha, const QuadratureSpec& spec, Rng& rng,
                         ZetaMethod method) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (!(alpha.real() > m - 1))
        throw Error(ErrorKind::OutOfRegularRegion, "zeta integral needs Re alpha > m - 1");
    ZetaResult res;
    res.alpha = alpha;

    if (method == ZetaMethod::ClosedForm) {
        res.value = exact(gamma_ratio_closed_form(f, alpha) * siegel_gamma(m, 0.5 * alpha).value());
        res.route = ZetaRoute::GaussianClosedForm;
        res.method = "closed-form";
        return res;
    }
    const bool quad = method == ZetaMethod::Quadrature || (method == ZetaMethod::Auto && f.is_radial());
    res.route = ZetaRoute::RegularQuadrature;
    if (quad) {
        if (!f.is_radial()) throw Error(ErrorKind::InvalidArgument, "quadrature route needs a radial function");
        const double d = 0.5 * (m + 1);
        ComplexRadialFn g;
        g.f0 = [&](const PosDefMatrix& r) -> Complex {
            return f.radial_profile(r) * std::exp((0.5 * alpha - d) * std::log(r.det()));
        };
        g.meta.decay_rate = f.decay_rate;
        g.meta.det_power = 0.5 * alpha.real();
        auto est = integrate_cone<Complex>(g, m, spec, &rng);
        res.value = scale(est, std::pow(2.0, -m) * stiefel_volume(n, m));
        res.method = "radial-cone";
        return res;
    }
    res.value = zeta_polar_mc([&](const Mat& y) -> Complex { return f.f(y); }, n, m, alpha,
                              f.decay_rate, spec, rng);
    res.method = "polar-mc";
    return res;
}

ZetaResult normalized_zeta(const TestFunction& f, Complex alpha, const QuadratureSpec& spec, Rng& rng,
                           ZetaMethod method) {
    check_function(f);
    const int n = f.n, m = f.m;
    if (method == ZetaMethod::ClosedForm) {
        ZetaResult res;
        res.alpha = alpha;
        res.value = exact(gamma_ratio_closed_form(f, alpha));
        res.route = ZetaRoute::GaussianClosedForm;
        res.method = "closed-form";
        return res;
    }
    if (alpha.real() > m - 1) {
        ZetaResult res = zeta_integral(f, alpha, spec, rng, method);
        Complex g = siegel_gamma(m, 0.5 * alpha).value();
        res.value = scale(res.value, 1.0 / g);
        return res;
    }
    int k = -1;
    if (!integer_alpha(alpha, k) || k < 0)
        throw Error(ErrorKind::UnsupportedAlpha, "normalized zeta needs Re alpha > m - 1 or an integer Wallach point");
    if (k == 0) {
        ZetaResult res;
        res.alpha = alpha;
        double c = std::pow(kPi, 0.5 * n * m) / siegel_gamma(m, 0.5 * n).real();
        res.value = exact(Complex(c * f.f(Mat::Zero(n, m))));
        res.route = ZetaRoute::WallachMeasure;
        res.method = "zn0";
        return res;
    }
    return zeta_wallach(f, k, spec, rng, WallachRoute::R1);
}

ZetaResult zeta_wallach(const TestFunction& f, int k, const QuadratureSpec& spec, Rng& rng,
                        WallachRoute route) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "Wallach point needs 1 <= k <= n");
    if ((route == WallachRoute::R2 || route == WallachRoute::R3) && k >= m)
        throw Error(ErrorKind::ParameterOutOfRange, "routes r2 and r3 need k < m");
    const double c = f.decay_rate;
    ZetaResult res;
    res.alpha = double(k);
    res.route = ZetaRoute::WallachMeasure;
    res.method = to_string(route);
    MCEstimate est;
    double pre = 1.0;

    switch (route) {
        case WallachRoute::R1: {
            auto sampler = [&](Rng& g) {
                Mat v = haar_stiefel(g, n, k).mat();
                Mat w;
                double e = gaussian_draw(g, k, m, c, w);
                return f.f(v * w) * std::exp(e);
            };
            est = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
            pre = named_const(NamedConst::C1, {n, m, k, 0.0}).real() * stiefel_volume(n, k) *
                  gaussian_norm(k * m, c);
            break;
        }
        case WallachRoute::Znk: {
            auto sampler = [&](Rng& g) {
                Mat gam = haar_rotation(g, n).mat();
                Mat w;
                double e = gaussian_draw(g, k, m, c, w);
                return f.f(gam.leftCols(k) * w) * std::exp(e);
            };
            est = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
            pre = std::pow(kPi, 0.5 * (n - k) * m) / siegel_gamma(m, 0.5 * n).real() *
                  gaussian_norm(k * m, c);
            break;
        }
        case WallachRoute::R3: {
            ZetaProposal prop(n, k, double(m), c);
            auto sampler = [&](Rng& g) {
                Mat u = haar_stiefel(g, m, k).mat();
                Mat y;
                prop.sample(g, y);
                return f.f(y * u.transpose()) * std::exp(c * y.squaredNorm());
            };
            est = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
            pre = named_const(NamedConst::C1, {n, m, k, 0.0}).real() * stiefel_volume(m, k) * prop.norm();
            break;
        }
        case WallachRoute::R2: {
            // z = (y'y)^{-1/2} w absorbs |y|^{-(m-k)}; then y z = v w with v = y (y'y)^{-1/2}.
            ZetaProposal prop(n, k, double(k), c);
            auto sampler = [&](Rng& g) {
                Mat y;
                prop.sample(g, y);
                Mat v = y * sym_pow(SmallMat(y.transpose() * y), -0.5);
                Mat w;
                double e = gaussian_draw(g, k, m - k, c, w);
                Mat x(n, m);
                x << y, v * w;
                return f.f(x) * std::exp(c * y.squaredNorm() + e);
            };
            est = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
            pre = named_const(NamedConst::C2, {n, m, k, 0.0}).real() * prop.norm() *
                  gaussian_norm(k * (m - k), c);
            break;
        }
    }
    MCEstimate s = scale(est, pre);
    res.value = {Complex(s.value), s.std_error, s.n_samples};
    return res;
}

Report verify_functional_equation(const TestFunction& f, double alpha, const QuadratureSpec& spec,
                                  Rng& rng) {
    check_function(f);
    const int n = f.n, m = f.m;
    if (!f.fourier || !(f.fourier_decay_rate > 0))
        throw Error(ErrorKind::MissingFourierForm, "functional equation needs a closed-form Fourier transform");
    if (!(alpha > m - 1 && alpha < n - m + 1))
        throw Error(ErrorKind::StripViolation, "functional equation needs m - 1 < alpha < n - m + 1");
    Report r = make_report("functional-eq", f, alpha);
    ZetaResult left = normalized_zeta(f, alpha, spec, rng);
    ComplexEstimate z = zeta_polar_mc(f.fourier, n, m, double(n) - alpha, f.fourier_decay_rate, spec, rng);
    double pre = std::pow(kPi, -0.5 * n * m) * std::pow(2.0, m * (alpha - n)) /
                 siegel_gamma(m, 0.5 * (n - alpha)).real();
    ComplexEstimate right = scale(z, pre);
    r.lhs = left.value.value;
    r.rhs = right.value;
    r.std_error = combined_error(left.value.std_error, right.std_error);
    r.n_samples = left.value.n_samples + right.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error,
                             std::max(spec.abs_tol, kRoundoff * std::abs(r.rhs)));
    r.extra["route"] = left.method;
    return r;
}

Report verify_eq_3_5(const TestFunction& f, double alpha, double eps, const QuadratureSpec& spec,
                     Rng& rng) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (!f.fourier || !(f.fourier_decay_rate > 0))
        throw Error(ErrorKind::MissingFourierForm, "the regularized identity needs a closed-form Fourier transform");
    if (!(alpha > m - 1 && alpha < n - m + 1))
        throw Error(ErrorKind::StripViolation, "the regularized identity needs m - 1 < alpha < n - m + 1");
    if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    Report r = make_report("eq-3.5", f, alpha);
    r.params["eps"] = eps;

    const double cf = f.fourier_decay_rate;
    auto lhs_sampler = [&](Rng& g) -> Complex {
        Mat y;
        double e = gaussian_draw(g, n, m, cf, y);
        SmallMat a = SmallMat(y.transpose() * y);
        a.diagonal().array() += eps;
        return f.fourier(y) * std::exp(e - 0.5 * alpha * std::log(a.determinant()));
    };
    ComplexEstimate lhs = scale(mc_mean<Complex>(rng, spec.samples, spec.workers, lhs_sampler),
                                gaussian_norm(n * m, cf));

    // x from the polar proposal of order alpha: eps^{m(n-alpha)/2} K(eps x'x/4) |x|^{n-alpha}
    // stays bounded, so the weight has finite variance.
    const Complex nu = 0.5 * (alpha - n);
    ZetaProposal prop(n, m, alpha, f.decay_rate);
    QuadratureSpec kspec = spec;
    kspec.rel_tol = 1e-7;
    kspec.workers = 1;
    QuadratureSpec rspec = spec;
    rspec.samples = std::max(kMinBesselSamples, spec.samples / kBesselSampleDivisor);
    auto rhs_sampler = [&](Rng& g) -> double {
        Mat x;
        double lx = prop.sample(g, x);
        PosDefMatrix arg(SmallMat(0.25 * eps * (x.transpose() * x)));
        double kb = k_bessel(m, nu, arg, kspec, KForm::K1, &g).value.real();
        return f.f(x) * kb * std::exp(f.decay_rate * x.squaredNorm() + (n - alpha) * lx);
    };
    MCEstimate inner = mc_mean<double>(rng, rspec.samples, rspec.workers, rhs_sampler);
    double pre = std::pow(kPi, 0.5 * n * m) * std::pow(eps, 0.5 * m * (n - alpha)) /
                 siegel_gamma(m, 0.5 * alpha).real() * prop.norm();
    MCEstimate rhs = scale(inner, pre);

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    r.extra["route"] = "gaussian-mc/polar-mc";
    return r;
}

}  // namespace matgeom
