#include "matgeom/riesz.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRoundoff = 1e-12;
// An exact estimate against an adaptive quadrature agrees to a few rel_tol.
constexpr double kQuadratureFloor = 10.0;
// Outer-sample fraction for the (rgg) probe; each sample runs a cone quadrature.
constexpr std::size_t kRggSampleDivisor = 500;
constexpr std::size_t kMinRggSamples = 200;
constexpr int kRggLevel = 3;
// Fixed quadrature level and stencil for Delta applied to I^{2k} f.
constexpr int kDeltaLevel = 2;
constexpr double kDeltaStep = 0.1;
constexpr int kDeltaRichardson = 2;
// Nested fixed levels for the semigroup check; each is near 1e-6 alone.
constexpr int kSemigroupInnerLevel = 2;
constexpr int kSemigroupOuterLevel = 1;

// a + b from the factors: QR of the stacked triangles keeps a tiny
// eigenvalue of b that a plain sum would round away.
PosDefMatrix pd_sum(const PosDefMatrix& a, const PosDefMatrix& b) {
    const int m = a.size();
    SmallMat stacked(2 * m, m);
    stacked << a.factor(), b.factor();
    Eigen::HouseholderQR<SmallMat> qr(stacked);
    SmallMat r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i)
        if (r(i, i) < 0) r.row(i) *= -1.0;
    return PosDefMatrix::from_factor_unchecked(r);
}

// W_t f(x) = W_{g'tg} f(x) for g in O(m): every component is centred at x
// with a scalar q.
bool conjugation_invariant(const TestFunction& f, const Mat& x) {
    if (!f.mixture) return false;
    for (const auto& c : f.mixture->components()) {
        if ((c.x0 - x).norm() != 0.0) return false;
        const SmallMat& q = c.q;
        if ((q - q(0, 0) * SmallMat::Identity(q.rows(), q.cols())).norm() > 1e-14 * q(0, 0)) return false;
    }
    return true;
}

void check_function(const TestFunction& f) {
    if (!f.f || f.n < f.m || f.m < 1) throw Error(ErrorKind::InvalidArgument, "riesz: bad test function");
}

void check_point(const TestFunction& f, const Mat& x) {
    if (x.rows() != f.n || x.cols() != f.m) throw Error(ErrorKind::InvalidArgument, "riesz: point has the wrong shape");
}

void check_strip(int n, int m, double alpha) {
    if (!(alpha > m - 1 && alpha < n - m + 1))
        throw Error(ErrorKind::StripViolation, "needs m - 1 < alpha < n - m + 1");
}

void check_heat(const TestFunction& f) {
    if (!f.heat) throw Error(ErrorKind::InvalidArgument, "heat route needs a closed-form heat smoothing of f");
}

// rows of the returned z are N(0, 2t): z has density h_t
Mat heat_draw(Rng& rng, int n, const SmallMat& root2t) {
    return gaussian_matrix(rng, n, int(root2t.rows())) * root2t;
}

// |t|^{alpha/2 - d} (W_t f)(x) at a cone node, times the coordinate Jacobian.
template <class Heat>
auto cone_heat_integrand(int m, double alpha, Heat&& heat) {
    const double d = 0.5 * (m + 1);
    return [m, alpha, d, heat](const double* c) -> double {
        ConePoint p;
        cone_point(m, c, p);
        if (!(std::abs(p.log_det) < 700.0) || !p.r.allFinite()) return 0.0;
        double v = heat(PosDefMatrix::from_factor_unchecked(p.t));
        if (v == 0.0) return 0.0;
        double half = std::exp(0.5 * ((0.5 * alpha - d) * p.log_det + p.log_jac));
        return v * half * half;
    };
}

Report base_report(const std::string& id, int n, int m) {
    Report r;
    r.id = id;
    r.params = {{"n", n}, {"m", m}};
    return r;
}

std::string digest(const Mat& x) {
    // short, stable fingerprint of the evaluation point
    std::uint64_t h = 1469598103934665603ull;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double v = x.data()[i];
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        h = (h ^ b) * 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

double heat_kernel(const Mat& x, const PosDefMatrix& t) {
    const int n = int(x.rows()), m = int(x.cols());
    if (t.size() != m) throw Error(ErrorKind::InvalidArgument, "heat_kernel: t must be m x m");
    SmallMat ti = t.mat().llt().solve(SmallMat::Identity(m, m));
    double q = (x * ti).cwiseProduct(x).sum();
    return std::pow(4 * kPi, -0.5 * n * m) * std::pow(t.det(), -0.5 * n) * std::exp(-0.25 * q);
}

TestFunction heat_family(int n, const PosDefMatrix& tau0, double amplitude) {
    return GaussianMixture::heat_kernel(n, tau0, amplitude).to_test_function();
}

MCEstimate gauss_weierstrass(const TestFunction& f, const Mat& x, const PosDefMatrix& t,
                             const QuadratureSpec& spec, Rng& rng, bool closed_form) {
    check_function(f);
    check_point(f, x);
    if (t.size() != f.m) throw Error(ErrorKind::InvalidArgument, "t must be m x m");
    if (closed_form && f.heat) return exact(f.heat(x, t));
    spec.validate();
    const SmallMat root = sym_sqrt(SmallMat(2.0 * t.mat()));
    auto sampler = [&](Rng& g) { return f.f(x - heat_draw(g, f.n, root)); };
    return mc_mean<double>(rng, spec.samples, spec.workers, sampler);
}

MCEstimate gg_fractional(const RadialFn& g, const std::optional<PosDefMatrix>& t, double lambda, int m,
                         const QuadratureSpec& spec, Rng* rng) {
    const double d = 0.5 * (m + 1);
    if (!(lambda > d - 1)) throw Error(ErrorKind::ParameterOutOfRange, "fractional integral needs lambda > d - 1");
    if (t && t->size() != m) throw Error(ErrorKind::InvalidArgument, "t must be m x m");
    RadialFn h;
    h.meta = g.meta;
    if (t) {
        const PosDefMatrix base = *t;
        h.f0 = [&, base](const PosDefMatrix& u) {
            return g.f0(pd_sum(base, u)) * std::exp((lambda - d) * std::log(u.det()));
        };
        h.meta.det_power = lambda;
    } else {
        h.f0 = [&](const PosDefMatrix& u) { return g.f0(u) * std::exp((lambda - d) * std::log(u.det())); };
        h.meta.det_power = std::isnan(g.meta.det_power) ? lambda : lambda + g.meta.det_power - d;
    }
    return scale(integrate_cone(h, m, spec, rng), 1.0 / siegel_gamma(m, lambda).real());
}

MCEstimate riesz_direct(const TestFunction& f, const Mat& x, double alpha, const QuadratureSpec& spec,
                        Rng& rng) {
    check_function(f);
    check_point(f, x);
    spec.validate();
    const int n = f.n, m = f.m;
    if (!(alpha > m - 1)) throw Error(ErrorKind::OutOfRegularRegion, "riesz_direct needs alpha > m - 1");
    if (!(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "riesz_direct needs decay metadata");
    GammaValue gam = riesz_const(n, m, alpha);
    if (gam.is_pole()) throw Error(ErrorKind::Pole, "gamma_{n,m}(alpha) has a pole");
    ZetaProposal prop(n, m, alpha, f.decay_rate);
    const double c = f.decay_rate;
    auto sampler = [&](Rng& g) {
        Mat y;
        prop.sample(g, y);
        return f.f(x - y) * std::exp(c * y.squaredNorm());
    };
    return scale(mc_mean<double>(rng, spec.samples, spec.workers, sampler), prop.norm() / gam.real());
}

MCEstimate riesz_heat(const TestFunction& f, const Mat& x, double alpha, const QuadratureSpec& spec) {
    check_function(f);
    check_point(f, x);
    check_strip(f.n, f.m, alpha);
    check_heat(f);
    spec.validate();
    const int m = f.m;
    if (m > 3) throw Error(ErrorKind::InvalidArgument, "riesz_heat supports m <= 3");
    auto fn = cone_heat_integrand(m, alpha, [&](const PosDefMatrix& t) { return f.heat(x, t); });
    auto axes = cone_axes(m);
    auto est = quad::integrate<double>(axes, fn, detail::quad_options(spec));
    return scale(est, 1.0 / siegel_gamma(m, 0.5 * alpha).real());
}

MCEstimate riesz_heat_fixed(const TestFunction& f, const Mat& x, double alpha, int level) {
    check_function(f);
    check_point(f, x);
    check_strip(f.n, f.m, alpha);
    check_heat(f);
    if (level < 1 || level > quad::kMaxLevel) throw Error(ErrorKind::InvalidArgument, "quadrature level out of range");
    const int m = f.m;
    if (m > 3) throw Error(ErrorKind::InvalidArgument, "riesz_heat supports m <= 3");
    auto fn = cone_heat_integrand(m, alpha, [&](const PosDefMatrix& t) { return f.heat(x, t); });
    auto axes = cone_axes(m);
    auto est = quad::integrate_fixed<double>(axes, level, fn);
    return scale(est, 1.0 / siegel_gamma(m, 0.5 * alpha).real());
}

MCEstimate zeta_convolution(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec,
                            Rng& rng) {
    check_function(f);
    check_point(f, x);
    spec.validate();
    const int n = f.n, m = f.m;
    if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "zeta convolution needs 1 <= k <= n");
    if (!(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "zeta convolution needs decay metadata");
    const double c = f.decay_rate;
    const double sd = std::sqrt(0.5 / c);
    auto sampler = [&](Rng& g) {
        Mat v = haar_stiefel(g, n, k).mat();
        Mat w = gaussian_matrix(g, k, m) * sd;
        return f.f(x - v * w) * std::exp(c * w.squaredNorm());
    };
    double pre = named_const(NamedConst::C1, {n, m, k, 0.0}).real() * stiefel_volume(n, k) *
                 std::pow(kPi / c, 0.5 * k * m);
    return scale(mc_mean<double>(rng, spec.samples, spec.workers, sampler), pre);
}

// ------------------------------------------------------------------ reports

Report verify_heat_mass(int n, const PosDefMatrix& t, const QuadratureSpec& spec, Rng& rng, double rel_tol) {
    const int m = t.size();
    Report r = base_report("heat-mass", n, m);
    r.params["t"] = matrix_to_json(t.mat());
    auto z = zeta_integral(heat_family(n, t), double(n), spec, rng);
    r.lhs = z.value.value;
    r.std_error = z.value.std_error;
    r.n_samples = z.value.n_samples;
    r.rhs = 1.0;
    r.pass = z.method == "radial-cone" ? relative_pass(r.lhs, r.rhs, rel_tol)
                                       : stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    r.extra["route"] = z.method;
    return r;
}

Report verify_heat_semigroup(int n, const PosDefMatrix& t, const PosDefMatrix& tau, const Mat& x,
                             const QuadratureSpec& spec, Rng& rng) {
    const int m = t.size();
    Report r = base_report("heat-semigroup", n, m);
    r.params["t"] = matrix_to_json(t.mat());
    r.params["tau"] = matrix_to_json(tau.mat());
    r.extra["x_digest"] = digest(x);
    auto e = gauss_weierstrass(heat_family(n, tau), x, t, spec, rng, false);
    r.lhs = e.value;
    r.std_error = e.std_error;
    r.n_samples = e.n_samples;
    r.rhs = heat_kernel(x, PosDefMatrix(SmallMat(t.mat() + tau.mat())));
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    return r;
}

Report verify_heat_fourier(const PosDefMatrix& t, const Mat& y, const QuadratureSpec& spec, Rng& rng) {
    spec.validate();
    const int n = int(y.rows()), m = int(y.cols());
    if (t.size() != m) throw Error(ErrorKind::InvalidArgument, "t must be m x m");
    Report r = base_report("heat-fourier", n, m);
    r.params["t"] = matrix_to_json(t.mat());
    r.extra["x_digest"] = digest(y);
    const SmallMat root = sym_sqrt(SmallMat(2.0 * t.mat()));
    auto sampler = [&](Rng& g) -> Complex {
        Mat x = heat_draw(g, n, root);
        return std::polar(1.0, y.cwiseProduct(x).sum());
    };
    auto e = mc_mean<Complex>(rng, spec.samples, spec.workers, sampler);
    r.lhs = e.value;
    r.std_error = e.std_error;
    r.n_samples = e.n_samples;
    r.rhs = std::exp(-(t.mat() * (y.transpose() * y)).trace());
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    return r;
}

Report verify_riesz_two_route(const TestFunction& f, const Mat& x, double alpha, const QuadratureSpec& spec,
                              Rng& rng) {
    Report r = base_report("riesz-two-route", f.n, f.m);
    r.params["alpha"] = alpha;
    r.extra["x_digest"] = digest(x);
    auto d = riesz_direct(f, x, alpha, spec, rng);
    auto h = riesz_heat(f, x, alpha, spec);
    r.lhs = d.value;
    r.rhs = h.value;
    r.std_error = combined_error(d.std_error, h.std_error);
    r.n_samples = d.n_samples + h.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    r.extra["heat_rel_stderr"] = h.std_error / std::abs(h.value);
    return r;
}

Report verify_rgg(const TestFunction& f, const Mat& x, double alpha, const PosDefMatrix& t,
                  const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    check_point(f, x);
    check_strip(f.n, f.m, alpha);
    check_heat(f);
    const int n = f.n, m = f.m;
    Report r = base_report("riesz-rgg", n, m);
    r.params["alpha"] = alpha;
    r.params["t"] = matrix_to_json(t.mat());
    r.extra["x_digest"] = digest(x);

    // W_t[I^alpha f](x) as an average of I^alpha f(x - z), z ~ h_t
    const SmallMat root = sym_sqrt(SmallMat(2.0 * t.mat()));
    auto sampler = [&](Rng& g) { return riesz_heat_fixed(f, x - heat_draw(g, n, root), alpha, kRggLevel).value; };
    const std::size_t outer = std::max(kMinRggSamples, spec.samples / kRggSampleDivisor);
    auto lhs = mc_mean<double>(rng, outer, spec.workers, sampler);

    RadialFn g;
    g.f0 = [&](const PosDefMatrix& tau) { return f.heat(x, tau); };
    g.meta.exp_decay = false;
    g.meta.power_decay = 0.5 * m * n;
    auto rhs = gg_fractional(g, t, 0.5 * alpha, m, spec, &rng);

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    return r;
}

Report verify_riesz_semigroup(const TestFunction& f, const Mat& x, double alpha, double beta,
                              const QuadratureSpec& spec, Rng& rng, double rel_tol) {
    check_function(f);
    check_point(f, x);
    check_heat(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (!(alpha > m - 1 && beta > m - 1 && alpha + beta < n - m + 1))
        throw Error(ErrorKind::StripViolation, "semigroup needs alpha, beta > m - 1 and alpha + beta < n - m + 1");
    if (m > 2) throw Error(ErrorKind::InvalidArgument, "semigroup check supports m <= 2");
    Report r = base_report("riesz-semigroup", n, m);
    r.params["alpha"] = alpha;
    r.params["beta"] = beta;
    r.extra["x_digest"] = digest(x);

    // I^alpha[I^beta f](x): W_t commutes with I^beta, so the inner potential
    // is taken of W_t f, whose heat smoothing is W_{t+s} f. The inner runs at
    // a fixed level so the outer integrand is smooth in t.
    auto axes = cone_axes(m);
    const double gb = siegel_gamma(m, 0.5 * beta).real();
    // s = r' u r with r'r = t + I puts the inner on the scale of t.
    const PosDefMatrix eye = PosDefMatrix::identity(m);
    auto inner = [&](const PosDefMatrix& t) {
        const PosDefMatrix c = pd_sum(t, eye);
        auto fn = cone_heat_integrand(m, beta, [&](const PosDefMatrix& u) {
            SmallMat w = u.factor() * c.factor();
            return f.heat(x, pd_sum(t, PosDefMatrix::from_factor_unchecked(w)));
        });
        std::size_t evals = 0;
        double v = quad::sum_at_level<double>(axes, kSemigroupInnerLevel, fn, evals, 1e-17);
        return std::pow(c.det(), 0.5 * beta) * v / gb;
    };
    MCEstimate lhs;
    if (m == 2 && conjugation_invariant(f, x)) {
        // the inner is a function of the eigenvalues of t:
        // dt = pi (l1 - l2) dl1 dl2 over l1 > l2 > 0; l2 = p, l1 = p + q
        const std::array<quad::Axis, 2> ev = {quad::Axis::HalfLine, quad::Axis::HalfLine};
        const double e = 0.5 * alpha - 1.5;
        auto fn = [&](const double* c) {
            const double p = c[0], q = c[1];
            if (!(p > 0 && q > 0)) return 0.0;
            SmallMat t = SmallMat::Zero(2, 2);
            t(0, 0) = p + q;
            t(1, 1) = p;
            return kPi * q * std::pow(p * (p + q), e) * inner(PosDefMatrix(t));
        };
        lhs = quad::integrate_fixed<double>(ev, kSemigroupOuterLevel, fn);
        r.extra["outer"] = "eigenvalues";
    } else {
        auto outer = cone_heat_integrand(m, alpha, inner);
        lhs = quad::integrate_fixed<double>(axes, kSemigroupOuterLevel, outer);
        r.extra["outer"] = "cone";
    }
    lhs = scale(lhs, 1.0 / siegel_gamma(m, 0.5 * alpha).real());
    auto rhs = riesz_heat(f, x, alpha + beta, spec);
    auto third = riesz_direct(f, x, alpha + beta, spec, rng);

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples + third.n_samples;
    const bool direct_ok =
        stochastic_pass(third.value, rhs.value, combined_error(third.std_error, rhs.std_error), spec.abs_tol) ||
        relative_pass(third.value, rhs.value, kQuadratureFloor * std::max(spec.rel_tol, kRoundoff));
    r.pass = relative_pass(r.lhs, r.rhs, rel_tol) && direct_ok;
    r.extra["rel_error"] = relative_error(r.lhs, r.rhs);
    r.extra["direct"] = {{"value", third.value}, {"stderr", third.std_error}, {"pass", direct_ok}};
    return r;
}

Report verify_delta_inverts_riesz(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec,
                                  double rel_tol) {
    check_function(f);
    check_point(f, x);
    const int n = f.n, m = f.m;
    Report r = base_report("delta-inverts-riesz", n, m);
    r.params["k"] = k;
    r.extra["x_digest"] = digest(x);
    r.rhs = f.f(x);
    if (k == 0) {
        r.lhs = r.rhs;
        r.pass = true;
        return r;
    }
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be nonnegative");
    check_strip(n, m, 2.0 * k);
    check_heat(f);
    spec.validate();
    TestFunction pot;
    pot.n = n;
    pot.m = m;
    pot.f = [&](const Mat& y) { return riesz_heat_fixed(f, y, 2.0 * k, kDeltaLevel).value; };
    DiffSpec ds;
    ds.base_step = kDeltaStep;
    ds.richardson_levels = kDeltaRichardson;
    double sign = (m * k) % 2 == 0 ? 1.0 : -1.0;
    r.lhs = sign * cayley_laplace_power(pot, RectMatrix(x), k, ds);
    r.pass = relative_pass(r.lhs, r.rhs, rel_tol);
    r.extra["rel_error"] = relative_error(r.lhs, r.rhs);
    return r;
}

Report verify_weighted_identity(const TestFunction& f, int k, double lambda, const QuadratureSpec& spec,
                                Rng& rng) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "weighted identity needs 1 <= k <= n");
    if (!(lambda > k + m - 1)) throw Error(ErrorKind::ParameterOutOfRange, "weighted identity needs lambda > k + m - 1");
    if (!f.is_radial()) throw Error(ErrorKind::InvalidArgument, "weighted identity needs a radial function");
    if (f.mixture)
        for (const auto& c : f.mixture->components())
            if (c.amplitude < 0) throw Error(ErrorKind::InvalidArgument, "weighted identity needs f >= 0");
    if (!(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "weighted identity needs decay metadata");
    Report r = base_report("weighted-identity", n, m);
    r.params["k"] = k;
    r.params["lambda"] = lambda;

    const double c = f.decay_rate;
    const double sd = std::sqrt(0.5 / c);
    const double gauss_norm = std::pow(kPi / c, 0.5 * n * m);
    // Left side jointly over (v, w, z) with x = z + v w; w has polynomial
    // tails in the integrand, so it is drawn from a Student-t law.
    const StudentT tlaw(k * m, std::max(0.5, lambda - k * m));
    auto lsampler = [&](Rng& g) {
        Mat v = haar_stiefel(g, n, k).mat();
        Mat w(k, m);
        double lt = tlaw.sample(g, w.data());
        Mat z = gaussian_matrix(g, n, m) * sd;
        Mat xx = z + v * w;
        SmallMat a = SmallMat(xx.transpose() * xx);
        a.diagonal().array() += 1.0;
        return f.f(z) * std::exp(c * z.squaredNorm() - lt - 0.5 * lambda * std::log(a.determinant()));
    };
    auto lhs = scale(mc_mean<double>(rng, spec.samples, spec.workers, lsampler),
                     named_const(NamedConst::C1, {n, m, k, 0.0}).real() * stiefel_volume(n, k) * gauss_norm);

    auto rsampler = [&](Rng& g) {
        Mat xx = gaussian_matrix(g, n, m) * sd;
        double w = f.f(xx) * std::exp(c * xx.squaredNorm());
        if (k < n) {
            Mat b = xx.bottomRows(n - k);
            SmallMat a = SmallMat(b.transpose() * b);
            a.diagonal().array() += 1.0;
            w *= std::exp(0.5 * (k - lambda) * std::log(a.determinant()));
        }
        return w;
    };
    const double c_lambda = named_const(NamedConst::CLambda, {n, m, k, lambda}).real();
    auto rhs = scale(mc_mean<double>(rng, spec.samples, spec.workers, rsampler), c_lambda * gauss_norm);

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    return r;
}

}  // namespace matgeom
