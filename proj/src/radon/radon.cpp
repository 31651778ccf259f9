#include "matgeom/radon.hpp"

#include <cmath>
#include <numbers>

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRoundoff = 1e-12;
constexpr double kQuadratureFloor = 10.0;
constexpr double kOrthoTol = 1e-10;
// Backprojection frames for the inversion: samples / 20, split in batches.
constexpr std::size_t kFrameDivisor = 20;
constexpr std::size_t kMinFrames = 2000;
constexpr std::size_t kBatches = 10;
constexpr double kInversionStep = 0.1;
constexpr int kInversionRichardson = 3;

Report base_report(const std::string& id, int n, int m) {
    Report r;
    r.id = id;
    r.params = {{"n", n}, {"m", m}};
    return r;
}

Mat center_of(const TestFunction& f) { return f.center.size() ? f.center : Mat::Zero(f.n, f.m); }

void check_function(const TestFunction& f) {
    if (!f.f || f.n < 2 || f.m < 1) throw Error(ErrorKind::InvalidArgument, "radon: test function is incomplete");
    if (!(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "radon: needs decay metadata");
}

void check_plane(const TestFunction& f, const MatrixPlane& p) {
    if (p.n() != f.n || p.m() != f.m) throw Error(ErrorKind::InvalidArgument, "radon: plane does not match f");
}

void check_orthogonal(const Mat& a, const char* what) {
    if (a.rows() != a.cols() || (a.transpose() * a - Mat::Identity(a.rows(), a.cols())).norm() > kOrthoTol)
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be orthogonal");
}

const GaussianMixture& mixture_of(const TestFunction& f) {
    if (!f.mixture) throw Error(ErrorKind::InvalidArgument, "radon: closed form needs a Gaussian mixture");
    return *f.mixture;
}

// One-sample joint estimate of f^(xi, t) over w ~ N(basis' center, 1/(2c)).
double radon_draw(const TestFunction& f, const Mat& basis, const Mat& xi, const Mat& t, Rng& g) {
    const int k = int(basis.cols());
    const double c = f.decay_rate;
    Mat w0 = basis.transpose() * center_of(f);
    Mat z = gaussian_matrix(g, k, f.m) * std::sqrt(0.5 / c);
    return f.f(basis * (w0 + z) + xi * t) * std::exp(0.5 * k * f.m * std::log(kPi / c) + c * z.squaredNorm());
}

// f^(xi, t) from the closed form or a single Monte Carlo draw.
double radon_value(const TestFunction& f, const Mat& xi, const Mat& t, Rng& g) {
    if (f.mixture) return f.mixture->radon(xi, t);
    return radon_draw(f, plane_basis(StiefelFrame(xi, kOrthoTol)), xi, t, g);
}

bool exact_or_stochastic(const Report& r, const QuadratureSpec& spec) {
    return stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol) || relative_pass(r.lhs, r.rhs, kRoundoff);
}

json flat(const Mat& a) {
    json v = json::array();
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) v.push_back(a(i, j));
    return v;
}

}  // namespace

MatrixPlane::MatrixPlane(StiefelFrame xi_, Mat t_) : xi(std::move(xi_)), t(std::move(t_)), k(xi.n() - xi.p()) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "matrix plane needs 0 < k < n");
    if (t.rows() != xi.p() || t.cols() < 1) throw Error(ErrorKind::InvalidArgument, "plane offset must be (n-k) x m");
}

Mat plane_basis(const StiefelFrame& xi) {
    const int k = xi.n() - xi.p();
    return complete_frame(xi).mat().leftCols(k);
}

MCEstimate radon_transform(const TestFunction& f, const MatrixPlane& plane, const QuadratureSpec& spec, Rng& rng,
                           RadonMethod method, const Mat* basis) {
    check_function(f);
    check_plane(f, plane);
    spec.validate();
    if (method == RadonMethod::Auto) method = f.mixture ? RadonMethod::ClosedForm : RadonMethod::MonteCarlo;
    const Mat& xi = plane.xi.mat();
    if (method == RadonMethod::ClosedForm) return exact(mixture_of(f).radon(xi, plane.t));

    Mat b = basis ? *basis : plane_basis(plane.xi);
    if (b.rows() != f.n || b.cols() != plane.k || (b.transpose() * b - Mat::Identity(plane.k, plane.k)).norm() > kOrthoTol ||
        (xi.transpose() * b).norm() > kOrthoTol)
        throw Error(ErrorKind::InvalidArgument, "basis must be an orthonormal complement of xi");
    auto sampler = [&](Rng& g) { return radon_draw(f, b, xi, plane.t, g); };
    return mc_mean<double>(rng, spec.samples, spec.workers, sampler);
}

PlaneFn radon_function(const TestFunction& f) {
    auto mix = f.mixture;
    if (!mix) throw Error(ErrorKind::InvalidArgument, "radon: closed form needs a Gaussian mixture");
    return [mix](const Mat& xi, const Mat& t) { return mix->radon(xi, t); };
}

std::vector<Mat> haar_frames(Rng& rng, int n, int p, std::size_t count) {
    std::vector<Mat> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(haar_stiefel(rng, n, p).mat());
    return out;
}

MCEstimate dual_radon(const PlaneFn& phi, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng) {
    spec.validate();
    const int n = int(x.rows());
    if (k < 1 || k >= n) throw Error(ErrorKind::InvalidArgument, "dual radon needs 0 < k < n");
    auto sampler = [&](Rng& g) {
        Mat xi = haar_stiefel(g, n, n - k).mat();
        return phi(xi, xi.transpose() * x);
    };
    return mc_mean<double>(rng, spec.samples, spec.workers, sampler);
}

MCEstimate dual_radon(const PlaneFn& phi, const Mat& x, const std::vector<Mat>& frames) {
    if (frames.empty()) throw Error(ErrorKind::InvalidArgument, "dual radon needs frames");
    detail::Accumulator<double> acc;
    for (const auto& xi : frames) acc.add(phi(xi, xi.transpose() * x));
    return acc.result();
}

json to_json(const RadonDatum& d) {
    return {{"xi", flat(d.xi)},
            {"xi_shape", {d.xi.rows(), d.xi.cols()}},
            {"t", flat(d.t)},
            {"t_shape", {d.t.rows(), d.t.cols()}},
            {"value", d.value.value},
            {"stderr", d.value.std_error}};
}

json radon_data_json(const std::vector<RadonDatum>& data) {
    json a = json::array();
    for (const auto& d : data) a.push_back(to_json(d));
    return a;
}

// ------------------------------------------------------------------ checks

Report verify_radon_mass(const TestFunction& f, const StiefelFrame& xi, const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m, p = xi.p();
    if (xi.n() != n || p >= n) throw Error(ErrorKind::InvalidArgument, "radon mass: frame does not match f");
    Report r = base_report("radon-mass", n, m);
    r.params["k"] = n - p;

    // t ~ N(xi' center, 1/(2c)) over M_{n-k,m}
    const double c = f.decay_rate;
    const Mat t0 = xi.mat().transpose() * center_of(f);
    const Mat basis = plane_basis(xi);
    const double log_norm = 0.5 * p * m * std::log(kPi / c);
    auto sampler = [&](Rng& g) {
        Mat z = gaussian_matrix(g, p, m) * std::sqrt(0.5 / c);
        Mat t = t0 + z;
        double v = f.mixture ? f.mixture->radon(xi.mat(), t) : radon_draw(f, basis, xi.mat(), t, g);
        return v * std::exp(log_norm + c * z.squaredNorm());
    };
    auto lhs = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
    MCEstimate rhs = f.mixture ? exact(f.mixture->mass()) : integrate_matrix_space(f, spec, rng);

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    r.extra["rel_error"] = relative_error(r.lhs, r.rhs);
    return r;
}

Report verify_radon_evenness(const TestFunction& f, const MatrixPlane& plane, const Mat& theta,
                             const QuadratureSpec& spec, Rng& rng, RadonMethod method) {
    check_function(f);
    check_plane(f, plane);
    check_orthogonal(theta, "theta");
    if (theta.rows() != plane.xi.p()) throw Error(ErrorKind::InvalidArgument, "theta must be (n-k) x (n-k)");
    Report r = base_report("radon-evenness", f.n, f.m);
    r.params["k"] = plane.k;
    MatrixPlane turned(StiefelFrame(Mat(plane.xi.mat() * theta.transpose()), kOrthoTol), theta * plane.t);
    auto a = radon_transform(f, turned, spec, rng, method);
    auto b = radon_transform(f, plane, spec, rng, method);
    r.lhs = a.value;
    r.rhs = b.value;
    r.std_error = combined_error(a.std_error, b.std_error);
    r.n_samples = a.n_samples + b.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    return r;
}

Report verify_shift_equivariance(const TestFunction& f, const MatrixPlane& plane, const Mat& y,
                                 const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    check_plane(f, plane);
    if (y.rows() != f.n || y.cols() != f.m) throw Error(ErrorKind::InvalidArgument, "shift has the wrong shape");
    Report r = base_report("radon-shift", f.n, f.m);
    r.params["k"] = plane.k;
    auto fy = mixture_of(f).shifted(y).to_test_function(false);
    MatrixPlane moved(plane.xi, Mat(plane.xi.mat().transpose() * y + plane.t));
    auto a = radon_transform(fy, plane, spec, rng);
    auto b = radon_transform(f, moved, spec, rng);
    r.lhs = a.value;
    r.rhs = b.value;
    r.std_error = combined_error(a.std_error, b.std_error);
    r.n_samples = a.n_samples + b.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    return r;
}

Report verify_affine_law(const TestFunction& f, const MatrixPlane& plane, const Mat& gamma, const Mat& beta,
                         const Mat& y, const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    check_plane(f, plane);
    check_orthogonal(gamma, "gamma");
    check_orthogonal(beta, "beta");
    const int n = f.n, m = f.m;
    if (gamma.rows() != n || beta.rows() != m || y.rows() != n || y.cols() != m)
        throw Error(ErrorKind::InvalidArgument, "affine map has the wrong shape");
    Report r = base_report("radon-affine", n, m);
    r.params["k"] = plane.k;

    // f(gamma x beta + y) has components q -> beta q beta', x0 -> gamma'(x0 - y) beta'
    GaussianMixture moved(n, m);
    for (const auto& c : mixture_of(f).components())
        moved.add(c.amplitude, PosDefMatrix(SmallMat(beta * c.q * beta.transpose())),
                  gamma.transpose() * (c.x0 - y) * beta.transpose());
    auto fg = moved.to_test_function(false);
    MatrixPlane image(StiefelFrame(Mat(gamma * plane.xi.mat()), kOrthoTol),
                      plane.t * beta + plane.xi.mat().transpose() * gamma.transpose() * y);
    auto a = radon_transform(fg, plane, spec, rng);
    auto b = radon_transform(f, image, spec, rng);
    r.lhs = a.value;
    r.rhs = b.value;
    r.std_error = combined_error(a.std_error, b.std_error);
    r.n_samples = a.n_samples + b.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    return r;
}

Report verify_completion_independence(const TestFunction& f, const MatrixPlane& plane, const QuadratureSpec& spec,
                                      Rng& rng) {
    check_function(f);
    check_plane(f, plane);
    Report r = base_report("radon-completion", f.n, f.m);
    r.params["k"] = plane.k;
    const Mat b1 = plane_basis(plane.xi);
    const Mat b2 = b1 * haar_stiefel(rng, plane.k, plane.k).mat();
    auto a = radon_transform(f, plane, spec, rng, RadonMethod::MonteCarlo, &b1);
    auto b = radon_transform(f, plane, spec, rng, RadonMethod::MonteCarlo, &b2);
    r.lhs = a.value;
    r.rhs = b.value;
    r.std_error = combined_error(a.std_error, b.std_error);
    r.n_samples = a.n_samples + b.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    return r;
}

Report verify_duality(const TestFunction& f, const PlaneFn& phi, int k, const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m, p = n - k;
    if (k < 1 || k >= n) throw Error(ErrorKind::InvalidArgument, "duality needs 0 < k < n");
    Report r = base_report("radon-duality", n, m);
    r.params["k"] = k;
    const double c = f.decay_rate;
    const double sd = std::sqrt(0.5 / c);
    const Mat x0 = center_of(f);

    // <f, phi-check>: x ~ N(center, 1/(2c)) jointly with a Haar frame
    const double ln_x = 0.5 * n * m * std::log(kPi / c);
    auto left = [&](Rng& g) {
        Mat z = gaussian_matrix(g, n, m) * sd;
        Mat x = x0 + z;
        Mat xi = haar_stiefel(g, n, p).mat();
        return f.f(x) * std::exp(ln_x + c * z.squaredNorm()) * phi(xi, xi.transpose() * x);
    };
    // average over frames of int phi f^ dt, t ~ N(xi' center, 1/(2c))
    const double ln_t = 0.5 * p * m * std::log(kPi / c);
    auto right = [&](Rng& g) {
        Mat xi = haar_stiefel(g, n, p).mat();
        Mat z = gaussian_matrix(g, p, m) * sd;
        Mat t = xi.transpose() * x0 + z;
        return phi(xi, t) * radon_value(f, xi, t, g) * std::exp(ln_t + c * z.squaredNorm());
    };
    auto a = mc_mean<double>(rng, spec.samples, spec.workers, left);
    auto b = mc_mean<double>(rng, spec.samples, spec.workers, right);
    r.lhs = a.value;
    r.rhs = b.value;
    r.std_error = combined_error(a.std_error, b.std_error);
    r.n_samples = a.n_samples + b.n_samples;
    r.pass = exact_or_stochastic(r, spec);
    return r;
}

Report fuglede_check(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng) {
    check_function(f);
    spec.validate();
    const int n = f.n, m = f.m;
    if (x.rows() != n || x.cols() != m) throw Error(ErrorKind::InvalidArgument, "fuglede: point has the wrong shape");
    if (k < 1 || k > n - m) throw Error(ErrorKind::RangeViolation, "fuglede identity needs 1 <= k <= n - m");
    Report r = base_report("fuglede", n, m);
    r.params["k"] = k;

    const double g1 = named_const(NamedConst::Gamma1, {n, m, k, 0.0}).real();
    auto back = [&](Rng& g) {
        Mat xi = haar_stiefel(g, n, n - k).mat();
        return radon_value(f, xi, xi.transpose() * x, g);
    };
    auto lhs = scale(mc_mean<double>(rng, spec.samples, spec.workers, back), g1);

    MCEstimate rhs;
    std::string route;
    if (k > m - 1 && k < n - m + 1 && f.heat) {
        rhs = riesz_heat(f, x, k, spec);
        route = "heat";
    } else if (k > m - 1) {
        rhs = riesz_direct(f, x, k, spec, rng);
        route = "direct";
    } else {
        // I^k f = gamma_2 int_{V_{n,k}} int f(x - v w) = (gamma_2 / c_1)(zeta_k * f)
        const double g2 = named_const(NamedConst::Gamma2, {n, m, k, 0.0}).real();
        const double c1 = named_const(NamedConst::C1, {n, m, k, 0.0}).real();
        rhs = scale(zeta_convolution(f, x, k, spec, rng), g2 / c1);
        route = "stiefel";
    }

    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.std_error = combined_error(lhs.std_error, rhs.std_error);
    r.n_samples = lhs.n_samples + rhs.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol) ||
             relative_pass(r.lhs, r.rhs, kQuadratureFloor * std::max(spec.rel_tol, kRoundoff));
    r.extra["route"] = route;
    r.extra["gamma1"] = g1;
    r.extra["rel_error"] = relative_error(r.lhs, r.rhs);
    return r;
}

MCEstimate invert_radon_even_k(const PlaneFn& g, const Mat& x, int k, int n, int m, const QuadratureSpec& spec,
                               Rng& rng) {
    spec.validate();
    if (x.rows() != n || x.cols() != m) throw Error(ErrorKind::InvalidArgument, "inversion: point has the wrong shape");
    if (k < 2 || k % 2 != 0) throw Error(ErrorKind::InvalidArgument, "inversion needs an even k >= 2");
    if (!(k > m - 1 && k < n - m + 1)) throw Error(ErrorKind::StripViolation, "inversion needs m - 1 < k < n - m + 1");
    const double g1 = named_const(NamedConst::Gamma1, {n, m, k, 0.0}).real();
    const double sign = (m * k / 2) % 2 == 0 ? 1.0 : -1.0;

    const std::size_t per = std::max(kMinFrames, spec.samples / kFrameDivisor) / kBatches;
    auto frames = haar_frames(rng, n, n - k, per * kBatches);
    DiffSpec ds;
    ds.base_step = kInversionStep;
    ds.richardson_levels = kInversionRichardson;

    detail::Accumulator<double> acc;
    for (std::size_t b = 0; b < kBatches; ++b) {
        std::vector<Mat> batch(frames.begin() + long(b * per), frames.begin() + long((b + 1) * per));
        TestFunction back;
        back.n = n;
        back.m = m;
        back.f = [&](const Mat& y) { return g1 * dual_radon(g, y, batch).value; };
        acc.add(sign * cayley_laplace_power(back, RectMatrix(x), k / 2, ds));
    }
    auto est = acc.result();
    est.n_samples = frames.size();
    return est;
}

Report verify_even_k_inversion(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng,
                               double rel_tol) {
    check_function(f);
    Report r = base_report("radon-inversion", f.n, f.m);
    r.params["k"] = k;
    auto est = invert_radon_even_k(radon_function(f), x, k, f.n, f.m, spec, rng);
    r.lhs = est.value;
    r.rhs = f.f(x);
    r.std_error = est.std_error;
    r.n_samples = est.n_samples;
    r.pass = relative_pass(r.lhs, r.rhs, rel_tol);
    r.extra["rel_error"] = relative_error(r.lhs, r.rhs);
    return r;
}

}  // namespace matgeom
