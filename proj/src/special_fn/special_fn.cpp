#include "matgeom/special_fn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "matgeom/cone_coords.hpp"
#include "matgeom/montecarlo.hpp"
#include "matgeom/quadrature.hpp"

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

Complex lanczos(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    Complex t = z + 7.5;
    return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

Complex GammaValue::value() const {
    if (is_pole())
        throw Error(ErrorKind::Pole, "gamma factor " + std::to_string(pole_) + " has a pole");
    return v_;
}

bool near_nonpositive_integer(Complex z, double tol) {
    if (std::abs(z.imag()) > tol) return false;
    double k = std::round(z.real());
    return k <= 0 && std::abs(z.real() - k) <= tol;
}

Complex gamma_fn(Complex z) {
    if (near_nonpositive_integer(z)) throw Error(ErrorKind::Pole, "gamma at a nonpositive integer");
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * lanczos(1.0 - z));
    return lanczos(z);
}

GammaValue siegel_gamma(int m, Complex alpha) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "siegel_gamma needs m >= 1");
    Complex prod = std::pow(kPi, 0.25 * m * (m - 1));
    for (int j = 0; j < m; ++j) {
        Complex z = alpha - 0.5 * j;
        if (near_nonpositive_integer(z)) return GammaValue::pole(j);
        prod *= gamma_fn(z);
    }
    return GammaValue::finite(prod);
}

GammaValue siegel_beta(int m, Complex alpha, Complex beta) {
    GammaValue a = siegel_gamma(m, alpha);
    if (a.is_pole()) return a;
    GammaValue b = siegel_gamma(m, beta);
    if (b.is_pole()) return b;
    GammaValue c = siegel_gamma(m, alpha + beta);
    if (c.is_pole()) return GammaValue::finite(0.0);
    return GammaValue::finite(a.value() * b.value() / c.value());
}

Complex pochhammer(Complex lambda, int m) {
    if (m < 0) throw Error(ErrorKind::InvalidArgument, "pochhammer needs m >= 0");
    Complex p = 1.0;
    for (int i = 0; i < m; ++i) p *= lambda + double(i);
    return p;
}

Complex bernstein_b(Complex alpha, int m) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "bernstein_b needs m >= 1");
    Complex p = 1.0;
    for (int i = 0; i < m; ++i) p *= alpha + 0.5 * i;
    return p;
}

Complex bernstein_cal_B(Complex lambda, int n, int m) {
    if (!(n >= m && m >= 1)) throw Error(ErrorKind::InvalidArgument, "bernstein_cal_B needs n >= m >= 1");
    Complex p = (m % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < m; ++i) p *= (lambda + double(i)) * (2.0 - n - lambda + double(i));
    return p;
}

Complex bernstein_Bk(Complex alpha, int k, int n, int m) {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "bernstein_Bk needs k >= 0");
    Complex p = 1.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < k; ++j)
            p *= (alpha - double(i) + 2.0 * j) * (alpha - double(n) + 2.0 + 2.0 * j + double(i));
    return p;
}

GammaValue riesz_const(int n, int m, Complex alpha) {
    if (n < m) throw Error(ErrorKind::InvalidArgument, "riesz_const needs n >= m");
    GammaValue num = siegel_gamma(m, alpha / 2.0);
    if (num.is_pole()) return num;
    GammaValue den = siegel_gamma(m, (double(n) - alpha) / 2.0);
    if (den.is_pole()) return den;
    return GammaValue::finite(std::pow(2.0, alpha * double(m)) * std::pow(kPi, 0.5 * n * m) *
                              num.value() / den.value());
}

double stiefel_volume(int n, int m) {
    if (!(n >= m && m >= 1)) throw Error(ErrorKind::InvalidArgument, "stiefel_volume needs n >= m >= 1");
    return std::pow(2.0, m) * std::pow(kPi, 0.5 * n * m) / siegel_gamma(m, 0.5 * n).real();
}

GammaValue named_const(NamedConst id, const ConstParams& p) {
    const int n = p.n, m = p.m, k = p.k;
    if (!(n >= m && m >= 1)) throw Error(ErrorKind::InvalidArgument, "named_const needs n >= m >= 1");
    auto g = [](int dim, double a) { return siegel_gamma(dim, a); };
    switch (id) {
        case NamedConst::CNM:
            return GammaValue::finite(std::pow(kPi, 0.5 * n * m) / g(m, 0.5 * n).real());
        case NamedConst::Gamma1: {
            if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "gamma1 needs 1 <= k <= n");
            GammaValue a = g(m, 0.5 * (n - k));
            if (a.is_pole()) return a;
            return GammaValue::finite(std::pow(2.0, -k * m) * std::pow(kPi, -0.5 * k * m) *
                                      a.value() / g(m, 0.5 * n).value());
        }
        case NamedConst::Gamma2: {
            if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "gamma2 needs 1 <= k <= n");
            GammaValue a = g(k, 0.5 * (n - m));
            if (a.is_pole()) return a;
            return GammaValue::finite(std::pow(2.0, -k * (m + 1)) *
                                      std::pow(kPi, -0.5 * k * (m + n)) * a.value());
        }
        case NamedConst::C1: {
            if (k < 1 || k > n) throw Error(ErrorKind::ParameterOutOfRange, "c1 needs 1 <= k <= n");
            return GammaValue::finite(std::pow(2.0, -k) *
                                      std::pow(kPi, 0.5 * (n * m - k * m - n * k)) *
                                      g(k, 0.5 * n).value() / g(m, 0.5 * n).value());
        }
        case NamedConst::C2: {
            if (k < 1 || k >= m) throw Error(ErrorKind::ParameterOutOfRange, "c2 needs 1 <= k < m");
            return GammaValue::finite(std::pow(kPi, (m - k) * (0.5 * n - k)) /
                                      (g(k, 0.5 * k).value() * g(m - k, 0.5 * (n - k)).value()));
        }
        case NamedConst::CLambda: {
            GammaValue a = g(m, 0.5 * (p.lambda - k));
            if (p.lambda <= k + m - 1) {
                if (a.is_pole()) return a;
                throw Error(ErrorKind::ParameterOutOfRange, "c_lambda needs lambda > k + m - 1");
            }
            return GammaValue::finite(std::pow(kPi, 0.5 * n * m) * a.value() /
                                      (g(m, 0.5 * n).value() * g(m, 0.5 * p.lambda).value()));
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown constant");
}

namespace {

// m = 2, K1 form, r = k' diag(l1, l2) k. With s = t't, t = [[a, b], [0, c]], the
// exponent is quadratic in b and the b integral is done in closed form.
ComplexEstimate k_bessel_m2(Complex nu, const PosDefMatrix& r, const quad::Options& opt) {
    Eigen::SelfAdjointEigenSolver<SmallMat> es(r.mat(), Eigen::EigenvaluesOnly);
    const double l1 = std::max(es.eigenvalues()(0), 0.0);
    const double l2 = std::max(es.eigenvalues()(1), 0.0);
    const std::array<quad::Axis, 2> axes = {quad::Axis::HalfLine, quad::Axis::HalfLine};
    auto f = [&](const double* c) -> Complex {
        const double a = c[0], cc = c[1];
        const double a2 = a * a, c2 = cc * cc;
        const double ld = std::log(a2 * c2);
        double re = -a2 - c2 - l1 / a2 - l2 / c2 + (nu.real() - 1.5) * ld + std::log(4.0 * a2 * cc) +
                    0.5 * std::log(kPi / (1.0 + l1 / (a2 * c2)));
        if (!(re > -745)) return 0.0;
        return std::exp(Complex(re, nu.imag() * ld));
    };
    return quad::integrate<Complex>(axes, f, opt);
}

ComplexEstimate k_bessel_quad(int m, Complex nu, const PosDefMatrix& r, const QuadratureSpec& spec,
                              KForm form) {
    const double d = 0.5 * (m + 1);
    const auto axes = cone_axes(m);
    quad::Options opt;
    opt.rel_tol = spec.rel_tol;
    opt.abs_tol = spec.abs_tol;
    opt.max_evals = spec.max_evals;
    if (form == KForm::K1 && m == 2) return k_bessel_m2(nu, r, opt);
    if (form == KForm::K1) {
        // s = q^{1/2} u q^{1/2} with q = r^{1/2} centers the integrand at u = I.
        const SmallMat q = sym_sqrt(r.mat());
        auto f = [&](const double* c) -> Complex {
            ConePoint p;
            cone_point(m, c, p);
            SmallMat w = upper_inverse(p.t);
            double tr1 = (q.cwiseProduct(p.r)).sum();
            double tr2 = (w.transpose() * q * w).trace();
            double re = -tr1 - tr2 + (nu.real() - d) * p.log_det + p.log_jac;
            if (re < -745) return 0.0;
            return std::exp(Complex(re, nu.imag() * p.log_det));
        };
        auto est = quad::integrate<Complex>(axes, f, opt);
        Complex pre = std::exp(0.5 * nu * std::log(r.det()));
        return {est.value * pre, est.std_error * std::abs(pre), est.n_samples};
    }
    const SmallMat rr = r.mat();
    auto f = [&](const double* c) -> Complex {
        ConePoint p;
        cone_point(m, c, p);
        SmallMat w = upper_inverse(p.t);
        double tr1 = (w * w.transpose()).trace();
        double tr2 = (rr.cwiseProduct(p.r)).sum();
        double re = -tr1 - tr2 + (-nu.real() - d) * p.log_det + p.log_jac;
        if (re < -745) return 0.0;
        return std::exp(Complex(re, -nu.imag() * p.log_det));
    };
    return quad::integrate<Complex>(axes, f, opt);
}

ComplexEstimate k_bessel_mc(int m, Complex nu, const PosDefMatrix& r, const QuadratureSpec& spec,
                            Rng& rng) {
    // u = a' w a with a = q^{-1/2}, w from the cone gamma law of order beta.
    const double d = 0.5 * (m + 1);
    const double beta = std::max(nu.real(), d);
    const SmallMat q = sym_sqrt(r.mat());
    const SmallMat a = sym_pow(q, -0.5);
    const double log_det_q = 0.5 * std::log(r.det());
    const double log_norm = std::log(siegel_gamma(m, beta).real()) - beta * log_det_q;
    auto sampler = [&](Rng& g) -> Complex {
        SmallMat t = cone_gamma_factor(g, m, beta);
        SmallMat ta = t * a;
        SmallMat u = ta.transpose() * ta;
        SmallMat ui = u.inverse();
        double log_det_u = std::log(u.determinant());
        double re = -(q.cwiseProduct(ui)).sum() + (nu.real() - beta) * log_det_u + log_norm;
        return std::exp(Complex(re, nu.imag() * log_det_u));
    };
    auto est = mc_mean<Complex>(rng, spec.samples, spec.workers, sampler);
    Complex pre = std::exp(0.5 * nu * std::log(r.det()));
    return {est.value * pre, est.std_error * std::abs(pre), est.n_samples};
}

}  // namespace

ComplexEstimate k_bessel(int m, Complex nu, const PosDefMatrix& r, const QuadratureSpec& spec,
                         KForm form, Rng* rng) {
    if (m < 1 || r.size() != m) throw Error(ErrorKind::InvalidArgument, "k_bessel: r must be m x m");
    spec.validate();
    bool mc = spec.strategy == Strategy::MonteCarlo ||
              (spec.strategy == Strategy::Auto && cone_dim(m) > 3);
    if (!mc) return k_bessel_quad(m, nu, r, spec, form);
    if (rng == nullptr) throw Error(ErrorKind::InvalidArgument, "k_bessel Monte Carlo needs an rng");
    return k_bessel_mc(m, nu, r, spec, *rng);
}

}  // namespace matgeom
