#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matgeom/cone_coords.hpp"
#include "matgeom/estimate.hpp"
#include "matgeom/matrix_core.hpp"
#include "matgeom/montecarlo.hpp"
#include "matgeom/quadrature.hpp"
#include "matgeom/report.hpp"
#include "matgeom/special_fn.hpp"
#include "matgeom/spec.hpp"

namespace matgeom {

// Integrability metadata for functions on P_m.
struct ConeMeta {
    bool exp_decay = true;
    double decay_rate = 1.0;   // f0 = O(exp(-decay_rate tr r))
    double power_decay = 0.0;  // without exp decay: f0 = O((tr r)^{-power_decay})
    // f0 ~ |r|^{det_power - d} near the boundary of P_m; NaN when bounded there.
    double det_power = std::numeric_limits<double>::quiet_NaN();
};

template <class T>
struct BasicRadialFn {
    std::function<T(const PosDefMatrix&)> f0;
    ConeMeta meta;
};

using RadialFn = BasicRadialFn<double>;
using ComplexRadialFn = BasicRadialFn<Complex>;

class GaussianMixture;

// A function on M_{n,m} with decay metadata and optional closed forms.
struct TestFunction {
    int n = 0;
    int m = 0;
    std::function<double(const Mat&)> f;
    double decay_rate = 1.0;  // |f(x)| <~ exp(-decay_rate |x - center|^2)
    Mat center;
    // Closed-form Fourier transform int exp(i tr(y'x)) f(x) dx, if known.
    std::function<Complex(const Mat&)> fourier;
    double fourier_decay_rate = 0.0;
    // Closed-form Gauss-Weierstrass smoothing (W_t f)(x), if known.
    std::function<double(const Mat&, const PosDefMatrix&)> heat;
    // f = f0(x'x) when radial.
    std::function<double(const PosDefMatrix&)> radial_profile;
    std::shared_ptr<const GaussianMixture> mixture;
    // Exponent lambda when f carries a |x|_m^lambda factor; NaN otherwise.
    double singular_power = std::numeric_limits<double>::quiet_NaN();

    double operator()(const RectMatrix& x) const { return f(x.mat()); }
    bool is_radial() const { return bool(radial_profile); }
};

// f(x) = sum_i A_i exp(-tr(Q_i (x - x0_i)'(x - x0_i))). Heat kernels, shifted
// and anisotropic Gaussians are members; all closed forms are explicit.
class GaussianMixture {
public:
    struct Component {
        double amplitude;
        SmallMat q;  // positive definite m x m
        Mat x0;      // n x m
    };

    GaussianMixture(int n, int m) : n_(n), m_(m) {}
    GaussianMixture& add(double amplitude, const PosDefMatrix& q, const Mat& x0);
    // amplitude * h_tau(x - x0)
    GaussianMixture& add_heat(double amplitude, const PosDefMatrix& tau, const Mat& x0);

    static GaussianMixture gaussian(int n, int m);                    // exp(-tr x'x)
    static GaussianMixture shifted_gaussian(const Mat& x0);            // exp(-|x - x0|^2)
    static GaussianMixture heat_kernel(int n, const PosDefMatrix& tau, double amplitude = 1.0);

    int n() const { return n_; }
    int m() const { return m_; }
    const std::vector<Component>& components() const { return comps_; }

    double value(const Mat& x) const;
    Complex fourier(const Mat& y) const;
    double heat(const Mat& x, const PosDefMatrix& t) const;
    double mass() const;
    // Plane integral over {x : xi'x = t} for a frame xi in V_{n,n-k}.
    double radon(const Mat& xi, const Mat& t) const;
    // x -> f(x + y)
    GaussianMixture shifted(const Mat& y) const;
    bool radial() const;

    // Checks the Fourier and heat closed forms against row-factorized
    // quadrature at spot points; throws on a mismatch beyond 1e-8.
    void validate() const;
    TestFunction to_test_function(bool validate_forms = true) const;

private:
    int n_, m_;
    std::vector<Component> comps_;
};

// ---------------------------------------------------------------- integrators

namespace detail {

quad::Options quad_options(const QuadratureSpec& spec);
void check_cone_integrable(int m, const ConeMeta& meta);
std::optional<PosDefMatrix> try_posdef(const SmallMat& s);

}  // namespace detail

template <class T>
Estimate<T> integrate_cone(const BasicRadialFn<T>& g, int m, const QuadratureSpec& spec,
                           Rng* rng = nullptr) {
    if (m < 1 || m > 3) throw Error(ErrorKind::InvalidArgument, "integrate_cone supports m in {1,2,3}");
    spec.validate();
    detail::check_cone_integrable(m, g.meta);
    const bool mc = spec.strategy == Strategy::MonteCarlo ||
                    (spec.strategy == Strategy::Auto && cone_dim(m) > 4);
    if (!mc) {
        auto axes = cone_axes(m);
        auto f = [&](const double* c) -> T {
            ConePoint p;
            cone_point(m, c, p);
            if (!(std::abs(p.log_det) < 700.0) || !p.r.allFinite()) return T{};
            T v = g.f0(PosDefMatrix::from_factor_unchecked(p.t));
            if (v == T{}) return v;
            double half = std::exp(0.5 * p.log_jac);
            return v * half * half;
        };
        return quad::integrate<T>(axes, f, detail::quad_options(spec));
    }
    if (!rng) throw Error(ErrorKind::InvalidArgument, "Monte Carlo cone integration needs an rng");
    if (!g.meta.exp_decay)
        throw Error(ErrorKind::InvalidArgument, "Monte Carlo cone integration needs exponential decay");
    // r = w / c with w from the cone gamma law of order beta.
    const double d = 0.5 * (m + 1);
    const double beta = std::isnan(g.meta.det_power) ? d : std::max(g.meta.det_power, 0.5 * m);
    const double c = 0.5 * g.meta.decay_rate;
    const double log_norm = std::log(siegel_gamma(m, beta).real()) - m * beta * std::log(c);
    auto sampler = [&](Rng& gen) -> T {
        SmallMat t = cone_gamma_factor(gen, m, beta) / std::sqrt(c);
        PosDefMatrix r = PosDefMatrix::from_factor_unchecked(t);
        double lw = log_norm + (d - beta) * std::log(r.det()) + c * r.mat().trace();
        return g.f0(r) * std::exp(lw);
    };
    return mc_mean<T>(*rng, spec.samples, spec.workers, sampler);
}

// int_{a < s < b} f0(s) ds; a = nullopt means a = 0. m = 3 uses rejection MC.
MCEstimate integrate_bounded_cone(const RadialFn& g, const std::optional<PosDefMatrix>& a,
                                  const PosDefMatrix& b, const QuadratureSpec& spec,
                                  Rng* rng = nullptr);

// int_{V_{n,p}} f(v) dv
MCEstimate integrate_stiefel(const std::function<double(const Mat&)>& f, int n, int p,
                             const QuadratureSpec& spec, Rng& rng);

// int_{M_{n,m}} f(x) dx by Gaussian importance sampling.
MCEstimate integrate_matrix_space(const TestFunction& f, const QuadratureSpec& spec, Rng& rng);

// ------------------------------------------------------------------ appendix

enum class AppendixId { A1, A2, A3, A4 };

struct AppendixParams {
    int m = 2;
    int k = 3;
    double alpha = 2.0;
    double gamma = 4.5;
    double lambda = 6.0;
    std::optional<PosDefMatrix> s;  // A1 (required), A2 (optional)
    std::optional<PosDefMatrix> b;  // A3, A4 (identity when absent)
    bool monte_carlo = false;       // force the Monte Carlo route
};

Report verify_appendix(AppendixId id, const AppendixParams& p, const QuadratureSpec& spec,
                       Rng& rng);

AppendixId appendix_from_string(const std::string& s);
std::string to_string(AppendixId id);

json matrix_to_json(const Mat& a);
json matrix_to_json(const SmallMat& a);

}  // namespace matgeom
