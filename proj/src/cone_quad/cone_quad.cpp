#include "matgeom/cone_quad.hpp"

#include <cmath>
#include <numbers>

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;

double log_det_pd(const SmallMat& a) {
    Eigen::LLT<SmallMat> llt(a);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

// log|s + u| = log|s| + log det([I; B]'[I; B]) with s = LL', u = t't, B = t L^{-T};
// the QR route keeps the second factor >= 1 even when u is huge and nearly singular.
double log_det_sum(const SmallMat& s, const PosDefMatrix& u) {
    using Tall = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 16, 8>;
    const int m = int(s.rows());
    Eigen::LLT<SmallMat> llt(s);
    SmallMat bt = llt.matrixL().solve(SmallMat(u.factor().transpose()));
    Tall stack(2 * m, m);
    stack.topRows(m).setIdentity();
    stack.bottomRows(m) = bt.transpose();
    Eigen::HouseholderQR<Tall> qr(stack);
    double l = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    for (int i = 0; i < m; ++i) l += 2.0 * std::log(std::abs(qr.matrixQR()(i, i)));
    return l;
}

// e * log x with 0 * log 0 = 0
double xlog(double e, double l) { return e == 0.0 ? 0.0 : e * l; }

double unit_ball_volume(int k) { return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0); }

bool use_monte_carlo(const QuadratureSpec& spec, bool forced, int dim) {
    if (forced || spec.strategy == Strategy::MonteCarlo) return true;
    if (spec.strategy == Strategy::NestedTanhSinh) return false;
    return dim > 4;
}


}  // namespace

namespace detail {

quad::Options quad_options(const QuadratureSpec& spec) {
    quad::Options o;
    o.rel_tol = spec.rel_tol;
    o.abs_tol = spec.abs_tol;
    o.max_evals = spec.max_evals;
    o.max_level = quad::kMaxLevel;
    return o;
}

void check_cone_integrable(int m, const ConeMeta& meta) {
    const double d = 0.5 * (m + 1);
    const bool singular = !std::isnan(meta.det_power);
    if (singular && meta.det_power <= d - 1)
        throw Error(ErrorKind::NonIntegrable, "determinant power diverges at the boundary of the cone");
    if (meta.exp_decay) {
        if (!(meta.decay_rate > 0))
            throw Error(ErrorKind::NonIntegrable, "exponential decay needs a positive rate");
        return;
    }
    const double beta = singular ? meta.det_power : d;
    if (meta.power_decay <= m * beta)
        throw Error(ErrorKind::NonIntegrable, "power decay too slow for integrability at infinity");
}

std::optional<PosDefMatrix> try_posdef(const SmallMat& s) {
    Eigen::LLT<SmallMat> llt(s);
    if (llt.info() != Eigen::Success) return std::nullopt;
    SmallMat t = llt.matrixU();
    for (int i = 0; i < t.rows(); ++i)
        if (!(t(i, i) > 0)) return std::nullopt;
    return PosDefMatrix::from_factor_unchecked(t);
}

}  // namespace detail

MCEstimate integrate_bounded_cone(const RadialFn& g, const std::optional<PosDefMatrix>& a,
                                  const PosDefMatrix& b, const QuadratureSpec& spec, Rng* rng) {
    spec.validate();
    const int m = b.size();
    if (m < 1 || m > 3) throw Error(ErrorKind::InvalidArgument, "integrate_bounded_cone supports m in {1,2,3}");
    SmallMat lo = a ? a->mat() : SmallMat::Zero(m, m);
    if (a && a->size() != m) throw Error(ErrorKind::InvalidArgument, "bounds differ in size");
    SmallMat diff = b.mat() - lo;
    Eigen::LLT<SmallMat> llt(diff);
    if (llt.info() != Eigen::Success || !(log_det_pd(diff) > -700))
        throw Error(ErrorKind::EmptyRegion, "b - a is not positive definite");
    const SmallMat c = llt.matrixU();
    const double jac = std::exp(0.5 * (m + 1) * log_det_pd(diff));

    auto at = [&](const SmallMat& w) -> double {
        auto s = detail::try_posdef(lo + c.transpose() * w * c);
        return s ? g.f0(*s) : 0.0;
    };

    const bool mc = spec.strategy == Strategy::MonteCarlo || m == 3;
    if (!mc && m == 1) {
        std::vector<quad::Axis> axes{quad::Axis::Unit};
        auto f = [&](const double* y) {
            SmallMat w(1, 1);
            w(0, 0) = y[0];
            return at(w);
        };
        return scale(quad::integrate<double>(axes, f, detail::quad_options(spec)), jac);
    }
    if (!mc) {
        // {0 < w < I} = {w > 0, tr w < 1} plus its mirror under w -> I - w.
        std::vector<quad::Axis> axes(3, quad::Axis::Unit);
        const SmallMat id = SmallMat::Identity(2, 2);
        auto f = [&](const double* y) {
            double p = y[0], s = (1.0 - y[0]) * y[1];
            double bnd = std::sqrt(p * s);
            double q = bnd * (2.0 * y[2] - 1.0);
            SmallMat w(2, 2);
            w << p, q, q, s;
            return (at(w) + at(id - w)) * (1.0 - y[0]) * 2.0 * bnd;
        };
        return scale(quad::integrate<double>(axes, f, detail::quad_options(spec)), jac);
    }
    if (!rng) throw Error(ErrorKind::InvalidArgument, "Monte Carlo bounded-cone integration needs an rng");
    // w uniform in the box 0 < w_ii < 1, |w_ij| < 1, kept when 0 < w < I
    const double box = std::pow(2.0, 0.5 * m * (m - 1));
    const SmallMat id = SmallMat::Identity(m, m);
    auto sampler = [&](Rng& gen) -> double {
        SmallMat w(m, m);
        for (int i = 0; i < m; ++i) {
            w(i, i) = uniform01(gen);
            for (int j = i + 1; j < m; ++j) w(i, j) = w(j, i) = 2.0 * uniform01(gen) - 1.0;
        }
        if (!detail::try_posdef(w) || !detail::try_posdef(id - w)) return 0.0;
        return box * at(w);
    };
    return scale(mc_mean<double>(*rng, spec.samples, spec.workers, sampler), jac);
}

MCEstimate integrate_stiefel(const std::function<double(const Mat&)>& f, int n, int p,
                             const QuadratureSpec& spec, Rng& rng) {
    spec.validate();
    if (!(n >= p && p >= 1)) throw Error(ErrorKind::InvalidArgument, "integrate_stiefel needs n >= p >= 1");
    auto sampler = [&](Rng& gen) { return f(haar_stiefel(gen, n, p).mat()); };
    return scale(mc_mean<double>(rng, spec.samples, spec.workers, sampler), stiefel_volume(n, p));
}

MCEstimate integrate_matrix_space(const TestFunction& f, const QuadratureSpec& spec, Rng& rng) {
    spec.validate();
    if (!f.f || !(f.decay_rate > 0)) throw Error(ErrorKind::InvalidArgument, "test function lacks decay metadata");
    const int n = f.n, m = f.m;
    const double c = f.decay_rate;
    const double sd = std::sqrt(0.5 / c);
    const Mat center = f.center.size() ? f.center : Mat::Zero(n, m);
    const double log_norm = 0.5 * n * m * std::log(kPi / c);
    auto sampler = [&](Rng& gen) {
        Mat z = gaussian_matrix(gen, n, m) * sd;
        return f.f(center + z) * std::exp(log_norm + c * z.squaredNorm());
    };
    return mc_mean<double>(rng, spec.samples, spec.workers, sampler);
}

// ------------------------------------------------------------------ appendix

AppendixId appendix_from_string(const std::string& s) {
    if (s == "A1") return AppendixId::A1;
    if (s == "A2") return AppendixId::A2;
    if (s == "A3") return AppendixId::A3;
    if (s == "A4") return AppendixId::A4;
    throw Error(ErrorKind::InvalidArgument, "unknown appendix identity " + s);
}

std::string to_string(AppendixId id) {
    switch (id) {
        case AppendixId::A1: return "A1";
        case AppendixId::A2: return "A2";
        case AppendixId::A3: return "A3";
        case AppendixId::A4: return "A4";
    }
    return "?";
}

json matrix_to_json(const Mat& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
        rows.push_back(r);
    }
    return rows;
}

json matrix_to_json(const SmallMat& a) { return matrix_to_json(Mat(a)); }

Report verify_appendix(AppendixId id, const AppendixParams& p, const QuadratureSpec& spec, Rng& rng) {
    const int m = p.m, k = p.k;
    const double d = 0.5 * (m + 1);
    if (m < 1 || m > 3) throw Error(ErrorKind::ParameterOutOfRange, "appendix checks need m in {1,2,3}");
    Report r;
    r.id = to_string(id);
    r.params = {{"m", m}};
    MCEstimate lhs;
    std::string route;

    if (id == AppendixId::A1 || id == AppendixId::A2) {
        const double al = p.alpha, ga = p.gamma;
        if (!(al > d - 1) || !(ga - al > d - 1))
            throw Error(ErrorKind::ParameterOutOfRange, "needs alpha > d - 1 and gamma - alpha > d - 1");
        SmallMat s;
        if (id == AppendixId::A1) {
            if (!p.s) throw Error(ErrorKind::ParameterOutOfRange, "A1 needs s");
            s = p.s->mat();
        } else {
            s = SmallMat::Identity(m, m);
            if (p.s) s += p.s->mat();
        }
        if (s.rows() != m) throw Error(ErrorKind::InvalidArgument, "s has the wrong size");
        RadialFn g;
        g.f0 = [&](const PosDefMatrix& u) {
            return std::exp(-ga * log_det_sum(s, u) + xlog(al - d, std::log(u.det())));
        };
        g.meta.exp_decay = false;
        g.meta.power_decay = m * ga;
        g.meta.det_power = al;
        lhs = integrate_cone(g, m, spec, &rng);
        route = "cone-quadrature";
        r.rhs = std::exp((al - ga) * log_det_pd(s)) * siegel_beta(m, al, ga - al).value();
        r.params["alpha"] = al;
        r.params["gamma"] = ga;
        if (p.s) r.params["s"] = matrix_to_json(p.s->mat());
    } else {
        const double la = p.lambda;
        if (k < 1) throw Error(ErrorKind::ParameterOutOfRange, "k must be positive");
        if (!(la > k + m - 1)) throw Error(ErrorKind::ParameterOutOfRange, "needs lambda > k + m - 1");
        const SmallMat b = p.b ? p.b->mat() : SmallMat::Identity(m, m);
        if (b.rows() != m) throw Error(ErrorKind::InvalidArgument, "b has the wrong size");
        const double ldb = log_det_pd(b);
        const Complex ratio = std::pow(kPi, 0.5 * k * m) * siegel_gamma(m, 0.5 * (la - k)).value() /
                              siegel_gamma(m, 0.5 * la).value();
        const bool mc = use_monte_carlo(spec, p.monte_carlo, k >= m ? cone_dim(m) : k * m);
        const double polar = std::pow(2.0, -m) * (k >= m ? stiefel_volume(k, m) : 0.0);
        r.params["k"] = k;
        r.params["lambda"] = la;
        if (p.b) r.params["b"] = matrix_to_json(p.b->mat());

        if (id == AppendixId::A3) {
            r.rhs = ratio * std::exp(0.5 * (k - la) * ldb);
            if (!mc && k >= m) {
                RadialFn g;
                g.f0 = [&](const PosDefMatrix& u) {
                    return std::exp(xlog(0.5 * k - d, std::log(u.det())) - 0.5 * la * log_det_sum(b, u));
                };
                g.meta.exp_decay = false;
                g.meta.power_decay = 0.5 * m * la;
                g.meta.det_power = 0.5 * k;
                lhs = scale(integrate_cone(g, m, spec, &rng), polar);
                route = "polar-cone-quadrature";
            } else if (!mc) {
                std::vector<quad::Axis> axes(std::size_t(k * m), quad::Axis::RealLine);
                auto f = [&](const double* y) {
                    Eigen::Map<const Mat> ym(y, k, m);
                    SmallMat a = b + ym.transpose() * ym;
                    return std::exp(-0.5 * la * log_det_pd(a));
                };
                lhs = quad::integrate<double>(axes, f, detail::quad_options(spec));
                route = "cartesian-quadrature";
            } else {
                const int dim = k * m;
                StudentT t(dim, std::max(0.5, la - dim));
                auto sampler = [&](Rng& gen) {
                    double w[kMaxEntries];
                    double lq = t.sample(gen, w);
                    Eigen::Map<const Mat> ym(w, k, m);
                    SmallMat a = b + ym.transpose() * ym;
                    return std::exp(-0.5 * la * log_det_pd(a) - lq);
                };
                lhs = mc_mean<double>(rng, spec.samples, spec.workers, sampler);
                route = "student-t-monte-carlo";
            }
        } else {
            r.rhs = ratio * std::exp((0.5 * la - d) * ldb);
            const double e = 0.5 * (la - k) - d;
            if (!mc && k >= m) {
                RadialFn g;
                g.f0 = [&](const PosDefMatrix& u) {
                    double lr = log_det_pd(b - u.mat());
                    if (!std::isfinite(lr)) return 0.0;
                    return std::exp(xlog(0.5 * k - d, std::log(u.det())) + xlog(e, lr));
                };
                g.meta.exp_decay = false;
                PosDefMatrix bp(b);
                lhs = scale(integrate_bounded_cone(g, std::nullopt, bp, spec, &rng), polar);
                route = "polar-bounded-cone-quadrature";
            } else {
                // y = z b^{1/2}; z has columns in the unit ball of R^k, kept when z'z < I.
                const double vol = std::pow(unit_ball_volume(k), m);
                const SmallMat id = SmallMat::Identity(m, m);
                auto sampler = [&](Rng& gen) {
                    Mat z(k, m);
                    for (int j = 0; j < m; ++j) {
                        Vec g(k);
                        for (int i = 0; i < k; ++i) g(i) = std_normal(gen);
                        z.col(j) = g * (std::pow(uniform01(gen), 1.0 / k) / g.norm());
                    }
                    double lr = log_det_pd(id - z.transpose() * z);
                    if (std::isnan(lr) || lr == -std::numeric_limits<double>::infinity()) return 0.0;
                    return vol * std::exp(xlog(e, lr));
                };
                lhs = scale(mc_mean<double>(rng, spec.samples, spec.workers, sampler),
                            std::exp((0.5 * la - d) * ldb));
                route = "rejection-monte-carlo";
            }
        }
    }
    r.lhs = lhs.value;
    r.std_error = lhs.std_error;
    r.n_samples = lhs.n_samples;
    r.pass = stochastic_pass(r.lhs, r.rhs, r.std_error, spec.abs_tol);
    r.extra["route"] = route;
    r.extra["rel_err"] = relative_error(r.lhs, r.rhs);
    return r;
}

}  // namespace matgeom
