#include <cmath>
#include <numbers>

#include "matgeom/cone_quad.hpp"

namespace matgeom {

namespace {

constexpr double kPi = std::numbers::pi;

double quad_form(const SmallMat& q, const Mat& d) { return (d * q).cwiseProduct(d).sum(); }

SmallMat inverse(const SmallMat& q) { return q.llt().solve(SmallMat::Identity(q.rows(), q.cols())); }

double log_det(const SmallMat& q) {
    Eigen::LLT<SmallMat> llt(q);
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double min_eig(const SmallMat& q) {
    Eigen::SelfAdjointEigenSolver<SmallMat> es(q, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double max_eig(const SmallMat& q) {
    Eigen::SelfAdjointEigenSolver<SmallMat> es(q, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(q.rows() - 1);
}

Mat spot_matrix(int n, int m, double scale, double phase) {
    Mat a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = scale * std::sin(phase + 1.3 * i + 2.1 * j);
    return a;
}

}  // namespace

GaussianMixture& GaussianMixture::add(double amplitude, const PosDefMatrix& q, const Mat& x0) {
    if (q.size() != m_ || x0.rows() != n_ || x0.cols() != m_)
        throw Error(ErrorKind::InvalidArgument, "mixture component has the wrong shape");
    comps_.push_back({amplitude, q.mat(), x0});
    return *this;
}

GaussianMixture& GaussianMixture::add_heat(double amplitude, const PosDefMatrix& tau, const Mat& x0) {
    SmallMat q = 0.25 * inverse(tau.mat());
    double a = amplitude * std::pow(4 * kPi, -0.5 * n_ * m_) * std::exp(-0.5 * n_ * std::log(tau.det()));
    return add(a, PosDefMatrix(q), x0);
}

GaussianMixture GaussianMixture::gaussian(int n, int m) {
    GaussianMixture g(n, m);
    g.add(1.0, PosDefMatrix::identity(m), Mat::Zero(n, m));
    return g;
}

GaussianMixture GaussianMixture::shifted_gaussian(const Mat& x0) {
    GaussianMixture g(int(x0.rows()), int(x0.cols()));
    g.add(1.0, PosDefMatrix::identity(int(x0.cols())), x0);
    return g;
}

GaussianMixture GaussianMixture::heat_kernel(int n, const PosDefMatrix& tau, double amplitude) {
    GaussianMixture g(n, tau.size());
    g.add_heat(amplitude, tau, Mat::Zero(n, tau.size()));
    return g;
}

double GaussianMixture::value(const Mat& x) const {
    double s = 0.0;
    for (const auto& c : comps_) s += c.amplitude * std::exp(-quad_form(c.q, x - c.x0));
    return s;
}

Complex GaussianMixture::fourier(const Mat& y) const {
    Complex s = 0.0;
    for (const auto& c : comps_) {
        double mag = c.amplitude * std::pow(kPi, 0.5 * n_ * m_) *
                     std::exp(-0.5 * n_ * log_det(c.q) - 0.25 * quad_form(inverse(c.q), y));
        s += mag * std::polar(1.0, (y.cwiseProduct(c.x0)).sum());
    }
    return s;
}

double GaussianMixture::heat(const Mat& x, const PosDefMatrix& t) const {
    double s = 0.0;
    for (const auto& c : comps_) {
        SmallMat tau = 0.25 * inverse(c.q);
        SmallMat tt = t.mat() + tau;
        // A (4 pi)^{nm/2} |tau|^{n/2} h_{t + tau}(x - x0)
        double lg = 0.5 * n_ * (log_det(tau) - log_det(tt)) - 0.25 * quad_form(inverse(tt), x - c.x0);
        s += c.amplitude * std::exp(lg);
    }
    return s;
}

double GaussianMixture::mass() const {
    double s = 0.0;
    for (const auto& c : comps_)
        s += c.amplitude * std::pow(kPi, 0.5 * n_ * m_) * std::exp(-0.5 * n_ * log_det(c.q));
    return s;
}

double GaussianMixture::radon(const Mat& xi, const Mat& t) const {
    const int k = n_ - int(xi.cols());
    if (xi.rows() != n_ || k < 1 || t.rows() != xi.cols() || t.cols() != m_)
        throw Error(ErrorKind::InvalidArgument, "radon: plane has the wrong shape");
    double s = 0.0;
    for (const auto& c : comps_) {
        Mat a = t - xi.transpose() * c.x0;
        s += c.amplitude * std::pow(kPi, 0.5 * k * m_) *
             std::exp(-0.5 * k * log_det(c.q) - quad_form(c.q, a));
    }
    return s;
}

GaussianMixture GaussianMixture::shifted(const Mat& y) const {
    GaussianMixture g = *this;
    for (auto& c : g.comps_) c.x0 -= y;
    return g;
}

bool GaussianMixture::radial() const {
    for (const auto& c : comps_)
        if (!c.x0.isZero(0.0)) return false;
    return true;
}

void GaussianMixture::validate() const {
    if (m_ > 2) return;
    std::vector<quad::Axis> axes(std::size_t(m_), quad::Axis::RealLine);
    quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.max_level = 8;

    Mat y = spot_matrix(n_, m_, 0.8, 0.4);
    Mat x = spot_matrix(n_, m_, 0.5, 1.7);
    SmallMat tm = SmallMat::Constant(m_, m_, 0.15);
    tm.diagonal().array() = 0.6;
    PosDefMatrix t(tm);
    SmallMat tinv = inverse(tm);
    const double heat_norm = std::pow(4 * kPi, -0.5 * m_) / std::sqrt(t.det());

    Complex f_num = 0.0;
    double h_num = 0.0;
    for (const auto& c : comps_) {
        Complex fprod = c.amplitude;
        double hprod = c.amplitude;
        for (int i = 0; i < n_; ++i) {
            auto fr = [&](const double* u) -> Complex {
                double e = 0.0, ph = 0.0;
                for (int a = 0; a < m_; ++a) {
                    ph += y(i, a) * u[a];
                    for (int b = 0; b < m_; ++b)
                        e += (u[a] - c.x0(i, a)) * c.q(a, b) * (u[b] - c.x0(i, b));
                }
                return std::exp(-e) * std::polar(1.0, ph);
            };
            auto hr = [&](const double* u) -> double {
                double e = 0.0, g = 0.0;
                for (int a = 0; a < m_; ++a)
                    for (int b = 0; b < m_; ++b) {
                        e += (u[a] - c.x0(i, a)) * c.q(a, b) * (u[b] - c.x0(i, b));
                        g += (x(i, a) - u[a]) * tinv(a, b) * (x(i, b) - u[b]);
                    }
                return heat_norm * std::exp(-e - 0.25 * g);
            };
            fprod *= quad::integrate<Complex>(axes, fr, opt).value;
            hprod *= quad::integrate<double>(axes, hr, opt).value;
        }
        f_num += fprod;
        h_num += hprod;
    }
    Complex f_closed = fourier(y);
    double h_closed = heat(x, t);
    if (std::abs(f_num - f_closed) > 1e-8 * std::abs(f_closed) + 1e-300)
        throw Error(ErrorKind::InvalidArgument, "Fourier closed form fails its spot check");
    if (std::abs(h_num - h_closed) > 1e-8 * std::abs(h_closed) + 1e-300)
        throw Error(ErrorKind::InvalidArgument, "heat closed form fails its spot check");
}

TestFunction GaussianMixture::to_test_function(bool validate_forms) const {
    if (comps_.empty()) throw Error(ErrorKind::InvalidArgument, "empty mixture");
    if (validate_forms) validate();
    auto self = std::make_shared<const GaussianMixture>(*this);
    TestFunction tf;
    tf.n = n_;
    tf.m = m_;
    tf.mixture = self;
    tf.f = [self](const Mat& x) { return self->value(x); };
    tf.fourier = [self](const Mat& y) { return self->fourier(y); };
    tf.heat = [self](const Mat& x, const PosDefMatrix& t) { return self->heat(x, t); };
    double rate = 1e300, frate = 1e300, best = -1.0;
    for (const auto& c : comps_) {
        rate = std::min(rate, min_eig(c.q));
        frate = std::min(frate, 0.25 / max_eig(c.q));
        double w = std::abs(c.amplitude) * std::exp(-0.5 * n_ * log_det(c.q));
        if (w > best) {
            best = w;
            tf.center = c.x0;
        }
    }
    tf.decay_rate = rate;
    tf.fourier_decay_rate = frate;
    if (radial()) {
        tf.radial_profile = [self](const PosDefMatrix& r) {
            double s = 0.0;
            for (const auto& c : self->components())
                s += c.amplitude * std::exp(-c.q.cwiseProduct(r.mat()).sum());
            return s;
        };
    }
    return tf;
}

}  // namespace matgeom
