#include "matgeom/matrix_core.hpp"

#include <cmath>
#include <string>

namespace matgeom {

namespace {

void check_shape(Eigen::Index n, Eigen::Index m) {
    if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be >= 1");
    if (n * m > kMaxEntries)
        throw Error(ErrorKind::InvalidArgument,
                    "n*m = " + std::to_string(n * m) + " exceeds " + std::to_string(kMaxEntries));
}

void check_finite(const Mat& a) {
    if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry");
}

}  // namespace

RectMatrix::RectMatrix(int n, int m) : a_(Mat::Zero(n, m)) { check_shape(n, m); }

RectMatrix::RectMatrix(Mat a) : a_(std::move(a)) {
    check_shape(a_.rows(), a_.cols());
    check_finite(a_);
}

RectMatrix RectMatrix::from_row_major(int n, int m, std::span<const double> entries) {
    if (entries.size() != std::size_t(n) * std::size_t(m))
        throw Error(ErrorKind::InvalidArgument, "entry count does not match n*m");
    Mat a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = entries[std::size_t(i) * m + j];
    return RectMatrix(std::move(a));
}

std::vector<double> RectMatrix::row_major() const {
    std::vector<double> out;
    out.reserve(std::size_t(a_.size()));
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j) out.push_back(a_(i, j));
    return out;
}

SymMatrix::SymMatrix(int m) {
    check_shape(m, m);
    a_ = SmallMat::Zero(m, m);
}

SymMatrix::SymMatrix(const SmallMat& a) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "symmetric matrix must be square");
    check_shape(a.rows(), a.cols());
    check_finite(a);
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric");
    a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::from_upper(int m, std::span<const double> upper) {
    if (upper.size() != std::size_t(m * (m + 1) / 2))
        throw Error(ErrorKind::InvalidArgument, "expected m(m+1)/2 upper-triangle entries");
    check_shape(m, m);
    SmallMat a(m, m);
    std::size_t k = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) a(i, j) = a(j, i) = upper[k++];
    return SymMatrix(a);
}

std::vector<double> SymMatrix::upper() const {
    std::vector<double> out;
    for (int i = 0; i < size(); ++i)
        for (int j = i; j < size(); ++j) out.push_back(a_(i, j));
    return out;
}

UpperTriangular::UpperTriangular(SmallMat t) : t_(std::move(t)) {
    if (t_.rows() != t_.cols()) throw Error(ErrorKind::InvalidArgument, "triangular factor must be square");
    check_finite(t_);
    for (int i = 0; i < t_.rows(); ++i) {
        if (!(t_(i, i) > 0)) throw Error(ErrorKind::InvalidArgument, "triangular diagonal must be positive");
        for (int j = 0; j < i; ++j)
            if (t_(i, j) != 0.0) throw Error(ErrorKind::InvalidArgument, "matrix is not upper triangular");
    }
}

PosDefMatrix::PosDefMatrix(const SymMatrix& s) : PosDefMatrix(s.mat()) {}

PosDefMatrix::PosDefMatrix(const SmallMat& a) {
    SymMatrix s(a);
    Eigen::LLT<SmallMat> llt(s.mat());
    if (llt.info() != Eigen::Success)
        throw Error(ErrorKind::NotPositiveDefinite, "triangular factorization failed");
    SmallMat t = llt.matrixU();
    double det = 1.0;
    for (int i = 0; i < t.rows(); ++i) {
        if (!(t(i, i) > 0)) throw Error(ErrorKind::NotPositiveDefinite, "non-positive pivot");
        det *= t(i, i) * t(i, i);
    }
    a_ = s.mat();
    t_ = std::move(t);
    det_ = det;
}

PosDefMatrix PosDefMatrix::identity(int m) { return PosDefMatrix(SmallMat(SmallMat::Identity(m, m))); }

PosDefMatrix PosDefMatrix::from_factor(const UpperTriangular& t) {
    return from_factor_unchecked(t.mat());
}

PosDefMatrix PosDefMatrix::from_factor_unchecked(const SmallMat& t) {
    PosDefMatrix r;
    r.t_ = t;
    r.a_ = t.transpose() * t;
    double det = 1.0;
    for (int i = 0; i < t.rows(); ++i) det *= t(i, i) * t(i, i);
    r.det_ = det;
    return r;
}

StiefelFrame::StiefelFrame(Mat v, double tol) : v_(std::move(v)) {
    if (v_.cols() > v_.rows() || v_.cols() < 1)
        throw Error(ErrorKind::InvalidArgument, "frame needs 1 <= p <= n");
    check_finite(v_);
    Mat e = v_.transpose() * v_ - Mat::Identity(v_.cols(), v_.cols());
    if (e.cwiseAbs().maxCoeff() > tol) throw Error(ErrorKind::InvalidArgument, "frame is not orthonormal");
}

Rotation::Rotation(Mat g, double tol) : g_(std::move(g)) {
    if (g_.rows() != g_.cols()) throw Error(ErrorKind::InvalidArgument, "rotation must be square");
    check_finite(g_);
    Mat e = g_.transpose() * g_ - Mat::Identity(g_.rows(), g_.cols());
    if (e.cwiseAbs().maxCoeff() > tol) throw Error(ErrorKind::InvalidArgument, "matrix is not orthogonal");
    if (std::abs(g_.determinant() - 1.0) > tol) throw Error(ErrorKind::InvalidArgument, "det must be +1");
}

Rotation Rotation::identity(int n) { return Rotation(Mat::Identity(n, n)); }

double vol_factor(const Mat& x) {
    Mat g = x.transpose() * x;
    double det = g.determinant();
    return det > 0 ? std::sqrt(det) : 0.0;
}

double vol_factor(const RectMatrix& x) { return vol_factor(x.mat()); }

double sigma_min_ratio(const Mat& x) {
    Eigen::JacobiSVD<Mat> svd(x);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

SmallMat sym_pow(const SmallMat& s, double p) {
    Eigen::SelfAdjointEigenSolver<SmallMat> es(s);
    auto ev = es.eigenvalues().eval();
    for (int i = 0; i < ev.size(); ++i) ev(i) = std::pow(ev(i), p);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

SmallMat sym_sqrt(const SmallMat& s) { return sym_pow(s, 0.5); }

Polar polar_decompose(const RectMatrix& x) {
    if (x.rows() < x.cols()) throw Error(ErrorKind::RankDeficient, "n < m");
    if (sigma_min_ratio(x.mat()) < kRankTol)
        throw Error(ErrorKind::RankDeficient, "smallest singular value below threshold");
    SmallMat r = x.mat().transpose() * x.mat();
    r = (0.5 * (r + r.transpose())).eval();
    Mat v = x.mat() * Mat(sym_pow(r, -0.5));
    // Re-orthonormalize away rounding before the frame check.
    Eigen::HouseholderQR<Mat> qr(v);
    Mat q = qr.householderQ() * Mat::Identity(v.rows(), v.cols());
    Mat rr = qr.matrixQR().topRows(v.cols()).triangularView<Eigen::Upper>();
    for (int j = 0; j < v.cols(); ++j)
        if (rr(j, j) < 0) q.col(j) *= -1;
    return {StiefelFrame(q, 1e-10), PosDefMatrix(r)};
}

UpperTriangular triangular_factor(const PosDefMatrix& r) { return UpperTriangular(r.factor()); }

Mat gaussian_matrix(Rng& rng, int n, int m) {
    Mat a(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = std_normal(rng);
    return a;
}

namespace {

Mat haar_frame(Rng& rng, int n, int p) {
    Mat a = gaussian_matrix(rng, n, p);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(n, p);
    for (int j = 0; j < p; ++j)
        if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1;
    return q;
}

}  // namespace

StiefelFrame haar_stiefel(Rng& rng, int n, int p) {
    if (!(n >= p && p >= 1)) throw Error(ErrorKind::InvalidArgument, "haar_stiefel needs n >= p >= 1");
    return StiefelFrame(haar_frame(rng, n, p), 1e-10);
}

Rotation haar_rotation(Rng& rng, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "haar_rotation needs n >= 1");
    Mat g = haar_frame(rng, n, n);
    if (g.determinant() < 0) g.col(n - 1) *= -1;
    return Rotation(std::move(g), 1e-10);
}

Rotation complete_frame(const StiefelFrame& xi) {
    const int n = xi.n();
    const int p = xi.p();
    const int k = n - p;
    Mat g = Mat::Identity(n, n);
    for (int j = 0; j < p; ++j) {
        Vec c = g.col(k + j);
        Vec u = c - xi.mat().col(j);
        double nu = u.squaredNorm();
        if (nu <= 1e-24) continue;
        g -= (2.0 / nu) * u * (u.transpose() * g);
    }
    if (g.determinant() < 0) {
        if (k == 0) throw Error(ErrorKind::InvalidArgument, "no complement column to fix the sign");
        g.col(0) *= -1;
    }
    return Rotation(std::move(g), 1e-10);
}

}  // namespace matgeom

namespace matgeom {

SmallMat cone_gamma_factor(Rng& rng, int m, double beta) {
    if (!(beta > 0.5 * (m - 1)))
        throw Error(ErrorKind::ParameterOutOfRange, "cone gamma sampler needs beta > (m-1)/2");
    SmallMat t = SmallMat::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        t(j, j) = std::sqrt(gamma_variate(rng, beta - 0.5 * j));
        for (int l = j + 1; l < m; ++l) t(j, l) = std_normal(rng) * std::sqrt(0.5);
    }
    return t;
}

}  // namespace matgeom
