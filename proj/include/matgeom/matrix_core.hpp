#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "matgeom/error.hpp"
#include "matgeom/rng.hpp"

namespace matgeom {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
// m x m matrices; m <= 8 follows from n*m <= 64 with n >= m.
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 8, 8>;

inline constexpr int kMaxEntries = 64;
inline constexpr double kFrameTol = 1e-12;
inline constexpr double kRankTol = 1e-10;

// A point of M_{n,m}.
class RectMatrix {
public:
    RectMatrix(int n, int m);
    explicit RectMatrix(Mat a);
    static RectMatrix from_row_major(int n, int m, std::span<const double> entries);

    int rows() const { return int(a_.rows()); }
    int cols() const { return int(a_.cols()); }
    double operator()(int i, int j) const { return a_(i, j); }
    const Mat& mat() const { return a_; }
    std::vector<double> row_major() const;

private:
    Mat a_;
};

// A symmetric m x m matrix, symmetric by construction.
class SymMatrix {
public:
    explicit SymMatrix(int m);
    // Symmetrizes a; rejects asymmetry beyond 1e-12 relative.
    explicit SymMatrix(const SmallMat& a);
    // Upper triangle, row by row: s11, s12, ..., s1m, s22, ...
    static SymMatrix from_upper(int m, std::span<const double> upper);

    int size() const { return int(a_.rows()); }
    double operator()(int i, int j) const { return a_(i, j); }
    const SmallMat& mat() const { return a_; }
    std::vector<double> upper() const;

private:
    SmallMat a_;
};

class UpperTriangular {
public:
    explicit UpperTriangular(SmallMat t);
    int size() const { return int(t_.rows()); }
    double operator()(int i, int j) const { return t_(i, j); }
    const SmallMat& mat() const { return t_; }

private:
    SmallMat t_;
};

// A point of the cone P_m. Keeps the triangular factor r = t't.
class PosDefMatrix {
public:
    explicit PosDefMatrix(const SymMatrix& s);
    explicit PosDefMatrix(const SmallMat& a);
    static PosDefMatrix identity(int m);
    static PosDefMatrix from_factor(const UpperTriangular& t);
    // Caller guarantees t upper triangular with positive diagonal.
    static PosDefMatrix from_factor_unchecked(const SmallMat& t);

    int size() const { return int(a_.rows()); }
    double operator()(int i, int j) const { return a_(i, j); }
    const SmallMat& mat() const { return a_; }
    const SmallMat& factor() const { return t_; }
    double det() const { return det_; }
    SymMatrix sym() const { return SymMatrix(a_); }

private:
    PosDefMatrix() = default;
    SmallMat a_;
    SmallMat t_;
    double det_ = 0.0;
};

// An orthonormal p-frame in R^n.
class StiefelFrame {
public:
    explicit StiefelFrame(Mat v, double tol = kFrameTol);
    int n() const { return int(v_.rows()); }
    int p() const { return int(v_.cols()); }
    const Mat& mat() const { return v_; }

private:
    Mat v_;
};

// An element of SO(n).
class Rotation {
public:
    explicit Rotation(Mat g, double tol = kFrameTol);
    static Rotation identity(int n);
    int n() const { return int(g_.rows()); }
    const Mat& mat() const { return g_; }

private:
    Mat g_;
};

struct Polar {
    StiefelFrame v;
    PosDefMatrix r;
};

double vol_factor(const RectMatrix& x);
double vol_factor(const Mat& x);
Polar polar_decompose(const RectMatrix& x);
UpperTriangular triangular_factor(const PosDefMatrix& r);
StiefelFrame haar_stiefel(Rng& rng, int n, int p);
Rotation haar_rotation(Rng& rng, int n);
// g with g * [0; I_p] = xi, det g = +1; identity when xi = [0; I_p].
Rotation complete_frame(const StiefelFrame& xi);

// Helpers used across modules.
Mat gaussian_matrix(Rng& rng, int n, int m);
SmallMat sym_sqrt(const SmallMat& s);
SmallMat sym_pow(const SmallMat& s, double p);
double sigma_min_ratio(const Mat& x);

}  // namespace matgeom

namespace matgeom {

// Upper triangular t such that t't has density |w|^{beta-d} e^{-tr w} / Gamma_m(beta)
// on P_m (Bartlett construction). Requires beta > (m-1)/2.
SmallMat cone_gamma_factor(Rng& rng, int m, double beta);

}  // namespace matgeom
