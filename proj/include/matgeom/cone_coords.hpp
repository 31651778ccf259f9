#pragma once

// Triangular coordinates r = t't on P_m: the first m coordinates are the
// diagonal of t, the rest its strict upper triangle row by row.

#include <cmath>
#include <vector>

#include "matgeom/matrix_core.hpp"
#include "matgeom/quadrature.hpp"

namespace matgeom {

inline int cone_dim(int m) { return m * (m + 1) / 2; }

inline std::vector<quad::Axis> cone_axes(int m) {
    std::vector<quad::Axis> axes(std::size_t(m), quad::Axis::HalfLine);
    axes.resize(std::size_t(cone_dim(m)), quad::Axis::RealLine);
    return axes;
}

struct ConePoint {
    SmallMat t;
    SmallMat r;
    double log_det = 0.0;  // log |r|
    double log_jac = 0.0;  // log of 2^m prod t_jj^{m-j+1}
};

inline void cone_point(int m, const double* c, ConePoint& p) {
    p.t.setZero(m, m);
    p.log_det = 0.0;
    p.log_jac = m * std::log(2.0);
    for (int i = 0; i < m; ++i) {
        p.t(i, i) = c[i];
        double lt = std::log(c[i]);
        p.log_det += 2 * lt;
        p.log_jac += (m - i) * lt;
    }
    int k = m;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) p.t(i, j) = c[k++];
    p.r.noalias() = p.t.transpose() * p.t;
}

// Inverse of an upper triangular matrix with positive diagonal.
inline SmallMat upper_inverse(const SmallMat& t) {
    const int m = int(t.rows());
    SmallMat w = SmallMat::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        w(j, j) = 1.0 / t(j, j);
        for (int i = j - 1; i >= 0; --i) {
            double s = 0.0;
            for (int l = i + 1; l <= j; ++l) s += t(i, l) * w(l, j);
            w(i, j) = -s / t(i, i);
        }
    }
    return w;
}

}  // namespace matgeom
