#pragma once

#include <functional>

#include "matgeom/cone_quad.hpp"
#include "matgeom/matrix_core.hpp"

namespace matgeom {

struct DiffSpec {
    double base_step = 1e-2;  // scaled per coordinate by max(1, |entry|)
    int richardson_levels = 3;
    void validate() const;
};

// det(d'd) on M_{n,m}; m in {1, 2}, n*m <= 12.
double cayley_laplace(const TestFunction& f, const RectMatrix& x, const DiffSpec& spec = {});

// det(eta_ij d/dr_ij) on symmetric matrices, eta = 1 on the diagonal, 1/2 off it.
double d_operator(const RadialFn& g, const PosDefMatrix& r, const DiffSpec& spec = {});

// 4^m |r|^{d-n/2} D |r|^{n/2-d+1} D f0
double radial_part_L(const RadialFn& f0, const PosDefMatrix& r, int n, const DiffSpec& spec = {});

// Delta^k f(x), k in {1, 2}; radial functions go through L^k.
double cayley_laplace_power(const TestFunction& f, const RectMatrix& x, int k, const DiffSpec& spec = {});

// |x|_m^lambda as a radial test function (no closed forms).
TestFunction det_power_function(int n, int m, double lambda);

}  // namespace matgeom
