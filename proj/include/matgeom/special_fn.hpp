#pragma once

#include <complex>
#include <optional>

#include "matgeom/estimate.hpp"
#include "matgeom/matrix_core.hpp"
#include "matgeom/spec.hpp"

namespace matgeom {

inline constexpr double kPoleTol = 1e-9;

// Either a finite complex value or a pole marker carrying the index j of the
// offending factor.
class GammaValue {
public:
    static GammaValue finite(Complex v) { return GammaValue(v, -1); }
    static GammaValue pole(int j) { return GammaValue(Complex{}, j); }

    bool is_pole() const { return pole_ >= 0; }
    int pole_index() const { return pole_; }
    // Throws Error(Pole) on a pole.
    Complex value() const;
    double real() const { return value().real(); }

private:
    GammaValue(Complex v, int pole) : v_(v), pole_(pole) {}
    Complex v_;
    int pole_;
};

bool near_nonpositive_integer(Complex z, double tol = kPoleTol);

// Scalar gamma via Lanczos (g = 7) with reflection. Throws Error(Pole) at
// nonpositive integers.
Complex gamma_fn(Complex z);

GammaValue siegel_gamma(int m, Complex alpha);
GammaValue siegel_beta(int m, Complex alpha, Complex beta);
Complex pochhammer(Complex lambda, int m);
Complex bernstein_b(Complex alpha, int m);
Complex bernstein_cal_B(Complex lambda, int n, int m);
Complex bernstein_Bk(Complex alpha, int k, int n, int m);
GammaValue riesz_const(int n, int m, Complex alpha);
double stiefel_volume(int n, int m);

enum class NamedConst { CNM, Gamma1, Gamma2, C1, C2, CLambda };

struct ConstParams {
    int n = 0;
    int m = 0;
    int k = 0;
    double lambda = 0.0;
};

GammaValue named_const(NamedConst id, const ConstParams& p);

enum class KForm { K1, K2 };

// Matrix K-Bessel function by nested quadrature in triangular coordinates
// (m <= 2) or Monte Carlo (m >= 3, needs rng).
ComplexEstimate k_bessel(int m, Complex nu, const PosDefMatrix& r, const QuadratureSpec& spec,
                         KForm form = KForm::K1, Rng* rng = nullptr);

}  // namespace matgeom
