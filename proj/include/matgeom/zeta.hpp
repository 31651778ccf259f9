#pragma once

#include <string>

#include "matgeom/cone_quad.hpp"

namespace matgeom {

// Importance sampler on M_{n,p} whose density is proportional to
// |y|_p^{a-n} exp(-c tr y'y): y = v t with v Haar on V_{n,p} and t't from the
// cone gamma law of order a/2, scaled by 1/c.
//   int g(y) |y|^{a-n} dy = norm() * E[g(y) exp(c tr y'y)]
class ZetaProposal {
public:
    ZetaProposal(int n, int p, double a, double c);
    // Returns log |y|_p.
    double sample(Rng& rng, Mat& y) const;
    double norm() const { return norm_; }
    double rate() const { return c_; }

private:
    int n_, p_;
    double a_, c_, norm_;
};

enum class ZetaRoute { RegularQuadrature, WallachMeasure, GaussianClosedForm };

enum class ZetaMethod { Auto, Quadrature, MonteCarlo, ClosedForm };

// Integral-order measure formulas; R2 and R3 need k < m.
enum class WallachRoute { R1, Znk, R2, R3 };

struct ZetaResult {
    ComplexEstimate value;
    Complex alpha;
    ZetaRoute route = ZetaRoute::RegularQuadrature;
    std::string method;  // radial-cone, polar-mc, closed-form, zn0, r1, znk, r2, r3
};

std::string to_string(ZetaRoute r);
std::string to_string(WallachRoute r);
WallachRoute wallach_route_from_string(const std::string& s);

// Z(f, alpha - n) = int f(x) |x|_m^{alpha - n} dx for Re alpha > m - 1.
// Radial f reduces to a cone integral; otherwise polar importance sampling.
ZetaResult zeta_integral(const TestFunction& f, Complex alpha, const QuadratureSpec& spec,
                         Rng& rng, ZetaMethod method = ZetaMethod::Auto);

// Z(f, alpha - n) / Gamma_m(alpha/2), extended to alpha in {0, ..., m - 1}.
ZetaResult normalized_zeta(const TestFunction& f, Complex alpha, const QuadratureSpec& spec,
                           Rng& rng, ZetaMethod method = ZetaMethod::Auto);

// (zeta_k, f) for k in {1, ..., n}.
ZetaResult zeta_wallach(const TestFunction& f, int k, const QuadratureSpec& spec, Rng& rng,
                        WallachRoute route = WallachRoute::R1);

Report verify_functional_equation(const TestFunction& f, double alpha, const QuadratureSpec& spec,
                                  Rng& rng);

Report verify_eq_3_5(const TestFunction& f, double alpha, double eps, const QuadratureSpec& spec,
                     Rng& rng);

}  // namespace matgeom
