#pragma once

#include <optional>

#include "matgeom/diff_ops.hpp"
#include "matgeom/zeta.hpp"

namespace matgeom {

// h_t(x) = (4 pi)^{-nm/2} |t|^{-n/2} exp(-tr(t^{-1} x'x) / 4)
double heat_kernel(const Mat& x, const PosDefMatrix& t);

// amplitude * h_tau0 with all closed forms attached.
TestFunction heat_family(int n, const PosDefMatrix& tau0, double amplitude = 1.0);

// (W_t f)(x) = int h_t(x - y) f(y) dy. Uses the closed form when f has one
// and closed_form is set; otherwise averages f(x - z) over z ~ h_t.
MCEstimate gauss_weierstrass(const TestFunction& f, const Mat& x, const PosDefMatrix& t,
                             const QuadratureSpec& spec, Rng& rng, bool closed_form = true);

// I_-^lambda g(t) = Gamma_m(lambda)^{-1} int_{u > 0} g(t + u) |u|^{lambda - d} du;
// t = nullopt means t = 0. g.meta describes the decay of g.
MCEstimate gg_fractional(const RadialFn& g, const std::optional<PosDefMatrix>& t, double lambda,
                         int m, const QuadratureSpec& spec, Rng* rng = nullptr);

// I^alpha f(x) = gamma_{n,m}(alpha)^{-1} int f(x - y) |y|^{alpha - n} dy, by the
// polar proposal.
MCEstimate riesz_direct(const TestFunction& f, const Mat& x, double alpha, const QuadratureSpec& spec,
                        Rng& rng);

// I^alpha f(x) = Gamma_m(alpha/2)^{-1} int |t|^{alpha/2 - d} (W_t f)(x) dt for
// m - 1 < alpha < n - m + 1; needs the closed-form heat smoothing of f.
MCEstimate riesz_heat(const TestFunction& f, const Mat& x, double alpha, const QuadratureSpec& spec);

// Same at a fixed quadrature level, so the result is a smooth function of x.
MCEstimate riesz_heat_fixed(const TestFunction& f, const Mat& x, double alpha, int level);

// (zeta_k * f)(x) = c_1 int_{V_{n,k}} dv int_{M_{k,m}} f(x - v w) dw
MCEstimate zeta_convolution(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec,
                            Rng& rng);

// Checks at fixed tolerances; rel_tol applies to deterministic comparisons.
Report verify_heat_mass(int n, const PosDefMatrix& t, const QuadratureSpec& spec, Rng& rng,
                        double rel_tol = 1e-6);
Report verify_heat_semigroup(int n, const PosDefMatrix& t, const PosDefMatrix& tau, const Mat& x,
                             const QuadratureSpec& spec, Rng& rng);
Report verify_heat_fourier(const PosDefMatrix& t, const Mat& y, const QuadratureSpec& spec, Rng& rng);
Report verify_riesz_two_route(const TestFunction& f, const Mat& x, double alpha,
                              const QuadratureSpec& spec, Rng& rng);
// W_t[I^alpha f](x) against I_-^{alpha/2}[(W_. f)(x)](t).
Report verify_rgg(const TestFunction& f, const Mat& x, double alpha, const PosDefMatrix& t,
                  const QuadratureSpec& spec, Rng& rng);
Report verify_riesz_semigroup(const TestFunction& f, const Mat& x, double alpha, double beta,
                              const QuadratureSpec& spec, Rng& rng, double rel_tol = 1e-3);
Report verify_delta_inverts_riesz(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec,
                                  double rel_tol = 1e-3);
Report verify_weighted_identity(const TestFunction& f, int k, double lambda, const QuadratureSpec& spec,
                                Rng& rng);

}  // namespace matgeom
