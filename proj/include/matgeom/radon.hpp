#pragma once

#include <functional>
#include <vector>

#include "matgeom/riesz.hpp"

namespace matgeom {

// The matrix k-plane {x in M_{n,m} : xi'x = t}, xi in V_{n,n-k}.
struct MatrixPlane {
    StiefelFrame xi;
    Mat t;
    int k;

    MatrixPlane(StiefelFrame xi, Mat t);
    int n() const { return xi.n(); }
    int m() const { return int(t.cols()); }
};

// A function phi(xi, t) of matrix planes.
using PlaneFn = std::function<double(const Mat& xi, const Mat& t)>;

enum class RadonMethod { Auto, ClosedForm, MonteCarlo };

// First k columns of the deterministic completion g_xi: x = basis * w + xi t
// runs over the plane.
Mat plane_basis(const StiefelFrame& xi);

// f^(xi, t) = int_{M_{k,m}} f(g_xi [w; t]) dw. Auto uses the Gaussian-mixture
// closed form when f has one. `basis` overrides the first k columns of g_xi
// (any orthonormal basis of the complement of xi).
MCEstimate radon_transform(const TestFunction& f, const MatrixPlane& plane, const QuadratureSpec& spec,
                           Rng& rng, RadonMethod method = RadonMethod::Auto, const Mat* basis = nullptr);

// The closed-form transform of a Gaussian mixture as a plane function.
PlaneFn radon_function(const TestFunction& f);

// phi-check(x) = sigma_{n,n-k}^{-1} int phi(xi, xi'x) dxi by Haar frames.
MCEstimate dual_radon(const PlaneFn& phi, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng);
// Same over a given frame set (common random numbers).
MCEstimate dual_radon(const PlaneFn& phi, const Mat& x, const std::vector<Mat>& frames);

std::vector<Mat> haar_frames(Rng& rng, int n, int p, std::size_t count);

struct RadonDatum {
    Mat xi;
    Mat t;
    MCEstimate value;
};

// {xi, t, value, stderr} with row-major arrays.
json to_json(const RadonDatum& d);
json radon_data_json(const std::vector<RadonDatum>& data);

// Checks.
Report verify_radon_mass(const TestFunction& f, const StiefelFrame& xi, const QuadratureSpec& spec, Rng& rng);
// f^(xi theta', theta t) against f^(xi, t).
Report verify_radon_evenness(const TestFunction& f, const MatrixPlane& plane, const Mat& theta,
                             const QuadratureSpec& spec, Rng& rng, RadonMethod method = RadonMethod::Auto);
// f_y(x) = f(x + y): f_y^(xi, t) against f^(xi, xi'y + t). Needs a mixture.
Report verify_shift_equivariance(const TestFunction& f, const MatrixPlane& plane, const Mat& y,
                                 const QuadratureSpec& spec, Rng& rng);
// (f o g)^(xi, t) = f^(gamma xi, t beta + xi'gamma'y) for g(x) = gamma x beta + y. Needs a mixture.
Report verify_affine_law(const TestFunction& f, const MatrixPlane& plane, const Mat& gamma, const Mat& beta,
                         const Mat& y, const QuadratureSpec& spec, Rng& rng);
// Two completions of xi give the same Monte Carlo transform.
Report verify_completion_independence(const TestFunction& f, const MatrixPlane& plane, const QuadratureSpec& spec,
                                      Rng& rng);
// <f, phi-check> against sigma^{-1} int dxi int phi(xi, t) f^(xi, t) dt.
Report verify_duality(const TestFunction& f, const PlaneFn& phi, int k, const QuadratureSpec& spec, Rng& rng);

// gamma_1 (f^)-check(x) against I^k f(x), 1 <= k <= n - m.
Report fuglede_check(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng);

// (-1)^{mk/2} Delta^{k/2}[gamma_1 g-check](x) for g = f^, k even in the strip.
// Frames are drawn once and shared by every stencil point; the error comes
// from independent batches.
MCEstimate invert_radon_even_k(const PlaneFn& g, const Mat& x, int k, int n, int m, const QuadratureSpec& spec,
                               Rng& rng);
Report verify_even_k_inversion(const TestFunction& f, const Mat& x, int k, const QuadratureSpec& spec, Rng& rng,
                               double rel_tol = 1e-2);

}  // namespace matgeom
