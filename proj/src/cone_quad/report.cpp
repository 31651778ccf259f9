#include "matgeom/report.hpp"

#include <algorithm>
#include <cmath>

namespace matgeom {

bool stochastic_pass(Complex lhs, Complex rhs, double std_error, double abs_tol) {
    double diff = std::abs(lhs - rhs);
    return std::isfinite(diff) && diff <= std::max(abs_tol, 3.0 * std_error);
}

double relative_error(Complex lhs, Complex rhs) {
    double scale = std::abs(rhs);
    double diff = std::abs(lhs - rhs);
    return scale > 0 ? diff / scale : diff;
}

bool relative_pass(Complex lhs, Complex rhs, double rel_tol) {
    double e = relative_error(lhs, rhs);
    return std::isfinite(e) && e <= rel_tol;
}

double combined_error(double a, double b) { return std::sqrt(a * a + b * b); }

json complex_to_json(Complex z) {
    if (z.imag() == 0.0) return z.real();
    return json::array({z.real(), z.imag()});
}

json to_json(const Report& r) {
    json j;
    j["id"] = r.id;
    j["params"] = r.params;
    j["lhs"] = complex_to_json(r.lhs);
    j["stderr"] = r.std_error;
    j["rhs"] = complex_to_json(r.rhs);
    j["pass"] = r.pass;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["wall_ms"] = r.wall_ms;
    for (auto it = r.extra.begin(); it != r.extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

}  // namespace matgeom
