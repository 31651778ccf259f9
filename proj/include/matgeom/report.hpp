#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "matgeom/estimate.hpp"

namespace matgeom {

using json = nlohmann::json;

// Outcome of one identity check.
struct Report {
    std::string id;
    json params = json::object();
    Complex lhs{};
    double std_error = 0.0;
    Complex rhs{};
    bool pass = false;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    json extra = json::object();
};

// |lhs - rhs| <= max(abs_tol, 3 * stderr)
bool stochastic_pass(Complex lhs, Complex rhs, double std_error, double abs_tol);
bool relative_pass(Complex lhs, Complex rhs, double rel_tol);
double relative_error(Complex lhs, Complex rhs);

// Combined standard error of two independent estimates.
double combined_error(double a, double b);

json complex_to_json(Complex z);
json to_json(const Report& r);

}  // namespace matgeom
