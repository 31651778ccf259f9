#pragma once

#include <cstddef>

namespace matgeom {

enum class Strategy { Auto, NestedTanhSinh, MonteCarlo };

// Tolerance and budget contract shared by the integrators.
struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    std::size_t max_evals = 200'000'000;
    Strategy strategy = Strategy::Auto;
    std::size_t samples = 200'000;  // Monte Carlo sample budget
    unsigned workers = 1;

    void validate() const;
};

}  // namespace matgeom
