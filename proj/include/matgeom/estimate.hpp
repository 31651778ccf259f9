#pragma once

#include <complex>
#include <cstddef>

namespace matgeom {

using Complex = std::complex<double>;

// A numerical value with an error bar. For Monte Carlo results std_error is
// the standard error of the mean; for quadrature it is the level-to-level
// difference of the double-exponential rule.
template <class T>
struct Estimate {
    T value{};
    double std_error = 0.0;
    std::size_t n_samples = 0;
};

using MCEstimate = Estimate<double>;
using ComplexEstimate = Estimate<Complex>;

template <class T>
Estimate<T> exact(T value) {
    return {value, 0.0, 1};
}

}  // namespace matgeom
