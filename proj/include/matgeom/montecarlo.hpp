#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "matgeom/estimate.hpp"
#include "matgeom/rng.hpp"

namespace matgeom {

namespace detail {

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }
    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        double nt = double(n + o.n);
        double d = o.mean - mean;
        mean += d * double(o.n) / nt;
        m2 += o.m2 + d * d * double(n) * double(o.n) / nt;
        n += o.n;
    }
    double variance_of_mean() const { return n > 1 ? m2 / double(n - 1) / double(n) : 0.0; }
};

template <class T>
struct Accumulator;

template <>
struct Accumulator<double> {
    Moments re;
    void add(double x) { re.add(x); }
    void merge(const Accumulator& o) { re.merge(o.re); }
    Estimate<double> result() const {
        return {re.mean, std::sqrt(re.variance_of_mean()), re.n};
    }
};

template <>
struct Accumulator<Complex> {
    Moments re, im;
    void add(Complex x) {
        re.add(x.real());
        im.add(x.imag());
    }
    void merge(const Accumulator& o) {
        re.merge(o.re);
        im.merge(o.im);
    }
    Estimate<Complex> result() const {
        return {Complex(re.mean, im.mean),
                std::sqrt(re.variance_of_mean() + im.variance_of_mean()), re.n};
    }
};

}  // namespace detail

// Mean of sampler(rng) over `samples` draws. Worker w draws from stream w of
// a base seed taken from `rng`; partials are merged in worker order, so the
// result depends only on (rng state, samples, workers).
template <class T, class Sampler>
Estimate<T> mc_mean(Rng& rng, std::size_t samples, unsigned workers, Sampler&& sampler) {
    if (workers == 0) workers = 1;
    if (samples < workers) workers = unsigned(samples ? samples : 1);
    const std::uint64_t base = rng();
    std::vector<detail::Accumulator<T>> parts(workers);
    auto run = [&](unsigned w) {
        Rng local = make_stream(base, w);
        std::size_t count = samples / workers + (w < samples % workers ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) parts[w].add(sampler(local));
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    detail::Accumulator<T> total;
    for (auto& p : parts) total.merge(p);
    return total.result();
}

// Multivariate t density on R^p with nu degrees of freedom, unit scale.
struct StudentT {
    int p;
    double nu;
    double log_norm;
    StudentT(int p_, double nu_) : p(p_), nu(nu_) {
        log_norm = std::lgamma(0.5 * (nu + p)) - std::lgamma(0.5 * nu) - 0.5 * p * std::log(std::numbers::pi);
    }
    // fills w and returns log density
    double sample(Rng& rng, double* w) const {
        std::gamma_distribution<double> chi(0.5 * nu, 2.0);
        double s = std::sqrt(chi(rng));
        double r2 = 0.0;
        for (int i = 0; i < p; ++i) {
            w[i] = std_normal(rng) / s;
            r2 += w[i] * w[i];
        }
        return log_norm - 0.5 * (nu + p) * std::log1p(r2);
    }
};

template <class T>
Estimate<T> scale(const Estimate<T>& e, double c) {
    return {e.value * c, e.std_error * std::abs(c), e.n_samples};
}

template <class T>
Estimate<T> scale(const Estimate<T>& e, Complex c) {
    return {T(e.value * c), e.std_error * std::abs(c), e.n_samples};
}

}  // namespace matgeom
