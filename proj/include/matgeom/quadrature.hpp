#pragma once

// Nested double-exponential quadrature over products of (0,1), (0,inf) and
// the real line.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "matgeom/error.hpp"
#include "matgeom/estimate.hpp"

namespace matgeom::quad {

enum class Axis { Unit, HalfLine, RealLine };

inline constexpr int kMaxLevel = 9;
inline constexpr int kMaxDim = 8;

struct Node {
    double x;
    double w;  // includes the step h
};

// Nodes of one level, ordered outward from tau = 0 on each side.
struct Rule {
    Node center;
    std::vector<Node> pos;
    std::vector<Node> neg;
};

const Rule& rule(Axis axis, int level);

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_evals = 100'000'000;
    int min_level = 2;
    int max_level = 7;
    // A side of the 1-D sum stops after three consecutive terms below
    // trunc * |partial sum| once |tau| >= 1.5.
    double trunc = 1e-17;
};

namespace detail {

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class T, class F>
T nested_sum(const Axis* axes, int dim, int depth, int level, F& f, double* pt,
             std::size_t& evals, double trunc) {
    const Rule& r = rule(axes[depth], level);
    const double h = std::ldexp(1.0, -level);
    auto eval = [&](const Node& nd) -> T {
        pt[depth] = nd.x;
        if (depth + 1 == dim) {
            ++evals;
            return T(f(static_cast<const double*>(pt))) * nd.w;
        }
        return nested_sum<T>(axes, dim, depth + 1, level, f, pt, evals, trunc) * nd.w;
    };
    T sum = eval(r.center);
    for (const auto* side : {&r.pos, &r.neg}) {
        int small = 0;
        for (std::size_t i = 0; i < side->size(); ++i) {
            T term = eval((*side)[i]);
            sum += term;
            if (magnitude(term) <= trunc * magnitude(sum)) {
                if (++small >= 3 && double(i + 1) * h >= 1.5) break;
            } else {
                small = 0;
            }
        }
    }
    return sum;
}

}  // namespace detail

// Product rule at a single level.
template <class T, class F>
T sum_at_level(std::span<const Axis> axes, int level, F&& f, std::size_t& evals,
               double trunc = 1e-17) {
    if (axes.empty() || axes.size() > std::size_t(kMaxDim))
        throw Error(ErrorKind::InvalidArgument, "quadrature dimension out of range");
    double pt[kMaxDim] = {};
    return detail::nested_sum<T>(axes.data(), int(axes.size()), 0, level, f, pt, evals,
                                 trunc);
}

// Refines the level until two successive levels agree to tolerance.
template <class T, class F>
Estimate<T> integrate(std::span<const Axis> axes, F&& f, const Options& opt = {}) {
    std::size_t total = 0;
    T prev{};
    bool have_prev = false;
    for (int level = opt.min_level; level <= opt.max_level && level <= kMaxLevel; ++level) {
        std::size_t evals = 0;
        T s = sum_at_level<T>(axes, level, f, evals, opt.trunc);
        total += evals;
        if (!std::isfinite(detail::magnitude(s)))
            throw Error(ErrorKind::NonIntegrable, "quadrature produced a non-finite value");
        if (have_prev) {
            double err = detail::magnitude(s - prev);
            if (err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(s)))
                return {s, std::max(err, 1e-15 * detail::magnitude(s)), total};
        }
        prev = s;
        have_prev = true;
        std::size_t next = evals << axes.size();
        if (total + next > opt.max_evals) break;
    }
    throw Error(ErrorKind::BudgetExceeded,
                "quadrature tolerance not reached within the evaluation budget");
}

// Fixed level; the error is the difference to the next coarser level.
template <class T, class F>
Estimate<T> integrate_fixed(std::span<const Axis> axes, int level, F&& f,
                            double trunc = 1e-17) {
    std::size_t evals = 0;
    T fine = sum_at_level<T>(axes, level, f, evals, trunc);
    T coarse = sum_at_level<T>(axes, level - 1, f, evals, trunc);
    double err = std::max(detail::magnitude(fine - coarse), 1e-15 * detail::magnitude(fine));
    return {fine, err, evals};
}

}  // namespace matgeom::quad
