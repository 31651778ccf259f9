#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "matgeom/quadrature.hpp"

namespace matgeom::quad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Returns false when the node is not representable.
bool make_node(Axis axis, double tau, double h, Node& out) {
    const double u = kHalfPi * std::sinh(tau);
    const double du = kHalfPi * std::cosh(tau);
    switch (axis) {
        case Axis::Unit: {
            // x = 1 / (1 + exp(-2u))
            double x, xc;
            if (u >= 0) {
                double e = std::exp(-2 * u);
                x = 1 / (1 + e);
                xc = e / (1 + e);
            } else {
                double e = std::exp(2 * u);
                x = e / (1 + e);
                xc = 1 / (1 + e);
            }
            if (!(x > 0.0) || !(x < 1.0)) return false;
            out = {x, h * 2 * du * x * xc};
            return out.w > 0;
        }
        case Axis::HalfLine: {
            if (std::abs(u) > 690) return false;
            double x = std::exp(u);
            out = {x, h * du * x};
            return true;
        }
        case Axis::RealLine: {
            if (std::abs(u) > 690) return false;
            out = {std::sinh(u), h * du * std::cosh(u)};
            return true;
        }
    }
    return false;
}

Rule build(Axis axis, int level) {
    const double h = std::ldexp(1.0, -level);
    Rule r;
    make_node(axis, 0.0, h, r.center);
    for (int sign : {1, -1}) {
        auto& side = sign > 0 ? r.pos : r.neg;
        for (int k = 1;; ++k) {
            Node nd;
            if (!make_node(axis, sign * k * h, h, nd)) break;
            side.push_back(nd);
        }
    }
    return r;
}

}  // namespace

const Rule& rule(Axis axis, int level) {
    static std::array<std::array<Rule, kMaxLevel + 1>, 3> table;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int a = 0; a < 3; ++a)
            for (int l = 0; l <= kMaxLevel; ++l) table[a][l] = build(Axis(a), l);
    });
    if (level < 0 || level > kMaxLevel)
        throw Error(ErrorKind::InvalidArgument, "quadrature level out of range");
    return table[int(axis)][level];
}

}  // namespace matgeom::quad
