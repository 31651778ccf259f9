#include "matgeom/diff_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

namespace matgeom {

namespace {

// One factor of a mixed partial: coordinate index and derivative order.
struct Factor {
    int coord;
    int order;
};

struct Term {
    double coef;
    std::vector<Factor> factors;
};

struct Stencil1 {
    std::vector<int> offsets;
    std::vector<double> weights;  // multiply by h^{-order}
};

const Stencil1& central(int order) {
    static const Stencil1 s[5] = {
        {{0}, {1.0}},
        {{-1, 1}, {-0.5, 0.5}},
        {{-1, 0, 1}, {1.0, -2.0, 1.0}},
        {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
        {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
    };
    if (order < 0 || order > 4) throw Error(ErrorKind::InvalidArgument, "stencil order above 4");
    return s[order];
}

int permutation_sign(const std::vector<int>& p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

std::vector<Term> group_terms(const std::map<std::vector<int>, double>& acc) {
    std::vector<Term> terms;
    for (const auto& [coords, coef] : acc) {
        if (std::abs(coef) < 1e-14) continue;
        Term t{coef, {}};
        for (int c : coords) {
            if (!t.factors.empty() && t.factors.back().coord == c)
                ++t.factors.back().order;
            else
                t.factors.push_back({c, 1});
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

// det(d'd) expanded over sigma in S_m and row choices; coordinate (i, j) -> i*m + j.
std::vector<Term> cayley_terms(int n, int m) {
    std::map<std::vector<int>, double> acc;
    std::vector<int> sigma(static_cast<std::size_t>(m));
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        const int sign = permutation_sign(sigma);
        std::vector<int> rows(static_cast<std::size_t>(m), 0);
        while (true) {
            std::vector<int> coords;
            for (int j = 0; j < m; ++j) {
                coords.push_back(rows[j] * m + j);
                coords.push_back(rows[j] * m + sigma[j]);
            }
            std::sort(coords.begin(), coords.end());
            acc[coords] += sign;
            int p = 0;
            while (p < m && ++rows[p] == n) rows[p++] = 0;
            if (p == m) break;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return group_terms(acc);
}

// Symmetric coordinates: pair (i <= j) indexed row by row over the upper triangle.
int sym_index(int m, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * m - i * (i - 1) / 2 + (j - i);
}

std::vector<Term> d_terms(int m) {
    std::map<std::vector<int>, double> acc;
    std::vector<int> sigma(static_cast<std::size_t>(m));
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        double coef = permutation_sign(sigma);
        std::vector<int> coords;
        for (int j = 0; j < m; ++j) {
            if (sigma[j] != j) coef *= 0.5;
            coords.push_back(sym_index(m, j, sigma[j]));
        }
        std::sort(coords.begin(), coords.end());
        acc[coords] += coef;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return group_terms(acc);
}

// Sum of coef * mixed partial by tensor central stencils at steps h_c.
// mass receives the sum of absolute contributions, a scale for roundoff.
template <class Point, class Eval, class Perturb>
double stencil_sum(const std::vector<Term>& terms, const Point& x0, const std::vector<double>& h,
                   Eval&& eval, Perturb&& perturb, double* mass = nullptr) {
    double abs_total = 0.0;
    std::map<std::vector<std::pair<int, int>>, double> cache;
    double total = 0.0;
    for (const auto& t : terms) {
        const std::size_t nf = t.factors.size();
        std::vector<std::size_t> idx(nf, 0);
        double inv_h = 1.0;
        for (const auto& f : t.factors) inv_h /= std::pow(h[std::size_t(f.coord)], f.order);
        double sum = 0.0;
        while (true) {
            double w = 1.0;
            std::vector<std::pair<int, int>> key;
            for (std::size_t a = 0; a < nf; ++a) {
                const auto& st = central(t.factors[a].order);
                w *= st.weights[idx[a]];
                if (st.offsets[idx[a]] != 0) key.emplace_back(t.factors[a].coord, st.offsets[idx[a]]);
            }
            std::sort(key.begin(), key.end());
            auto it = cache.find(key);
            double v;
            if (it != cache.end()) {
                v = it->second;
            } else {
                Point x = x0;
                for (const auto& [c, o] : key) perturb(x, c, o * h[std::size_t(c)]);
                v = eval(x);
                cache.emplace(key, v);
            }
            sum += w * v;
            abs_total += std::abs(t.coef * w * v * inv_h);
            std::size_t p = 0;
            while (p < nf && ++idx[p] == central(t.factors[p].order).offsets.size()) idx[p++] = 0;
            if (p == nf) break;
        }
        total += t.coef * sum * inv_h;
    }
    if (mass) *mass = abs_total;
    return total;
}

struct Quotient {
    double value;
    double mass;
};

// Richardson in h^2 over levels h, h/2, h/4, ...
template <class F>
double richardson(F&& at_scale, int levels) {
    std::vector<std::vector<double>> tab(static_cast<std::size_t>(levels));
    double mass = 0.0;
    for (int l = 0; l < levels; ++l) {
        Quotient q = at_scale(std::ldexp(1.0, -l));
        mass = std::max(mass, q.mass);
        tab[l].push_back(q.value);
        if (!std::isfinite(tab[l][0])) throw Error(ErrorKind::StepUnderflow, "non-finite difference quotient");
        double f = 1.0;
        for (int k = 1; k <= l; ++k) {
            f *= 4.0;
            tab[l].push_back((f * tab[l][k - 1] - tab[l - 1][k - 1]) / (f - 1.0));
        }
    }
    const double result = tab.back().back();
    if (levels >= 3) {
        double e1 = std::abs(tab[1][0] - tab[0][0]);
        double e2 = std::abs(tab[levels - 1][0] - tab[levels - 2][0]);
        if (e2 > e1 && e2 > 1e-4 * std::abs(result) + 1e-9 * mass)
            throw Error(ErrorKind::StepUnderflow, "Richardson extrapolation diverges");
    }
    return result;
}

using SymFn = std::function<double(const SmallMat&)>;

void perturb_sym(SmallMat& r, int m, int c, double delta) {
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            if (sym_index(m, i, j) == c) {
                r(i, j) += delta;
                if (i != j) r(j, i) += delta;
                return;
            }
}

std::vector<double> sym_steps(const SmallMat& r, double base, int nesting) {
    const int m = int(r.rows());
    std::vector<double> h;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) h.push_back(base * std::max(1.0, std::abs(r(i, j))));
    // one D stencil moves r by at most max(h) in norm; keep nested points inside the cone
    Eigen::SelfAdjointEigenSolver<SmallMat> es(r, Eigen::EigenvaluesOnly);
    double reach = nesting * *std::max_element(h.begin(), h.end());
    double cap = 0.5 * es.eigenvalues()(0);
    if (reach > cap)
        for (double& v : h) v *= cap / reach;
    return h;
}

std::vector<double> scaled(const std::vector<double>& h, double s) {
    std::vector<double> out(h);
    for (double& v : out) v *= s;
    return out;
}

double apply_d_fixed(const SymFn& g, const SmallMat& r, const std::vector<double>& h, double* mass = nullptr) {
    const int m = int(r.rows());
    return stencil_sum(d_terms(m), r, h, g, [m](SmallMat& x, int c, double d) { perturb_sym(x, m, c, d); }, mass);
}

SymFn as_sym(const RadialFn& f0) {
    return [&f0](const SmallMat& s) { return f0.f0(PosDefMatrix(s)); };
}

// |s|^{n/2-d+1} D g(s) at fixed steps
SymFn l_inner(SymFn g, int n, int m, std::vector<double> h) {
    const double e = 0.5 * n - 0.5 * (m + 1) + 1.0;
    return [=](const SmallMat& s) { return std::pow(s.determinant(), e) * apply_d_fixed(g, s, h); };
}

// 4^m |r|^{d-n/2} D g(r) at fixed steps
Quotient l_outer(const SymFn& g, const SmallMat& r, int n, const std::vector<double>& h) {
    const int m = int(r.rows());
    const double c = std::pow(4.0, m) * std::pow(r.determinant(), 0.5 * (m + 1) - 0.5 * n);
    double mass = 0.0;
    double v = apply_d_fixed(g, r, h, &mass);
    return {c * v, std::abs(c) * mass};
}

// L^k f0 at r. Nested applications share one step vector and Richardson runs
// once over the composite, whose error is still a series in h^2.
double l_power(const SymFn& f0, const SmallMat& r, int n, int k, const DiffSpec& spec) {
    const int m = int(r.rows());
    auto h = sym_steps(r, spec.base_step, 2 * k);
    return richardson(
        [&](double s) {
            auto hs = scaled(h, s);
            SymFn g = f0;
            for (int i = 0; i < k; ++i) {
                g = l_inner(g, n, m, hs);
                if (i + 1 < k) {
                    SymFn inner = g;
                    g = [inner, n, hs](const SmallMat& x) { return l_outer(inner, x, n, hs).value; };
                }
            }
            return l_outer(g, r, n, hs);
        },
        spec.richardson_levels);
}

void check_shape(const TestFunction& f, const RectMatrix& x) {
    if (x.rows() != f.n || x.cols() != f.m) throw Error(ErrorKind::InvalidArgument, "point has the wrong shape");
    if (f.m < 1 || f.m > 2 || f.n * f.m > 12)
        throw Error(ErrorKind::InvalidArgument, "cayley_laplace needs m in {1,2} and n*m <= 12");
    if (!std::isnan(f.singular_power) && f.singular_power < 2 * f.m && sigma_min_ratio(x.mat()) < 0.1)
        throw Error(ErrorKind::NearSingularSet, "point too close to the rank-deficient set");
}

}  // namespace

void DiffSpec::validate() const {
    if (!(base_step > 0)) throw Error(ErrorKind::InvalidArgument, "base_step must be positive");
    if (richardson_levels < 1) throw Error(ErrorKind::InvalidArgument, "richardson_levels must be >= 1");
}

double cayley_laplace(const TestFunction& f, const RectMatrix& x, const DiffSpec& spec) {
    spec.validate();
    check_shape(f, x);
    const int n = f.n, m = f.m;
    const auto terms = cayley_terms(n, m);
    std::vector<double> h(static_cast<std::size_t>(n * m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) h[std::size_t(i * m + j)] = spec.base_step * std::max(1.0, std::abs(x(i, j)));
    return richardson(
        [&](double s) {
            std::vector<double> hs(h);
            for (double& v : hs) v *= s;
            Quotient q{};
            q.value = stencil_sum(terms, x.mat(), hs, f.f, [m](Mat& p, int c, double d) { p(c / m, c % m) += d; }, &q.mass);
            return q;
        },
        spec.richardson_levels);
}

double d_operator(const RadialFn& g, const PosDefMatrix& r, const DiffSpec& spec) {
    spec.validate();
    if (r.size() < 1 || r.size() > 3) throw Error(ErrorKind::InvalidArgument, "d_operator needs m in {1,2,3}");
    auto h = sym_steps(r.mat(), spec.base_step, 1);
    SymFn g0 = as_sym(g);
    return richardson(
        [&](double s) {
            Quotient q{};
            q.value = apply_d_fixed(g0, r.mat(), scaled(h, s), &q.mass);
            return q;
        },
        spec.richardson_levels);
}

double radial_part_L(const RadialFn& f0, const PosDefMatrix& r, int n, const DiffSpec& spec) {
    spec.validate();
    const int m = r.size();
    if (m < 1 || m > 2 || n < m) throw Error(ErrorKind::InvalidArgument, "radial_part_L needs m in {1,2}, n >= m");
    return l_power(as_sym(f0), r.mat(), n, 1, spec);
}

double cayley_laplace_power(const TestFunction& f, const RectMatrix& x, int k, const DiffSpec& spec) {
    spec.validate();
    if (k < 1 || k > 2) throw Error(ErrorKind::InvalidArgument, "cayley_laplace_power needs k in {1,2}");
    check_shape(f, x);
    if (k == 1) return cayley_laplace(f, x, spec);
    const int n = f.n, m = f.m;
    if (f.radial_profile) {
        SmallMat r = x.mat().transpose() * x.mat();
        SymFn g = [&f](const SmallMat& s) { return f.radial_profile(PosDefMatrix(s)); };
        return l_power(g, r, n, k, spec);
    }
    // Delta applied to a materialized Delta f at fixed steps
    std::vector<double> h(static_cast<std::size_t>(n * m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) h[std::size_t(i * m + j)] = spec.base_step * std::max(1.0, std::abs(x(i, j)));
    const auto terms = cayley_terms(n, m);
    auto pert = [m](Mat& p, int c, double d) { p(c / m, c % m) += d; };
    auto lap = [&](const std::function<double(const Mat&)>& g, const Mat& at) {
        return richardson(
            [&](double s) {
                std::vector<double> hs(h);
                for (double& v : hs) v *= s;
                Quotient q{};
                q.value = stencil_sum(terms, at, hs, g, pert, &q.mass);
                return q;
            },
            spec.richardson_levels);
    };
    std::function<double(const Mat&)> inner = [&](const Mat& p) { return lap(f.f, p); };
    return lap(inner, x.mat());
}

TestFunction det_power_function(int n, int m, double lambda) {
    TestFunction tf;
    tf.n = n;
    tf.m = m;
    tf.f = [lambda](const Mat& x) {
        double g = (x.transpose() * x).determinant();
        return std::pow(std::max(g, 0.0), 0.5 * lambda);
    };
    tf.radial_profile = [lambda](const PosDefMatrix& r) { return std::pow(r.det(), 0.5 * lambda); };
    tf.singular_power = lambda;
    tf.center = Mat::Zero(n, m);
    return tf;
}

}  // namespace matgeom
