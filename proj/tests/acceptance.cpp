// Runs every suite once and prints one PASS/FAIL line per acceptance
// criterion. A criterion passes when all of its checks pass and their summed
// wall time is inside the limit.
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "matgeom/suites.hpp"

using namespace matgeom;

namespace {

struct Selector {
    std::string suite;
    std::string prefix;  // report id prefix; empty takes the whole suite
};

struct Criterion {
    int number;
    std::string title;
    std::vector<Selector> checks;
    double limit_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "Siegel gamma: cone quadrature vs product formula", {{"gamma", "gamma-cone"}}, 10},
    {2, "cone beta at (2,2) is pi/45", {{"beta", ""}}, 30},
    {3, "Pochhammer and splitting identities", {{"gamma", "gamma-pochhammer"}, {"gamma", "gamma-splitting"}}, 1},
    {4, "K-Bessel forms, bounds and small-argument limit", {{"bessel", ""}}, 60},
    {5, "Bernstein identity and its iterate", {{"bernstein", ""}}, 30},
    {6, "radial part of the Cayley-Laplace operator", {{"radial", ""}}, 60},
    {7, "Gaussian zeta closed form and functional equation", {{"zeta", "zeta-gaussian"}, {"functional-eq", ""}}, 120},
    {8, "epsilon-regularized zeta identity", {{"zeta", "zeta-regularized"}}, 120},
    {9, "Wallach points", {{"wallach", ""}}, 120},
    {10, "heat kernel mass, semigroup and Fourier form", {{"heat", ""}}, 60},
    {11, "Riesz potential: two routes and heat probe", {{"riesz", "riesz-two-route"}, {"riesz", "riesz-heat-probe"}}, 120},
    {12, "Riesz semigroup and Laplacian inverse", {{"riesz", "riesz-semigroup"}, {"riesz", "riesz-laplacian-inverse"}}, 120},
    {13, "weighted identity (4,2,1,5)", {{"riesz", "riesz-weighted"}}, 120},
    {14, "appendix integrals A1-A4", {{"appendix", ""}}, 120},
    {15, "Radon suite: laws, Fuglede, even-k inversion", {{"radon", ""}, {"fuglede", ""}, {"inversion", ""}}, 600},
};

}  // namespace

int main() {
    SuiteConfig cfg;
    cfg.seed = 1;
    cfg.timing = true;

    std::map<std::string, SuiteReport> runs;
    for (const auto& id : suite_ids()) runs[id] = run_suite(id, cfg);

    int failed = 0;
    for (const auto& c : kCriteria) {
        int total = 0, bad = 0;
        double ms = 0.0;
        for (const auto& sel : c.checks)
            for (const auto& r : runs.at(sel.suite).reports) {
                if (r.id.rfind(sel.prefix, 0) != 0) continue;
                ++total;
                ms += r.wall_ms;
                if (!r.pass) {
                    ++bad;
                    std::printf("      failing check %s: lhs %.17g rhs %.17g stderr %.3g\n", r.id.c_str(), r.lhs.real(),
                                r.rhs.real(), r.std_error);
                }
            }
        const bool in_time = ms <= 1000.0 * c.limit_s;
        const bool ok = total > 0 && bad == 0 && in_time;
        if (!ok) ++failed;
        std::printf("%s %2d  %-52s %3d/%-3d checks  %8.2f s (limit %g s)%s\n", ok ? "PASS" : "FAIL", c.number,
                    c.title.c_str(), total - bad, total, ms / 1000.0, c.limit_s, in_time ? "" : "  over time");
    }
    std::printf("%d of %zu criteria passed\n", int(kCriteria.size()) - failed, kCriteria.size());
    return failed == 0 ? 0 : 1;
}
