#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "matgeom/suites.hpp"

using namespace matgeom;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(MATGEOM_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, p)) out.append(buf, got);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Value printed after "<name> = ".
double printed(const std::string& out) {
    auto pos = out.find(" = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(out.substr(pos + 3));
}

std::string tmp(const std::string& name) { return std::string(MATGEOM_TMP_DIR) + "/" + name; }

}  // namespace

TEST_CASE("gamma suite matches the golden report") {
    SuiteConfig cfg;
    cfg.seed = 1;
    auto s = run_suite("gamma", cfg);
    CHECK(s.ok());
    CHECK(s.passed == 18);
    CHECK(to_json(s).dump(2) + "\n" == slurp(std::string(MATGEOM_GOLDEN_DIR) + "/gamma_seed1.json"));
}

TEST_CASE("stochastic suites are reproducible") {
    SuiteConfig cfg;
    cfg.seed = 7;
    for (const char* id : {"appendix", "radon", "fuglede"}) {
        auto a = to_json(run_suite(id, cfg)).dump();
        auto b = to_json(run_suite(id, cfg)).dump();
        CHECK(a == b);
    }
    cfg.workers = 2;
    cfg.samples = 20000;
    CHECK(to_json(run_suite("functional-eq", cfg)).dump() == to_json(run_suite("functional-eq", cfg)).dump());
    // a different seed moves the Monte Carlo values
    SuiteConfig other = cfg;
    other.seed = 8;
    CHECK(to_json(run_suite("functional-eq", cfg)).dump() != to_json(run_suite("functional-eq", other)).dump());
}

TEST_CASE("timing is off by default") {
    auto s = run_suite("beta", SuiteConfig{});
    CHECK(s.wall_ms == 0.0);
    for (const auto& r : s.reports) CHECK(r.wall_ms == 0.0);
    SuiteConfig t;
    t.timing = true;
    CHECK(run_suite("beta", t).wall_ms > 0.0);
}

TEST_CASE("unknown suites and bad configs") {
    try {
        run_suite("bogus", SuiteConfig{});
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSuite);
    }
    auto kind = [](const json& j) {
        try {
            config_from_json(j);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidArgument;
    };
    CHECK(kind(json{{"sed", 1}}) == ErrorKind::ConfigError);
    CHECK(kind(json{{"seed", "one"}}) == ErrorKind::ConfigError);
    CHECK(kind(json{{"workers", 0}}) == ErrorKind::ConfigError);
    CHECK(kind(json{{"rel_tol", -1.0}}) == ErrorKind::ConfigError);
    CHECK(kind(json::array()) == ErrorKind::ConfigError);

    SuiteConfig base;
    base.seed = 3;
    auto c = config_from_json(json{{"samples", 500}, {"suites", {"gamma", "beta"}}}, base);
    CHECK(c.seed == 3);
    CHECK(*c.samples == 500);
    CHECK(c.suites.size() == 2);
}

TEST_CASE("compute subcommands") {
    auto g = cli("compute gamma --m 2 --alpha 1.5");
    CHECK(g.code == 0);
    CHECK(printed(g.out) == doctest::Approx(kPi / 2).epsilon(1e-14));

    auto h = cli("compute heat --n 4 --m 2 --t 1,0,0,1 --x0");
    CHECK(h.code == 0);
    CHECK(printed(h.out) == doctest::Approx(std::pow(4 * kPi, -4)).epsilon(1e-14));

    // c_{4,2} Gamma_2(1) = 2 pi^3 * pi
    auto z = cli("compute zeta --gaussian --n 4 --m 2 --alpha 2");
    CHECK(z.code == 0);
    CHECK(printed(z.out) == doctest::Approx(2 * std::pow(kPi, 4)).epsilon(1e-7));

    auto k = cli("compute kbessel --m 1 --nu 0.5 --r 1");
    CHECK(k.code == 0);
    CHECK(printed(k.out) == doctest::Approx(2 * std::cyl_bessel_k(0.5, 2.0)).epsilon(1e-7));

    auto j = cli("compute gamma --m 1 --alpha 5 --json " + tmp("cli_gamma.json"));
    CHECK(j.code == 0);
    CHECK(json::parse(slurp(tmp("cli_gamma.json")))["value"].get<double>() == doctest::Approx(24.0));
}

TEST_CASE("exit codes") {
    CHECK(cli("--suite bogus").code == 2);
    CHECK(cli("--no-such-flag").code == 2);
    CHECK(cli("compute gamma --m 2").code == 2);
    CHECK(cli("compute gamma --m 2 --alpha 0.5").code == 2);  // pole
    CHECK(cli("compute heat --n 4 --m 2 --t 1,0,0 --x0").code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("--suite beta").code == 0);
    // two samples cannot reach the stderr target
    CHECK(cli("--suite functional-eq --samples 2").code == 1);
}

TEST_CASE("flags override the config file") {
    {
        std::ofstream c(tmp("cli_config.json"));
        c << R"({"seed": 5, "suites": ["beta"]})";
    }
    auto r = cli("--config " + tmp("cli_config.json") + " --seed 9 --json " + tmp("cli_beta.json"));
    CHECK(r.code == 0);
    auto j = json::parse(slurp(tmp("cli_beta.json")));
    CHECK(j["seed"].get<int>() == 9);
    CHECK(j["suite"] == "beta");
    {
        std::ofstream c(tmp("cli_bad.json"));
        c << R"({"seed": 5, "colour": 1})";
    }
    CHECK(cli("--config " + tmp("cli_bad.json")).code == 2);
}
