#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "matgeom/suites.hpp"

using namespace matgeom;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string num(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string num(Complex z) {
    if (z.imag() == 0.0) return num(z.real());
    return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

// Row-major "a,b,c,..." into a rows x cols matrix.
Mat parse_matrix(const std::string& s, int rows, int cols, const std::string& name) {
    std::vector<double> v;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, name + ": '" + tok + "' is not a number");
        }
    }
    if (int(v.size()) != rows * cols)
        throw Error(ErrorKind::InvalidArgument, name + ": expected " + std::to_string(rows * cols) + " entries, got " +
                                                    std::to_string(v.size()));
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = v[std::size_t(i * cols + j)];
    return a;
}

PosDefMatrix parse_pd(const std::string& s, int m, const std::string& name) {
    if (s.empty()) return PosDefMatrix::identity(m);
    return PosDefMatrix(SmallMat(parse_matrix(s, m, m, name)));
}

struct Global {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::optional<std::size_t> samples;
    std::optional<double> rel_tol, abs_tol;
    std::string json_path, config_path;
    std::vector<std::string> suites;
    bool timing = false;
};

QuadratureSpec make_spec(const Global& g) {
    QuadratureSpec s;
    if (g.rel_tol) s.rel_tol = *g.rel_tol;
    if (g.abs_tol) s.abs_tol = *g.abs_tol;
    if (g.samples) s.samples = *g.samples;
    s.workers = g.workers;
    s.validate();
    return s;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path);
    out << j.dump(2) << '\n';
}

struct Computed {
    std::string command;
    json params = json::object();
    Complex value{};
    std::optional<double> std_error;
    std::string note;
};

int emit(const Global& g, const Computed& c) {
    std::cout << c.command << " = " << num(c.value);
    if (c.std_error) std::cout << "  (stderr " << num(*c.std_error) << ")";
    if (!c.note.empty()) std::cout << "  [" << c.note << "]";
    std::cout << '\n';
    if (!g.json_path.empty()) {
        json j{{"schema_version", kReportSchemaVersion},
               {"version", kLibraryVersion},
               {"command", c.command},
               {"params", c.params},
               {"value", complex_to_json(c.value)}};
        if (c.std_error) j["stderr"] = *c.std_error;
        write_json(g.json_path, j);
    }
    return kExitPass;
}

int run_suites(Global& g, const CLI::App& app) {
    SuiteConfig cfg;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + g.config_path);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
        }
        cfg = config_from_json(j);
    }
    // flags override the file
    if (app.count("--seed")) cfg.seed = g.seed;
    if (app.count("--workers")) cfg.workers = g.workers;
    if (g.samples) cfg.samples = g.samples;
    if (g.rel_tol) cfg.rel_tol = g.rel_tol;
    if (g.abs_tol) cfg.abs_tol = g.abs_tol;
    if (g.timing) cfg.timing = true;
    if (!g.suites.empty()) cfg.suites = g.suites;
    validate(cfg);
    if (cfg.suites.empty()) throw Error(ErrorKind::ConfigError, "no suite requested (use --suite or a config file)");
    for (const auto& id : cfg.suites)
        if (id != "all" && std::find(suite_ids().begin(), suite_ids().end(), id) == suite_ids().end())
            throw Error(ErrorKind::UnknownSuite, "unknown suite '" + id + "'");

    std::vector<SuiteReport> reports;
    bool ok = true;
    for (const auto& id : cfg.suites) {
        SuiteReport s = run_suite(id, cfg);
        for (const auto& r : s.reports) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  lhs " << num(r.lhs) << "  rhs " << num(r.rhs);
            if (r.std_error > 0) std::cout << "  stderr " << num(r.std_error);
            if (r.extra.contains("error")) std::cout << "  error: " << r.extra["error"].get<std::string>();
            std::cout << '\n';
        }
        std::cout << "suite " << s.id << ": " << s.passed << " passed, " << s.failed << " failed";
        if (cfg.timing) std::cout << ", " << num(std::round(s.wall_ms)) << " ms";
        std::cout << '\n';
        ok = ok && s.ok();
        reports.push_back(std::move(s));
    }
    if (!g.json_path.empty()) {
        if (reports.size() == 1) {
            write_json(g.json_path, to_json(reports[0]));
        } else {
            json arr = json::array();
            for (const auto& s : reports) arr.push_back(to_json(s));
            write_json(g.json_path, arr);
        }
    }
    return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix-argument special functions, integral operators and identity checks"};
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--workers", g.workers, "Worker threads for Monte Carlo")->check(CLI::PositiveNumber);
    app.add_option("--samples", g.samples, "Monte Carlo sample budget");
    app.add_option("--rel-tol", g.rel_tol, "Integrator relative tolerance");
    app.add_option("--abs-tol", g.abs_tol, "Integrator absolute tolerance");
    app.add_option("--json", g.json_path, "Write the report as JSON");
    app.add_option("--config", g.config_path, "JSON config file; flags override it");
    app.add_option("--suite", g.suites, "Suite id (repeatable); 'all' runs every suite");
    app.add_flag("--timing", g.timing, "Record wall times in reports");

    auto* compute = app.add_subcommand("compute", "Evaluate a single quantity");
    compute->require_subcommand(1);

    int m = 0, n = 0, k = 0;
    double alpha = 0, alpha_im = 0, nu = 0, nu_im = 0;
    std::string t_str, x_str, tau_str, r_str, xi_str, shift_str, form = "K1", route = "heat";
    bool x0 = false, gauss = false, normalized = false;

    auto* c_gamma = compute->add_subcommand("gamma", "Siegel gamma Gamma_m(alpha)");
    c_gamma->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_gamma->add_option("--alpha", alpha)->required();
    c_gamma->add_option("--alpha-im", alpha_im);

    auto* c_zeta = compute->add_subcommand("zeta", "Zeta integral Z(f, alpha - n)");
    c_zeta->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    c_zeta->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_zeta->add_option("--alpha", alpha)->required();
    c_zeta->add_option("--alpha-im", alpha_im);
    auto* zg = c_zeta->add_flag("--gaussian", gauss, "f = exp(-tr x'x)");
    c_zeta->add_option("--shift", shift_str, "f = exp(-|x - x0|^2), x0 row-major")->excludes(zg);
    c_zeta->add_flag("--normalized", normalized, "Divide by Gamma_m(alpha/2)");

    auto* c_riesz = compute->add_subcommand("riesz", "Riesz potential of the heat kernel h_tau");
    c_riesz->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    c_riesz->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_riesz->add_option("--alpha", alpha)->required();
    c_riesz->add_option("--tau", tau_str, "m x m, row-major (default identity)");
    c_riesz->add_option("--x", x_str, "n x m, row-major (default 0)");
    c_riesz->add_option("--route", route)->check(CLI::IsMember({"heat", "direct"}));

    auto* c_radon = compute->add_subcommand("radon", "Radon transform of the heat kernel h_tau");
    c_radon->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    c_radon->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_radon->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    c_radon->add_option("--tau", tau_str, "m x m, row-major (default identity)");
    c_radon->add_option("--t", t_str, "(n-k) x m, row-major (default 0)");
    c_radon->add_option("--xi", xi_str, "n x (n-k) orthonormal frame (default Haar from --seed)");

    auto* c_kb = compute->add_subcommand("kbessel", "Matrix K-Bessel function K_nu(r)");
    c_kb->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_kb->add_option("--nu", nu)->required();
    c_kb->add_option("--nu-im", nu_im);
    c_kb->add_option("--r", r_str)->required();
    c_kb->add_option("--form", form)->check(CLI::IsMember({"K1", "K2"}));

    auto* c_heat = compute->add_subcommand("heat", "Heat kernel h_t(x)");
    c_heat->add_option("--n", n)->required()->check(CLI::PositiveNumber);
    c_heat->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_heat->add_option("--t", t_str, "m x m, row-major")->required();
    auto* hx = c_heat->add_option("--x", x_str, "n x m, row-major");
    c_heat->add_flag("--x0", x0, "Evaluate at x = 0")->excludes(hx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (!compute->parsed()) return run_suites(g, app);

        const QuadratureSpec spec = make_spec(g);
        Rng rng = make_stream(g.seed, 0);
        Computed c;
        if (c_gamma->parsed()) {
            c.command = "gamma";
            c.params = {{"m", m}, {"alpha", complex_to_json({alpha, alpha_im})}};
            auto v = siegel_gamma(m, Complex(alpha, alpha_im));
            if (v.is_pole()) throw Error(ErrorKind::Pole, "Gamma_m has a pole at this alpha");
            c.value = v.value();
        } else if (c_zeta->parsed()) {
            if (!gauss && shift_str.empty()) throw Error(ErrorKind::InvalidArgument, "zeta needs --gaussian or --shift");
            TestFunction f = gauss ? GaussianMixture::gaussian(n, m).to_test_function()
                                   : GaussianMixture::shifted_gaussian(parse_matrix(shift_str, n, m, "--shift"))
                                         .to_test_function();
            Complex a(alpha, alpha_im);
            ZetaResult z = normalized ? normalized_zeta(f, a, spec, rng) : zeta_integral(f, a, spec, rng);
            c.command = normalized ? "normalized-zeta" : "zeta";
            c.params = {{"n", n}, {"m", m}, {"alpha", complex_to_json(a)}, {"f", gauss ? "gaussian" : "shifted"}};
            c.value = z.value.value;
            c.std_error = z.value.std_error;
            c.note = z.method;
        } else if (c_riesz->parsed()) {
            auto f = heat_family(n, parse_pd(tau_str, m, "--tau"));
            Mat x = x_str.empty() ? Mat::Zero(n, m) : parse_matrix(x_str, n, m, "--x");
            auto e = route == "heat" ? riesz_heat(f, x, alpha, spec) : riesz_direct(f, x, alpha, spec, rng);
            c.command = "riesz";
            c.params = {{"n", n}, {"m", m}, {"alpha", alpha}, {"route", route}};
            c.value = e.value;
            c.std_error = e.std_error;
        } else if (c_radon->parsed()) {
            if (k >= n) throw Error(ErrorKind::InvalidArgument, "radon needs 0 < k < n");
            auto f = heat_family(n, parse_pd(tau_str, m, "--tau"));
            StiefelFrame xi = xi_str.empty() ? haar_stiefel(rng, n, n - k)
                                             : StiefelFrame(parse_matrix(xi_str, n, n - k, "--xi"), 1e-10);
            Mat t = t_str.empty() ? Mat::Zero(n - k, m) : parse_matrix(t_str, n - k, m, "--t");
            auto e = radon_transform(f, MatrixPlane(xi, t), spec, rng);
            c.command = "radon";
            c.params = {{"n", n}, {"m", m}, {"k", k}, {"xi", matrix_to_json(xi.mat())}};
            c.value = e.value;
            c.std_error = e.std_error;
        } else if (c_kb->parsed()) {
            auto r = PosDefMatrix(SmallMat(parse_matrix(r_str, m, m, "--r")));
            auto e = k_bessel(m, Complex(nu, nu_im), r, spec, form == "K1" ? KForm::K1 : KForm::K2, &rng);
            c.command = "kbessel";
            c.params = {{"m", m}, {"nu", complex_to_json({nu, nu_im})}, {"form", form}};
            c.value = e.value;
            c.std_error = e.std_error;
        } else if (c_heat->parsed()) {
            if (!x0 && x_str.empty()) throw Error(ErrorKind::InvalidArgument, "heat needs --x or --x0");
            auto t = PosDefMatrix(SmallMat(parse_matrix(t_str, m, m, "--t")));
            Mat x = x0 ? Mat::Zero(n, m) : parse_matrix(x_str, n, m, "--x");
            c.command = "heat";
            c.params = {{"n", n}, {"m", m}, {"t", matrix_to_json(t.mat())}};
            c.value = heat_kernel(x, t);
        }
        return emit(g, c);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
