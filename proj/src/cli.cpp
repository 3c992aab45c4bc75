#include "spectral_hardy/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "spectral_hardy/angular.hpp"
#include "spectral_hardy/classifier.hpp"
#include "spectral_hardy/errors.hpp"
#include "spectral_hardy/extension.hpp"
#include "spectral_hardy/format.hpp"
#include "spectral_hardy/fracops.hpp"
#include "spectral_hardy/specfun.hpp"
#include "spectral_hardy/verify.hpp"
#include "spectral_hardy/witness.hpp"

namespace spectral_hardy::cli {

namespace {

using format::json_number;
using format::JsonObject;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    int dim = 3;
    double s = 0.5;
    double m = 0.0;
    std::string coupling = "const:0";
    std::size_t basis_size = 64;
    double tolerance = 1e-8;
    std::string format = "text";
    std::string output;
    double alpha = NAN;
    std::string coupling_range;
    double b = 1.0;
    std::vector<int> suites;

    angular::SpectralConfig spectral() const {
        angular::SpectralConfig cfg;
        cfg.basis_size = basis_size;
        cfg.tolerance = tolerance;
        return cfg;
    }
};

double parse_double(const std::string& text, const char* what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw UsageError(std::string("invalid number for ") + what + ": '" + text + "'");
    return v;
}

angular::CouplingDescriptor parse_coupling(const std::string& spec, int dim) {
    if (spec.rfind("const:", 0) == 0) return angular::CouplingDescriptor::constant(parse_double(spec.substr(6), "--coupling"));
    if (spec.rfind("fourier:", 0) == 0) {
        if (dim != 2) throw UsageError("fourier couplings need --dim 2");
        try {
            return angular::CouplingDescriptor::load_fourier_file(spec.substr(8));
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    throw UsageError("--coupling must be const:<float> or fourier:<path>");
}

std::vector<double> parse_range(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("--coupling-range must be a:b:step");
    const double a = parse_double(spec.substr(0, c1), "--coupling-range");
    const double b = parse_double(spec.substr(c1 + 1, c2 - c1 - 1), "--coupling-range");
    const double step = parse_double(spec.substr(c2 + 1), "--coupling-range");
    if (!(step > 0.0) || b < a) throw UsageError("--coupling-range needs a <= b and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (n > 100000) throw UsageError("--coupling-range has too many points");
    std::vector<double> out;
    // When step divides the interval the end points are hit exactly.
    const bool exact = n > 1 && std::abs((n - 1) * step - (b - a)) <= 1e-9 * std::max(1.0, b - a);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(exact ? a + (b - a) * double(i) / double(n - 1) : a + step * double(i));
    return out;
}

std::string esa_text(const std::optional<bool>& esa) { return esa ? (*esa ? "true" : "false") : "null"; }

std::string render_report(const RunConfig& cfg, const std::vector<std::pair<std::string, std::string>>& json_fields,
                          const std::vector<std::pair<std::string, std::string>>& text_fields) {
    std::ostringstream os;
    if (cfg.format == "json") {
        JsonObject o;
        for (const auto& [k, v] : json_fields) o.raw(k, v);
        os << o.str() << '\n';
    } else if (cfg.format == "csv") {
        for (std::size_t i = 0; i < text_fields.size(); ++i) os << (i ? "," : "") << text_fields[i].first;
        os << '\n';
        for (std::size_t i = 0; i < text_fields.size(); ++i) os << (i ? "," : "") << text_fields[i].second;
        os << '\n';
    } else {
        for (const auto& [k, v] : text_fields) os << k << ": " << v << '\n';
    }
    return os.str();
}

// A report field kept in three renderings.
struct Fields {
    std::vector<std::pair<std::string, std::string>> json, text;
    void number(const std::string& k, double v, bool csv_scientific) {
        json.emplace_back(k, json_number(v));
        text.emplace_back(k, csv_scientific ? format::scientific(v) : json_number(v));
    }
    void boolean(const std::string& k, bool v) {
        json.emplace_back(k, v ? "true" : "false");
        text.emplace_back(k, v ? "true" : "false");
    }
    void optional_bool(const std::string& k, const std::optional<bool>& v) {
        json.emplace_back(k, esa_text(v));
        text.emplace_back(k, esa_text(v));
    }
    void string(const std::string& k, const std::string& v) {
        json.emplace_back(k, format::json_string(v));
        text.emplace_back(k, v);
    }
    void integer(const std::string& k, long long v) {
        json.emplace_back(k, std::to_string(v));
        text.emplace_back(k, std::to_string(v));
    }
    void raw(const std::string& k, const std::string& json_value, const std::string& text_value) {
        json.emplace_back(k, json_value);
        text.emplace_back(k, text_value);
    }
    std::string render(const RunConfig& cfg) const { return render_report(cfg, json, text); }
};

struct Outcome {
    std::string body;
    int code = kExitOk;
};

Outcome cmd_classify(const RunConfig& cfg) {
    const auto coupling = parse_coupling(cfg.coupling, cfg.dim);
    const auto r = classifier::classify(cfg.dim, cfg.s, cfg.m, coupling, cfg.spectral());
    Outcome out;
    if (cfg.format == "json") {
        out.body = classifier::to_json(r) + "\n";
    } else {
        const bool sci = cfg.format == "csv";
        Fields f;
        f.number("mu1", r.mu1, sci);
        f.boolean("positivity_ok", r.positivity_ok);
        f.optional_bool("esa", r.esa);
        f.number("margin", r.margin, sci);
        f.number("gamma_exp", r.gamma_exp, sci);
        f.number("alpha_exp", r.alpha_exp, sci);
        if (r.critical_lambda) f.number("critical_lambda", *r.critical_lambda, sci);
        else f.raw("critical_lambda", "null", "null");
        f.number("est_error", r.est_error, sci);
        f.boolean("marginal", r.marginal);
        out.body = f.render(cfg);
    }
    out.code = (!r.esa || r.marginal || !r.converged) ? kExitIndeterminate : kExitOk;
    return out;
}

Outcome cmd_mu1(const RunConfig& cfg) {
    const auto coupling = parse_coupling(cfg.coupling, cfg.dim);
    const auto r = angular::mu1(cfg.dim, cfg.s, coupling, cfg.spectral());
    const bool sci = cfg.format == "csv";
    Fields f;
    f.number("mu1", r.mu1, sci);
    f.number("trace", r.trace, sci);
    f.boolean("converged", r.converged);
    f.number("est_error", r.est_error, sci);
    f.integer("basis_size", static_cast<long long>(r.basis_size));
    return {f.render(cfg), r.converged ? kExitOk : kExitIndeterminate};
}

Outcome cmd_lambda(const RunConfig& cfg) {
    const bool sci = cfg.format == "csv";
    Fields f;
    f.integer("N", cfg.dim);
    f.number("s", cfg.s, sci);
    if (std::isnan(cfg.alpha)) {
        f.number("critical_lambda", angular::critical_coupling(cfg.dim, cfg.s), sci);
        f.number("lambda_endpoint", angular::lambda_endpoint(cfg.dim, cfg.s), sci);
    } else {
        f.number("alpha", cfg.alpha, sci);
        f.number("lambda", angular::lambda_of_alpha(cfg.dim, cfg.s, cfg.alpha), sci);
    }
    return {f.render(cfg), kExitOk};
}

Outcome cmd_witness_check(const RunConfig& cfg) {
    const auto coupling = parse_coupling(cfg.coupling, cfg.dim);
    const auto w = witness::build_witness(cfg.dim, cfg.s, cfg.b, coupling, cfg.spectral());
    double ode = 0.0;
    for (double r = 1e-3; r <= 50.0; r *= 1.25)
        ode = std::max({ode, witness::radial_ode_residual(w, r), witness::companion_ode_residual(w, r)});
    const auto l2 = witness::l2_membership(w);
    const auto ex = witness::near_origin_exponents(w);
    const double tail = witness::tail_decay_rate(w);
    double weak = NAN;
    if (cfg.dim == 3 && coupling.is_constant())
        weak = witness::weak_identity_residual(w, fracops::RadialFunction::bump(0.5, 2.0));

    const bool sci = cfg.format == "csv";
    Fields f;
    f.number("nu1", w.nu1, sci);
    f.boolean("in_l2", l2.in_l2);
    f.number("ode_residual_max", ode, sci);
    f.number("weak_residual", weak, sci);
    JsonObject fit;
    fit.number("f_exp", ex.f_exp).number("g_exp", ex.g_exp);
    fit.number("f_expected", ex.f_expected).number("g_expected", ex.g_expected);
    fit.number("tail_rate", tail).number("sqrt_b", std::sqrt(cfg.b));
    if (cfg.format == "json") {
        f.raw("exp_fit", fit.str(), "");
    } else {
        f.number("f_exp", ex.f_exp, sci);
        f.number("g_exp", ex.g_exp, sci);
        f.number("f_expected", ex.f_expected, sci);
        f.number("g_expected", ex.g_expected, sci);
        f.number("tail_rate", tail, sci);
    }
    f.boolean("l2_boundary", l2.boundary);
    return {f.render(cfg), kExitOk};
}

Outcome cmd_extension_check(const RunConfig& cfg) {
    if (cfg.dim != 3) throw UsageError("extension-check works in dimension 3");
    const double s = cfg.s, m = cfg.m > 0.0 ? cfg.m : 1.0;
    const auto u = fracops::RadialFunction::gaussian();
    double mass = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0})
        mass = std::max(mass, std::abs(extension::kernel_mass(s, m, t).value - specfun::theta_profile(s, m * t)));
    const fracops::RadialTransform F(u);
    const std::vector<double> radii{0.25, 1.0, 2.0};
    double dual = 0.0;
    for (double t : {0.5, 0.05}) {
        const auto four = extension::extend_radial_fourier(F, s, m, t, radii);
        for (std::size_t i = 0; i < radii.size(); ++i)
            dual = std::max(dual, std::abs(extension::extend_radial(u, s, m, t, radii[i]) - four[i].value));
    }
    const auto w = extension::ExtensionField::of(u, s, m);
    const auto res = extension::pde_residual(w, 1.0, 1.0, 1e-3);
    const auto flux = extension::boundary_flux_check(u, s, m, 1.0);
    const double flux_err = std::abs(flux.lhs - flux.rhs) / std::max(1.0, std::abs(flux.rhs));

    const bool pass = mass <= 1e-8 && dual <= 1e-6 && std::abs(res.value) <= 1e-4 * res.scale && flux_err <= 1e-3;
    const bool sci = cfg.format == "csv";
    Fields f;
    f.number("s", s, sci);
    f.number("m", m, sci);
    f.number("mass_error", mass, sci);
    f.number("dual_route_error", dual, sci);
    f.number("pde_residual", res.value, sci);
    f.number("pde_scale", res.scale, sci);
    f.number("flux_lhs", flux.lhs, sci);
    f.number("flux_rhs", flux.rhs, sci);
    f.number("flux_error", flux_err, sci);
    f.boolean("pass", pass);
    return {f.render(cfg), pass ? kExitOk : kExitIndeterminate};
}

Outcome cmd_verify_all(const RunConfig& cfg) {
    const auto results = verify::run_suites(cfg.suites);
    std::ostringstream os;
    bool all = true;
    if (cfg.format == "json") {
        os << '[';
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            JsonObject o;
            o.integer("id", r.id).string("name", r.name).boolean("pass", r.pass).string("detail", r.detail);
            os << (i ? "," : "") << o.str();
            all = all && r.pass;
        }
        os << "]\n";
    } else if (cfg.format == "csv") {
        os << "id,name,pass,seconds\n";
        for (const auto& r : results) {
            os << r.id << ',' << r.name << ',' << (r.pass ? "true" : "false") << ',' << format::scientific(r.seconds)
               << '\n';
            all = all && r.pass;
        }
    } else {
        for (const auto& r : results) {
            os << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.id << " " << r.name << ": " << r.detail << '\n';
            all = all && r.pass;
        }
    }
    return {os.str(), all ? kExitOk : kExitIndeterminate};
}

int sweep_threads() {
    const char* env = std::getenv("SPECTRAL_HARDY_THREADS");
    if (!env || !*env) return 0;
    int n = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), n);
    if (ec != std::errc() || *ptr != '\0' || n < 0) throw UsageError("SPECTRAL_HARDY_THREADS must be a nonnegative integer");
    return n;
}

Outcome cmd_sweep(const RunConfig& cfg) {
    if (cfg.coupling_range.empty()) throw UsageError("sweep needs --coupling-range a:b:step");
    const auto grid = parse_range(cfg.coupling_range);
    angular::check_problem(cfg.dim, cfg.s);
    std::vector<classifier::EsaReport> reports(grid.size());
    std::vector<std::string> errors(grid.size());
    auto work = [&](std::size_t i) {
        try {
            reports[i] = classifier::classify(cfg.dim, cfg.s, cfg.m, angular::CouplingDescriptor::constant(grid[i]),
                                              cfg.spectral());
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };
    const int threads = std::min<int>(sweep_threads(), static_cast<int>(grid.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) work(i);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error(e);

    std::ostringstream os;
    if (cfg.format == "json") {
        os << '[';
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& r = reports[i];
            JsonObject o;
            o.integer("N", cfg.dim).number("s", cfg.s).number("coupling", grid[i]).number("mu1", r.mu1);
            if (r.esa) o.boolean("esa", *r.esa); else o.null("esa");
            o.number("gamma", r.gamma_exp).number("alpha", r.alpha_exp).number("margin", r.margin);
            os << (i ? "," : "") << o.str();
        }
        os << "]\n";
    } else {
        os << "N,s,coupling,mu1,esa,gamma,alpha,margin\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& r = reports[i];
            os << cfg.dim << ',' << format::scientific(cfg.s) << ',' << format::scientific(grid[i]) << ','
               << format::scientific(r.mu1) << ',' << esa_text(r.esa) << ',' << format::scientific(r.gamma_exp) << ','
               << format::scientific(r.alpha_exp) << ',' << format::scientific(r.margin) << '\n';
        }
    }
    return {os.str(), kExitOk};
}

bool wants_json(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--format=json") return true;
        if (a == "--format" && i + 1 < argc && std::string(argv[i + 1]) == "json") return true;
    }
    return false;
}

void report_error(std::ostream& err, bool json, const std::string& kind, const std::string& message) {
    if (json) {
        JsonObject o;
        o.string("error", kind).string("message", message);
        err << o.str() << '\n';
    } else {
        err << "error (" << kind << "): " << message << '\n';
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const bool json_errors = wants_json(argc, argv);
    RunConfig cfg;
    CLI::App app{"Angular Hardy eigenvalues and essential self-adjointness of relativistic Hardy operators",
                 "spectral-hardy"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub, bool with_coupling) {
        sub->add_option("--dim", cfg.dim, "space dimension N")->capture_default_str();
        sub->add_option("--s", cfg.s, "fractional order s")->capture_default_str();
        sub->add_option("--m", cfg.m, "mass m (echoed; does not enter the decision)")->capture_default_str();
        if (with_coupling)
            sub->add_option("--coupling", cfg.coupling, "const:<float> or fourier:<path>")->capture_default_str();
        sub->add_option("--basis-size", cfg.basis_size, "radial Galerkin functions")->capture_default_str();
        sub->add_option("--tolerance", cfg.tolerance, "eigenvalue convergence tolerance")->capture_default_str();
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->capture_default_str();
        sub->add_option("--output", cfg.output, "write the report to this file");
    };

    auto* classify = app.add_subcommand("classify", "essential self-adjointness report");
    common(classify, true);
    auto* mu1 = app.add_subcommand("mu1", "first angular eigenvalue");
    common(mu1, true);
    auto* lambda = app.add_subcommand("lambda", "lambda(alpha), or lambda(s) without --alpha");
    common(lambda, false);
    lambda->add_option("--alpha", cfg.alpha, "exponent alpha in (0, (N-2s)/2)");
    auto* wit = app.add_subcommand("witness-check", "witness function checks");
    common(wit, true);
    wit->add_option("--b", cfg.b, "parameter b > 0")->capture_default_str();
    auto* ext = app.add_subcommand("extension-check", "extension identities on a Gaussian (N = 3)");
    common(ext, false);
    auto* ver = app.add_subcommand("verify-all", "run the acceptance suites");
    common(ver, false);
    ver->add_option("--suite", cfg.suites, "suite ids to run (default: all)")->check(CLI::Range(1, verify::suite_count()));
    auto* sweep = app.add_subcommand("sweep", "classify over a grid of constant couplings");
    common(sweep, false);
    sweep->add_option("--coupling-range", cfg.coupling_range, "a:b:step")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, json_errors, "usage", e.what());
        return kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    Outcome result;
    try {
        if (cfg.subcommand == "classify") result = cmd_classify(cfg);
        else if (cfg.subcommand == "mu1") result = cmd_mu1(cfg);
        else if (cfg.subcommand == "lambda") result = cmd_lambda(cfg);
        else if (cfg.subcommand == "witness-check") result = cmd_witness_check(cfg);
        else if (cfg.subcommand == "extension-check") result = cmd_extension_check(cfg);
        else if (cfg.subcommand == "verify-all") result = cmd_verify_all(cfg);
        else result = cmd_sweep(cfg);
    } catch (const UsageError& e) {
        report_error(err, json_errors, "usage", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        report_error(err, json_errors, "range", e.what());
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        report_error(err, json_errors, "convergence", e.what());
        return kExitIndeterminate;
    } catch (const std::exception& e) {
        report_error(err, json_errors, "runtime", e.what());
        return kExitIndeterminate;
    }

    if (cfg.output.empty()) {
        out << result.body;
    } else {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) {
            report_error(err, json_errors, "usage", "cannot open output file " + cfg.output);
            return kExitUsage;
        }
        f << result.body;
    }
    return result.code;
}

}  // namespace spectral_hardy::cli
