#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "spectral_hardy/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "spectral-hardy");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = spectral_hardy::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

}  // namespace

using nlohmann::json;

TEST_CASE("classify") {
    auto at = run({"classify", "--dim", "3", "--s", "0.5", "--coupling", "const:0.5", "--format", "json"});
    CHECK(at.code == 2);  // on the threshold: resolved to esa, flagged marginal
    CHECK(json::parse(at.out)["esa"] == true);

    auto above = run({"classify", "--dim", "3", "--s", "0.5", "--coupling", "const:0.6", "--format", "json"});
    CHECK(above.code == 0);
    CHECK(json::parse(above.out)["esa"] == false);

    auto free = run({"classify", "--dim", "3", "--s", "0.5", "--coupling", "const:0", "--format", "json"});
    CHECK(free.code == 0);
    const auto j = json::parse(free.out);
    CHECK(j["esa"] == true);
    CHECK(j["mu1"].get<double>() == 0.0);
    CHECK(free.out.find("{\"mu1\":") == 0);

    auto text = run({"classify", "--s", "0.5", "--coupling", "const:0.2"});
    CHECK(text.code == 0);
    CHECK(text.out.find("esa: true") != std::string::npos);
}

TEST_CASE("byte-identical JSON") {
    const std::vector<std::string> args{"classify", "--dim", "4", "--s", "0.3", "--coupling", "const:0.7", "--format", "json"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("mu1 and lambda") {
    auto m = run({"mu1", "--dim", "3", "--s", "0.5", "--coupling", "const:0", "--format", "json"});
    CHECK(m.code == 0);
    CHECK(json::parse(m.out)["mu1"].get<double>() == doctest::Approx(0.0).epsilon(1e-12));

    auto l = run({"lambda", "--dim", "3", "--s", "0.5", "--alpha", "0.5", "--format", "json"});
    CHECK(l.code == 0);
    CHECK(json::parse(l.out)["lambda"].get<double>() == doctest::Approx(0.5).epsilon(1e-14));

    auto c = run({"lambda", "--dim", "5", "--s", "0.5", "--format", "csv"});
    CHECK(lines(c.out).size() == 2);
    CHECK(lines(c.out)[0] == "N,s,critical_lambda,lambda_endpoint");
    const auto row = lines(c.out)[1];
    const auto a = row.find(',', row.find(',') + 1) + 1;
    const auto critical = row.substr(a, row.find(',', a) - a);
    CHECK(critical.find("e+00") != std::string::npos);
    CHECK(std::stod(critical) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("sweep") {
    auto r = run({"sweep", "--dim", "3", "--s", "0.5", "--coupling-range", "0:1:0.05"});
    CHECK(r.code == 0);
    const auto L = lines(r.out);
    REQUIRE(L.size() == 22);
    CHECK(L[0] == "N,s,coupling,mu1,esa,gamma,alpha,margin");
    for (std::size_t i = 1; i < L.size(); ++i) {
        std::vector<std::string> f;
        std::istringstream is(L[i]);
        for (std::string c; std::getline(is, c, ',');) f.push_back(c);
        REQUIRE(f.size() == 8);
        const double a = std::stod(f[2]);
        CHECK(a == doctest::Approx(0.05 * (i - 1)).epsilon(1e-12));
        CHECK(f[2].find('e') != std::string::npos);
        if (a <= 0.5 + 1e-12) CHECK(f[4] == "true");
        else CHECK(f[4] != "true");
    }
}

TEST_CASE("threaded sweep keeps grid order") {
    const std::vector<std::string> args{"sweep", "--dim", "3", "--s", "0.4", "--coupling-range", "0.3:0.5:0.05"};
    const auto serial = run(args);
    setenv("SPECTRAL_HARDY_THREADS", "3", 1);
    const auto threaded = run(args);
    unsetenv("SPECTRAL_HARDY_THREADS");
    CHECK(serial.code == 0);
    CHECK(serial.out == threaded.out);
    setenv("SPECTRAL_HARDY_THREADS", "x", 1);
    CHECK(run(args).code == 1);
    unsetenv("SPECTRAL_HARDY_THREADS");
}

TEST_CASE("usage errors") {
    auto bad = run({"classify", "--coupling", "const:abc", "--format", "json"});
    CHECK(bad.code == 1);
    CHECK(bad.out.empty());
    CHECK(lines(bad.err).size() == 1);
    CHECK(json::parse(bad.err)["error"] == "usage");

    auto range = run({"classify", "--s", "1.2", "--format=json"});
    CHECK(range.code == 1);
    CHECK(json::parse(range.err)["error"] == "range");

    CHECK(run({"classify", "--coupling", "linear:1"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"classify", "--format", "xml"}).code == 1);
    CHECK(run({"sweep", "--coupling-range", "1:0:0.1"}).code == 1);
    CHECK(run({"mu1", "--dim", "3", "--coupling", "fourier:whatever.txt"}).code == 1);
    auto text = run({"classify", "--s", "abc"});
    CHECK(text.code == 1);
    CHECK(text.err.find("error") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("Fourier coupling and output file") {
    const char* coeffs = "test_cli_coupling.txt";
    const char* out = "test_cli_report.json";
    {
        std::ofstream f(coeffs);
        f << "0 0.2 0\n1 0.05 0\n";
    }
    auto r = run({"mu1", "--dim", "2", "--s", "0.4", "--coupling", std::string("fourier:") + coeffs, "--format", "json",
                  "--output", out});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out);
    const auto j = json::parse(f);
    CHECK(j["converged"] == true);
    std::remove(coeffs);
    std::remove(out);
}

TEST_CASE("witness-check and extension-check") {
    auto w = run({"witness-check", "--dim", "3", "--s", "0.5", "--coupling", "const:0.3", "--format", "json"});
    CHECK(w.code == 0);
    const auto j = json::parse(w.out);
    for (const char* k : {"nu1", "in_l2", "ode_residual_max", "weak_residual", "exp_fit"}) CHECK(j.contains(k));
    CHECK(j["ode_residual_max"].get<double>() <= 1e-8);
    CHECK(j["weak_residual"].get<double>() <= 1e-3);
    CHECK(j["exp_fit"].contains("tail_rate"));

    auto w2 = run({"witness-check", "--dim", "2", "--s", "0.5", "--coupling", "const:0.1", "--format", "json"});
    CHECK(w2.code == 0);
    CHECK(json::parse(w2.out)["weak_residual"].is_null());

    auto e = run({"extension-check", "--s", "0.5", "--format", "json"});
    CHECK(e.code == 0);
    CHECK(json::parse(e.out)["pass"] == true);
}

TEST_CASE("verify-all on a single suite") {
    auto v = run({"verify-all", "--suite", "2", "--format", "json"});
    CHECK(v.code == 0);
    const auto j = json::parse(v.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["id"] == 2);
    CHECK(j[0]["pass"] == true);
    CHECK(run({"verify-all", "--suite", "11"}).code == 1);
}
