#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "finfo/fitting.hpp"
#include "finfo/grid.hpp"
#include "finfo/models.hpp"
#include "finfo/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

std::string g_cli;
std::filesystem::path g_dir;

// Runs the driver with the given arguments; stdout/stderr land in files so
// tests can inspect the error JSON.
int run_cli(const std::string& args) {
    std::string cmd = "'" + g_cli + "' " + args + " > '" + (g_dir / "out.txt").string() +
                      "' 2> '" + (g_dir / "err.txt").string() + "'";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

} // namespace

TEST_CASE("solve writes energy, residual and the density columns") {
    auto spec = g_dir / "osc2.json";
    spit(spec, R"({"type":"oscillator","omega":1.0,"eps1":0.0,"eps2":0.0})");
    auto csv = g_dir / "ground.csv";
    REQUIRE(run_cli("solve --potential " + q(spec) + " -o " + q(csv)) == 0);

    auto side = nlohmann::json::parse(slurp(g_dir / "ground.json"));
    CHECK(std::abs(side["energy"].get<double>() - 0.5) < 1e-6);
    CHECK(side["residual"].get<double>() < 1e-6);
    CHECK(side["grid"]["n_points"] == 2001);

    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,psi,p");
    double best = 1e9;
    std::string line;
    while (std::getline(in, line)) {
        double x, psi, p;
        char c;
        std::istringstream ls(line);
        ls >> x >> c >> psi >> c >> p;
        if (std::abs(x) < 1e-12) best = psi;
        CHECK(std::abs(p - psi * psi) < 1e-11); // 12-digit CSV rounding
    }
    CHECK(std::abs(best - std::pow(1.0 / std::numbers::pi, 0.25)) < 1e-6);

    // Delta potentials use the closed form: residual is exactly zero.
    auto dspec = g_dir / "delta.json";
    spit(dspec, R"({"type":"delta","strength":1.0})");
    auto dcsv = g_dir / "delta_out.csv";
    REQUIRE(run_cli("solve --potential " + q(dspec) + " -o " + q(dcsv)) == 0);
    auto dside = nlohmann::json::parse(slurp(g_dir / "delta_out.json"));
    CHECK(dside["energy"].get<double>() == -0.5);
    CHECK(dside["residual"].get<double>() == 0.0);
}

TEST_CASE("info reports Fisher diagnostics for a density CSV") {
    finfo::Grid g(-12.0, 12.0, 4001);
    finfo::DensityOnGrid d{g, std::vector<double>(4001)};
    for (int i = 0; i < g.n_points; ++i)
        d.values[static_cast<std::size_t>(i)] =
            finfo::laplace_density({1.0}, g.node(i));
    auto path = g_dir / "laplace.csv";
    finfo::write_density_csv(path.string(), d);

    auto out = g_dir / "info.json";
    REQUIRE(run_cli("info --density " + q(path) + " -o " + q(out)) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(std::abs(j["cramer_rao_product"].get<double>() - 2.0) < 0.04);
    CHECK(std::abs(j["variance"].get<double>() - 0.5) < 0.01);
    // Renormalization shifts the sampled kinked density by its O(h^2)
    // trapezoid mass error.
    CHECK(std::abs(j["peak_height"].get<double>() - 1.0) < 1e-4);
}

TEST_CASE("returns then fit: prices CSV through to a fit report") {
    // Geometric walk whose log increments are exact Gaussian quantiles.
    finfo::InverseCdfSampler s(-10.0, 10.0, [](double x) {
        return std::sqrt(1.0 / std::numbers::pi) * std::exp(-x * x);
    });
    auto steps = s.draw(1999, 5);
    std::ostringstream prices;
    prices << "date,close\n";
    double p = 100.0;
    prices << "0," << p << "\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        p *= std::exp(steps[i]);
        prices << i + 1 << "," << p << "\n";
    }
    auto ppath = g_dir / "prices.csv";
    spit(ppath, prices.str());

    auto rpath = g_dir / "returns.csv";
    REQUIRE(run_cli("returns --prices " + q(ppath) + " --column close -o " + q(rpath)) == 0);
    auto series = finfo::read_returns_csv(rpath.string());
    REQUIRE(series.values.size() == 1999);

    auto fpath = g_dir / "fit.json";
    REQUIRE(run_cli("fit --model gaussian --input " + q(rpath) + " --seed 5 -o " + q(fpath)) == 0);
    auto j = nlohmann::json::parse(slurp(fpath));
    CHECK(j["model"] == "gaussian");
    CHECK(j["n"] == 1999);
    CHECK(j["seed"] == 5);
    // The CSV round trip costs at most the 12-digit formatting.
    auto direct = finfo::fit_gaussian(series);
    CHECK(std::abs(j["params"]["omega"].get<double>() - direct.params.at("omega")) < 1e-9);
    CHECK(std::abs(j["params"]["omega"].get<double>() - 1.0) < 0.1);
}

TEST_CASE("compare is deterministic byte for byte") {
    finfo::InverseCdfSampler s(-12.0, 12.0,
                               [](double x) { return std::exp(-2.0 * std::abs(x)); });
    finfo::ReturnSeries r{s.draw(4000, 77)};
    auto rpath = g_dir / "lap_returns.csv";
    finfo::write_returns_csv(rpath.string(), r);

    auto o1 = g_dir / "cmp1.json";
    auto o2 = g_dir / "cmp2.json";
    std::string args = "compare --input " + q(rpath) + " --models gaussian,laplace --seed 42 -o ";
    REQUIRE(run_cli(args + q(o1)) == 0);
    REQUIRE(run_cli(args + q(o2)) == 0);
    auto s1 = slurp(o1);
    CHECK(s1 == slurp(o2));

    auto j = nlohmann::json::parse(s1);
    REQUIRE(j["reports"].size() == 2);
    CHECK(j["reports"][0]["model"] == "laplace"); // Laplace data
    CHECK(j["seed"] == 42);
}

TEST_CASE("exit codes and error JSON") {
    auto rpath = g_dir / "lap_returns.csv"; // from the previous case

    // Usage: unknown model family.
    CHECK(run_cli("fit --model banana --input " + q(rpath) + " -o " + q(g_dir / "x.json")) == 1);
    auto err = nlohmann::json::parse(slurp(g_dir / "err.txt"));
    CHECK(err["error"]["exit_code"] == 1);
    CHECK(err["error"]["type"] == "UsageError");

    // Usage: missing required flag.
    CHECK(run_cli("solve -o " + q(g_dir / "x.csv")) == 1);

    // Data: nonexistent input file.
    CHECK(run_cli("info --density '/nonexistent/d.csv' -o " + q(g_dir / "x.json")) == 2);
    err = nlohmann::json::parse(slurp(g_dir / "err.txt"));
    CHECK(err["error"]["exit_code"] == 2);

    // Data: non-positive price.
    spit(g_dir / "bad_prices.csv", "date,close\n0,100\n1,-5\n");
    CHECK(run_cli("returns --prices " + q(g_dir / "bad_prices.csv") + " -o " +
                  q(g_dir / "x.csv")) == 2);
    err = nlohmann::json::parse(slurp(g_dir / "err.txt"));
    CHECK(err["error"]["type"] == "NonPositivePriceError");

    // Numerical: grid too narrow for the oscillator.
    auto spec = g_dir / "osc3.json";
    spit(spec, R"({"type":"oscillator","omega":1.0,"eps1":0.0,"eps2":0.0})");
    CHECK(run_cli("solve --potential " + q(spec) + " --grid '-2,2,201' -o " +
                  q(g_dir / "x.csv")) == 3);
    err = nlohmann::json::parse(slurp(g_dir / "err.txt"));
    CHECK(err["error"]["exit_code"] == 3);
    CHECK(err["error"]["type"] == "GridTooNarrowError");
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[1][0] != '-') {
        g_cli = argv[1];
        for (int i = 1; i + 1 < argc; ++i) argv[i] = argv[i + 1];
        --argc;
    } else {
        g_cli = "./tools/finfo";
    }
    g_dir = std::filesystem::temp_directory_path() / "finfo_cli_tests";
    std::filesystem::create_directories(g_dir);
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    int rc = ctx.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
