#include "finfo/eigensolver.hpp"
#include "finfo/errors.hpp"
#include "finfo/fitting.hpp"
#include "finfo/optim.hpp"
#include "finfo/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <vector>

using namespace finfo;

namespace {

ReturnSeries tile(std::initializer_list<double> vals, int copies) {
    ReturnSeries r;
    for (int c = 0; c < copies; ++c) r.values.insert(r.values.end(), vals.begin(), vals.end());
    return r;
}

ReturnSeries gaussian_sample(double omega, std::size_t n, std::uint64_t seed) {
    double span = 10.0 / std::sqrt(omega);
    InverseCdfSampler s(-span, span, [omega](double x) {
        return std::sqrt(omega / std::numbers::pi) * std::exp(-omega * x * x);
    });
    return ReturnSeries{s.draw(n, seed)};
}

ReturnSeries laplace_sample(double lam, std::size_t n, std::uint64_t seed) {
    double span = 12.0 / lam;
    InverseCdfSampler s(-span, span,
                        [lam](double x) { return lam * std::exp(-2.0 * lam * std::abs(x)); });
    return ReturnSeries{s.draw(n, seed)};
}

} // namespace

TEST_CASE("log returns from prices") {
    auto r = log_returns({100.0, 100.0 * std::exp(0.01), 100.0 * std::exp(0.01 - 0.02)});
    REQUIRE(r.values.size() == 2);
    CHECK(r.values[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(r.values[1] == doctest::Approx(-0.02).epsilon(1e-12));

    CHECK_THROWS_AS(log_returns({100.0}), PreconditionError);
    CHECK_THROWS_AS(log_returns({100.0, -1.0}), NonPositivePriceError);
    CHECK_THROWS_AS(log_returns({100.0, 0.0}), NonPositivePriceError);
}

TEST_CASE("closed-form MLEs on hand-checkable series") {
    // mean(x^2) = 1 so omega = 1/2.
    auto g = fit_gaussian(tile({-1.0, 1.0}, 20));
    CHECK(g.model == "gaussian");
    CHECK(g.params.at("omega") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.n == 40);
    CHECK(g.mean_removed == doctest::Approx(0.0).epsilon(1e-15));

    // mean|x| = 1/2 so lambda = 1.
    auto l = fit_laplace(tile({-0.5, 0.5}, 20));
    CHECK(l.params.at("lambda") == doctest::Approx(1.0).epsilon(1e-12));

    // AIC/BIC bookkeeping for one free parameter.
    CHECK(g.aic == doctest::Approx(2.0 + 2.0 * g.nll).epsilon(1e-12));
    CHECK(g.bic == doctest::Approx(std::log(40.0) + 2.0 * g.nll).epsilon(1e-12));

    // The sample mean is removed before fitting.
    auto shifted = fit_gaussian(tile({-0.9, 1.1}, 20));
    CHECK(shifted.mean_removed == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(shifted.params.at("omega") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degenerate and undersized series are rejected") {
    CHECK_THROWS_AS(fit_gaussian(tile({0.01}, 40)), DegenerateDataError);
    CHECK_THROWS_AS(fit_laplace(tile({0.01}, 40)), DegenerateDataError);
    CHECK_THROWS_AS(fit_gaussian(tile({-1.0, 1.0}, 5)), PreconditionError);
    CHECK_THROWS_AS(fit_anharmonic(tile({-1.0, 1.0}, 100)), PreconditionError);
    CHECK_THROWS_AS(fit_square_well(tile({-1.0, 1.0}, 100)), PreconditionError);
}

TEST_CASE("simplex minimizer reproduces the closed-form Gaussian MLE") {
    auto r = gaussian_sample(1.0, 2000, 7);
    auto closed = fit_gaussian(r);
    double sum_sq = 0.0;
    double mean = 0.0;
    for (double v : r.values) mean += v;
    mean /= static_cast<double>(r.values.size());
    for (double v : r.values) sum_sq += (v - mean) * (v - mean);
    auto nll = [&](const std::vector<double>& p) {
        double w = p[0];
        if (w <= 0.0) return std::numeric_limits<double>::infinity();
        return -0.5 * static_cast<double>(r.values.size()) * std::log(w / std::numbers::pi) +
               w * sum_sq;
    };
    auto res = nelder_mead(nll, {0.3}, {0.1});
    CHECK(res.converged);
    CHECK(res.x[0] == doctest::Approx(closed.params.at("omega")).epsilon(1e-6));
}

TEST_CASE("parameter recovery and diagnostics on synthetic data") {
    auto g = fit_gaussian(gaussian_sample(2.0, 20000, 11));
    CHECK(g.params.at("omega") == doctest::Approx(2.0).epsilon(0.05));
    CHECK(g.ks_stat < 0.02);
    CHECK(g.cramer_rao_product == doctest::Approx(1.0).epsilon(0.01));
    CHECK(g.variance == doctest::Approx(0.25).epsilon(0.05));

    auto l = fit_laplace(laplace_sample(1.5, 20000, 13));
    CHECK(l.params.at("lambda") == doctest::Approx(1.5).epsilon(0.05));
    CHECK(l.ks_stat < 0.02);
    CHECK(l.cramer_rao_product == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("MLE scale equivariance") {
    auto r = gaussian_sample(1.0, 5000, 17);
    ReturnSeries scaled;
    for (double v : r.values) scaled.values.push_back(3.0 * v);
    CHECK(fit_gaussian(scaled).params.at("omega") ==
          doctest::Approx(fit_gaussian(r).params.at("omega") / 9.0).epsilon(1e-12));
    CHECK(fit_laplace(scaled).params.at("lambda") ==
          doctest::Approx(fit_laplace(r).params.at("lambda") / 3.0).epsilon(1e-12));
}

TEST_CASE("estimator error shrinks like n^{-1/2}") {
    std::vector<double> ns = {1000.0, 10000.0, 100000.0};
    std::vector<double> errs;
    for (double n : ns) {
        double acc = 0.0;
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            auto fit = fit_gaussian(gaussian_sample(1.0, static_cast<std::size_t>(n), 100 + seed));
            acc += std::abs(fit.params.at("omega") - 1.0);
        }
        errs.push_back(acc / 8.0);
    }
    // Least-squares slope of log err against log n.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double x = std::log(ns[i]);
        double y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(ns.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("anharmonic fit recovers oscillator parameters") {
    OscillatorParams truth{1.0, 0.05, 0.05};
    C8Density model(truth, BracketSource::oracle);
    double span = 10.0;
    InverseCdfSampler s(-span, span, [&model](double x) { return model(x); });
    ReturnSeries r{s.draw(20000, 19)};
    auto fit = fit_anharmonic(r);
    CHECK(fit.model == "anharmonic");
    CHECK(fit.params.at("omega") == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(fit.params.at("eps1") - 0.05) < 0.03);
    CHECK(fit.params.at("eps2") >= 0.0);
    CHECK(fit.ks_stat < 0.02);

    // The fitted likelihood is no worse than the truth's.
    auto at_truth = fit_anharmonic(r, BracketSource::oracle, truth);
    CHECK(fit.nll <= at_truth.nll + 1e-6 * std::abs(at_truth.nll) + 0.5);
}

TEST_CASE("square-well fit and the fineness equivalence") {
    // Two fine wells with equal strength (2 a depth) are nearly the same density.
    SquareWellPotential w1{0.05, 1.0};
    SquareWellPotential w2{0.025, 2.0};
    auto g1 = square_well_ground(w1);
    auto g2 = square_well_ground(w2);
    double sup = 0.0;
    for (double x = -8.0; x <= 8.0; x += 0.05)
        sup = std::max(sup, std::abs(g1.density(x) - g2.density(x)));
    CHECK(sup < 5e-3 * g1.density(0.0));

    // Recovery: data drawn from a well is matched in distribution.
    SquareWellPotential truth{1.0, 2.0};
    auto gs = square_well_ground(truth);
    InverseCdfSampler s(-12.0, 12.0, [&gs](double x) { return gs.density(x); });
    ReturnSeries r{s.draw(20000, 23)};
    auto fit = fit_square_well(r);
    CHECK(fit.model == "square_well");
    CHECK(fit.params.at("half_width") > 0.0);
    CHECK(fit.params.at("depth") > 0.0);
    CHECK(fit.ks_stat < 0.02);
    double truth_var = variance(square_well_density(truth, default_grid(truth)));
    CHECK(fit.variance == doctest::Approx(truth_var).epsilon(0.05));
}

TEST_CASE("model comparison ranks by AIC and records failures") {
    auto r = gaussian_sample(1.0, 5000, 29);
    auto ranked = compare_models(r, {"laplace", "gaussian"}, BracketSource::oracle, 29);
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0].model == "gaussian"); // Gaussian data prefer the Gaussian
    CHECK(ranked[0].aic <= ranked[1].aic);
    CHECK(ranked[0].seed.has_value());
    CHECK(*ranked[0].seed == 29);

    // An undersized family fails and surfaces as a warning, not an exception.
    auto small = gaussian_sample(1.0, 100, 31);
    auto part = compare_models(small, {"gaussian", "laplace", "anharmonic"});
    REQUIRE(part.size() == 2);
    bool warned = false;
    for (const auto& w : part[0].warnings) warned = warned || w.find("anharmonic") != std::string::npos;
    CHECK(warned);

    CHECK_THROWS_AS(compare_models(r, {"gaussian"}), PreconditionError);
    CHECK_THROWS_AS(compare_models(r, {"gaussian", "banana"}), UsageError);
}

TEST_CASE("histogram integrates to one") {
    auto r = gaussian_sample(1.0, 5000, 37);
    auto h = make_histogram(r);
    REQUIRE(h.bin_edges.size() == h.densities.size() + 1);
    CHECK(h.count == 5000);
    double mass = 0.0;
    for (std::size_t i = 0; i < h.densities.size(); ++i) {
        CHECK(h.densities[i] >= 0.0);
        mass += h.densities[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(h.densities.size() >= 32);
    CHECK(h.densities.size() <= 512);
}

TEST_CASE("returns CSV and prices CSV round trips") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path();
    auto rpath = (dir / "finfo_test_returns.csv").string();
    ReturnSeries r{{0.01, -0.02, 0.0, 0.003}};
    write_returns_csv(rpath, r);
    auto back = read_returns_csv(rpath);
    REQUIRE(back.values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(back.values[i] == doctest::Approx(r.values[i]).epsilon(1e-11));
    fs::remove(rpath);

    auto ppath = (dir / "finfo_test_prices.csv").string();
    {
        std::ofstream out(ppath);
        out << "date,close\n2026-01-01,100\n2026-01-02,101\n2026-01-03,99.5\n";
    }
    auto prices = read_price_column(ppath, "close");
    REQUIRE(prices.size() == 3);
    CHECK(prices[1] == 101.0);
    CHECK_THROWS_AS(read_price_column(ppath, "open"), IoError);
    fs::remove(ppath);

    CHECK_THROWS_AS(read_returns_csv("/nonexistent/r.csv"), IoError);
}

TEST_CASE("fit report JSON is deterministic and faithful") {
    auto r = gaussian_sample(1.0, 2000, 41);
    auto fit = fit_gaussian(r);
    fit.seed = 41;
    auto s1 = fit_report_to_json(fit);
    auto s2 = fit_report_to_json(fit);
    CHECK(s1 == s2);
    auto j = nlohmann::json::parse(s1);
    CHECK(j["model"] == "gaussian");
    CHECK(j["n"] == 2000);
    CHECK(j["seed"] == 41);
    CHECK(j["params"]["omega"].get<double>() ==
          doctest::Approx(fit.params.at("omega")).epsilon(1e-15));
    CHECK(j["aic"].get<double>() == doctest::Approx(fit.aic).epsilon(1e-15));
}
