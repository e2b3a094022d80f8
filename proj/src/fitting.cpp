#include "finfo/fitting.hpp"

#include "finfo/eigensolver.hpp"
#include "finfo/errors.hpp"
#include "finfo/grid.hpp"
#include "finfo/io_util.hpp"
#include "finfo/optim.hpp"
#include "finfo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace finfo {

namespace {

constexpr long kMinSamplesClosedForm = 30;
constexpr long kMinSamplesSimplex = 500;

struct Demeaned {
    std::vector<double> x;
    double mean = 0.0;
};

Demeaned demean(const ReturnSeries& r, long min_len, bool shift = true) {
    for (double v : r.values)
        if (!std::isfinite(v))
            throw PreconditionError("return series contains non-finite values");
    if (static_cast<long>(r.values.size()) < min_len) {
        std::ostringstream os;
        os << "need at least " << min_len << " returns, got " << r.values.size();
        throw PreconditionError(os.str());
    }
    Demeaned d;
    d.x = r.values;
    double s = 0.0;
    for (double v : d.x) s += v;
    d.mean = s / double(d.x.size());
    if (shift)
        for (double& v : d.x) v -= d.mean;
    else
        d.mean = 0.0;
    return d;
}

// Model-side diagnostics (I, sigma^2, CR product) on the model's natural grid;
// KS against the model CDF over a range covering both model mass and data.
void fill_diagnostics(FitReport& rep, const std::function<double(double)>& pdf,
                      const Grid& model_grid, const std::vector<double>& data) {
    DensityOnGrid d{model_grid,
                    std::vector<double>(static_cast<std::size_t>(model_grid.n_points))};
    for (int i = 0; i < model_grid.n_points; ++i)
        d.values[static_cast<std::size_t>(i)] = pdf(model_grid.node(i));
    d = normalize(d);
    rep.fisher_info = fisher_information(amplitude_from_density(d));
    rep.variance = variance(d);
    rep.cramer_rao_product = rep.variance * rep.fisher_info;

    double span = std::max(std::abs(model_grid.x_min), std::abs(model_grid.x_max));
    for (double v : data) span = std::max(span, std::abs(v) * 1.05);
    rep.ks_stat = ks_statistic(data, pdf, -span, span);
}

void finish_scores(FitReport& rep, int k_params, long n) {
    rep.aic = 2.0 * k_params + 2.0 * rep.nll;
    rep.bic = k_params * std::log(double(n)) + 2.0 * rep.nll;
    rep.n = n;
}

} // namespace

ReturnSeries log_returns(const std::vector<double>& prices) {
    if (prices.size() < 2)
        throw PreconditionError("need at least 2 prices");
    ReturnSeries r;
    r.values.reserve(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !(prices[i + 1] > 0.0))
            throw NonPositivePriceError("prices must be strictly positive");
        r.values.push_back(std::log(prices[i + 1] / prices[i]));
    }
    return r;
}

Histogram make_histogram(const ReturnSeries& r) {
    if (r.values.size() < 2)
        throw PreconditionError("histogram needs at least 2 values");
    std::vector<double> sorted = r.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double q1 = sorted[n / 4];
    double q3 = sorted[(3 * n) / 4];
    double iqr = q3 - q1;
    double lo = sorted.front(), hi = sorted.back();
    if (hi <= lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    int bins;
    if (iqr <= 0.0) {
        bins = 32;
    } else {
        double width = 2.0 * iqr / std::cbrt(double(n));
        bins = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 32, 512);
    }
    Histogram h;
    h.count = static_cast<long>(n);
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * double(i) / double(bins);
    std::vector<long> counts(static_cast<std::size_t>(bins), 0);
    for (double v : sorted) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    double bw = (hi - lo) / double(bins);
    h.densities.resize(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i)
        h.densities[static_cast<std::size_t>(i)] =
            double(counts[static_cast<std::size_t>(i)]) / (double(n) * bw);
    return h;
}

FitReport fit_gaussian(const ReturnSeries& r) {
    Demeaned d = demean(r, kMinSamplesClosedForm);
    double m2 = 0.0;
    for (double v : d.x) m2 += v * v;
    m2 /= double(d.x.size());
    // Relative to the removed mean so a constant series (whose de-meaned
    // values are rounding residue) is still flagged.
    if (m2 <= 0.0 || std::sqrt(m2) <= 1e-12 * std::abs(d.mean))
        throw DegenerateDataError("all returns equal; Gaussian fit is degenerate");
    const double omega = 1.0 / (2.0 * m2);

    FitReport rep;
    rep.model = "gaussian";
    rep.params["omega"] = omega;
    rep.mean_removed = d.mean;
    const double n = double(d.x.size());
    rep.nll = -0.5 * n * std::log(omega / std::numbers::pi) + omega * m2 * n;

    GaussianModel gm{omega};
    fill_diagnostics(
        rep, [gm](double x) { return gaussian_density(gm, x); }, oscillator_grid(omega), d.x);
    finish_scores(rep, family_param_count("gaussian"), static_cast<long>(d.x.size()));
    return rep;
}

FitReport fit_laplace(const ReturnSeries& r) {
    Demeaned d = demean(r, kMinSamplesClosedForm);
    double m1 = 0.0;
    for (double v : d.x) m1 += std::abs(v);
    m1 /= double(d.x.size());
    if (m1 <= 0.0 || m1 <= 1e-12 * std::abs(d.mean))
        throw DegenerateDataError("all returns equal; Laplace fit is degenerate");
    const double lam = 1.0 / (2.0 * m1);

    FitReport rep;
    rep.model = "laplace";
    rep.params["lambda"] = lam;
    rep.mean_removed = d.mean;
    const double n = double(d.x.size());
    rep.nll = -n * std::log(lam) + 2.0 * lam * m1 * n;

    LaplaceModel lm{lam};
    double L = 14.0 / lam;
    fill_diagnostics(
        rep, [lm](double x) { return laplace_density(lm, x); }, Grid(-L, L, 4001), d.x);
    finish_scores(rep, family_param_count("laplace"), static_cast<long>(d.x.size()));
    return rep;
}

FitReport fit_anharmonic(const ReturnSeries& r, BracketSource source,
                         std::optional<OscillatorParams> start) {
    // A skewed density carries its mean in the cubic coefficient, and most of
    // the information about that coefficient sits in the sample mean itself,
    // so this family fits the raw returns rather than de-meaned ones.
    Demeaned d = demean(r, kMinSamplesSimplex, /*shift=*/false);

    double mean = 0.0;
    for (double v : d.x) mean += v;
    mean /= double(d.x.size());
    double m2 = 0.0;
    for (double v : d.x) m2 += (v - mean) * (v - mean);
    m2 /= double(d.x.size());
    if (m2 <= 0.0 || std::sqrt(m2) <= 1e-12 * std::abs(mean))
        throw DegenerateDataError("all returns equal; anharmonic fit is degenerate");
    OscillatorParams p0{1.0 / (2.0 * m2), 0.0, 0.0};
    if (start) {
        if (start->omega <= 0.0 || start->eps2 < 0.0)
            throw PreconditionError("anharmonic start requires omega > 0 and eps2 >= 0");
        p0 = *start;
    }
    if (p0.eps2 <= 0.0) p0.eps2 = 0.02 * p0.omega;

    auto nll_of = [&](const std::vector<double>& t) {
        const double w = t[0], e1 = t[1], e2 = t[2];
        if (w <= 0.0 || e2 <= 0.0 || std::abs(e1) > 0.3 * w || e2 > 0.3 * w)
            return std::numeric_limits<double>::infinity();
        try {
            C8Density pdf(OscillatorParams{w, e1, e2}, source);
            double nll = 0.0;
            for (double x : d.x) nll -= std::log(std::max(pdf(x), 1e-300));
            return nll;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NelderMeadResult res =
        nelder_mead(nll_of, {p0.omega, p0.eps1, p0.eps2},
                    {0.1 * p0.omega, 0.02 * p0.omega, 0.02 * p0.omega}, 10000, 1e-8);
    if (!res.converged)
        throw NotConvergedError("anharmonic simplex did not converge within 10^4 evaluations");

    OscillatorParams fitted{res.x[0], res.x[1], res.x[2]};
    C8Density pdf(fitted, source); // rethrows ClampMassExceeded for the final point

    FitReport rep;
    rep.model = "anharmonic";
    rep.params["omega"] = fitted.omega;
    rep.params["eps1"] = fitted.eps1;
    rep.params["eps2"] = fitted.eps2;
    rep.mean_removed = d.mean;
    rep.nll = res.value;
    if (fitted.perturbation_marginal())
        rep.warnings.push_back("fitted |eps|/omega exceeds 0.1; first-order validity is marginal");
    if (pdf.clamped_mass() > 0.0) {
        std::ostringstream os;
        os << "clamped density mass " << pdf.clamped_mass();
        rep.warnings.push_back(os.str());
    }

    fill_diagnostics(rep, [&pdf](double x) { return pdf(x); }, pdf.grid(), d.x);
    finish_scores(rep, family_param_count("anharmonic"), static_cast<long>(d.x.size()));
    return rep;
}

FitReport fit_square_well(const ReturnSeries& r) {
    Demeaned d = demean(r, kMinSamplesSimplex);

    double m1 = 0.0, m2 = 0.0;
    for (double v : d.x) {
        m1 += std::abs(v);
        m2 += v * v;
    }
    m1 /= double(d.x.size());
    m2 /= double(d.x.size());
    if (m1 <= 0.0 || m1 <= 1e-12 * std::abs(d.mean))
        throw DegenerateDataError("all returns equal; square-well fit is degenerate");
    const double lam_laplace = 1.0 / (2.0 * m1);
    const double sd = std::sqrt(m2);

    auto nll_of = [&](const std::vector<double>& u) {
        const double a = std::exp(u[0]), depth = std::exp(u[1]);
        if (!(a > 1e-8) || !(a < 1e3) || !(depth > 1e-8) || !(depth < 1e15))
            return std::numeric_limits<double>::infinity();
        try {
            SquareWellGround g = square_well_ground(SquareWellPotential{a, depth});
            double nll = 0.0;
            for (double x : d.x) nll -= std::log(std::max(g.density(x), 1e-300));
            return nll;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    // Two deterministic starts: a Laplace-like fine well (strength 2 a depth
    // matched to the Laplace MLE) and a broad well on the data scale.
    std::vector<std::vector<double>> starts = {
        {std::log(0.5 * sd), std::log(lam_laplace / sd)},
        {std::log(sd), std::log(1.0 / (sd * sd))},
    };
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    for (const auto& s : starts) {
        NelderMeadResult res = nelder_mead(nll_of, s, {0.4, 0.4}, 10000, 1e-8);
        if (res.converged && res.value < best.value) {
            best = res;
            any_converged = true;
        }
    }
    if (!any_converged)
        throw NotConvergedError("square-well simplex did not converge within 10^4 evaluations");

    SquareWellPotential fitted{std::exp(best.x[0]), std::exp(best.x[1])};
    SquareWellGround g = square_well_ground(fitted);

    FitReport rep;
    rep.model = "square_well";
    rep.params["half_width"] = fitted.half_width;
    rep.params["depth"] = fitted.depth;
    rep.params["a2_depth"] = fitted.half_width * fitted.half_width * fitted.depth;
    rep.params["energy"] = g.energy;
    rep.mean_removed = d.mean;
    rep.nll = best.value;

    double L = fitted.half_width + 25.0 / g.decay_rate;
    fill_diagnostics(
        rep, [&g](double x) { return g.density(x); }, Grid(-L, L, 4001), d.x);
    finish_scores(rep, family_param_count("square_well"), static_cast<long>(d.x.size()));
    return rep;
}

int family_param_count(const std::string& family) {
    if (family == "gaussian" || family == "laplace") return 1;
    if (family == "square_well") return 2;
    if (family == "anharmonic") return 3;
    throw UsageError("unknown model family '" + family + "'");
}

std::vector<FitReport> compare_models(const ReturnSeries& r,
                                      const std::vector<std::string>& families,
                                      BracketSource source,
                                      std::optional<std::uint64_t> seed) {
    if (families.size() < 2)
        throw PreconditionError("compare_models needs at least 2 families");
    std::vector<FitReport> reports;
    std::vector<std::string> failures;
    for (const std::string& fam : families) {
        try {
            FitReport rep;
            if (fam == "gaussian")
                rep = fit_gaussian(r);
            else if (fam == "laplace")
                rep = fit_laplace(r);
            else if (fam == "anharmonic")
                rep = fit_anharmonic(r, source);
            else if (fam == "square_well")
                rep = fit_square_well(r);
            else
                throw UsageError("unknown model family '" + fam + "'");
            reports.push_back(std::move(rep));
        } catch (const UsageError&) {
            throw;
        } catch (const Error& e) {
            failures.push_back(fam + ": " + e.what());
        }
    }
    if (reports.empty())
        throw NotConvergedError("every requested family failed to fit");
    std::stable_sort(reports.begin(), reports.end(), [](const FitReport& a, const FitReport& b) {
        if (a.aic != b.aic) return a.aic < b.aic;
        return family_param_count(a.model) < family_param_count(b.model);
    });
    for (FitReport& rep : reports) {
        rep.seed = seed;
        rep.warnings.insert(rep.warnings.end(), failures.begin(), failures.end());
    }
    return reports;
}

void write_returns_csv(const std::string& path, const ReturnSeries& r) {
    std::ostringstream os;
    os << "log_return\n";
    for (double v : r.values) os << format_csv(v) << '\n';
    write_file_atomic(path, os.str());
}

ReturnSeries read_returns_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("log_return", 0) != 0)
        throw IoError(path + ": expected header 'log_return'");
    ReturnSeries r;
    r.source = path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            r.values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw IoError(path + ": non-numeric row '" + line + "'");
        }
    }
    return r;
}

std::vector<double> read_price_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end())
        throw IoError(path + ": no column named '" + column + "'");
    std::size_t col = std::size_t(it - header.begin());

    std::vector<double> prices;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t i = 0;
        bool found = false;
        while (std::getline(ss, cell, ',')) {
            if (i++ == col) {
                try {
                    prices.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw IoError(path + ": non-numeric price '" + cell + "'");
                }
                found = true;
                break;
            }
        }
        if (!found)
            throw IoError(path + ": short row '" + line + "'");
    }
    return prices;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

} // namespace

std::string fit_report_to_json(const FitReport& rep) {
    std::ostringstream os;
    os << "{\"model\":\"" << json_escape(rep.model) << "\",\"params\":{";
    bool first = true;
    for (const auto& [k, v] : rep.params) {
        if (!first) os << ',';
        first = false;
        os << '"' << json_escape(k) << "\":" << format_json_number(v);
    }
    os << "},\"nll\":" << format_json_number(rep.nll)
       << ",\"aic\":" << format_json_number(rep.aic)
       << ",\"bic\":" << format_json_number(rep.bic)
       << ",\"ks_stat\":" << format_json_number(rep.ks_stat)
       << ",\"fisher_info\":" << format_json_number(rep.fisher_info)
       << ",\"variance\":" << format_json_number(rep.variance)
       << ",\"cramer_rao_product\":" << format_json_number(rep.cramer_rao_product)
       << ",\"mean_removed\":" << format_json_number(rep.mean_removed)
       << ",\"n\":" << rep.n;
    if (rep.seed) os << ",\"seed\":" << *rep.seed;
    os << ",\"warnings\":[";
    for (std::size_t i = 0; i < rep.warnings.size(); ++i) {
        if (i) os << ',';
        os << '"' << json_escape(rep.warnings[i]) << '"';
    }
    os << "]}";
    return os.str();
}

} // namespace finfo
