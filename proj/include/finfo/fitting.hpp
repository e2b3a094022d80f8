#ifndef FINFO_FITTING_HPP
#define FINFO_FITTING_HPP

#include "finfo/models.hpp"
#include "finfo/potentials.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finfo {

/// Empirical log returns over a fixed sampling interval.
struct ReturnSeries {
    std::vector<double> values;
    std::string interval_label = "1d";
    std::string source;
};

/// Binned density estimate; for reporting and plotting only, never for fitting.
struct Histogram {
    std::vector<double> bin_edges;
    std::vector<double> densities;
    long count = 0;
};

struct FitReport {
    std::string model;
    std::map<std::string, double> params;
    double nll = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    double ks_stat = 0.0;
    double fisher_info = 0.0;
    double variance = 0.0;
    double cramer_rao_product = 0.0;
    double mean_removed = 0.0;
    long n = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings;
};

/// x_i = ln(p_{i+1}/p_i); prices must be positive.
ReturnSeries log_returns(const std::vector<double>& prices);

/// Freedman-Diaconis binning clipped to [32, 512] bins; unit total mass.
Histogram make_histogram(const ReturnSeries& r);

/// Closed-form MLE for the zero-centered Gaussian: omega = 1/(2 mean(x^2)).
FitReport fit_gaussian(const ReturnSeries& r);

/// Closed-form MLE for the Laplace density: lambda = 1/(2 mean|x|).
FitReport fit_laplace(const ReturnSeries& r);

/// Simplex maximum likelihood over (omega, eps1, eps2) for the C8 density,
/// box |eps|/omega <= 0.3, eps2 > 0; start defaults to the Gaussian MLE.
FitReport fit_anharmonic(const ReturnSeries& r,
                         BracketSource source = BracketSource::oracle,
                         std::optional<OscillatorParams> start = std::nullopt);

/// Simplex maximum likelihood over (half_width, depth) of the finite well.
FitReport fit_square_well(const ReturnSeries& r);

/// Run each family's fit and rank by AIC ascending (ties: fewer parameters).
/// Per-family failures become warnings on the surviving reports.
std::vector<FitReport> compare_models(const ReturnSeries& r,
                                      const std::vector<std::string>& families,
                                      BracketSource source = BracketSource::oracle,
                                      std::optional<std::uint64_t> seed = std::nullopt);

/// Free parameters per family (AIC/BIC bookkeeping).
int family_param_count(const std::string& family);

// Returns CSV: header "log_return", one value per row.
void write_returns_csv(const std::string& path, const ReturnSeries& r);
ReturnSeries read_returns_csv(const std::string& path);

/// Prices CSV with a header row; returns the selected column in file order.
std::vector<double> read_price_column(const std::string& path, const std::string& column);

std::string fit_report_to_json(const FitReport& report);

} // namespace finfo

#endif
