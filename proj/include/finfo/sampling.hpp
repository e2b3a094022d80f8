#ifndef FINFO_SAMPLING_HPP
#define FINFO_SAMPLING_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace finfo {

/// Inverse-CDF sampler over a tabulated density: cumulative trapezoid CDF on a
/// uniform table, monotone linear interpolation of the inverse. Deterministic
/// for a given seed.
class InverseCdfSampler {
public:
    InverseCdfSampler(double x_min, double x_max, const std::function<double(double)>& pdf,
                      std::size_t table_size = std::size_t(1) << 20);

    double quantile(double u) const;
    std::vector<double> draw(std::size_t n, std::uint64_t seed) const;

    /// Model CDF at x (linear interpolation of the table).
    double cdf(double x) const;

private:
    double x_min_, x_max_, step_;
    std::vector<double> cdf_;
};

/// Two-sided Kolmogorov-Smirnov statistic of a sample against the tabulated
/// CDF of a model density.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& pdf,
                    double x_min, double x_max);

} // namespace finfo

#endif
