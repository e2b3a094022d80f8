#include "finfo/sampling.hpp"

#include "finfo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace finfo {

InverseCdfSampler::InverseCdfSampler(double x_min, double x_max,
                                     const std::function<double(double)>& pdf,
                                     std::size_t table_size)
    : x_min_(x_min), x_max_(x_max) {
    if (!(x_min < x_max) || table_size < 2)
        throw PreconditionError("InverseCdfSampler: bad range or table size");
    step_ = (x_max - x_min) / double(table_size - 1);
    std::vector<double> p(table_size);
    for (std::size_t i = 0; i < table_size; ++i) {
        p[i] = pdf(x_min_ + step_ * double(i));
        if (!(p[i] >= 0.0))
            throw NegativeDensityError("InverseCdfSampler: pdf must be nonnegative and finite");
    }
    cdf_.assign(table_size, 0.0);
    for (std::size_t i = 1; i < table_size; ++i)
        cdf_[i] = cdf_[i - 1] + 0.5 * step_ * (p[i - 1] + p[i]);
    double total = cdf_.back();
    if (!(total > 0.0))
        throw ZeroMassError("InverseCdfSampler: density has zero mass on the table range");
    for (double& c : cdf_) c /= total;
}

double InverseCdfSampler::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return x_min_;
    if (it == cdf_.end()) return x_max_;
    std::size_t hi = std::size_t(it - cdf_.begin());
    std::size_t lo = hi - 1;
    double span = cdf_[hi] - cdf_[lo];
    double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
    return x_min_ + step_ * (double(lo) + t);
}

std::vector<double> InverseCdfSampler::draw(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> out(n);
    for (double& x : out) x = quantile(uni(rng));
    return out;
}

double InverseCdfSampler::cdf(double x) const {
    if (x <= x_min_) return 0.0;
    if (x >= x_max_) return 1.0;
    double pos = (x - x_min_) / step_;
    std::size_t lo = std::min(std::size_t(pos), cdf_.size() - 2);
    double t = pos - double(lo);
    return cdf_[lo] + t * (cdf_[lo + 1] - cdf_[lo]);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& pdf,
                    double x_min, double x_max) {
    if (sample.empty())
        throw PreconditionError("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    InverseCdfSampler table(x_min, x_max, pdf, std::size_t(1) << 17);
    const double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = table.cdf(sample[i]);
        d = std::max(d, std::abs(f - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - f));
    }
    return d;
}

} // namespace finfo
