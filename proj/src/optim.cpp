#include "finfo/optim.hpp"

#include "finfo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace finfo {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const std::vector<double>& steps,
                             int max_evaluations, double rel_tol) {
    const std::size_t n = start.size();
    if (n == 0 || steps.size() != n)
        throw PreconditionError("nelder_mead: empty start or mismatched step sizes");

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        s2.reserve(n + 1);
        v2.reserve(n + 1);
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };

    bool converged = false;
    while (evals < max_evaluations) {
        order();

        double diameter = 0.0;
        double scale = 1.0;
        for (double c : simplex[0]) scale = std::max(scale, std::abs(c));
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[0][j]));
        if (diameter / scale < rel_tol && std::isfinite(values[0])) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (centroid[j] - simplex[n][j]);
            return p;
        };

        auto reflected = blend(alpha);
        double fr = eval(reflected);
        if (fr < values[0]) {
            auto expanded = blend(gamma);
            double fe = eval(expanded);
            if (fe < fr) {
                simplex[n] = std::move(expanded);
                values[n] = fe;
            } else {
                simplex[n] = std::move(reflected);
                values[n] = fr;
            }
            continue;
        }
        if (fr < values[n - 1]) {
            simplex[n] = std::move(reflected);
            values[n] = fr;
            continue;
        }
        auto contracted = blend(fr < values[n] ? rho : -rho);
        double fc = eval(contracted);
        if (fc < std::min(fr, values[n])) {
            simplex[n] = std::move(contracted);
            values[n] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                simplex[i][j] = simplex[0][j] + sigma * (simplex[i][j] - simplex[0][j]);
            values[i] = eval(simplex[i]);
        }
    }

    order();
    return NelderMeadResult{simplex[0], values[0], evals, converged};
}

} // namespace finfo
