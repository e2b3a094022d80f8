#include "finfo/grid.hpp"

#include "finfo/errors.hpp"
#include "finfo/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace finfo {

Grid::Grid(double x_min_, double x_max_, int n_points_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
    if (!(x_min < x_max))
        throw PreconditionError("Grid requires x_min < x_max");
    if (n_points < 3)
        throw PreconditionError("Grid requires at least 3 points");
    if (symmetric() && n_points % 2 == 0)
        throw PreconditionError("symmetric grid requires an odd point count so x=0 is a node");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) xs[static_cast<std::size_t>(i)] = node(i);
    return xs;
}

double trapezoid(const Grid& g, const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(g.n_points))
        throw PreconditionError("value array length does not match grid");
    // Kahan summation keeps repeated normalization exactly idempotent.
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum -= 0.5 * (values.front() + values.back());
    return sum * g.spacing();
}

namespace {

void check_density_values(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v))
            throw ZeroMassError("density contains non-finite values");
        if (v < 0.0)
            throw NegativeDensityError("density contains negative values");
    }
}

void check_unit_mass(const Grid& g, const std::vector<double>& sq, const char* what) {
    double m = trapezoid(g, sq);
    if (std::abs(m - 1.0) > 1e-6) {
        std::ostringstream os;
        os << what << " is not normalized (mass " << m << ")";
        throw PreconditionError(os.str());
    }
}

} // namespace

DensityOnGrid normalize(const DensityOnGrid& d) {
    check_density_values(d.values);
    double mass = trapezoid(d.grid, d.values);
    if (!std::isfinite(mass) || mass <= 0.0)
        throw ZeroMassError("density has zero or non-finite total mass");
    DensityOnGrid out{d.grid, d.values};
    if (std::abs(mass - 1.0) <= 1e-12) return out; // already normalized
    for (double& v : out.values) v /= mass;
    return out;
}

AmplitudeOnGrid amplitude_from_density(const DensityOnGrid& d) {
    check_density_values(d.values);
    check_unit_mass(d.grid, d.values, "density");
    AmplitudeOnGrid a{d.grid, d.values};
    for (double& v : a.values) v = std::sqrt(v);
    return a;
}

DensityOnGrid density_from_amplitude(const AmplitudeOnGrid& a) {
    DensityOnGrid d{a.grid, a.values};
    for (double& v : d.values) v = v * v;
    check_unit_mass(a.grid, d.values, "amplitude square");
    return d;
}

double moment(const DensityOnGrid& d, int k) {
    if (k < 1)
        throw PreconditionError("moment order must be >= 1");
    std::vector<double> integrand(d.values.size());
    for (int i = 0; i < d.grid.n_points; ++i) {
        double x = d.grid.node(i);
        integrand[static_cast<std::size_t>(i)] =
            std::pow(x, k) * d.values[static_cast<std::size_t>(i)];
    }
    return trapezoid(d.grid, integrand);
}

double mean(const DensityOnGrid& d) { return moment(d, 1); }

double variance(const DensityOnGrid& d) {
    double mu = mean(d);
    std::vector<double> integrand(d.values.size());
    for (int i = 0; i < d.grid.n_points; ++i) {
        double dx = d.grid.node(i) - mu;
        integrand[static_cast<std::size_t>(i)] = dx * dx * d.values[static_cast<std::size_t>(i)];
    }
    return trapezoid(d.grid, integrand);
}

double fisher_information(const AmplitudeOnGrid& a) {
    std::vector<double> sq(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) sq[i] = a.values[i] * a.values[i];
    check_unit_mass(a.grid, sq, "amplitude square");

    const auto& v = a.values;
    const std::size_t n = v.size();
    const double h = a.grid.spacing();
    std::vector<double> deriv(n);
    deriv[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        deriv[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    deriv[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);

    for (double& g : deriv) g = g * g;
    return 4.0 * trapezoid(a.grid, deriv);
}

double cramer_rao_product(const DensityOnGrid& d) {
    return variance(d) * fisher_information(amplitude_from_density(d));
}

double peak_height(const DensityOnGrid& d) {
    const Grid& g = d.grid;
    if (g.x_min > 0.0 || g.x_max < 0.0)
        throw PreconditionError("peak_height requires x=0 inside the grid");
    const double h = g.spacing();
    double pos = (0.0 - g.x_min) / h;
    int lo = static_cast<int>(std::floor(pos));
    lo = std::clamp(lo, 0, g.n_points - 2);
    double xl = g.node(lo);
    double t = (0.0 - xl) / h;
    if (std::abs(t) < 1e-9) return d.values[static_cast<std::size_t>(lo)];
    if (std::abs(t - 1.0) < 1e-9) return d.values[static_cast<std::size_t>(lo + 1)];
    return (1.0 - t) * d.values[static_cast<std::size_t>(lo)] +
           t * d.values[static_cast<std::size_t>(lo + 1)];
}

double edge_to_peak_ratio(const std::vector<double>& values) {
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(values.front()), std::abs(values.back())) / peak;
}

MomentSet power_moments(const DensityOnGrid& d, const std::vector<int>& orders) {
    MomentSet ms;
    for (int k : orders) ms.moments[k] = moment(d, k);
    return ms;
}

void write_density_csv(const std::string& path, const DensityOnGrid& d) {
    std::ostringstream os;
    os << "x,value\n";
    for (int i = 0; i < d.grid.n_points; ++i)
        os << format_csv(d.grid.node(i)) << ',' << format_csv(d.values[static_cast<std::size_t>(i)])
           << '\n';
    write_file_atomic(path, os.str());
}

DensityOnGrid read_density_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw IoError(path + ": expected header 'x,value'");
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path + ": malformed row '" + line + "'");
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError(path + ": non-numeric row '" + line + "'");
        }
    }
    if (xs.size() < 3)
        throw IoError(path + ": need at least 3 rows");
    Grid g(xs.front(), xs.back(), static_cast<int>(xs.size()));
    const double h = g.spacing();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - g.node(static_cast<int>(i))) > 1e-6 * std::max(1.0, std::abs(h) * xs.size()))
            throw IoError(path + ": grid is not uniform (only uniform grids are supported)");
    }
    return DensityOnGrid{g, vs};
}

} // namespace finfo
