#ifndef FINFO_GRID_HPP
#define FINFO_GRID_HPP

#include <map>
#include <string>
#include <vector>

namespace finfo {

/// Uniform 1-D grid over log-return space. For a symmetric grid
/// (x_min == -x_max) the point count must be odd so x = 0 is a node.
struct Grid {
    double x_min = -10.0;
    double x_max = 10.0;
    int n_points = 2001;

    Grid() = default;
    Grid(double x_min_, double x_max_, int n_points_);

    double spacing() const { return (x_max - x_min) / (n_points - 1); }
    bool symmetric() const { return x_min == -x_max; }

    // Affine combination form keeps the midpoint of a symmetric grid at 0 exactly.
    double node(int i) const {
        return (x_min * double(n_points - 1 - i) + x_max * double(i)) / double(n_points - 1);
    }
    std::vector<double> nodes() const;

    bool operator==(const Grid&) const = default;
};

/// Probability density p(x) sampled on grid nodes, units 1/x.
struct DensityOnGrid {
    Grid grid;
    std::vector<double> values;
};

/// Amplitude psi(x) = sqrt(p(x)) sampled on grid nodes.
struct AmplitudeOnGrid {
    Grid grid;
    std::vector<double> values;
};

/// Constraint values F_k keyed by moment order k >= 1.
struct MomentSet {
    std::map<int, double> moments;
};

/// Trapezoid quadrature of nodal values over the grid.
double trapezoid(const Grid& g, const std::vector<double>& values);

/// Rescale to unit trapezoid mass. Throws NegativeDensityError / ZeroMassError.
DensityOnGrid normalize(const DensityOnGrid& d);

AmplitudeOnGrid amplitude_from_density(const DensityOnGrid& d);
DensityOnGrid density_from_amplitude(const AmplitudeOnGrid& a);

/// Trapezoid estimate of the k-th power moment, k >= 1. Requires d normalized.
double moment(const DensityOnGrid& d, int k);

double mean(const DensityOnGrid& d);

/// Variance about the mean.
double variance(const DensityOnGrid& d);

/// Fisher information 4 * integral of (dpsi/dx)^2, central differences in the
/// interior and one-sided second-order stencils at the endpoints.
double fisher_information(const AmplitudeOnGrid& a);

/// sigma^2 * I for the density; >= 1 up to discretization error.
double cramer_rao_product(const DensityOnGrid& d);

/// p(0), exact at a node when the grid is symmetric, else linear interpolation.
double peak_height(const DensityOnGrid& d);

/// Largest edge value relative to the peak value; > 1e-8 indicates the grid
/// cuts off non-negligible tail mass.
double edge_to_peak_ratio(const std::vector<double>& values);

/// Power moments F_k for the requested orders.
MomentSet power_moments(const DensityOnGrid& d, const std::vector<int>& orders);

// CSV: header "x,value", one row per node, ascending x.
void write_density_csv(const std::string& path, const DensityOnGrid& d);
DensityOnGrid read_density_csv(const std::string& path);

} // namespace finfo

#endif
