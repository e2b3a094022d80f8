#ifndef FINFO_MODELS_HPP
#define FINFO_MODELS_HPP

#include "finfo/grid.hpp"
#include "finfo/potentials.hpp"

#include <array>

namespace finfo {

/// p(x) = sqrt(omega/pi) exp(-omega x^2), the harmonic ground-state density.
struct GaussianModel {
    double omega = 1.0;
};

double gaussian_density(const GaussianModel& m, double x);

/// Orthonormal oscillator eigenfunction, Hermite polynomials by the
/// three-term recurrence; stable for n <= 10.
double hermite_eigenfunction(int n, double omega, double x);

enum class BracketSource { paper, oracle };

/// Coefficients of the degree-4 polynomial multiplying the Gaussian ground
/// amplitude, constant term first.
///   paper  : the printed first-order bracket, taken verbatim.
///   oracle : re-derived from the first-order mixing sum over ladder-operator
///            matrix elements; authoritative for fitting.
std::array<double, 5> bracket_coefficients(const OscillatorParams& p, BracketSource source);

/// The printed perturbed ground amplitude, evaluated literally.
double perturbed_amplitude_paper(const OscillatorParams& p, double x);

/// First-order mixing coefficients c_m = -<m|V|0>/(m omega), m = 1..4.
/// V = eps1 (sqrt(w) x)^3 + eps2 (sqrt(w) x)^4.
std::array<double, 4> oscillator_mixing_coefficients(const OscillatorParams& p);

/// <1|x^3|0> etc. for the oscillator of frequency omega; m in {1,3} for x^3,
/// {2,4} for x^4, zero otherwise.
double x3_matrix_element(int m, double omega);
double x4_matrix_element(int m, double omega);

/// First-order corrected ground amplitude psi0 + sum c_m psi_m, normalized on
/// the grid. Independent oracle for the printed bracket. n_max >= 4 required
/// (x^3 couples m = 1,3; x^4 couples m = 2,4; higher m contribute nothing).
AmplitudeOnGrid perturbation_first_order(const OscillatorParams& p, const Grid& g, int n_max = 4);

/// Gaussian-times-degree-8-polynomial density: square of the selected bracket
/// amplitude, negative values clamped (with tracked mass) and renormalized on
/// the construction grid.
class C8Density {
public:
    C8Density(const OscillatorParams& p, BracketSource source, const Grid& g);
    C8Density(const OscillatorParams& p, BracketSource source);

    double operator()(double x) const;
    double clamped_mass() const { return clamped_mass_; }
    const Grid& grid() const { return grid_; }
    DensityOnGrid on_grid() const;

private:
    double raw(double x) const;
    OscillatorParams params_;
    std::array<double, 5> bracket_;
    Grid grid_;
    double norm_ = 1.0;
    double clamped_mass_ = 0.0;
};

/// Convenience wrapper matching the pointwise-operation signature.
double c8_density(const OscillatorParams& p, double x, BracketSource source);

/// p(x) = lam exp(-2 lam |x|), ground-state density of the delta potential.
struct LaplaceModel {
    double lam = 1.0;
};

double laplace_density(const LaplaceModel& m, double x);

/// Density of the price return y = e^x. The change-of-variables form
/// p_x(ln y)/y is the default; paper_form selects the printed lam/|y|^{2 lam}.
double price_return_density(const LaplaceModel& m, double y, bool paper_form = false);

/// Default evaluation grid for oscillator-family densities.
Grid oscillator_grid(double omega, int n_points = 4001);

} // namespace finfo

#endif
