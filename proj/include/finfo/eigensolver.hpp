#ifndef FINFO_EIGENSOLVER_HPP
#define FINFO_EIGENSOLVER_HPP

#include "finfo/grid.hpp"
#include "finfo/potentials.hpp"

#include <functional>

namespace finfo {

/// Lowest eigenpair of -(1/2) psi'' + U psi = E psi on a grid.
/// The amplitude is trapezoid-normalized, nonnegative and nodeless; residual
/// is the max-norm defect of the underlying discrete eigenpair.
struct GroundState {
    double energy = 0.0;
    AmplitudeOnGrid amplitude;
    double residual = 0.0;
};

/// Single-grid solve: symmetric tridiagonal three-point discretization with
/// zero boundary values, smallest eigenvalue by Sturm-sequence bisection,
/// eigenvector by inverse iteration. Converges at O(h^2) in the energy.
GroundState ground_state_fd(const std::function<double(double)>& potential, const Grid& g);

/// Ground state with one step of h -> h/2 Richardson refinement on top of
/// ground_state_fd, giving O(h^4) energies on smooth potentials. The residual
/// reported is that of the fine-grid discrete solve.
GroundState ground_state(const PolynomialPotential& u, const Grid& g);
GroundState ground_state(const SquareWellPotential& u, const Grid& g);

/// |E| of the lowest even bound state of the finite well: root of
/// k tan(k a) = kappa with k = sqrt(2(depth - |E|)), kappa = sqrt(2 |E|),
/// bisected to 1e-12. A symmetric 1-D well always has such a root.
double square_well_ground_energy(const SquareWellPotential& w);

/// Closed-form ground state of the finite well, unit mass on the real line.
struct SquareWellGround {
    double energy = 0.0;     // E < 0
    double wave_number = 0.0;  // k inside the well
    double decay_rate = 0.0;   // kappa outside
    double amp_in = 0.0;       // A
    double amp_out = 0.0;      // B, psi = B exp(-kappa |x|) outside
    double half_width = 0.0;

    double amplitude(double x) const;
    double density(double x) const;
};

SquareWellGround square_well_ground(const SquareWellPotential& w);

/// |psi|^2 of the even ground state sampled on the grid, renormalized to unit
/// trapezoid mass.
DensityOnGrid square_well_density(const SquareWellPotential& w, const Grid& g);

/// Closed form for U = -strength * delta(x): psi = sqrt(s) exp(-s|x|),
/// E = -s^2/2 from the derivative-jump condition.
struct DeltaGroundState {
    double energy = 0.0;
    double strength = 0.0;

    double amplitude(double x) const;
    double density(double x) const;
    DensityOnGrid density_on_grid(const Grid& g) const;
};

DeltaGroundState delta_ground_state(const DeltaPotential& dp);

/// [-L, L] with L = 10/sqrt(omega) (harmonic length scale), 2001 points.
Grid default_grid(const PolynomialPotential& u);
/// Wide enough for the exponential tail, fine enough to resolve the well edge.
Grid default_grid(const SquareWellPotential& w);
Grid default_grid(const DeltaPotential& dp);

} // namespace finfo

#endif
