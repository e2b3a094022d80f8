#ifndef FINFO_POTENTIALS_HPP
#define FINFO_POTENTIALS_HPP

#include <string>
#include <variant>
#include <vector>

namespace finfo {

/// Lagrange-multiplier potential U(x) = -(1/8) sum_k lambda_k x^k,
/// lambdas[k-1] holds lambda_k for k = 1..M.
struct PolynomialPotential {
    std::vector<double> lambdas;

    double evaluate(double x) const;
    /// Index of the highest nonzero multiplier, 0 when all vanish.
    int highest_order() const;
    bool even() const;
};

/// Harmonic frequency plus dimensionful cubic/quartic strengths
/// (eps1, eps2 carry energy units, same as omega).
struct OscillatorParams {
    double omega = 1.0;
    double eps1 = 0.0;
    double eps2 = 0.0;

    /// True when |eps1|/omega or |eps2|/omega exceeds 0.1, the rough edge of
    /// first-order perturbation validity.
    bool perturbation_marginal() const;
};

/// U(x) = -depth for |x| <= half_width, 0 outside.
struct SquareWellPotential {
    double half_width = 1.0;
    double depth = 1.0;

    double evaluate(double x) const;
};

/// U(x) = -strength * delta(x); handled by closed forms, never discretized.
struct DeltaPotential {
    double strength = 1.0;
};

using Potential = std::variant<PolynomialPotential, SquareWellPotential, DeltaPotential>;

/// Validated constructor; throws NotConfiningError when the highest retained
/// multiplier does not produce a confining potential.
PolynomialPotential potential_from_multipliers(const std::vector<double>& lambdas);

/// omega = sqrt(|lambda2|)/2, lambda2 < 0 required.
double omega_from_lambda2(double lambda2);
/// lambda2 = -4 omega^2, omega > 0 required.
double lambda2_from_omega(double omega);

/// lambda2 = -4 w^2, lambda3 = -8 e1 w^{3/2}, lambda4 = -8 e2 w^2.
PolynomialPotential multipliers_from_oscillator(const OscillatorParams& p);

/// Direct oscillator potential w^2 x^2 / 2 + e1 (sqrt(w) x)^3 + e2 (sqrt(w) x)^4.
double oscillator_potential(const OscillatorParams& p, double x);

/// Energy eigenvalue from the normalization multiplier, E = eps/8.
double energy_from_epsilon(double eps);

/// Parse/emit the potential-spec JSON:
///   {"type":"polynomial","lambdas":[...]}
///   {"type":"oscillator","omega":..,"eps1":..,"eps2":..}
///   {"type":"square_well","half_width":..,"depth":..}
///   {"type":"delta","strength":..}
Potential parse_potential_json(const std::string& text);
std::string potential_to_json(const Potential& p);

} // namespace finfo

#endif
