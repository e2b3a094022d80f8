#include "finfo/models.hpp"

#include "finfo/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace finfo {

namespace {

constexpr double kPi = std::numbers::pi;

void check_oscillator(const OscillatorParams& p) {
    if (p.omega <= 0.0)
        throw SignError("oscillator omega must be positive");
    if (std::abs(p.eps1) / p.omega > 0.3 || std::abs(p.eps2) / p.omega > 0.3)
        throw PerturbationInvalidError("|eps|/omega exceeds 0.3; first order is meaningless");
    if (p.eps2 < 0.0)
        throw SignError("eps2 must be nonnegative (quartic confinement)");
}

double gaussian_amplitude(double omega, double x) {
    return std::pow(omega / kPi, 0.25) * std::exp(-0.5 * omega * x * x);
}

} // namespace

double gaussian_density(const GaussianModel& m, double x) {
    if (m.omega <= 0.0)
        throw SignError("gaussian omega must be positive");
    return std::sqrt(m.omega / kPi) * std::exp(-m.omega * x * x);
}

double hermite_eigenfunction(int n, double omega, double x) {
    if (n < 0 || n > 10)
        throw PreconditionError("hermite_eigenfunction supports 0 <= n <= 10");
    if (omega <= 0.0)
        throw SignError("omega must be positive");
    const double xi = std::sqrt(omega) * x;
    double h_prev = 1.0, h = 2.0 * xi;
    if (n == 0) h = h_prev;
    for (int k = 1; k < n; ++k) {
        double h_next = 2.0 * xi * h - 2.0 * k * h_prev;
        h_prev = h;
        h = h_next;
    }
    double log_fact = 0.0;
    for (int k = 2; k <= n; ++k) log_fact += std::log(static_cast<double>(k));
    double norm = std::sqrt(std::exp(-n * std::log(2.0) - log_fact) * std::sqrt(omega / kPi));
    return norm * h * std::exp(-0.5 * omega * x * x);
}

double x3_matrix_element(int m, double omega) {
    const double s = std::pow(2.0 * omega, 1.5);
    if (m == 1) return 3.0 / s;
    if (m == 3) return std::sqrt(6.0) / s;
    return 0.0;
}

double x4_matrix_element(int m, double omega) {
    const double s = 4.0 * omega * omega;
    if (m == 0) return 3.0 / s;
    if (m == 2) return 6.0 * std::sqrt(2.0) / s;
    if (m == 4) return 2.0 * std::sqrt(6.0) / s;
    return 0.0;
}

std::array<double, 4> oscillator_mixing_coefficients(const OscillatorParams& p) {
    check_oscillator(p);
    const double w = p.omega;
    const double v3 = p.eps1 * std::pow(w, 1.5); // coefficient of x^3 in V
    const double v4 = p.eps2 * w * w;            // coefficient of x^4 in V
    std::array<double, 4> c{};
    c[0] = -v3 * x3_matrix_element(1, w) / (1.0 * w);
    c[1] = -v4 * x4_matrix_element(2, w) / (2.0 * w);
    c[2] = -v3 * x3_matrix_element(3, w) / (3.0 * w);
    c[3] = -v4 * x4_matrix_element(4, w) / (4.0 * w);
    return c;
}

std::array<double, 5> bracket_coefficients(const OscillatorParams& p, BracketSource source) {
    check_oscillator(p);
    const double w = p.omega;
    const double sw = std::sqrt(w);
    std::array<double, 5> b{};
    if (source == BracketSource::paper) {
        b[0] = 1.0 - (15.0 / 16.0) * p.eps2 / w;
        b[1] = -2.0 * p.eps1 / sw;
        b[2] = (9.0 / 4.0) * p.eps2;
        b[3] = sw * p.eps1 / 3.0;
        b[4] = -w * p.eps2 / 4.0;
        return b;
    }
    // Expansion of psi0 + sum_m c_m psi_m in powers of x, divided by the
    // Gaussian ground amplitude. H1..H4 in xi = sqrt(w) x:
    //   H1 = 2 xi, H2 = 4 xi^2 - 2, H3 = 8 xi^3 - 12 xi, H4 = 16 xi^4 - 48 xi^2 + 12.
    auto c = oscillator_mixing_coefficients(p);
    const double n1 = 1.0 / std::sqrt(2.0);
    const double n2 = 1.0 / std::sqrt(8.0);
    const double n3 = 1.0 / std::sqrt(48.0);
    const double n4 = 1.0 / std::sqrt(384.0);
    // coefficients in xi
    double a0 = 1.0 + c[1] * n2 * (-2.0) + c[3] * n4 * 12.0;
    double a1 = c[0] * n1 * 2.0 + c[2] * n3 * (-12.0);
    double a2 = c[1] * n2 * 4.0 + c[3] * n4 * (-48.0);
    double a3 = c[2] * n3 * 8.0;
    double a4 = c[3] * n4 * 16.0;
    b[0] = a0;
    b[1] = a1 * sw;
    b[2] = a2 * w;
    b[3] = a3 * sw * w;
    b[4] = a4 * w * w;
    return b;
}

double perturbed_amplitude_paper(const OscillatorParams& p, double x) {
    auto b = bracket_coefficients(p, BracketSource::paper);
    double poly = b[0] + x * (b[1] + x * (b[2] + x * (b[3] + x * b[4])));
    return gaussian_amplitude(p.omega, x) * poly;
}

AmplitudeOnGrid perturbation_first_order(const OscillatorParams& p, const Grid& g, int n_max) {
    check_oscillator(p);
    if (n_max < 4)
        throw PreconditionError("perturbation_first_order requires n_max >= 4");
    auto c = oscillator_mixing_coefficients(p);
    AmplitudeOnGrid amp{g, std::vector<double>(static_cast<std::size_t>(g.n_points))};
    for (int i = 0; i < g.n_points; ++i) {
        double x = g.node(i);
        double v = hermite_eigenfunction(0, p.omega, x);
        for (int m = 1; m <= 4; ++m)
            v += c[static_cast<std::size_t>(m - 1)] * hermite_eigenfunction(m, p.omega, x);
        amp.values[static_cast<std::size_t>(i)] = v;
    }
    std::vector<double> sq(amp.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = amp.values[i] * amp.values[i];
    double mass = trapezoid(g, sq);
    double s = 1.0 / std::sqrt(mass);
    for (double& v : amp.values) v *= s;
    return amp;
}

Grid oscillator_grid(double omega, int n_points) {
    double L = 12.0 / std::sqrt(omega);
    return Grid(-L, L, n_points);
}

C8Density::C8Density(const OscillatorParams& p, BracketSource source, const Grid& g)
    : params_(p), bracket_(bracket_coefficients(p, source)), grid_(g) {
    std::vector<double> vals(static_cast<std::size_t>(g.n_points));
    std::vector<double> clipped(static_cast<std::size_t>(g.n_points), 0.0);
    for (int i = 0; i < g.n_points; ++i) {
        double r = raw(g.node(i));
        if (r < 0.0) {
            clipped[static_cast<std::size_t>(i)] = -r;
            r = 0.0;
        }
        vals[static_cast<std::size_t>(i)] = r;
    }
    clamped_mass_ = trapezoid(g, clipped);
    if (clamped_mass_ > 1e-3) {
        std::ostringstream os;
        os << "clamped mass " << clamped_mass_ << " exceeds 1e-3; eps too large for first order";
        throw ClampMassExceededError(os.str());
    }
    norm_ = trapezoid(g, vals);
    if (norm_ <= 0.0)
        throw ZeroMassError("C8 density has non-positive mass on its grid");
}

C8Density::C8Density(const OscillatorParams& p, BracketSource source)
    : C8Density(p, source, oscillator_grid(p.omega)) {}

double C8Density::raw(double x) const {
    const auto& b = bracket_;
    double poly = b[0] + x * (b[1] + x * (b[2] + x * (b[3] + x * b[4])));
    double g = std::sqrt(params_.omega / kPi) * std::exp(-params_.omega * x * x);
    return g * poly * poly;
}

double C8Density::operator()(double x) const {
    double r = raw(x);
    return (r < 0.0 ? 0.0 : r) / norm_;
}

DensityOnGrid C8Density::on_grid() const {
    DensityOnGrid d{grid_, std::vector<double>(static_cast<std::size_t>(grid_.n_points))};
    for (int i = 0; i < grid_.n_points; ++i)
        d.values[static_cast<std::size_t>(i)] = (*this)(grid_.node(i));
    return d;
}

double c8_density(const OscillatorParams& p, double x, BracketSource source) {
    return C8Density(p, source)(x);
}

double laplace_density(const LaplaceModel& m, double x) {
    if (m.lam <= 0.0)
        throw SignError("laplace lambda must be positive");
    return m.lam * std::exp(-2.0 * m.lam * std::abs(x));
}

double price_return_density(const LaplaceModel& m, double y, bool paper_form) {
    if (m.lam <= 0.0)
        throw SignError("laplace lambda must be positive");
    if (y <= 0.0)
        throw DomainError("price return y = e^x is strictly positive");
    if (paper_form)
        return m.lam * std::pow(y, -2.0 * m.lam);
    return laplace_density(m, std::log(y)) / y;
}

} // namespace finfo
