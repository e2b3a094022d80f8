#include "finfo/potentials.hpp"

#include "finfo/errors.hpp"
#include "finfo/io_util.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace finfo {

double PolynomialPotential::evaluate(double x) const {
    // Horner over -(1/8) sum lambda_k x^k, k starting at 1.
    double acc = 0.0;
    for (std::size_t i = lambdas.size(); i-- > 0;)
        acc = acc * x + lambdas[i];
    return -0.125 * acc * x;
}

int PolynomialPotential::highest_order() const {
    for (std::size_t i = lambdas.size(); i-- > 0;)
        if (lambdas[i] != 0.0) return static_cast<int>(i) + 1;
    return 0;
}

bool PolynomialPotential::even() const {
    for (std::size_t i = 0; i < lambdas.size(); i += 2)
        if (lambdas[i] != 0.0) return false; // odd orders are 1-based even indices
    return true;
}

bool OscillatorParams::perturbation_marginal() const {
    return std::abs(eps1) / omega > 0.1 || std::abs(eps2) / omega > 0.1;
}

double SquareWellPotential::evaluate(double x) const {
    return std::abs(x) <= half_width ? -depth : 0.0;
}

PolynomialPotential potential_from_multipliers(const std::vector<double>& lambdas) {
    PolynomialPotential p{lambdas};
    int m = p.highest_order();
    if (m == 0)
        throw NotConfiningError("all multipliers vanish; potential is not confining");
    if (m % 2 != 0)
        throw NotConfiningError("highest retained multiplier has odd order; potential is unbounded below");
    if (lambdas[static_cast<std::size_t>(m - 1)] >= 0.0) {
        std::ostringstream os;
        os << "lambda_" << m << " = " << lambdas[static_cast<std::size_t>(m - 1)]
           << " must be negative for a confining potential";
        throw NotConfiningError(os.str());
    }
    return p;
}

double omega_from_lambda2(double lambda2) {
    if (lambda2 >= 0.0)
        throw SignError("omega_from_lambda2 requires lambda2 < 0");
    return std::sqrt(-lambda2) / 2.0;
}

double lambda2_from_omega(double omega) {
    if (omega <= 0.0)
        throw SignError("lambda2_from_omega requires omega > 0");
    return -4.0 * omega * omega;
}

PolynomialPotential multipliers_from_oscillator(const OscillatorParams& p) {
    if (p.omega <= 0.0)
        throw SignError("oscillator omega must be positive");
    bool anharmonic = p.eps1 != 0.0 || p.eps2 != 0.0;
    if (anharmonic && p.eps2 <= 0.0)
        throw SignError("anharmonic oscillator requires eps2 > 0 (lambda4 < 0) for confinement");
    std::vector<double> lambdas;
    const double w = p.omega;
    if (!anharmonic) {
        lambdas = {0.0, -4.0 * w * w};
    } else {
        lambdas = {0.0, -4.0 * w * w, -8.0 * p.eps1 * std::pow(w, 1.5), -8.0 * p.eps2 * w * w};
    }
    return potential_from_multipliers(lambdas);
}

double oscillator_potential(const OscillatorParams& p, double x) {
    const double w = p.omega;
    const double u = std::sqrt(w) * x;
    return 0.5 * w * w * x * x + p.eps1 * u * u * u + p.eps2 * u * u * u * u;
}

double energy_from_epsilon(double eps) { return eps / 8.0; }

namespace {

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw IoError(std::string("potential spec: missing numeric field '") + key + "'");
    return j[key].get<double>();
}

} // namespace

Potential parse_potential_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("potential spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw IoError("potential spec: missing string field 'type'");
    const std::string type = j["type"].get<std::string>();
    if (type == "polynomial") {
        if (!j.contains("lambdas") || !j["lambdas"].is_array())
            throw IoError("polynomial spec: missing array field 'lambdas'");
        std::vector<double> lambdas;
        for (const auto& v : j["lambdas"]) {
            if (!v.is_number())
                throw IoError("polynomial spec: 'lambdas' must be numeric");
            lambdas.push_back(v.get<double>());
        }
        return potential_from_multipliers(lambdas);
    }
    if (type == "oscillator") {
        OscillatorParams p;
        p.omega = require_number(j, "omega");
        p.eps1 = j.value("eps1", 0.0);
        p.eps2 = j.value("eps2", 0.0);
        if (p.omega <= 0.0)
            throw SignError("oscillator spec: omega must be > 0");
        // Validate the multiplier mapping up front.
        (void)multipliers_from_oscillator(p);
        return multipliers_from_oscillator(p);
    }
    if (type == "square_well") {
        SquareWellPotential w;
        w.half_width = require_number(j, "half_width");
        w.depth = require_number(j, "depth");
        if (w.half_width <= 0.0 || w.depth <= 0.0)
            throw SignError("square_well spec: half_width and depth must be > 0");
        return w;
    }
    if (type == "delta") {
        DeltaPotential d;
        d.strength = require_number(j, "strength");
        if (d.strength <= 0.0)
            throw SignError("delta spec: strength must be > 0");
        return d;
    }
    throw IoError("potential spec: unknown type '" + type + "'");
}

std::string potential_to_json(const Potential& p) {
    std::ostringstream os;
    if (const auto* poly = std::get_if<PolynomialPotential>(&p)) {
        os << "{\"type\":\"polynomial\",\"lambdas\":[";
        for (std::size_t i = 0; i < poly->lambdas.size(); ++i) {
            if (i) os << ',';
            os << format_json_number(poly->lambdas[i]);
        }
        os << "]}";
    } else if (const auto* well = std::get_if<SquareWellPotential>(&p)) {
        os << "{\"type\":\"square_well\",\"half_width\":" << format_json_number(well->half_width)
           << ",\"depth\":" << format_json_number(well->depth) << "}";
    } else {
        const auto& d = std::get<DeltaPotential>(p);
        os << "{\"type\":\"delta\",\"strength\":" << format_json_number(d.strength) << "}";
    }
    return os.str();
}

} // namespace finfo
