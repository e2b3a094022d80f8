#include "finfo/eigensolver.hpp"
#include "finfo/errors.hpp"
#include "finfo/fitting.hpp"
#include "finfo/grid.hpp"
#include "finfo/io_util.hpp"
#include "finfo/models.hpp"
#include "finfo/potentials.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace finfo;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::usage: return 1;
    case ErrorKind::data: return 2;
    case ErrorKind::numerical: return 3;
    }
    return 2;
}

void emit_error(const std::string& type, int code, const std::string& message) {
    std::ostringstream os;
    std::string msg = message;
    std::string esc;
    for (char c : msg) {
        if (c == '"' || c == '\\') esc.push_back('\\');
        esc.push_back(c == '\n' ? ' ' : c);
    }
    os << "{\"error\":{\"type\":\"" << type << "\",\"exit_code\":" << code << ",\"message\":\""
       << esc << "\"}}";
    std::cerr << os.str() << std::endl;
}

Grid parse_grid_flag(const std::string& s) {
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ',' || c2 != ',')
        throw UsageError("--grid expects 'xmin,xmax,n'");
    return Grid(lo, hi, n);
}

std::string grid_json(const Grid& g) {
    std::ostringstream os;
    os << "{\"x_min\":" << format_json_number(g.x_min) << ",\"x_max\":" << format_json_number(g.x_max)
       << ",\"n_points\":" << g.n_points << "}";
    return os.str();
}

std::string sidecar_path(const std::string& csv_path) {
    auto dot = csv_path.find_last_of('.');
    if (dot == std::string::npos) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

void run_returns(const std::string& prices_path, const std::string& column,
                 const std::string& out_path) {
    auto prices = read_price_column(prices_path, column);
    ReturnSeries r = log_returns(prices);
    r.source = prices_path;
    write_returns_csv(out_path, r);
}

void run_solve(const std::string& spec_path, const std::optional<std::string>& grid_flag,
               const std::string& out_path) {
    Potential pot = parse_potential_json(read_file(spec_path));
    std::optional<Grid> grid;
    if (grid_flag) grid = parse_grid_flag(*grid_flag);

    double energy = 0.0, residual = 0.0;
    AmplitudeOnGrid amp;
    if (const auto* poly = std::get_if<PolynomialPotential>(&pot)) {
        Grid g = grid ? *grid : default_grid(*poly);
        GroundState gs = ground_state(*poly, g);
        energy = gs.energy;
        residual = gs.residual;
        amp = std::move(gs.amplitude);
    } else if (const auto* well = std::get_if<SquareWellPotential>(&pot)) {
        Grid g = grid ? *grid : default_grid(*well);
        GroundState gs = ground_state(*well, g);
        energy = gs.energy;
        residual = gs.residual;
        amp = std::move(gs.amplitude);
    } else {
        const auto& dp = std::get<DeltaPotential>(pot);
        DeltaGroundState gs = delta_ground_state(dp);
        Grid g = grid ? *grid : default_grid(dp);
        energy = gs.energy;
        residual = 0.0; // closed form
        amp.grid = g;
        amp.values.resize(static_cast<std::size_t>(g.n_points));
        for (int i = 0; i < g.n_points; ++i)
            amp.values[static_cast<std::size_t>(i)] = gs.amplitude(g.node(i));
    }

    std::ostringstream csv;
    csv << "x,psi,p\n";
    for (int i = 0; i < amp.grid.n_points; ++i) {
        double psi = amp.values[static_cast<std::size_t>(i)];
        csv << format_csv(amp.grid.node(i)) << ',' << format_csv(psi) << ','
            << format_csv(psi * psi) << '\n';
    }
    write_file_atomic(out_path, csv.str());

    std::ostringstream js;
    js << "{\"energy\":" << format_json_number(energy)
       << ",\"residual\":" << format_json_number(residual) << ",\"grid\":" << grid_json(amp.grid)
       << "}\n";
    write_file_atomic(sidecar_path(out_path), js.str());
}

void run_info(const std::string& density_path, const std::string& out_path) {
    DensityOnGrid raw = read_density_csv(density_path);
    double mass = trapezoid(raw.grid, raw.values);
    DensityOnGrid d = normalize(raw);
    bool renormalized = std::abs(mass - 1.0) > 1e-6;

    double fisher = fisher_information(amplitude_from_density(d));
    double var = variance(d);
    double peak = peak_height(d);
    double edge = edge_to_peak_ratio(d.values);

    std::ostringstream js;
    js << "{\"fisher_information\":" << format_json_number(fisher)
       << ",\"variance\":" << format_json_number(var)
       << ",\"cramer_rao_product\":" << format_json_number(var * fisher)
       << ",\"peak_height\":" << format_json_number(peak) << ",\"grid\":" << grid_json(d.grid)
       << ",\"warnings\":[";
    bool first = true;
    if (renormalized) {
        js << "\"input mass " << format_json_number(mass) << " renormalized to 1\"";
        first = false;
    }
    if (edge > 1e-8) {
        if (!first) js << ',';
        js << "\"edge density exceeds 1e-8 of peak; tail mass may be truncated\"";
    }
    js << "]}\n";
    write_file_atomic(out_path, js.str());
}

BracketSource parse_source(const std::string& s) {
    if (s == "paper") return BracketSource::paper;
    if (s == "oracle") return BracketSource::oracle;
    throw UsageError("--source must be 'paper' or 'oracle'");
}

void run_fit(const std::string& model, const std::string& input_path, const std::string& out_path,
             const std::string& source, std::optional<std::uint64_t> seed) {
    ReturnSeries r = read_returns_csv(input_path);
    FitReport rep;
    if (model == "gaussian")
        rep = fit_gaussian(r);
    else if (model == "laplace")
        rep = fit_laplace(r);
    else if (model == "anharmonic")
        rep = fit_anharmonic(r, parse_source(source));
    else if (model == "square_well")
        rep = fit_square_well(r);
    else
        throw UsageError("unknown model '" + model + "'");
    rep.seed = seed;
    write_file_atomic(out_path, fit_report_to_json(rep) + "\n");
}

void run_compare(const std::string& input_path, const std::string& models_flag,
                 const std::string& out_path, const std::string& source,
                 std::optional<std::uint64_t> seed) {
    ReturnSeries r = read_returns_csv(input_path);
    std::vector<std::string> families;
    std::stringstream ss(models_flag);
    std::string fam;
    while (std::getline(ss, fam, ','))
        if (!fam.empty()) families.push_back(fam);
    auto reports = compare_models(r, families, parse_source(source), seed);

    std::ostringstream js;
    js << "{";
    if (seed) js << "\"seed\":" << *seed << ",";
    js << "\"reports\":[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) js << ',';
        js << fit_report_to_json(reports[i]);
    }
    js << "]}\n";
    write_file_atomic(out_path, js.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher-information market models: ground states, diagnostics, fits"};
    app.require_subcommand(1);

    std::string prices_path, column = "close", out_path;
    auto* cmd_returns = app.add_subcommand("returns", "Compute log returns from a prices CSV");
    cmd_returns->add_option("--prices", prices_path, "prices CSV with a header row")->required();
    cmd_returns->add_option("--column", column, "price column name");
    cmd_returns->add_option("-o,--output", out_path, "output returns CSV")->required();

    std::string spec_path;
    std::string grid_flag;
    auto* cmd_solve = app.add_subcommand("solve", "Ground state of a potential spec");
    cmd_solve->add_option("--potential", spec_path, "potential spec JSON file")->required();
    cmd_solve->add_option("--grid", grid_flag, "grid override 'xmin,xmax,n'");
    cmd_solve->add_option("-o,--output", out_path, "output CSV (x,psi,p); JSON sidecar beside it")
        ->required();

    std::string density_path;
    auto* cmd_info = app.add_subcommand("info", "Information diagnostics of a density CSV");
    cmd_info->add_option("--density", density_path, "density CSV (x,value)")->required();
    cmd_info->add_option("-o,--output", out_path, "output JSON")->required();

    std::string model, input_path, source = "oracle";
    std::uint64_t seed_val = 0;
    auto* cmd_fit = app.add_subcommand("fit", "Maximum-likelihood fit of one model family");
    cmd_fit->add_option("--model", model, "gaussian|anharmonic|laplace|square_well")->required();
    cmd_fit->add_option("--input", input_path, "returns CSV")->required();
    cmd_fit->add_option("--source", source, "C8 bracket source: paper|oracle");
    auto* fit_seed = cmd_fit->add_option("--seed", seed_val, "seed recorded in the report");
    cmd_fit->add_option("-o,--output", out_path, "output FitReport JSON")->required();

    std::string models_flag;
    auto* cmd_compare = app.add_subcommand("compare", "Fit several families and rank by AIC");
    cmd_compare->add_option("--input", input_path, "returns CSV")->required();
    cmd_compare->add_option("--models", models_flag, "comma-separated family list")->required();
    cmd_compare->add_option("--source", source, "C8 bracket source: paper|oracle");
    auto* cmp_seed = cmd_compare->add_option("--seed", seed_val, "seed recorded in the report");
    cmd_compare->add_option("-o,--output", out_path, "output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("UsageError", 1, e.what());
        return 1;
    }

    try {
        if (cmd_returns->parsed()) {
            run_returns(prices_path, column, out_path);
        } else if (cmd_solve->parsed()) {
            run_solve(spec_path, grid_flag.empty() ? std::nullopt : std::optional(grid_flag),
                      out_path);
        } else if (cmd_info->parsed()) {
            run_info(density_path, out_path);
        } else if (cmd_fit->parsed()) {
            std::optional<std::uint64_t> seed;
            if (fit_seed->count() > 0) seed = seed_val;
            run_fit(model, input_path, out_path, source, seed);
        } else if (cmd_compare->parsed()) {
            std::optional<std::uint64_t> seed;
            if (cmp_seed->count() > 0) seed = seed_val;
            run_compare(input_path, models_flag, out_path, source, seed);
        }
    } catch (const Error& e) {
        int code = exit_code_for(e.kind());
        emit_error(e.type(), code, e.what());
        return code;
    } catch (const std::exception& e) {
        emit_error("InternalError", 2, e.what());
        return 2;
    }
    return 0;
}
