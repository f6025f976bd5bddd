// Command-line front end: tabulates the bounce trajectory, the energy-temperature
// map, actions, fluctuation eigenvalues, and the decay-rate curve, and runs the
// independent numerical verification suite.
//
// Exit codes: 0 success, 1 usage error, 2 domain error, 3 verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubictunnel/cubictunnel.hpp"

namespace ct = cubictunnel;

namespace {

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    int count = 201;
    bool log_spaced = false;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() < 3 || parts.size() > 4) {
        throw CLI::ValidationError("--grid", "expected min:max:count[:log|lin]");
    }
    try {
        g.min = std::stod(parts[0]);
        g.max = std::stod(parts[1]);
        g.count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected numeric min:max:count[:log|lin]");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            g.log_spaced = true;
        } else if (parts[3] != "lin") {
            throw CLI::ValidationError("--grid", "spacing must be 'log' or 'lin'");
        }
    }
    if (g.count < 2 || !(g.max > g.min)) {
        throw CLI::ValidationError("--grid", "need max > min and count >= 2");
    }
    return g;
}

std::vector<double> grid_values(const GridSpec& g) {
    std::vector<double> v;
    v.reserve(g.count);
    if (g.log_spaced) {
        if (!(g.min > 0.0)) {
            throw CLI::ValidationError("--grid", "log spacing needs min > 0");
        }
        const double lo = std::log(g.min), hi = std::log(g.max);
        for (int i = 0; i < g.count; ++i) {
            v.push_back(std::exp(lo + (hi - lo) * i / (g.count - 1)));
        }
    } else {
        for (int i = 0; i < g.count; ++i) {
            v.push_back(g.min + (g.max - g.min) * i / (g.count - 1));
        }
    }
    return v;
}

struct CommonOptions {
    double mass_me = 1000.0;
    double hbar_omega_mev = 20.0;
    double a_angstrom = 1.0;
    std::string format = "csv";
    std::string out;
    std::string grid;
    double rtol = 1e-10;
};

void emit_table(const ct::io::Table& table, const CommonOptions& opt) {
    std::ostringstream body;
    if (opt.format == "json") {
        body << ct::io::to_json(table).dump(2) << "\n";
    } else {
        ct::io::write_csv(body, table);
    }
    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opt.out);
        if (!f) {
            throw ct::ParameterDomainError("cannot open output file: " + opt.out);
        }
        f << body.str();
    }
}

int run_bounce(const CommonOptions& opt, std::optional<double> kappa,
               std::optional<double> tstar, std::optional<double> energy_ratio) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    double k = -2.0 / 27.0;
    if (kappa) {
        k = *kappa;
    } else if (energy_ratio) {
        if (!(*energy_ratio >= 0.0 && *energy_ratio <= 1.0)) {
            throw ct::ParameterDomainError("--energy-ratio must lie in [0, 1]");
        }
        k = -4.0 / 27.0 * *energy_ratio;
    }
    ct::classical::BounceState st;
    if (tstar) {
        st = ct::classical::invert_temperature(*tstar, params);
    } else {
        st = ct::classical::bounce_state(k, params);
    }
    GridSpec g{0.0, 1.0, 201, false};
    if (!opt.grid.empty()) {
        g = parse_grid(opt.grid);
    }
    // Times are fractions of the period; the zero-energy orbit has an infinite
    // period, so its window is measured in units of the harmonic period.
    const double unit = std::isfinite(st.L)
                            ? st.L
                            : 2.0 * ct::constants::pi / params.hbar_omega;
    ct::io::Table table;
    table.header = {"tau_hbar_per_meV", "x_cl_angstrom", "xdot_cl_angstrom_meV"};
    for (const double f : grid_values(g)) {
        const double tau = f * unit;
        table.rows.push_back({tau, ct::classical::bounce(tau, 0.0, st, params),
                              ct::classical::bounce_velocity(tau, 0.0, st, params)});
    }
    emit_table(table, opt);
    return 0;
}

int run_map(const CommonOptions& opt) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    GridSpec g{0.0, 1.0, 201, false};
    if (!opt.grid.empty()) {
        g = parse_grid(opt.grid);
    }
    ct::io::Table table;
    table.header = {"energy_over_barrier", "T_star_K"};
    for (const double r : grid_values(g)) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw ct::ParameterDomainError("map: energy ratio must lie in [0, 1]");
        }
        const auto st = ct::classical::bounce_state(-4.0 / 27.0 * r, params);
        table.rows.push_back({r, ct::classical::temperature(st)});
    }
    emit_table(table, opt);
    return 0;
}

int run_action(const CommonOptions& opt) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    GridSpec g{0.01, 0.9999, 301, false};
    if (!opt.grid.empty()) {
        g = parse_grid(opt.grid);
    }
    ct::io::Table table;
    table.header = {"T_star_K", "action_over_hbar", "mass_norm_sq_over_hbar",
                    "thermal_action_over_hbar"};
    for (const double f : grid_values(g)) {
        const double t = f * params.t_crossover;
        const auto st = ct::classical::invert_temperature(t, params);
        const double nsq = ct::classical::norm_squared(st, params);
        table.rows.push_back({st.T_star, ct::classical::classical_action(st, params),
                              params.mass_internal * nsq,
                              ct::classical::thermal_action(t, params)});
    }
    emit_table(table, opt);
    return 0;
}

int run_spectrum(const CommonOptions& opt) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    GridSpec g{0.0, 1.0, 201, false};
    if (!opt.grid.empty()) {
        g = parse_grid(opt.grid);
    }
    const double w2 = params.hbar_omega * params.hbar_omega;
    ct::io::Table table;
    table.header = {"energy_over_barrier", "eps_1_over_omega_sq",
                    "eps_minus1_over_omega_sq"};
    for (const double r : grid_values(g)) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw ct::ParameterDomainError("spectrum: energy ratio must lie in [0, 1]");
        }
        const auto st = ct::classical::bounce_state(-4.0 / 27.0 * r, params);
        const auto sp = ct::fluctuation::lame_spectrum(st, params);
        table.rows.push_back({r, sp.eps_1 / w2, sp.eps_minus1 / w2});
    }
    emit_table(table, opt);
    return 0;
}

int run_rate(const CommonOptions& opt, double window) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    std::vector<double> grid;
    if (opt.grid.empty()) {
        grid = ct::rate::default_temperature_grid(params);
    } else {
        const GridSpec g = parse_grid(opt.grid);
        for (const double f : grid_values(g)) {
            grid.push_back(f * params.t_crossover);
        }
    }
    auto curve = ct::rate::scan(params, grid);
    if (window != 0.02) {
        try {
            curve.fitted_exponent =
                ct::rate::fit_crossover_exponent(curve.points, params, window);
        } catch (const ct::FitError&) {
            curve.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        }
    }

    ct::io::Table table;
    table.header = {"T_star_K",
                    "kappa",
                    "action_over_hbar",
                    "thermal_action_over_hbar",
                    "norm_sq_angstrom2_meV",
                    "det_ratio_per_meV2",
                    "hbar_Gamma_meV",
                    "hbar_Gamma_arrhenius_meV"};
    for (const auto& p : curve.points) {
        table.rows.push_back({p.T_star, p.kappa, p.action, p.thermal_action, p.norm_sq,
                              p.det_ratio, p.gamma, p.arrhenius});
    }

    nlohmann::json summary = ct::io::to_json(curve)["features"];
    summary["warnings"] = curve.warnings;

    if (opt.out.empty()) {
        // No output file: the table is the payload.
        emit_table(table, opt);
    } else {
        // Table to the file, feature summary to stdout.
        if (opt.format == "json") {
            std::ofstream f(opt.out);
            if (!f) {
                throw ct::ParameterDomainError("cannot open output file: " + opt.out);
            }
            f << ct::io::to_json(curve).dump(2) << "\n";
        } else {
            std::ofstream f(opt.out);
            if (!f) {
                throw ct::ParameterDomainError("cannot open output file: " + opt.out);
            }
            ct::io::write_csv(f, table);
        }
        std::cout << summary.dump(2) << "\n";
    }
    return 0;
}

int run_verify(const CommonOptions& opt) {
    const auto params =
        ct::units::derive_params(opt.mass_me, opt.hbar_omega_mev, opt.a_angstrom);
    const double rtol_monodromy = std::min(opt.rtol, 1e-12);
    const auto reports = ct::oracle::verify_all(params, opt.rtol, rtol_monodromy);
    const auto j = ct::io::to_json(reports);
    if (opt.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(opt.out);
        if (!f) {
            throw ct::ParameterDomainError("cannot open output file: " + opt.out);
        }
        f << j.dump(2) << "\n";
    }
    return j.at("all_pass").get<bool>() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical decay of a metastable state in a cubic potential"};
    app.require_subcommand(1);

    CommonOptions opt;
    app.add_option("--mass-me,--mass_me", opt.mass_me, "Particle mass in electron masses")
        ->capture_default_str();
    app.add_option("--hbar-omega-mev,--hbar_omega_mev", opt.hbar_omega_mev,
                   "Harmonic energy hbar*omega in meV")
        ->capture_default_str();
    app.add_option("--a-angstrom,--a_angstrom", opt.a_angstrom,
                   "Distance from the well to the barrier zero in Angstrom")
        ->capture_default_str();
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", opt.out, "Write output to this file instead of stdout");
    app.add_option("--grid", opt.grid, "Sampling grid as min:max:count[:log|lin]");
    app.add_option("--rtol", opt.rtol, "Integrator relative tolerance (verify)")
        ->capture_default_str();
    app.set_config("--config", "", "Read options from an INI file (key=value, # comments)");

    auto* bounce = app.add_subcommand("bounce", "Tabulate the periodic bounce trajectory");
    std::optional<double> kappa, tstar, energy_ratio;
    auto* opt_kappa = bounce->add_option("--kappa", kappa, "Energy parameter in [-4/27, 0]");
    auto* opt_tstar = bounce->add_option("--tstar", tstar, "Temperature T* in Kelvin");
    auto* opt_ratio =
        bounce->add_option("--energy-ratio", energy_ratio, "|E|/V(a) in [0, 1]");
    opt_kappa->excludes(opt_tstar);
    opt_kappa->excludes(opt_ratio);
    opt_tstar->excludes(opt_ratio);

    auto* map = app.add_subcommand("map", "Tabulate the energy-temperature map");
    auto* action = app.add_subcommand("action", "Tabulate actions against temperature");
    auto* spectrum =
        app.add_subcommand("spectrum", "Tabulate fluctuation eigenvalues against energy");
    auto* rate = app.add_subcommand("rate", "Scan the decay rate up to the crossover");
    double window = 0.02;
    rate->add_option("--window", window,
                     "Crossover fit window as a fraction of T_c*")
        ->capture_default_str();
    auto* verify =
        app.add_subcommand("verify", "Run the independent numerical cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bounce->parsed()) {
            return run_bounce(opt, kappa, tstar, energy_ratio);
        }
        if (map->parsed()) {
            return run_map(opt);
        }
        if (action->parsed()) {
            return run_action(opt);
        }
        if (spectrum->parsed()) {
            return run_spectrum(opt);
        }
        if (rate->parsed()) {
            return run_rate(opt, window);
        }
        if (verify->parsed()) {
            return run_verify(opt);
        }
    } catch (const ct::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
