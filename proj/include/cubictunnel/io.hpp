#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubictunnel/errors.hpp"
#include "cubictunnel/oracle.hpp"
#include "cubictunnel/rate.hpp"
#include "cubictunnel/units.hpp"

namespace cubictunnel::io {

// Canonical numeric column format: 12 fractional digits of scientific notation,
// byte-stable across runs for identical inputs.
inline std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_sci(row[i]);
        }
        os << "\n";
    }
}

// JSON has no NaN or infinity; absent or degenerate values serialize as null.
inline nlohmann::json json_or_null(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

inline nlohmann::json to_json(const units::PotentialParams& params) {
    return {{"mass_me", params.mass},
            {"hbar_omega_mev", params.hbar_omega},
            {"a_angstrom", params.a}};
}

inline units::PotentialParams params_from_json(const nlohmann::json& j) {
    return units::derive_params(j.at("mass_me").get<double>(),
                                j.at("hbar_omega_mev").get<double>(),
                                j.at("a_angstrom").get<double>());
}

inline nlohmann::json to_json(const Table& table) {
    nlohmann::json j;
    j["columns"] = table.header;
    j["rows"] = table.rows;
    return j;
}

inline nlohmann::json to_json(const rate::RatePoint& p) {
    return {{"T_star_K", p.T_star},
            {"kappa", p.kappa},
            {"action_over_hbar", p.action},
            {"thermal_action_over_hbar", p.thermal_action},
            {"norm_sq_angstrom2_mev", p.norm_sq},
            {"det_ratio_per_mev2", p.det_ratio},
            {"hbar_gamma_mev", p.gamma},
            {"log_hbar_gamma", json_or_null(p.log_gamma)},
            {"hbar_gamma_arrhenius_mev", p.arrhenius},
            {"underflow", p.underflow}};
}

inline rate::RatePoint rate_point_from_json(const nlohmann::json& j) {
    rate::RatePoint p;
    p.T_star = j.at("T_star_K").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.action = j.at("action_over_hbar").get<double>();
    p.thermal_action = j.at("thermal_action_over_hbar").get<double>();
    p.norm_sq = j.at("norm_sq_angstrom2_mev").get<double>();
    p.det_ratio = j.at("det_ratio_per_mev2").get<double>();
    p.gamma = j.at("hbar_gamma_mev").get<double>();
    p.log_gamma = j.at("log_hbar_gamma").is_null()
                      ? -std::numeric_limits<double>::infinity()
                      : j.at("log_hbar_gamma").get<double>();
    p.arrhenius = j.at("hbar_gamma_arrhenius_mev").get<double>();
    p.underflow = j.at("underflow").get<bool>();
    return p;
}

inline nlohmann::json to_json(const rate::RateCurve& curve) {
    nlohmann::json j;
    j["params"] = to_json(curve.params);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : curve.points) {
        pts.push_back(to_json(p));
    }
    j["points"] = pts;
    j["features"] = {{"T_peak_K", curve.T_peak},
                     {"hbar_gamma_peak_mev", curve.gamma_peak},
                     {"T_arrhenius_K", json_or_null(curve.T_arrhenius)},
                     {"fitted_exponent", json_or_null(curve.fitted_exponent)}};
    j["warnings"] = curve.warnings;
    return j;
}

inline rate::RateCurve rate_curve_from_json(const nlohmann::json& j) {
    rate::RateCurve curve;
    curve.params = params_from_json(j.at("params"));
    for (const auto& pj : j.at("points")) {
        curve.points.push_back(rate_point_from_json(pj));
    }
    const auto& f = j.at("features");
    curve.T_peak = f.at("T_peak_K").get<double>();
    curve.gamma_peak = f.at("hbar_gamma_peak_mev").get<double>();
    curve.T_arrhenius = f.at("T_arrhenius_K").is_null()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : f.at("T_arrhenius_K").get<double>();
    curve.fitted_exponent = f.at("fitted_exponent").is_null()
                                ? std::numeric_limits<double>::quiet_NaN()
                                : f.at("fitted_exponent").get<double>();
    for (const auto& w : j.at("warnings")) {
        curve.warnings.push_back(w.get<std::string>());
    }
    return curve;
}

inline nlohmann::json to_json(const std::vector<oracle::OracleReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        arr.push_back({{"quantity", r.quantity},
                       {"analytic", r.analytic},
                       {"numeric", r.numeric},
                       {"discrepancy", r.discrepancy},
                       {"threshold", r.threshold},
                       {"rtol", r.rtol},
                       {"steps", r.steps},
                       {"converged", r.converged},
                       {"pass", r.pass()}});
        all_pass = all_pass && r.pass();
    }
    return {{"reports", arr}, {"all_pass", all_pass}};
}

} // namespace cubictunnel::io
