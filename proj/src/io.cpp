#include "tubeband/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "tubeband/error.hpp"

namespace tubeband::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument,
                    "line " + std::to_string(line_no) + ": cannot parse number '" +
                        std::string(field) + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

Dataset read_dataset_csv(std::istream& in) {
    Dataset data;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        view = trim(view);
        if (view.empty()) continue;
        const auto comma = view.find(',');
        if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorKind::InvalidArgument,
                        "line " + std::to_string(line_no) + ": expected two comma-separated fields");
        }
        const auto first = trim(view.substr(0, comma));
        const auto second = trim(view.substr(comma + 1));
        if (!header_seen) {
            if (first != "x" || second != "y") {
                throw Error(ErrorKind::InvalidArgument, "missing header line `x,y`");
            }
            header_seen = true;
            continue;
        }
        data.xs.push_back(parse_number(first, line_no));
        data.ys.push_back(parse_number(second, line_no));
    }
    if (!header_seen) throw Error(ErrorKind::EmptyDesign, "input is empty");
    data.validate();
    return data;
}

Dataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open input file: " + path);
    return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "x,y\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << format_double(data.xs[i]) << ',' << format_double(data.ys[i]) << '\n';
    }
}

void write_band_csv(std::ostream& out, const Band& band) {
    out << "x,center,lower,upper\n";
    for (std::size_t k = 0; k < band.grid.size(); ++k) {
        out << format_double(band.grid[k]) << ',' << format_double(band.center[k]) << ','
            << format_double(band.lower(k)) << ',' << format_double(band.upper(k)) << '\n';
    }
}

nlohmann::ordered_json trace_to_json(const LepskiTrace& trace) {
    nlohmann::ordered_json j;
    j["j_min"] = trace.j_min;
    j["j_max"] = trace.j_max;
    j["selected"] = trace.selected;
    j["stop_reason"] = to_string(trace.reason);
    j["threshold_mode"] = to_string(trace.mode);
    j["tau"] = trace.tau;
    j["grid_size"] = trace.grid_size;
    j["endpoint_log"] = to_string(trace.endpoint_log);
    j["noise_estimate"] = to_string(trace.noise);
    j["threshold_log_index"] = trace.log_index;
    auto& cands = j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : trace.candidates) {
        cands.push_back({{"J", c.dimension}, {"sigma_hat", c.sigma_hat}, {"threshold", c.threshold}});
    }
    j["comparisons_evaluated"] = trace.comparisons.size();
    auto& viol = j["violations"] = nlohmann::ordered_json::array();
    for (const auto& c : trace.comparisons) {
        if (c.violated) {
            viol.push_back({{"j", c.j}, {"i", c.i}, {"sup_diff", c.sup_diff}, {"threshold", c.threshold}});
        }
    }
    return j;
}

nlohmann::ordered_json band_to_json(const Band& band) {
    nlohmann::ordered_json j;
    j["method"] = to_string(band.method);
    j["gamma"] = band.gamma;
    j["selected_j"] = band.selected_j;
    j["sigma_hat"] = band.sigma_hat;
    j["noise_estimate"] = to_string(band.noise);
    if (band.method == BandMethod::FixedRadius) {
        j["posterior_draws"] = band.draws;
    } else {
        j["w"] = band.w;
        j["arc_length"] = band.arc_length;
    }
    j["grid_size"] = band.grid.size();
    j["mean_radius"] = band.mean_radius();
    if (!band.radius.empty()) {
        const auto [lo, hi] = std::minmax_element(band.radius.begin(), band.radius.end());
        j["min_radius"] = *lo;
        j["max_radius"] = *hi;
    }
    j["lepski"] = trace_to_json(band.trace);
    return j;
}

nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j;
    j["n"] = cfg.n;
    j["reps"] = cfg.reps;
    j["gamma"] = cfg.gamma;
    j["sigma0_sq"] = cfg.sigma0_sq;
    if (cfg.truth_coeffs.empty()) {
        j["truth"] = "default: 2x - x^3 + exp(-50 (x - 0.5)^2)";
    } else {
        j["truth"] = {{"bspline_order", cfg.truth_order}, {"coefficients", cfg.truth_coeffs}};
    }
    auto& methods = j["methods"] = nlohmann::ordered_json::array();
    for (const auto m : cfg.methods) methods.push_back(to_string(m));
    j["seed"] = cfg.seed;
    j["design"] = "x_i = i / n";
    j["order"] = cfg.lepski.order;
    j["tau"] = cfg.lepski.tau;
    j["threshold_mode"] = to_string(cfg.lepski.mode);
    j["j_min"] = cfg.lepski.j_min;
    j["j_max"] = cfg.lepski.j_max;
    j["grid_size"] = cfg.lepski.grid_size;
    j["endpoint_log"] = to_string(cfg.lepski.endpoint_log);
    j["noise_estimate"] = to_string(cfg.lepski.noise);
    j["frequentist_noise_estimate"] = to_string(cfg.frequentist_noise);
    j["prior_eta"] = cfg.prior.eta;
    j["prior_precision"] = cfg.prior.omega_inv;
    j["fixed_radius_draws"] = cfg.fixed_radius_draws;
    return j;
}

nlohmann::ordered_json report_to_json(const SimulationReport& report) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(report.config);
    j["coverage_check"] = fmt::format(
        "truth inside band at every point of the uniform {}-point band grid", report.config.lepski.grid_size);
    auto& methods = j["methods"] = nlohmann::ordered_json::array();
    for (const auto& m : report.methods) {
        nlohmann::ordered_json row;
        row["method"] = to_string(m.method);
        row["reps"] = m.reps;
        row["covered"] = m.covered;
        row["failures"] = m.failures;
        row["coverage"] = m.coverage;
        row["coverage_se"] = m.coverage_se;
        row["mean_radius"] = m.mean_radius;
        row["radius_q25"] = m.radius_q25;
        row["radius_median"] = m.radius_median;
        row["radius_q75"] = m.radius_q75;
        row["mean_selected_j"] = m.mean_selected_j;
        methods.push_back(std::move(row));
    }
    if (!report.log.empty()) {
        auto& log = j["replicates"] = nlohmann::ordered_json::array();
        for (const auto& r : report.log) {
            log.push_back({{"rep", r.rep},
                           {"method", to_string(r.method)},
                           {"failed", r.failed},
                           {"covered", r.covered},
                           {"mean_radius", r.mean_radius},
                           {"selected_j", r.selected_j}});
        }
    }
    return j;
}

void write_coverage_table_csv(std::ostream& out, std::span<const SimulationReport> reports) {
    std::vector<BandMethod> methods;
    for (const auto& r : reports) {
        for (const auto& m : r.methods) {
            if (std::find(methods.begin(), methods.end(), m.method) == methods.end()) {
                methods.push_back(m.method);
            }
        }
    }
    out << "method";
    for (const auto& r : reports) out << ',' << r.config.n;
    out << '\n';
    for (const auto method : methods) {
        out << to_string(method);
        for (const auto& r : reports) {
            out << ',';
            for (const auto& m : r.methods) {
                if (m.method == method) out << format_double(m.coverage);
            }
        }
        out << '\n';
    }
}

}  // namespace tubeband::io
