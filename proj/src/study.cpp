// SPDX-License-Identifier: Apache-2.0
#include "stickymc/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace stickymc {

namespace {

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void validate(const StudyConfig& c) {
    const std::string at = c.name;
    if (c.problem != "benchmark" && c.problem != "constant") {
        throw config_error(at + ".problem: unknown problem '" + c.problem + "'");
    }
    if (c.steps.empty()) throw config_error(at + ".h: at least one step size");
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        if (!(c.steps[i] > 0.0 && c.steps[i] < 1.0)) {
            throw config_error(at + ".h[" + std::to_string(i) +
                               "]: step must lie in (0, 1)");
        }
    }
    if (c.samples.size() != c.steps.size()) {
        throw config_error(at + ".samples: expected " +
                           std::to_string(c.steps.size()) + " entries, got " +
                           std::to_string(c.samples.size()));
    }
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        if (c.samples[i] < 1) {
            throw config_error(at + ".samples[" + std::to_string(i) +
                               "]: must be >= 1");
        }
    }
    if (!(c.halfwidth_multiplier > 0.0)) {
        throw config_error(at + ".halfwidth-multiplier: must be > 0");
    }
}

} // namespace

Problem make_study_problem(const StudyConfig& c) {
    if (c.problem == "benchmark") return benchmark_disk_problem(c.radius);
    if (c.problem == "constant") {
        return constant_problem(c.constant_value,
                                Domain::ball(Vec::zeros(2), c.radius), 1.0);
    }
    throw config_error(c.name + ".problem: unknown problem '" + c.problem + "'");
}

StudyResult run_study(const StudyConfig& config) {
    validate(config);
    const Problem problem = make_study_problem(config);
    if (!(config.t0 < problem.horizon)) {
        throw config_error(config.name + ".t0: must precede the horizon");
    }
    if (problem.domain.classify(config.x0) != Region::interior) {
        throw config_error(config.name +
                           ".x0: evaluation point must be interior");
    }

    // Grid sorted by descending h; sample counts travel with their h.
    std::vector<std::size_t> order(config.steps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return config.steps[a] > config.steps[b];
    });

    StudyResult result;
    if (config.reference) {
        result.reference = *config.reference;
        result.reference_source = "user";
    } else if (problem.has_exact()) {
        result.reference = problem.exact(config.t0, config.x0);
        result.reference_source = "exact";
    } else {
        result.reference_source = "self-finest";
    }

    EstimateOptions opts;
    opts.workers = config.workers;
    opts.halfwidth_multiplier = config.halfwidth_multiplier;
    opts.correction = config.correction;

    for (std::size_t idx : order) {
        const auto start = std::chrono::steady_clock::now();
        const Estimate est =
            estimate(problem, config.scheme, config.t0, config.x0,
                     config.steps[idx], config.samples[idx], config.seed, opts);
        const auto stop = std::chrono::steady_clock::now();

        ConvergenceRow row;
        row.h = config.steps[idx];
        row.samples = config.samples[idx];
        row.estimate = est.mean;
        row.halfwidth = est.halfwidth;
        row.avg_hits = est.avg_hits;
        row.avg_steps = est.avg_steps;
        if (config.record_wall_time) {
            row.wall_time_s =
                std::chrono::duration<double>(stop - start).count();
        }
        result.rows.push_back(row);
    }

    if (result.reference_source == "self-finest") {
        result.reference = result.rows.back().estimate;
    }
    for (ConvergenceRow& row : result.rows) {
        row.error = std::abs(row.estimate - result.reference);
    }
    return result;
}

OrderFit fit_order(const std::vector<ConvergenceRow>& rows) {
    if (rows.size() < 2) {
        throw degenerate_fit_error("fit_order: needs at least two rows");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const ConvergenceRow& r : rows) {
        if (!(r.error > 0.0)) {
            throw degenerate_fit_error(
                "fit_order: every row must have a strictly positive error");
        }
        const double x = std::log(r.h);
        const double y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw degenerate_fit_error("fit_order: all step sizes coincide");
    }
    OrderFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (const ConvergenceRow& r : rows) {
        const double resid = std::log(r.error) -
                             (fit.slope * std::log(r.h) + fit.intercept);
        fit.max_residual = std::max(fit.max_residual, std::abs(resid));
    }
    return fit;
}

void write_csv(const std::vector<ConvergenceRow>& rows,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_csv: cannot open '" + path + "'");
    out << "h,M,estimate,halfwidth,error,avg_hits,avg_steps,wall_time_s\n";
    for (const ConvergenceRow& r : rows) {
        out << format_fixed6(r.h) << ',' << r.samples << ','
            << format_fixed6(r.estimate) << ',' << format_fixed6(r.halfwidth)
            << ',' << format_fixed6(r.error) << ',' << format_fixed6(r.avg_hits)
            << ',' << format_fixed6(r.avg_steps) << ','
            << format_fixed6(r.wall_time_s) << '\n';
    }
    if (!out) throw io_error("write_csv: failed writing '" + path + "'");
}

void write_plot_data(const std::vector<ConvergenceRow>& rows,
                     const OrderFit& fit, const StudyConfig& config,
                     double reference, const std::string& reference_source,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_plot_data: cannot open '" + path + "'");
    out << "# scheme=" << scheme_name(config.scheme) << " seed=" << config.seed
        << " final-step-correction=" << correction_name(config.correction)
        << " reference=" << format_g12(reference)
        << " reference-source=" << reference_source
        << " slope=" << format_g12(fit.slope)
        << " intercept=" << format_g12(fit.intercept) << "\n";
    out << "ln_h,ln_error,fit_ln_error\n";
    for (const ConvergenceRow& r : rows) {
        const double lh = std::log(r.h);
        out << format_g12(lh) << ',' << format_g12(std::log(r.error)) << ','
            << format_g12(fit.slope * lh + fit.intercept) << '\n';
    }
    if (!out) throw io_error("write_plot_data: failed writing '" + path + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) parts.push_back(tok);
    return parts;
}

double parse_double(const std::string& v, const std::string& at) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error(at + ": not a number: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& at) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error(at + ": not a nonnegative integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& at) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error(at + ": not a boolean: '" + v + "'");
}

void apply_key(StudyConfig& c, const std::string& key, const std::string& value,
               const std::string& at) {
    if (key == "problem") {
        c.problem = value;
    } else if (key == "radius") {
        c.radius = parse_double(value, at);
    } else if (key == "constant-value") {
        c.constant_value = parse_double(value, at);
    } else if (key == "t0") {
        c.t0 = parse_double(value, at);
    } else if (key == "x0") {
        const auto parts = split_ws(value);
        if (parts.empty() || parts.size() > static_cast<std::size_t>(kMaxDim)) {
            throw config_error(at + ": expected 1.." + std::to_string(kMaxDim) +
                               " coordinates");
        }
        Vec x = Vec::zeros(static_cast<int>(parts.size()));
        for (std::size_t i = 0; i < parts.size(); ++i) {
            x[static_cast<int>(i)] =
                parse_double(parts[i], at + "[" + std::to_string(i) + "]");
        }
        c.x0 = x;
    } else if (key == "scheme") {
        c.scheme = parse_scheme(value);
    } else if (key == "h") {
        c.steps.clear();
        const auto parts = split_ws(value);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            c.steps.push_back(
                parse_double(parts[i], at + "[" + std::to_string(i) + "]"));
        }
    } else if (key == "samples") {
        c.samples.clear();
        const auto parts = split_ws(value);
        for (std::size_t i = 0; i < parts.size(); ++i) {
            c.samples.push_back(
                parse_u64(parts[i], at + "[" + std::to_string(i) + "]"));
        }
    } else if (key == "seed") {
        c.seed = parse_u64(value, at);
    } else if (key == "workers") {
        c.workers = static_cast<unsigned>(parse_u64(value, at));
    } else if (key == "halfwidth-multiplier") {
        c.halfwidth_multiplier = parse_double(value, at);
    } else if (key == "final-step-correction") {
        c.correction = parse_correction(value);
    } else if (key == "reference") {
        c.reference = parse_double(value, at);
    } else if (key == "record-wall-time") {
        c.record_wall_time = parse_bool(value, at);
    } else if (key == "out") {
        c.out_path = value;
    } else if (key == "plot") {
        c.plot_path = value;
    } else {
        throw config_error(at + ": unknown key");
    }
}

} // namespace

std::vector<StudyConfig> parse_study_text(const std::string& text,
                                          const std::string& origin) {
    std::vector<StudyConfig> studies;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw config_error(origin + ":" + std::to_string(line_no) +
                                   ": unterminated section header");
            }
            StudyConfig c;
            c.name = trim(s.substr(1, s.size() - 2));
            if (c.name.empty()) c.name = "study";
            studies.push_back(c);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
        }
        if (studies.empty()) {
            throw config_error(origin + ":" + std::to_string(line_no) +
                               ": key outside of any [section]");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        apply_key(studies.back(), key, value, studies.back().name + "." + key);
    }
    if (studies.empty()) {
        throw config_error(origin + ": no [section] found");
    }
    for (StudyConfig& c : studies) {
        if (c.samples.size() == 1 && c.steps.size() > 1) {
            c.samples.assign(c.steps.size(), c.samples[0]);
        }
        validate(c);
    }
    return studies;
}

std::vector<StudyConfig> parse_study_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open study file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_study_text(buf.str(), path);
}

} // namespace stickymc
