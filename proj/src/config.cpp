#include "spatsort/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spatsort/run_output.hpp"

namespace spatsort {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v, const std::string& where) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError(where + ": cannot parse number '" + std::string(v) + "'");
    return out;
}

std::vector<double> parse_double_list(std::string_view v, const std::string& where) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const std::string_view item = trim(v.substr(0, comma));
        if (!item.empty()) out.push_back(parse_double(item, where));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::string& origin) {
    RunConfig config;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::ostringstream wheres;
        wheres << origin << ":" << lineno;
        const std::string where = wheres.str();

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) +
                              "'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (value.empty() && key != "output_times")  // an empty list is legal
            throw ConfigError(where + ": empty value for key '" + key + "'");

        Params& p = config.params;
        if (key == "r") p.r = parse_double(value, where);
        else if (key == "K") p.K = parse_double(value, where);
        else if (key == "lambda2") p.lambda2 = parse_double(value, where);
        else if (key == "dt") p.dt = parse_double(value, where);
        else if (key == "dx") p.dx = parse_double(value, where);
        else if (key == "dtheta") p.dtheta = parse_double(value, where);
        else if (key == "x_max") p.x_max = parse_double(value, where);
        else if (key == "theta_max") p.theta_max = parse_double(value, where);
        else if (key == "theta_min") p.theta_min = parse_double(value, where);
        else if (key == "t_end") p.t_end = parse_double(value, where);
        else if (key == "front_threshold") p.front_threshold = parse_double(value, where);
        else if (key == "record_dt") p.record_dt = parse_double(value, where);
        else if (key == "output_times") p.output_times = parse_double_list(value, where);
        else if (key == "init") {
            if (value == "gaussian") config.init = InitKind::kGaussian;
            else if (value == "dirac") config.init = InitKind::kDirac;
            else
                throw ConfigError(where + ": init must be 'gaussian' or 'dirac', got '" +
                                  std::string(value) + "'");
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }

    try {
        config.params.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string serialize_config(const RunConfig& config) {
    const Params& p = config.params;
    std::ostringstream out;
    out << "r = " << format_double(p.r) << '\n'
        << "K = " << format_double(p.K) << '\n'
        << "lambda2 = " << format_double(p.lambda2) << '\n'
        << "dt = " << format_double(p.dt) << '\n'
        << "dx = " << format_double(p.dx) << '\n'
        << "dtheta = " << format_double(p.dtheta) << '\n'
        << "x_max = " << format_double(p.x_max) << '\n'
        << "theta_max = " << format_double(p.theta_max) << '\n'
        << "theta_min = " << format_double(p.theta_min) << '\n'
        << "t_end = " << format_double(p.t_end) << '\n'
        << "front_threshold = " << format_double(p.front_threshold) << '\n'
        << "record_dt = " << format_double(p.record_dt) << '\n';
    out << "output_times = ";
    for (std::size_t i = 0; i < p.output_times.size(); ++i) {
        if (i > 0) out << ',';
        out << format_double(p.output_times[i]);
    }
    out << '\n';
    out << "init = " << init_kind_name(config.init) << '\n';
    return out.str();
}

RunConfig preset(std::string_view name) {
    RunConfig config;  // defaults are the paper setup
    if (name == "paper") {
    } else if (name == "dirac") {
        config.init = InitKind::kDirac;
    } else if (name == "low-r") {
        config.params.r = 0.1;
    } else if (name == "high-lambda") {
        config.params.lambda2 = 1.0;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) +
                          "' (expected paper, dirac, low-r or high-lambda)");
    }
    config.params.validate();
    return config;
}

const char* init_kind_name(InitKind kind) {
    return kind == InitKind::kGaussian ? "gaussian" : "dirac";
}

}  // namespace spatsort
