#include "spatsort/run_output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace spatsort {

std::string format_double(double v) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string content_hash(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

std::string RunManifest::text() const {
    std::ostringstream out;
    out << "# spatsort run manifest\n";
    out << serialize_config(config);
    out << "reproduction = " << (fast ? "fast" : "brute") << '\n';
    out << "threads = " << threads << '\n';
    return out.str();
}

std::string RunManifest::hash() const { return content_hash(text()); }

std::filesystem::path prepare_run_dir(const std::filesystem::path& out_root,
                                      const RunManifest& manifest, bool force) {
    const std::filesystem::path dir = out_root / ("run_" + manifest.hash());
    std::error_code ec;
    if (std::filesystem::exists(dir) && !std::filesystem::is_empty(dir, ec) && !force) {
        throw ConfigError("output directory '" + dir.string() +
                          "' already holds a run with this manifest; use --force to overwrite");
    }
    std::filesystem::create_directories(dir);
    return dir;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines across platforms
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void write_rho_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snaps,
                   const Grid& grid) {
    auto out = open_out(path);
    out << "t,x,rho\n";
    for (const Snapshot& s : snaps) {
        const std::string ts = format_double(s.time);
        for (std::size_t i = 0; i < grid.nx(); ++i)
            out << ts << ',' << format_double(grid.xs[i]) << ','
                << format_double(s.rho[i]) << '\n';
    }
    finish(out, path);
}

void write_front_csv(const std::filesystem::path& path,
                     const std::vector<DiagnosticRecord>& records) {
    auto out = open_out(path);
    out << "t,X_num,theta_bar,X_half,min_field\n";
    for (const DiagnosticRecord& r : records) {
        out << format_double(r.t) << ',' << format_double(r.x_num) << ','
            << format_double(r.theta_bar) << ',' << format_double(r.x_half) << ','
            << format_double(r.min_field) << '\n';
    }
    finish(out, path);
}

void write_snapshot_csv(const std::filesystem::path& path, const Field& field,
                        const Grid& grid) {
    auto out = open_out(path);
    out << "theta";
    for (std::size_t i = 0; i < grid.nx(); ++i) out << ',' << format_double(grid.xs[i]);
    out << '\n';
    for (std::size_t j = 0; j < grid.ntheta(); ++j) {
        out << format_double(grid.thetas[j]);
        for (std::size_t i = 0; i < grid.nx(); ++i) out << ',' << format_double(field(i, j));
        out << '\n';
    }
    finish(out, path);
}

void write_pairs_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::array<double, 2>>& pairs) {
    auto out = open_out(path);
    out << header << '\n';
    for (const auto& p : pairs)
        out << format_double(p[0]) << ',' << format_double(p[1]) << '\n';
    finish(out, path);
}

void write_fit_txt(const std::filesystem::path& path, const std::string& series,
                   const PowerLawFit& fit) {
    auto out = open_out(path);
    out << "series = " << series << '\n'
        << "window_lo = " << format_double(fit.window_lo) << '\n'
        << "window_hi = " << format_double(fit.window_hi) << '\n'
        << "C = " << format_double(fit.prefactor) << '\n'
        << "p = " << format_double(fit.exponent) << '\n'
        << "r_squared = " << format_double(fit.r_squared) << '\n'
        << "n_points = " << fit.n_points << '\n';
    finish(out, path);
}

FrontSeries read_front_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,X_num,theta_bar,X_half,min_field", 0) != 0)
        throw std::runtime_error("'" + path.string() + "' is not a front.csv file");
    FrontSeries series;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[5];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int col = 0; col < 5; ++col) {
            if (col > 0) {
                if (p >= end || *p != ',')
                    throw std::runtime_error(path.string() + ": malformed line " +
                                             std::to_string(lineno));
                ++p;
            }
            // from_chars does not accept "nan"/"inf" forms written by %.17g
            if (end - p >= 3 && (p[0] == 'n' || p[0] == '-')) {
                std::string_view sv(p, static_cast<std::size_t>(end - p));
                if (sv.rfind("nan", 0) == 0) {
                    v[col] = std::nan("");
                    p += 3;
                    continue;
                }
                if (sv.rfind("-nan", 0) == 0) {
                    v[col] = std::nan("");
                    p += 4;
                    continue;
                }
            }
            auto [next, ec] = std::from_chars(p, end, v[col]);
            if (ec != std::errc{})
                throw std::runtime_error(path.string() + ": malformed number on line " +
                                         std::to_string(lineno));
            p = next;
        }
        series.t.push_back(v[0]);
        series.x_num.push_back(v[1]);
        series.theta_bar.push_back(v[2]);
        series.x_half.push_back(v[3]);
        series.min_field.push_back(v[4]);
    }
    return series;
}

}  // namespace spatsort
