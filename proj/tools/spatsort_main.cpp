// spatsort: numerical laboratory for invasion fronts with an evolving
// dispersal trait under sexual reproduction.
//
// Subcommands: run, analyze, asymptotics, compare, oracle-check, convergence.
// Exit codes: 0 success, 2 config error, 3 numerical blow-up, 4 failed check.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spatsort/asymptotics.hpp"
#include "spatsort/config.hpp"
#include "spatsort/diagnostics.hpp"
#include "spatsort/run_output.hpp"
#include "spatsort/stepper.hpp"

using namespace spatsort;
namespace asym = spatsort::asymptotics;
namespace fs = std::filesystem;

namespace {

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim_zeros(double v) {
    std::ostringstream s;
    s << v;  // default %g-style, compact for file names
    return s.str();
}

fs::path default_out_root() {
    if (const char* env = std::getenv("SPATSORT_OUT")) return fs::path(env);
    return fs::path("out");
}

// ---------------------------------------------------------------- run ------

struct RunCliOptions {
    std::string config_path;
    std::string preset_name = "paper";
    std::string init_name;
    std::string out_root = default_out_root().string();
    std::vector<double> output_times;
    bool brute = false;
    bool force = false;
    int threads = 0;
    std::map<std::string, double> overrides;
};

RunConfig resolve_config(const RunCliOptions& cli) {
    RunConfig config =
        cli.config_path.empty() ? preset(cli.preset_name) : parse_config_file(cli.config_path);
    Params& p = config.params;
    for (const auto& [key, value] : cli.overrides) {
        if (key == "r") p.r = value;
        else if (key == "K") p.K = value;
        else if (key == "lambda2") p.lambda2 = value;
        else if (key == "dt") p.dt = value;
        else if (key == "dx") p.dx = value;
        else if (key == "dtheta") p.dtheta = value;
        else if (key == "x_max") p.x_max = value;
        else if (key == "theta_max") p.theta_max = value;
        else if (key == "t_end") p.t_end = value;
        else if (key == "front_threshold") p.front_threshold = value;
        else if (key == "record_dt") p.record_dt = value;
    }
    if (!cli.output_times.empty()) p.output_times = cli.output_times;
    if (!cli.init_name.empty()) {
        if (cli.init_name == "gaussian") config.init = InitKind::kGaussian;
        else if (cli.init_name == "dirac") config.init = InitKind::kDirac;
        else throw ConfigError("--init must be gaussian or dirac");
    }
    config.params.validate();
    return config;
}

int cmd_run(const RunCliOptions& cli) {
    RunConfig config = resolve_config(cli);
    RunManifest manifest{config, !cli.brute, cli.threads};
    const fs::path dir = prepare_run_dir(cli.out_root, manifest, cli.force);

    const Grid grid = build_grid_validated(config.params);
    Field init =
        config.init == InitKind::kGaussian ? init_gaussian(grid) : init_dirac(grid);

    std::cout << "run " << manifest.hash() << ": " << grid.nx() << " x " << grid.ntheta()
              << " grid, " << std::llround(config.params.t_end / config.params.dt)
              << " steps -> " << dir.string() << std::endl;

    const auto t0 = std::chrono::steady_clock::now();
    const RunResult result =
        run(config.params, std::move(init),
            StepOptions{.fast = !cli.brute, .boundary = XBoundary::kNeumannDirichlet,
                        .threads = cli.threads});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    {
        std::ofstream mf(dir / "manifest.txt", std::ios::binary);
        mf << manifest.text() << "hash = " << manifest.hash() << '\n';
    }
    {
        std::ofstream cf(dir / "config.txt", std::ios::binary);
        cf << serialize_config(config);
    }
    write_rho_csv(dir / "rho.csv", result.snapshots, grid);
    write_front_csv(dir / "front.csv", result.records);
    for (const Snapshot& snap : result.snapshots) {
        const std::string tag = trim_zeros(snap.time);
        write_snapshot_csv(dir / ("f_t" + tag + ".csv"), snap.field, grid);
        if (!(snap.time > 0.0)) continue;
        write_pairs_csv(dir / ("profile_selfsim_t" + tag + ".csv"), "y,rho",
                        self_similar_profile(snap.rho, grid, snap.time));
        if (const auto shape = rescaled_shape(snap.rho, grid, snap.time))
            write_pairs_csv(dir / ("profile_shape_t" + tag + ".csv"), "z,rho", *shape);
        const FrontPoint front =
            front_position(snap.rho, grid, config.params.front_threshold);
        if (front.defined) {
            const AmplitudeProfile amp =
                amplitude_profile(snap.field, grid, snap.time, front.x);
            write_pairs_csv(dir / ("profile_amplitude_t" + tag + ".csv"), "x,log_max_f",
                            amp.points);
        }
    }
    {
        std::ofstream log(dir / "run.log");
        log << "wall_seconds = " << secs << '\n'
            << "final_time = " << format_double(result.final_state.time) << '\n'
            << "min_field = " << format_double(result.final_state.min_value) << '\n';
    }

    const DiagnosticRecord& last = result.records.back();
    std::cout << "t = " << last.t << ": X_num = " << last.x_num
              << ", theta_bar = " << last.theta_bar << ", X_half = " << last.x_half
              << ", min_field = " << last.min_field << " (" << secs << " s)" << std::endl;
    return 0;
}

// ------------------------------------------------------------ analyze ------

int cmd_analyze(const std::string& front_path, const std::string& series,
                std::vector<double> window, double fixed_exponent,
                bool has_fixed_exponent, std::string out_path) {
    const FrontSeries data = read_front_csv(front_path);
    const std::vector<double>* ys = nullptr;
    if (series == "X_num") ys = &data.x_num;
    else if (series == "theta_bar") ys = &data.theta_bar;
    else if (series == "X_half") ys = &data.x_half;
    else throw ConfigError("--series must be X_num, theta_bar or X_half");

    // drop NaN records (undefined diagnostics) before fitting
    std::vector<double> ts, vals;
    for (std::size_t i = 0; i < data.t.size(); ++i) {
        if (std::isfinite((*ys)[i]) && (*ys)[i] > 0.0 && data.t[i] > 0.0) {
            ts.push_back(data.t[i]);
            vals.push_back((*ys)[i]);
        }
    }
    const PowerLawFit fit = loglog_fit(ts, vals, window[0], window[1]);
    std::cout << series << " ~ C * t^p over [" << window[0] << ", " << window[1]
              << "]: C = " << fit.prefactor << ", p = " << fit.exponent
              << ", R^2 = " << fit.r_squared << " (" << fit.n_points << " points)"
              << std::endl;
    if (has_fixed_exponent) {
        const double c =
            fixed_exponent_prefactor(ts, vals, window[0], window[1], fixed_exponent);
        std::cout << "with p fixed to " << fixed_exponent << ": C = " << c << std::endl;
    }
    if (out_path.empty())
        out_path = (fs::path(front_path).parent_path() / ("fit_" + series + ".txt")).string();
    write_fit_txt(out_path, series, fit);
    return 0;
}

// --------------------------------------------------------- asymptotics -----

std::ostream& open_or_stdout(std::ofstream& file, const std::string& out_path) {
    if (out_path.empty()) return std::cout;
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    return file;
}

int cmd_asymptotics(const std::string& op, double lambda2, double y_min, double y_max,
                    int n, bool log_spacing, double time, double r, double theta_min,
                    double j_halfwidth, double y_rel, double prefactor_exponent,
                    double x_min, double x_max, double theta_lo, double theta_hi,
                    const std::string& out_path) {
    const double lambda = std::sqrt(lambda2);
    const double y_c = asym::critical_y(lambda);
    std::ofstream file;
    std::ostream& out = open_or_stdout(file, out_path);

    auto y_at = [&](int i) {
        const double f = n < 2 ? 0.0 : static_cast<double>(i) / (n - 1);
        return log_spacing ? y_min * std::pow(y_max / y_min, f)
                           : y_min + (y_max - y_min) * f;
    };

    if (op == "yc") {
        out << "lambda2,y_c\n" << format_double(lambda2) << ',' << format_double(y_c) << '\n';
    } else if (op == "profiles") {
        out << "y,a,b\n";
        for (int i = 0; i < n; ++i) {
            const double y = y_at(i);
            out << format_double(y) << ',' << format_double(asym::profile_a(y, lambda))
                << ',' << format_double(asym::profile_b(y, lambda)) << '\n';
        }
    } else if (op == "residuals") {
        out << "y,res1,res2\n";
        for (int i = 0; i < n; ++i) {
            double y = y_at(i);
            if (y == y_c) y = std::nextafter(y, y_max);  // system is singular at y_c
            const auto [r1, r2] = asym::residual_system(y, lambda);
            out << format_double(y) << ',' << format_double(r1) << ',' << format_double(r2)
                << '\n';
        }
    } else if (op == "window") {
        out << "y,ratio_hi,eta_hi\n";
        for (int i = 0; i < n; ++i) {
            double y = y_at(i);
            if (y == y_c) y = std::nextafter(y, y_max);
            const asym::TraitWindow w = asym::admissible_trait_window(y, lambda);
            out << format_double(y) << ',' << format_double(w.ratio_hi) << ','
                << format_double(w.ratio_hi * asym::profile_a(y, lambda)) << '\n';
        }
    } else if (op == "u1") {
        const double y = y_rel * y_c;
        const double a = asym::profile_a(y, lambda);
        out << "ratio,eta,u1,terms\n";
        for (int i = 0; i < n; ++i) {
            const double ratio =
                1.0 - j_halfwidth + 2.0 * j_halfwidth * (n < 2 ? 0.0 : double(i) / (n - 1));
            const asym::SeriesResult res = asym::u1_series(y, a * ratio, lambda);
            out << format_double(ratio) << ',' << format_double(a * ratio) << ','
                << format_double(res.value) << ',' << res.terms << '\n';
        }
    } else if (op == "conjecture") {
        out << "x,theta,f\n";
        for (int i = 0; i < n; ++i) {
            const double x = x_min + (x_max - x_min) * (n < 2 ? 0.0 : double(i) / (n - 1));
            for (int j = 0; j < n; ++j) {
                const double theta =
                    theta_lo + (theta_hi - theta_lo) * (n < 2 ? 0.0 : double(j) / (n - 1));
                out << format_double(x) << ',' << format_double(theta) << ','
                    << format_double(asym::conjecture_density(time, x, theta, lambda,
                                                              prefactor_exponent))
                    << '\n';
            }
        }
    } else if (op == "front") {
        out << "t,X_theory\n";
        for (int i = 0; i < n; ++i) {
            const double t = y_min + (y_max - y_min) * (n < 2 ? 0.0 : double(i) / (n - 1));
            out << format_double(t) << ','
                << format_double(asym::front_position_theory(t, lambda, r, theta_min))
                << '\n';
        }
    } else if (op == "trait") {
        out << "x,theta_behind,theta_ahead\n";
        for (int i = 0; i < n; ++i) {
            const double x = x_min + (x_max - x_min) * (n < 2 ? 0.0 : double(i) / (n - 1));
            out << format_double(x) << ','
                << format_double(asym::mean_trait_theory(asym::FrontRegion::kBehind, x, time,
                                                         lambda))
                << ','
                << format_double(asym::mean_trait_theory(asym::FrontRegion::kAhead, x, time,
                                                         lambda))
                << '\n';
        }
    } else {
        throw ConfigError("unknown asymptotics op '" + op + "'");
    }
    return 0;
}

// ------------------------------------------------------------ compare ------

struct RhoSnapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> rho;
};

// stod/strtod raise ERANGE on denormal field entries; from_chars does not.
double parse_csv_double(const std::string& cell, const fs::path& path) {
    double v = 0.0;
    if (cell.rfind("nan", 0) == 0 || cell.rfind("-nan", 0) == 0) return std::nan("");
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        throw std::runtime_error(path.string() + ": malformed number '" + cell + "'");
    return v;
}

std::vector<RhoSnapshot> read_rho_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,rho", 0) != 0)
        throw std::runtime_error("'" + path.string() + "' is not a rho.csv file");
    std::vector<RhoSnapshot> snaps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, x, rho;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &rho) != 3)
            throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        if (snaps.empty() || snaps.back().t != t) snaps.push_back(RhoSnapshot{t, {}, {}});
        snaps.back().x.push_back(x);
        snaps.back().rho.push_back(rho);
    }
    return snaps;
}

// Reads a transposed snapshot file back into a field plus its meshes.
void read_snapshot_csv(const fs::path& path, Field& field, Grid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("theta,", 0) != 0)
        throw std::runtime_error("'" + path.string() + "' is not a snapshot file");
    grid = Grid{};
    std::stringstream header(line.substr(6));
    std::string cell;
    while (std::getline(header, cell, ',')) grid.xs.push_back(parse_csv_double(cell, path));
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::getline(row, cell, ',');
        grid.thetas.push_back(parse_csv_double(cell, path));
        rows.emplace_back();
        while (std::getline(row, cell, ','))
            rows.back().push_back(parse_csv_double(cell, path));
        if (rows.back().size() != grid.xs.size())
            throw std::runtime_error(path.string() + ": ragged snapshot row");
    }
    grid.dx = grid.xs.size() > 1 ? grid.xs[1] - grid.xs[0] : 1.0;
    grid.dtheta = grid.thetas.size() > 1 ? grid.thetas[1] - grid.thetas[0] : 1.0;
    field = Field(grid.nx(), grid.ntheta());
    for (std::size_t j = 0; j < grid.ntheta(); ++j)
        for (std::size_t i = 0; i < grid.nx(); ++i) field(i, j) = rows[j][i];
}

int cmd_compare(const std::string& run_dir_s, const std::string& figure, double at_time) {
    const fs::path run_dir(run_dir_s);
    const RunConfig config = parse_config_file((run_dir / "config.txt").string());
    const double lambda = std::sqrt(config.params.lambda2);
    const double r = config.params.r;
    const fs::path out_path = run_dir / ("compare_" + figure + ".csv");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "'");

    if (figure == "front") {
        const FrontSeries fr = read_front_csv(run_dir / "front.csv");
        out << "t,X_num,X_theory\n";
        for (std::size_t i = 0; i < fr.t.size(); ++i)
            out << format_double(fr.t[i]) << ',' << format_double(fr.x_num[i]) << ','
                << format_double(asym::front_position_theory(fr.t[i], lambda, r)) << '\n';
    } else if (figure == "trait") {
        const FrontSeries fr = read_front_csv(run_dir / "front.csv");
        out << "t,theta_bar,theta_behind_at_Xnum,sqrt_law\n";
        for (std::size_t i = 0; i < fr.t.size(); ++i) {
            // behind-front mean trait at the measured front; with the growth
            // rate in the scheme the law is lambda^{4/5} (6 r x^2)^{1/5} and
            // reduces to 2 lambda sqrt(r t) on the theoretical trajectory
            const double x = fr.x_num[i];
            const double behind =
                std::pow(lambda, 0.8) * std::pow(6.0 * r * x * x, 0.2);
            const double sqrt_law = 2.0 * lambda * std::sqrt(r * fr.t[i]);
            out << format_double(fr.t[i]) << ',' << format_double(fr.theta_bar[i]) << ','
                << format_double(behind) << ',' << format_double(sqrt_law) << '\n';
        }
    } else if (figure == "selfsim") {
        const auto snaps = read_rho_csv(run_dir / "rho.csv");
        out << "t,y,rho\n";
        for (const RhoSnapshot& s : snaps) {
            if (!(s.t > 0.0)) continue;
            const double scale = std::pow(s.t, -1.25);
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << format_double(s.t) << ',' << format_double(s.x[i] * scale) << ','
                    << format_double(s.rho[i]) << '\n';
        }
    } else if (figure == "shape") {
        const auto snaps = read_rho_csv(run_dir / "rho.csv");
        Grid grid = build_grid_validated(config.params);
        out << "t,z,rho\n";
        for (const RhoSnapshot& s : snaps) {
            if (!(s.t > 0.0)) continue;
            const auto prof = rescaled_shape(s.rho, grid, s.t);
            if (!prof) continue;  // no 1/2 crossing yet
            for (const auto& p : *prof)
                out << format_double(s.t) << ',' << format_double(p[0]) << ','
                    << format_double(p[1]) << '\n';
        }
    } else if (figure == "amplitude") {
        // pick the snapshot file at (or nearest to) --time; default latest
        const auto snaps = read_rho_csv(run_dir / "rho.csv");
        if (snaps.empty()) throw std::runtime_error("rho.csv holds no snapshots");
        double best = snaps.back().t;
        if (at_time > 0.0) {
            best = snaps.front().t;
            for (const auto& s : snaps)
                if (std::abs(s.t - at_time) < std::abs(best - at_time)) best = s.t;
        }
        Field field;
        Grid grid;
        read_snapshot_csv(run_dir / ("f_t" + trim_zeros(best) + ".csv"), field, grid);
        const DensityVector rho = population_size(field, grid);
        const FrontPoint front = front_position(rho, grid, config.params.front_threshold);
        const AmplitudeProfile prof = amplitude_profile(field, grid, best, front.x);
        out << "x,log_max_f,prefactor_log_theory\n";
        for (const auto& p : prof.points)
            out << format_double(p[0]) << ',' << format_double(p[1]) << ','
                << format_double(asym::conjecture_prefactor_log(
                       best * r, std::sqrt(r) * p[0], lambda))
                << '\n';
        std::cout << "amplitude at t = " << best << ": " << prof.points.size()
                  << " points, " << prof.dropped << " non-positive rows dropped"
                  << std::endl;
    } else {
        throw ConfigError("unknown figure '" + figure +
                          "' (expected front, trait, selfsim, shape or amplitude)");
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + out_path.string() + "'");
    std::cout << "wrote " << out_path.string() << std::endl;
    return 0;
}

// -------------------------------------------------------- oracle-check -----

int cmd_oracle_check(int trials, std::size_t max_nx, std::size_t max_ntheta,
                     std::vector<double> lambda2s, unsigned long long seed, double tol) {
    if (lambda2s.empty()) lambda2s = {0.25, 0.5, 1.0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const double lambda2 = lambda2s[trial % lambda2s.size()];
        SegregationKernel kernel(lambda2);
        const std::size_t nx = 1 + rng() % max_nx;
        const std::size_t nt = 2 + rng() % (max_ntheta - 1);
        Grid g;
        g.dx = 1.0;
        g.dtheta = 0.5;
        g.xs.resize(nx);
        g.thetas.resize(nt);
        for (std::size_t i = 0; i < nx; ++i) g.xs[i] = static_cast<double>(i);
        for (std::size_t j = 0; j < nt; ++j) g.thetas[j] = 1.0 + 0.5 * j;
        Field f(nx, nt);
        for (double& v : f.values) v = u(rng);
        if (trial % 7 == 0)
            for (std::size_t j = 0; j < nt; ++j) f(0, j) = 0.0;
        const DensityVector rho = population_size(f, g);
        const Field fast = reproduce_fast(f, rho, kernel, g).values;
        const Field brute = reproduce_bruteforce(f, rho, kernel, g).values;
        double scale = 0.0;
        for (double v : brute.values) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) continue;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            worst =
                std::max(worst, std::abs(fast.values[i] - brute.values[i]) / scale);
    }
    std::cout << trials << " trials, max relative deviation fast vs brute = " << worst
              << " (tolerance " << tol << ")" << std::endl;
    if (worst > tol) throw CheckFailed("oracle check failed: deviation exceeds tolerance");
    return 0;
}

// --------------------------------------------------------- convergence -----

int cmd_convergence(double t_end, double dt) {
    Params base;
    base.dx = 2.0;
    base.x_max = 40.0;
    base.dtheta = 0.5;
    base.theta_max = 9.0;
    base.dt = dt;
    base.t_end = t_end;
    base.output_times = {};

    auto final_field = [&](double step, double dx) {
        Params p = base;
        p.dt = step;
        p.dx = dx;
        p.validate();
        const Grid g = build_grid_validated(p);
        return run(p, init_gaussian(g), StepOptions{.threads = 0});
    };

    auto max_diff = [](const Field& a, const Field& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i)
            m = std::max(m, std::abs(a.values[i] - b.values[i]));
        return m;
    };

    const Field f1 = final_field(dt, base.dx).final_state.field;
    const Field f2 = final_field(dt / 2, base.dx).final_state.field;
    const Field f3 = final_field(dt / 4, base.dx).final_state.field;
    const double d1 = max_diff(f1, f2);
    const double d2 = max_diff(f2, f3);
    const double dt_ratio = d1 / d2;
    std::cout << "dt study: |F(dt)-F(dt/2)| = " << d1 << ", |F(dt/2)-F(dt/4)| = " << d2
              << ", ratio = " << dt_ratio << " (first order => ~2)" << std::endl;

    // spatial study: compare rho on the shared coarse mesh points
    const RunResult cx = final_field(dt / 4, base.dx);
    const RunResult fx = final_field(dt / 4, base.dx / 2);
    const RunResult gx = final_field(dt / 4, base.dx / 4);
    auto rho_defect = [](const RunResult& coarse, const RunResult& fine, int stride) {
        double m = 0.0;
        for (std::size_t i = 0; i < coarse.final_state.rho.size(); ++i)
            m = std::max(m, std::abs(coarse.final_state.rho[i] -
                                     fine.final_state.rho[i * stride]));
        return m;
    };
    const double e1 = rho_defect(cx, fx, 2);
    const double e2 = rho_defect(fx, gx, 2);
    std::cout << "dx study: |rho(dx)-rho(dx/2)| = " << e1 << ", |rho(dx/2)-rho(dx/4)| = "
              << e2 << ", ratio = " << e1 / e2
              << " (interior stencil is second order, the x boundaries first)" << std::endl;

    if (dt_ratio < 1.7 || dt_ratio > 2.3)
        throw CheckFailed("convergence check failed: dt defect ratio outside [1.7, 2.3]");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invasion fronts with an evolving dispersal trait (sexual reproduction)"};
    app.require_subcommand(1);

    // run
    RunCliOptions run_opts;
    auto* c_run = app.add_subcommand("run", "integrate the scheme and write outputs");
    c_run->add_option("--config", run_opts.config_path, "config file (key = value lines)");
    c_run->add_option("--preset", run_opts.preset_name,
                      "paper | dirac | low-r | high-lambda");
    c_run->add_option("--init", run_opts.init_name, "gaussian | dirac (overrides preset)");
    c_run->add_option("--out", run_opts.out_root, "output root (default $SPATSORT_OUT or ./out)");
    c_run->add_flag("--brute", run_opts.brute, "use the reference O(Ntheta^3) reproduction");
    c_run->add_flag("--force", run_opts.force, "overwrite an existing run directory");
    c_run->add_option("--threads", run_opts.threads, "worker threads (0 = hardware)");
    c_run->add_option("--output-times", run_opts.output_times,
                      "snapshot times (comma separated)")
        ->delimiter(',');
    for (const char* key : {"r", "K", "lambda2", "dt", "dx", "dtheta", "x_max", "theta_max",
                            "t_end", "front_threshold", "record_dt"}) {
        std::string flag = "--";
        for (const char* c = key; *c; ++c) flag += *c == '_' ? '-' : *c;
        c_run->add_option_function<double>(
            flag, [&run_opts, key](double v) { run_opts.overrides[key] = v; },
            std::string("override ") + key);
    }

    // analyze
    std::string an_path, an_series = "X_num", an_out;
    std::vector<double> an_window = {60.0, 200.0};
    double an_fixed = 1.25;
    auto* c_an = app.add_subcommand("analyze", "fit a power law to a front.csv series");
    c_an->add_option("front_csv", an_path, "front.csv produced by run")->required();
    c_an->add_option("--series", an_series, "X_num | theta_bar | X_half");
    c_an->add_option("--window", an_window, "fit window [t_lo t_hi]")->expected(2);
    auto* an_fix_opt = c_an->add_option("--fixed-exponent", an_fixed,
                                        "also report C with this exponent pinned");
    c_an->add_option("--out", an_out, "fit report path (default fit_<series>.txt)");

    // asymptotics
    const asym::AsymptoticParams ap;  // evaluator defaults
    std::string as_op = "profiles", as_out;
    double as_lambda2 = ap.lambda * ap.lambda, as_ymin = 0.1, as_ymax = 10.0;
    double as_time = 200.0, as_r = ap.r, as_thetamin = ap.theta_min;
    double as_jh = ap.j_halfwidth, as_yrel = 0.5, as_pe = 4.0 / 3.0;
    double as_xmin = 0.0, as_xmax = 2000.0, as_thlo = 1.0, as_thhi = 61.0;
    int as_n = 101;
    bool as_log = false;
    auto* c_as = app.add_subcommand("asymptotics", "evaluate the closed-form solution");
    c_as->add_option("--op", as_op,
                     "yc | profiles | residuals | window | u1 | conjecture | front | trait");
    c_as->add_option("--lambda2", as_lambda2, "segregational variance");
    c_as->add_option("--y-min", as_ymin, "range start (y for profiles, t for front)");
    c_as->add_option("--y-max", as_ymax, "range end");
    c_as->add_option("--n", as_n, "sample count");
    c_as->add_flag("--log", as_log, "log-spaced sampling");
    c_as->add_option("--time", as_time, "evaluation time (conjecture, trait)");
    c_as->add_option("--r", as_r, "growth rate (front)");
    c_as->add_option("--theta-min", as_thetamin, "dimensional trait floor (front)");
    c_as->add_option("--j-halfwidth", as_jh, "trait window half-width (u1)");
    c_as->add_option("--y-rel", as_yrel, "y as a multiple of y_c (u1)");
    c_as->add_option("--prefactor-exponent", as_pe,
                     "prefactor exponent (4/3 displayed, 1/3 prose variant)");
    c_as->add_option("--x-min", as_xmin, "x range start (conjecture, trait)");
    c_as->add_option("--x-max", as_xmax, "x range end (conjecture, trait)");
    c_as->add_option("--theta-lo", as_thlo, "theta range start (conjecture)");
    c_as->add_option("--theta-hi", as_thhi, "theta range end (conjecture)");
    c_as->add_option("--out", as_out, "output CSV (default stdout)");

    // compare
    std::string cp_dir, cp_figure = "front";
    double cp_time = -1.0;
    auto* c_cp = app.add_subcommand("compare", "join run outputs with theory curves");
    c_cp->add_option("--run", cp_dir, "run directory")->required();
    c_cp->add_option("--figure", cp_figure, "front | trait | selfsim | shape | amplitude");
    c_cp->add_option("--time", cp_time, "snapshot time (amplitude; default latest)");

    // oracle-check
    int oc_trials = 200;
    std::size_t oc_nx = 6, oc_ntheta = 16;
    std::vector<double> oc_lambda2s;
    unsigned long long oc_seed = 20240925ull;
    double oc_tol = 1e-10;
    auto* c_oc = app.add_subcommand("oracle-check",
                                    "randomized fast-vs-brute reproduction comparison");
    c_oc->add_option("--trials", oc_trials, "number of random fields");
    c_oc->add_option("--nx", oc_nx, "max spatial points");
    c_oc->add_option("--ntheta", oc_ntheta, "max trait points");
    c_oc->add_option("--lambda2", oc_lambda2s, "variances to cycle through")->delimiter(',');
    c_oc->add_option("--seed", oc_seed, "RNG seed");
    c_oc->add_option("--tol", oc_tol, "relative tolerance");

    // convergence
    double cv_tend = 0.32, cv_dt = 0.04;
    auto* c_cv = app.add_subcommand("convergence", "short-horizon dt and dx defect ratios");
    c_cv->add_option("--t-end", cv_tend, "horizon");
    c_cv->add_option("--dt", cv_dt, "base time step");

    try {
        app.parse(argc, argv);
        if (c_run->parsed()) return cmd_run(run_opts);
        if (c_an->parsed())
            return cmd_analyze(an_path, an_series, an_window, an_fixed,
                               an_fix_opt->count() > 0, an_out);
        if (c_as->parsed())
            return cmd_asymptotics(as_op, as_lambda2, as_ymin, as_ymax, as_n, as_log,
                                   as_time, as_r, as_thetamin, as_jh, as_yrel, as_pe,
                                   as_xmin, as_xmax, as_thlo, as_thhi, as_out);
        if (c_cp->parsed()) return cmd_compare(cp_dir, cp_figure, cp_time);
        if (c_oc->parsed())
            return cmd_oracle_check(oc_trials, oc_nx, oc_ntheta, oc_lambda2s, oc_seed,
                                    oc_tol);
        if (c_cv->parsed()) return cmd_convergence(cv_tend, cv_dt);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const BlowUpError& e) {
        std::cerr << "numerical blow-up: " << e.what() << std::endl;
        return 3;
    } catch (const CheckFailed& e) {
        std::cerr << e.what() << std::endl;
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
