#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spatsort/config.hpp"
#include "spatsort/diagnostics.hpp"
#include "spatsort/stepper.hpp"

namespace spatsort {

/// Full double precision (17 significant digits) text form of a double;
/// all numeric file output goes through this.
std::string format_double(double v);

/// FNV-1a 64-bit of a string, hex-encoded. Content hash for run manifests.
std::string content_hash(std::string_view data);

/// Everything needed to reproduce a run. The hash covers the serialized
/// config and the solver options (not wall-clock metadata), so identical
/// manifests produce byte-identical data files.
struct RunManifest {
    RunConfig config;
    bool fast = true;
    int threads = 0;

    std::string hash() const;
    std::string text() const;  // deterministic manifest file content
};

/// Resolves out_root/run_<hash>/; refuses to reuse an existing non-empty
/// directory unless force is set. Returns the run directory.
std::filesystem::path prepare_run_dir(const std::filesystem::path& out_root,
                                      const RunManifest& manifest, bool force);

// CSV writers. All throw std::runtime_error naming the path on I/O failure.

/// rho.csv: columns t,x,rho; one block per snapshot.
void write_rho_csv(const std::filesystem::path& path, const std::vector<Snapshot>& snaps,
                   const Grid& grid);

/// front.csv: columns t,X_num,theta_bar,X_half,min_field.
void write_front_csv(const std::filesystem::path& path,
                     const std::vector<DiagnosticRecord>& records);

/// f_t<time>.csv: transposed layout, header "theta,<x values>", one row per
/// trait mesh point.
void write_snapshot_csv(const std::filesystem::path& path, const Field& field,
                        const Grid& grid);

/// Generic two-column profile file with a caller-supplied header.
void write_pairs_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::array<double, 2>>& pairs);

/// Flat key = value fit report (window, C, p, R^2, n_points).
void write_fit_txt(const std::filesystem::path& path, const std::string& series,
                   const PowerLawFit& fit);

/// Reads a front.csv produced by write_front_csv.
struct FrontSeries {
    std::vector<double> t;
    std::vector<double> x_num;
    std::vector<double> theta_bar;
    std::vector<double> x_half;
    std::vector<double> min_field;
};

FrontSeries read_front_csv(const std::filesystem::path& path);

}  // namespace spatsort
