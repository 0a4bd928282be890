#pragma once

#include <string>
#include <string_view>

#include "spatsort/params.hpp"

namespace spatsort {

enum class InitKind { kGaussian, kDirac };

struct RunConfig {
    Params params;
    InitKind init = InitKind::kGaussian;

    bool operator==(const RunConfig&) const = default;
};

/// Parses the flat key = value format (# comments, blank lines allowed).
/// Keys are the Params field names plus `init`; unknown keys, unparsable
/// values and invariant violations raise ConfigError with line context.
/// An empty file yields all defaults (the paper preset).
RunConfig parse_config_text(std::string_view text, const std::string& origin);

RunConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Named presets: "paper" (defaults), "dirac" (Dirac initial datum),
/// "low-r" (r = 0.1), "high-lambda" (lambda2 = 1). Throws ConfigError on
/// unknown names.
RunConfig preset(std::string_view name);

const char* init_kind_name(InitKind kind);

}  // namespace spatsort
