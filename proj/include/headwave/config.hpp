#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "headwave/quadrature.hpp"
#include "headwave/scene.hpp"

namespace headwave {

struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string k, const std::string& msg)
        : std::runtime_error("config error [" + k + "]: " + msg), key(std::move(k)) {}
};

/// Parsed INI-style run configuration. Sections and keys are kept verbatim
/// (unquoted) so the scene fingerprint can be computed canonically.
struct RunConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const;
    const std::string& get(const std::string& sec, const std::string& key) const;
    std::string get_or(const std::string& sec, const std::string& key,
                       const std::string& fallback) const;
    double get_num(const std::string& sec, const std::string& key) const;
    double get_num_or(const std::string& sec, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& sec, const std::string& key) const;
    /// Whitespace-separated list of numbers.
    std::vector<double> get_nums(const std::string& sec, const std::string& key,
                                 std::size_t expect) const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// FNV-1a 64-bit over the canonicalized (whitespace-stripped, key-sorted)
/// scene section.
std::uint64_t scene_fingerprint(const RunConfig& cfg);

QuadOptions quad_options(const RunConfig& cfg);

std::string scene_kind(const RunConfig& cfg);
FlatScene2D build_flat_scene(const RunConfig& cfg);
HyperplaneScene build_hyperplane_scene(const RunConfig& cfg);
CurveScene build_curve_scene(const RunConfig& cfg);

struct GridSpec {
    std::vector<double> axis1, axis2;
};
/// [grid] x = lo hi n / d = lo hi n (axis2 = d).
GridSpec build_grid(const RunConfig& cfg, bool require_d_zero);

} // namespace headwave
