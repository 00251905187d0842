#pragma once

#include <optional>
#include <string>

namespace headwave {

struct CliArgs {
    std::string config_path;
    std::string data_path;
    std::string out_path;
    std::optional<double> total_integral;
    bool override_hash = false;
};

// Exit codes (stable, documented in the README):
//   0 success, 1 verify-suite failure, 2 config error, 3 scene assumption
//   failure, 4 numerical failure, 5 data/scene hash mismatch, 6 degenerate
//   inversion denominator, 7 gauge residual above threshold.
int cmd_forward(const CliArgs& args);
int cmd_invert(const CliArgs& args);
int cmd_gauge(const CliArgs& args);
int cmd_verify(const CliArgs& args);
int cmd_check(const CliArgs& args);

} // namespace headwave
