#include <string>

#include <CLI11.hpp>

#include "headwave/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"head wave transform toolkit"};
    app.require_subcommand(1);

    headwave::CliArgs args;
    double total = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "run configuration (INI)")
            ->required();
        // --data stays optional at the parser level; commands that need it
        // report the missing file through the shared exit-code policy
        sub->add_option("--data", args.data_path, "input data CSV");
        sub->add_option("--out", args.out_path, "output CSV path");
        sub->add_option("--total-integral", total,
                        "override the total profile integral");
        sub->add_flag("--override-hash", args.override_hash,
                      "proceed despite a scene hash mismatch");
    };

    auto* fwd = app.add_subcommand("forward", "sample the transform on a grid");
    add_common(fwd);
    auto* inv = app.add_subcommand("invert", "reconstruct the profile from data");
    add_common(inv);
    auto* gau = app.add_subcommand("gauge", "verify a kernel/gauge construction");
    add_common(gau);
    auto* ver = app.add_subcommand("verify", "run the self-consistency suite");
    add_common(ver);
    auto* chk = app.add_subcommand("check", "validate scene assumptions");
    add_common(chk);

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--total-integral") > 0) args.total_integral = total;

    const std::string name = sub->get_name();
    if (name == "forward") return headwave::cmd_forward(args);
    if (name == "invert") return headwave::cmd_invert(args);
    if (name == "gauge") return headwave::cmd_gauge(args);
    if (name == "verify") return headwave::cmd_verify(args);
    return headwave::cmd_check(args);
}
