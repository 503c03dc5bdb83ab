// Command-line front end: CLI11 subcommands feed the same key=value table
// as a config file; flags given on the command line override file values.

#pragma once

#include <CLI11.hpp>
#include <string>
#include <vector>

#include "sensilab/run_config.hpp"

namespace sensilab::cli {

// Parse argv into a validated RunConfig.  Throws ConfigError on anything
// wrong (unknown subcommand, bad flag, invalid value).
inline RunConfig parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"sensilab: spectral laboratory for sensitive singular perturbations"};
    app.require_subcommand(1);

    struct Staged {
        Subcommand sub;
        std::string config_path;
        KeyValues flags;
    };
    Staged staged{Subcommand::SlCheck, {}, {}};

    auto add_kv = [&staged](CLI::App* cmd, const std::string& flag, const std::string& key,
                            const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [&staged, key](const std::string& v) { staged.flags[key] = v; }, help);
    };

    auto add_common = [&](CLI::App* cmd, Subcommand sub) {
        cmd->callback([&staged, sub]() { staged.sub = sub; });
        cmd->add_option("--config", staged.config_path, "key=value configuration file");
        add_kv(cmd, "--output-dir", "output_dir", "directory for CSV/JSON artifacts");
        return cmd;
    };

    {
        auto* c = add_common(app.add_subcommand("sl-check",
                                                "Shapiro-Lopatinskii verdicts (built-in "
                                                "example suite when no operator is given)"),
                             Subcommand::SlCheck);
        add_kv(c, "--operator", "operator", "operator expression, e.g. \"D1^2 + D2^2\"");
        c->add_option_function<std::vector<std::string>>(
            "--bc",
            [&staged](const std::vector<std::string>& v) {
                std::string joined;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) joined += ';';
                    joined += v[i];
                }
                staged.flags["bconds"] = joined;
            },
            "boundary operator (repeat once per condition)");
    }
    {
        auto* c = add_common(app.add_subcommand("strip-solve",
                                                "trace spectrum and field sections of the "
                                                "strip problem"),
                             Subcommand::StripSolve);
        add_kv(c, "--epsilon", "epsilon", "perturbation parameter (0 allowed with cutoff)");
        add_kv(c, "--phi", "phi", "forcing: band | band:LO,HI | rational | gauss:SIGMA");
        add_kv(c, "--xi-max", "xi_max", "frequency grid half-width");
        add_kv(c, "--n", "n", "frequency samples (even)");
        add_kv(c, "--y-list", "y_list", "comma-separated heights in [0,1]");
        add_kv(c, "--cutoff-lambda", "cutoff_lambda", "spectrum truncation, required for eps=0");
        add_kv(c, "--win-a", "win_a", "signal window start");
        add_kv(c, "--win-b", "win_b", "signal window end");
        add_kv(c, "--nx", "nx", "signal samples");
    }
    {
        auto* c = add_common(app.add_subcommand("strip-sweep",
                                                "peak law, compensated amplitude and "
                                                "oscillation counts across epsilon"),
                             Subcommand::StripSweep);
        add_kv(c, "--epsilon-list", "epsilon_list", "descending positive list, e.g. 1e-2,1e-3");
        add_kv(c, "--phi", "phi", "band | rational");
        add_kv(c, "--win-a", "win_a", "crossing-count window start");
        add_kv(c, "--win-b", "win_b", "crossing-count window end");
        add_kv(c, "--nx", "nx", "trace samples");
    }
    {
        auto* c = add_common(app.add_subcommand("layer-verify",
                                                "boundary-layer energy identities vs the "
                                                "symbols P and Q"),
                             Subcommand::LayerVerify);
        add_kv(c, "--xi-list", "xi_list", "tangential frequencies");
        add_kv(c, "--cutoff-xi-low", "cutoff_xi_low", "cutoff start");
        add_kv(c, "--cutoff-ramp", "cutoff_ramp", "cutoff ramp width");
    }
    {
        auto* c = add_common(app.add_subcommand("annulus-solve",
                                                "diagonal reduced problem on the annulus, "
                                                "one epsilon"),
                             Subcommand::AnnulusSolve);
        add_kv(c, "--r0", "r0", "inner radius in (0,1)");
        add_kv(c, "--epsilon", "epsilon", "perturbation parameter");
        add_kv(c, "--n-max", "n_max", "angular mode range");
        add_kv(c, "--forcing", "forcing", "rational | flat | gauss:SIGMA | zero");
    }
    {
        auto* c = add_common(app.add_subcommand("annulus-sweep",
                                                "crossover and divergence diagnostics "
                                                "across epsilon"),
                             Subcommand::AnnulusSweep);
        add_kv(c, "--r0", "r0", "inner radius in (0,1)");
        add_kv(c, "--epsilon-list", "epsilon_list", "descending positive list");
        add_kv(c, "--n-max", "n_max", "angular mode range");
        add_kv(c, "--forcing", "forcing", "rational | flat | gauss:SIGMA | zero");
    }
    {
        auto* c = add_common(app.add_subcommand("hadamard",
                                                "Cauchy-problem growth: truncated field "
                                                "norms and temperedness"),
                             Subcommand::Hadamard);
        add_kv(c, "--psi", "psi", "Cauchy datum spectrum: rational | gauss:SIGMA | band:LO,HI");
        add_kv(c, "--y", "y", "height >= 0");
        add_kv(c, "--lambda-list", "lambda_list", "ascending truncation cutoffs");
        add_kv(c, "--n", "n", "quadrature samples (even)");
    }
    {
        auto* c = add_common(app.add_subcommand("cosh-demo",
                                                "truncated-cosh inverse transforms vs the "
                                                "closed forms"),
                             Subcommand::CoshDemo);
        add_kv(c, "--lambda", "lambda", "truncation parameter (0, 700]");
        add_kv(c, "--x-a", "x_a", "sample window start");
        add_kv(c, "--x-b", "x_b", "sample window end");
        add_kv(c, "--nx", "nx", "sample count");
        add_kv(c, "--quad-n", "quad_n", "quadrature samples (even)");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    KeyValues file_kv;
    if (!staged.config_path.empty()) file_kv = read_config_file(staged.config_path);
    return load_config(staged.sub, file_kv, staged.flags);
}

}  // namespace sensilab::cli
