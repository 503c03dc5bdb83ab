// Run configuration: a flat key=value table per subcommand, assembled from
// defaults, an optional config file, and command-line flags (flags win).
// Everything is validated here; error messages always name the offending
// key.  The effective configuration is echoed verbatim into every run
// summary so runs reproduce from their own output.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sensilab/annulus.hpp"
#include "sensilab/csv.hpp"
#include "sensilab/layer.hpp"
#include "sensilab/operator_poly.hpp"
#include "sensilab/strip.hpp"

namespace sensilab::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnvVar = "SENSILAB_OUTPUT_DIR";

// Validation failure: exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical contract did not hold at run time: exit code 3.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Subcommand {
    SlCheck,
    StripSolve,
    StripSweep,
    LayerVerify,
    AnnulusSolve,
    AnnulusSweep,
    Hadamard,
    CoshDemo,
};

inline const char* to_string(Subcommand s) {
    switch (s) {
        case Subcommand::SlCheck: return "sl-check";
        case Subcommand::StripSolve: return "strip-solve";
        case Subcommand::StripSweep: return "strip-sweep";
        case Subcommand::LayerVerify: return "layer-verify";
        case Subcommand::AnnulusSolve: return "annulus-solve";
        case Subcommand::AnnulusSweep: return "annulus-sweep";
        case Subcommand::Hadamard: return "hadamard";
        case Subcommand::CoshDemo: return "cosh-demo";
    }
    return "?";
}

inline Subcommand subcommand_from_name(const std::string& name) {
    for (Subcommand s : {Subcommand::SlCheck, Subcommand::StripSolve, Subcommand::StripSweep,
                         Subcommand::LayerVerify, Subcommand::AnnulusSolve,
                         Subcommand::AnnulusSweep, Subcommand::Hadamard, Subcommand::CoshDemo})
        if (name == to_string(s)) return s;
    throw ConfigError("unknown subcommand '" + name + "'");
}

using KeyValues = std::map<std::string, std::string>;

// ---- typed per-subcommand parameter blocks ----

struct SlCheckParams {
    // Empty operator text selects the built-in example suite.
    std::string operator_text;
    std::vector<std::string> bcond_texts;
};

struct StripSolveParams {
    double epsilon = 1e-3;
    std::string phi_desc = "band";
    std::optional<double> xi_max;  // defaulted from epsilon when absent
    int n = 1 << 14;
    std::vector<double> y_list{1.0};
    std::optional<double> cutoff_lambda;  // required when epsilon == 0
    double win_a = -6.0, win_b = 6.0;
    int nx = 1024;
};

struct StripSweepParams {
    std::vector<double> eps_list{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::string phi_desc = "rational";
    double win_a = -6.0, win_b = 6.0;
    int nx = 1024;
};

struct LayerVerifyParams {
    std::vector<double> xi_list{5, 8, 10, 15, 20};
    double cutoff_xi_low = 2.0;
    double cutoff_ramp = 2.0;
};

struct AnnulusSolveParams {
    double r0 = 0.5;
    double epsilon = 1e-3;
    int n_max = 64;
    std::string forcing_desc = "rational";
};

struct AnnulusSweepParams {
    double r0 = 0.5;
    std::vector<double> eps_list{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int n_max = 64;
    std::string forcing_desc = "rational";
};

struct HadamardParams {
    std::string psi_desc = "rational";
    double y = 1.0;
    std::vector<double> lambda_list{10, 15, 20, 25, 30};
    int n = 4096;
};

struct CoshDemoParams {
    double lambda = 20.0;
    double x_a = -2.0, x_b = 2.0;
    int nx = 401;
    int quad_n = 1 << 16;
};

using Params = std::variant<SlCheckParams, StripSolveParams, StripSweepParams, LayerVerifyParams,
                            AnnulusSolveParams, AnnulusSweepParams, HadamardParams, CoshDemoParams>;

struct RunConfig {
    Subcommand subcommand;
    std::filesystem::path output_dir;
    Params params;
    KeyValues effective;  // canonicalized key=value echo, includes defaults
};

// ---- key=value config files ----

inline KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path.string() + "' cannot be opened");
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file '" + path.string() + "' line " +
                              std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config file '" + path.string() + "' line " +
                              std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

// ---- parsing helpers (all errors name the key) ----

namespace detail {

inline double to_double(const std::string& key, const std::string& s) {
    const char* b = s.c_str();
    char* e = nullptr;
    double v = std::strtod(b, &e);
    if (e == b || *e != '\0') throw ConfigError(key + ": '" + s + "' is not a number");
    return v;
}

inline int to_int(const std::string& key, const std::string& s) {
    double v = to_double(key, s);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError(key + ": '" + s + "' is not an integer");
    return i;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<double> to_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& piece : split(s, ',')) {
        if (piece.empty()) throw ConfigError(key + ": empty list entry");
        out.push_back(to_double(key, piece));
    }
    return out;
}

inline void require_descending_positive(const std::string& key, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw ConfigError(key + ": values must be strictly positive");
        if (i > 0 && !(v[i] < v[i - 1]))
            throw ConfigError(key + ": values must be sorted strictly descending");
    }
}

inline std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += csv::num(v[i]);
    }
    return s;
}

inline std::string join(const std::vector<std::string>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

// Merged lookup with consumption tracking, so leftover keys are reported.
class KeyReader {
public:
    KeyReader(const KeyValues& file_kv, const KeyValues& flag_kv) {
        for (const auto& [k, v] : file_kv) merged_[k] = v;
        for (const auto& [k, v] : flag_kv) merged_[k] = v;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = merged_.find(key);
        if (it == merged_.end()) return std::nullopt;
        std::string v = it->second;
        merged_.erase(it);
        return v;
    }

    void finish(const std::string& subcommand) const {
        if (!merged_.empty())
            throw ConfigError("unknown key '" + merged_.begin()->first + "' for subcommand " +
                              subcommand);
    }

private:
    KeyValues merged_;
};

// Strip forcing descriptors: "band", "band:LO,HI", "rational", "gauss:SIGMA".
inline strip::ForcingSpectrum parse_strip_forcing(const std::string& key,
                                                  const std::string& desc, double default_hi) {
    if (desc == "band") return strip::ForcingSpectrum::band_flat(0.5, default_hi);
    if (desc.rfind("band:", 0) == 0) {
        auto parts = split(desc.substr(5), ',');
        if (parts.size() != 2) throw ConfigError(key + ": band wants 'band:LO,HI'");
        double lo = to_double(key, parts[0]);
        double hi = to_double(key, parts[1]);
        if (!(lo >= 0.0) || !(hi > lo)) throw ConfigError(key + ": need 0 <= LO < HI");
        return strip::ForcingSpectrum::band_flat(lo, hi);
    }
    if (desc == "rational") return strip::ForcingSpectrum::rational();
    if (desc.rfind("gauss:", 0) == 0) {
        double s = to_double(key, desc.substr(6));
        if (!(s > 0.0)) throw ConfigError(key + ": gaussian sigma must be > 0");
        return strip::ForcingSpectrum::gaussian(s);
    }
    throw ConfigError(key + ": unknown forcing descriptor '" + desc + "'");
}

inline annulus::ModeForcing parse_mode_forcing(const std::string& key, const std::string& desc) {
    if (desc == "rational") return {annulus::ModeForcingKind::Rational, 8.0};
    if (desc == "flat") return {annulus::ModeForcingKind::Flat, 8.0};
    if (desc == "zero") return {annulus::ModeForcingKind::Zero, 8.0};
    if (desc.rfind("gauss:", 0) == 0) {
        double s = to_double(key, desc.substr(6));
        if (!(s > 0.0)) throw ConfigError(key + ": gaussian sigma must be > 0");
        return {annulus::ModeForcingKind::Gaussian, s};
    }
    throw ConfigError(key + ": unknown forcing descriptor '" + desc + "'");
}

}  // namespace detail

// Merge defaults <- file <- flags, validate, and build the typed block.
inline RunConfig load_config(Subcommand sub, const KeyValues& file_kv = {},
                             const KeyValues& flag_kv = {}) {
    using namespace detail;
    KeyReader kr(file_kv, flag_kv);
    RunConfig cfg;
    cfg.subcommand = sub;

    std::string outdir = std::string("out/") + to_string(sub);
    if (auto v = kr.take("output_dir")) outdir = *v;
    if (const char* env = std::getenv(kOutputDirEnvVar)) outdir = env;
    cfg.output_dir = outdir;
    cfg.effective["output_dir"] = outdir;

    auto put = [&cfg](const std::string& k, const std::string& v) { cfg.effective[k] = v; };

    switch (sub) {
        case Subcommand::SlCheck: {
            SlCheckParams p;
            if (auto v = kr.take("operator")) p.operator_text = *v;
            if (auto v = kr.take("bconds"))
                for (const auto& piece : split(*v, ';'))
                    if (!piece.empty()) p.bcond_texts.push_back(piece);
            if (!p.operator_text.empty()) {
                try {
                    opsym::parse_operator(p.operator_text);
                } catch (const opsym::ParseError& e) {
                    throw ConfigError(std::string("operator: ") + e.what());
                }
                if (p.bcond_texts.empty())
                    throw ConfigError("bconds: required when an operator is given");
                for (const auto& b : p.bcond_texts) {
                    try {
                        opsym::parse_operator(b);
                    } catch (const opsym::ParseError& e) {
                        throw ConfigError(std::string("bconds: ") + e.what());
                    }
                }
            } else if (!p.bcond_texts.empty()) {
                throw ConfigError("operator: required when bconds are given");
            }
            put("operator", p.operator_text);
            put("bconds", join(p.bcond_texts, ';'));
            cfg.params = p;
            break;
        }
        case Subcommand::StripSolve: {
            StripSolveParams p;
            if (auto v = kr.take("epsilon")) p.epsilon = to_double("epsilon", *v);
            if (p.epsilon < 0.0) throw ConfigError("epsilon: must be >= 0");
            if (auto v = kr.take("phi")) p.phi_desc = *v;
            if (auto v = kr.take("xi_max")) p.xi_max = to_double("xi_max", *v);
            if (auto v = kr.take("n")) p.n = to_int("n", *v);
            if (p.n < 2 || p.n % 2) throw ConfigError("n: must be even and >= 2");
            if (auto v = kr.take("y_list")) p.y_list = to_double_list("y_list", *v);
            if (p.y_list.empty()) throw ConfigError("y_list: must not be empty");
            for (double y : p.y_list)
                if (y < 0.0 || y > 1.0) throw ConfigError("y_list: values must lie in [0,1]");
            if (auto v = kr.take("cutoff_lambda"))
                p.cutoff_lambda = to_double("cutoff_lambda", *v);
            if (p.epsilon == 0.0) {
                if (!p.cutoff_lambda)
                    throw ConfigError(
                        "cutoff_lambda: required when epsilon = 0 (the limit trace only has a "
                        "truncated representation)");
                if (!(*p.cutoff_lambda > 0.0 && *p.cutoff_lambda <= 170.0))
                    throw ConfigError("cutoff_lambda: must lie in (0, 170]");
            }
            if (auto v = kr.take("win_a")) p.win_a = to_double("win_a", *v);
            if (auto v = kr.take("win_b")) p.win_b = to_double("win_b", *v);
            if (!(p.win_b > p.win_a)) throw ConfigError("win_b: must exceed win_a");
            if (auto v = kr.take("nx")) p.nx = to_int("nx", *v);
            if (p.nx < 2) throw ConfigError("nx: must be >= 2");
            double ximax_eff = p.xi_max ? *p.xi_max
                               : (p.epsilon > 0.0 ? strip::default_grid(p.epsilon).xi_max
                                                  : *p.cutoff_lambda);
            if (!(ximax_eff > 0.0)) throw ConfigError("xi_max: must be > 0");
            parse_strip_forcing("phi", p.phi_desc, ximax_eff);  // validate descriptor
            put("epsilon", csv::num(p.epsilon));
            put("phi", p.phi_desc);
            put("xi_max", csv::num(ximax_eff));
            put("n", csv::num(p.n));
            put("y_list", join(p.y_list));
            if (p.cutoff_lambda) put("cutoff_lambda", csv::num(*p.cutoff_lambda));
            put("win_a", csv::num(p.win_a));
            put("win_b", csv::num(p.win_b));
            put("nx", csv::num(p.nx));
            cfg.params = p;
            break;
        }
        case Subcommand::StripSweep: {
            StripSweepParams p;
            if (auto v = kr.take("epsilon_list")) p.eps_list = to_double_list("epsilon_list", *v);
            if (p.eps_list.empty()) throw ConfigError("epsilon_list: must not be empty");
            require_descending_positive("epsilon_list", p.eps_list);
            if (auto v = kr.take("phi")) p.phi_desc = *v;
            if (p.phi_desc != "band" && p.phi_desc != "rational")
                throw ConfigError("phi: sweep forcing must be 'band' or 'rational'");
            if (auto v = kr.take("win_a")) p.win_a = to_double("win_a", *v);
            if (auto v = kr.take("win_b")) p.win_b = to_double("win_b", *v);
            if (!(p.win_b > p.win_a)) throw ConfigError("win_b: must exceed win_a");
            if (auto v = kr.take("nx")) p.nx = to_int("nx", *v);
            if (p.nx < 2) throw ConfigError("nx: must be >= 2");
            put("epsilon_list", join(p.eps_list));
            put("phi", p.phi_desc);
            put("win_a", csv::num(p.win_a));
            put("win_b", csv::num(p.win_b));
            put("nx", csv::num(p.nx));
            cfg.params = p;
            break;
        }
        case Subcommand::LayerVerify: {
            LayerVerifyParams p;
            if (auto v = kr.take("xi_list")) p.xi_list = to_double_list("xi_list", *v);
            if (p.xi_list.empty()) throw ConfigError("xi_list: must not be empty");
            for (double x : p.xi_list)
                if (x == 0.0) throw ConfigError("xi_list: values must be nonzero");
            if (auto v = kr.take("cutoff_xi_low")) p.cutoff_xi_low = to_double("cutoff_xi_low", *v);
            if (auto v = kr.take("cutoff_ramp")) p.cutoff_ramp = to_double("cutoff_ramp", *v);
            if (p.cutoff_ramp < 0.0) throw ConfigError("cutoff_ramp: must be >= 0");
            put("xi_list", join(p.xi_list));
            put("cutoff_xi_low", csv::num(p.cutoff_xi_low));
            put("cutoff_ramp", csv::num(p.cutoff_ramp));
            cfg.params = p;
            break;
        }
        case Subcommand::AnnulusSolve: {
            AnnulusSolveParams p;
            if (auto v = kr.take("r0")) p.r0 = to_double("r0", *v);
            if (!(p.r0 > 0.0 && p.r0 < 1.0)) throw ConfigError("r0: must lie in (0,1)");
            if (auto v = kr.take("epsilon")) p.epsilon = to_double("epsilon", *v);
            if (!(p.epsilon > 0.0)) throw ConfigError("epsilon: must be > 0");
            if (auto v = kr.take("n_max")) p.n_max = to_int("n_max", *v);
            if (p.n_max < 1) throw ConfigError("n_max: must be >= 1");
            if (auto v = kr.take("forcing")) p.forcing_desc = *v;
            parse_mode_forcing("forcing", p.forcing_desc);
            put("r0", csv::num(p.r0));
            put("epsilon", csv::num(p.epsilon));
            put("n_max", csv::num(p.n_max));
            put("forcing", p.forcing_desc);
            cfg.params = p;
            break;
        }
        case Subcommand::AnnulusSweep: {
            AnnulusSweepParams p;
            if (auto v = kr.take("r0")) p.r0 = to_double("r0", *v);
            if (!(p.r0 > 0.0 && p.r0 < 1.0)) throw ConfigError("r0: must lie in (0,1)");
            if (auto v = kr.take("epsilon_list")) p.eps_list = to_double_list("epsilon_list", *v);
            if (p.eps_list.empty()) throw ConfigError("epsilon_list: must not be empty");
            require_descending_positive("epsilon_list", p.eps_list);
            if (auto v = kr.take("n_max")) p.n_max = to_int("n_max", *v);
            if (p.n_max < 1) throw ConfigError("n_max: must be >= 1");
            if (auto v = kr.take("forcing")) p.forcing_desc = *v;
            parse_mode_forcing("forcing", p.forcing_desc);
            put("r0", csv::num(p.r0));
            put("epsilon_list", join(p.eps_list));
            put("n_max", csv::num(p.n_max));
            put("forcing", p.forcing_desc);
            cfg.params = p;
            break;
        }
        case Subcommand::Hadamard: {
            HadamardParams p;
            if (auto v = kr.take("psi")) p.psi_desc = *v;
            parse_strip_forcing("psi", p.psi_desc, 30.0);
            if (auto v = kr.take("y")) p.y = to_double("y", *v);
            if (p.y < 0.0) throw ConfigError("y: must be >= 0");
            if (auto v = kr.take("lambda_list")) p.lambda_list = to_double_list("lambda_list", *v);
            if (p.lambda_list.empty()) throw ConfigError("lambda_list: must not be empty");
            for (std::size_t i = 0; i < p.lambda_list.size(); ++i) {
                if (!(p.lambda_list[i] > 0.0))
                    throw ConfigError("lambda_list: values must be positive");
                if (i > 0 && !(p.lambda_list[i] > p.lambda_list[i - 1]))
                    throw ConfigError("lambda_list: values must be strictly ascending");
            }
            if (auto v = kr.take("n")) p.n = to_int("n", *v);
            if (p.n < 2 || p.n % 2) throw ConfigError("n: must be even and >= 2");
            put("psi", p.psi_desc);
            put("y", csv::num(p.y));
            put("lambda_list", join(p.lambda_list));
            put("n", csv::num(p.n));
            cfg.params = p;
            break;
        }
        case Subcommand::CoshDemo: {
            CoshDemoParams p;
            if (auto v = kr.take("lambda")) p.lambda = to_double("lambda", *v);
            if (!(p.lambda > 0.0 && p.lambda <= 700.0))
                throw ConfigError("lambda: must lie in (0, 700]");
            if (auto v = kr.take("x_a")) p.x_a = to_double("x_a", *v);
            if (auto v = kr.take("x_b")) p.x_b = to_double("x_b", *v);
            if (!(p.x_b > p.x_a)) throw ConfigError("x_b: must exceed x_a");
            if (auto v = kr.take("nx")) p.nx = to_int("nx", *v);
            if (p.nx < 2) throw ConfigError("nx: must be >= 2");
            if (auto v = kr.take("quad_n")) p.quad_n = to_int("quad_n", *v);
            if (p.quad_n < 2 || p.quad_n % 2) throw ConfigError("quad_n: must be even and >= 2");
            put("lambda", csv::num(p.lambda));
            put("x_a", csv::num(p.x_a));
            put("x_b", csv::num(p.x_b));
            put("nx", csv::num(p.nx));
            put("quad_n", csv::num(p.quad_n));
            cfg.params = p;
            break;
        }
    }
    kr.finish(to_string(sub));
    return cfg;
}

}  // namespace sensilab::cli
