// xxzgeom: command-line front end.
//
// Exit codes: 0 ok, 2 usage or configuration, 3 file I/O, 4 domain error.

#include <cstdio>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xxzgeom/xxzgeom.hpp"

namespace {

using namespace xxzgeom;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

// Flags that map onto SweepSpec keys, in the order they are applied.
const std::vector<std::pair<std::string, std::string>> kSpecFlags{
    {"J", "J"},           {"gamma", "gamma"},     {"B", "B"},         {"alpha", "alpha"},
    {"alphas", "alphas"}, {"eta-max", "eta_max"}, {"steps", "n_points"}, {"method", "method"},
    {"convention", "convention"}, {"seed", "seed"}, {"quantities", "quantities"},
};

struct Flags {
    std::map<std::string, std::string> values;
    std::map<const CLI::App*, std::map<std::string, CLI::Option*>> options;
    std::string config;
    std::string out;
    std::string outDir = "figures";
    bool closedForm = false;

    void add_spec_flags(CLI::App* cmd, std::initializer_list<const char*> names) {
        for (const char* n : names) {
            std::string help;
            for (const auto& [flag, key] : kSpecFlags)
                if (flag == n) help = "sets " + key;
            options[cmd][n] = cmd->add_option(std::string("--") + n, values[n], help);
        }
    }

    SweepSpec resolve(const CLI::App* cmd, SweepSpec base) const {
        if (!config.empty()) base = load_config(config, base);
        const auto& given = options.at(cmd);
        for (const auto& [flag, key] : kSpecFlags) {
            auto it = given.find(flag);
            if (it != given.end() && it->second->count() > 0) apply_setting(base, key, values.at(flag), "--" + flag);
        }
        validate(base);
        return base;
    }
};

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        write_text_file(path, text);
    }
}

std::string matrix_text(const CMat4& m) {
    std::string out;
    char buf[96];
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            std::snprintf(buf, sizeof buf, "  %+.9f%+.9fi", m(r, c).real() == 0.0 ? 0.0 : m(r, c).real(),
                          m(r, c).imag() == 0.0 ? 0.0 : m(r, c).imag());
            out += buf;
        }
        out += '\n';
    }
    return out;
}

int cmd_spectrum(const SweepSpec& spec) {
    const Spectrum sp = spectrum(spec.params_base);
    static const char* labels[] = {"|uu>", "(|ud>+|du>)/sqrt2", "(|ud>-|du>)/sqrt2", "|dd>"};
    std::string out = "index,energy,state\n";
    for (std::size_t k = 0; k < 4; ++k) out += std::to_string(k + 1) + "," + format_number(sp.energies[k]) + "," + labels[k] + "\n";
    emit("", out);
    return 0;
}

int cmd_evolve(const SweepSpec& spec, const std::string& outPath) {
    const Trajectory tr = make_trajectory(spec.params_base, spec.eta_max, spec.n_points, spec.method);
    CsvTable t;
    t.header = {"eta", "t"};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const std::string e = "rho" + std::to_string(r) + std::to_string(c);
            t.header.push_back(e + "_re");
            t.header.push_back(e + "_im");
        }
    for (std::size_t k = 0; k < tr.size(); ++k) {
        std::vector<std::string> row{format_number(tr.etas[k]), format_number(tr.time(k))};
        for (cplx z : tr.states[k].mat.entries()) {
            row.push_back(format_number(z.real()));
            row.push_back(format_number(z.imag()));
        }
        t.rows.push_back(std::move(row));
    }
    emit(outPath, t.to_string());
    return 0;
}

int cmd_brachistochrone(const SweepSpec& spec) {
    const ModelParams& p = spec.params_base;
    const BrachistochroneResult b = solve_brachistochrone(p);
    const DensityMatrix reached = propagate_analytic(p, DensityMatrix::initial(), b.t_min);
    std::string out;
    out += "v_hs_max         " + format_number(b.v_hs_max) + "\n";
    out += "l_hs_at_c1       " + format_number(b.l_hs_at_c1) + "\n";
    out += "t_min            " + format_number(b.t_min) + "\n";
    out += "eta_at_t_min     " + format_number(b.eta_at_t_min) + "\n";
    out += "v_hs_scan_sup    " + format_number(b.v_hs_scan_sup) + " at eta " + format_number(b.v_hs_scan_argmax) + "\n";
    out += "optimal_state (printed form)\n" + matrix_text(b.optimal_state.mat);
    out += "propagated state at t_min\n" + matrix_text(reached.mat);
    out += "milburn_residual " + format_number(b.milburn_residual) + "\n";
    emit("", out);
    return 0;
}

int cmd_geomphase(const SweepSpec& spec, bool closedForm, const std::string& outPath) {
    emit(outPath, geomphase_table(spec.params_base, spec.eta_max, spec.n_points, closedForm, spec.method).to_string());
    return 0;
}

int cmd_verify(const SweepSpec& spec, const std::map<std::string, double>& tolerances) {
    VerifyOptions o;
    o.convention = spec.params_base.convention;
    o.seed = spec.seed;
    o.tolerance_overrides = tolerances;
    const VerificationReport r = run_verification(o);
    emit("", r.to_text());
    return r.exit_ok() ? 0 : 1;
}

int cmd_figures(const std::string& outDir) {
    for (const std::string& p : write_figures(outDir)) std::printf("%s\n", p.c_str());
    return 0;
}

// --tol-<check> VALUE (or --tol-<check>=VALUE) is open-ended, so it is peeled
// off before the regular parser sees the arguments.
std::map<std::string, double> take_tolerances(std::vector<std::string>& args) {
    std::map<std::string, double> tol;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--tol-", 0) != 0) {
            rest.push_back(a);
            continue;
        }
        std::string name = a.substr(6);
        std::string value;
        if (const auto eq = name.find('='); eq != std::string::npos) {
            value = name.substr(eq + 1);
            name = name.substr(0, eq);
        } else if (i + 1 < args.size()) {
            value = args[++i];
        } else {
            throw UsageError(a + ": missing value");
        }
        const double v = parse_real(value, "--tol-" + name);
        if (v < 0.0) throw UsageError("--tol-" + name + ": tolerance must be >= 0");
        tol[name] = v;
    }
    args = std::move(rest);
    return tol;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const std::map<std::string, double> tolerances = take_tolerances(args);

    CLI::App app{"Two-spin XXZ model under intrinsic decoherence: dynamics, entanglement, state geometry"};
    app.require_subcommand(1);
    Flags f;

    auto* spectrumCmd = app.add_subcommand("spectrum", "energies and eigenstates");
    f.add_spec_flags(spectrumCmd, {"gamma", "B"});
    f.options[spectrumCmd]["J"] = spectrumCmd->add_option("--J", f.values["J"], "exchange coupling")->required();

    auto* evolveCmd = app.add_subcommand("evolve", "density-matrix trajectory as CSV");
    f.add_spec_flags(evolveCmd, {"J", "gamma", "B", "alpha", "eta-max", "steps", "method", "convention"});
    evolveCmd->add_option("--out", f.out, "output file (default stdout)");
    evolveCmd->add_option("--config", f.config, "key = value file");

    auto* scanCmd = app.add_subcommand("scan", "entanglement and geometry along trajectories");
    f.add_spec_flags(scanCmd, {"J", "gamma", "B", "alpha", "alphas", "eta-max", "steps", "method", "convention", "seed",
                               "quantities"});
    scanCmd->add_option("--out", f.out, "output file (default stdout)");
    scanCmd->add_option("--config", f.config, "key = value file");

    auto* brachCmd = app.add_subcommand("brachistochrone", "minimal-time construction");
    f.add_spec_flags(brachCmd, {"J", "gamma", "B", "alpha", "convention"});
    brachCmd->add_option("--config", f.config, "key = value file");

    auto* phaseCmd = app.add_subcommand("geomphase", "Tong geometric phase profile");
    f.add_spec_flags(phaseCmd, {"J", "gamma", "B", "alpha", "eta-max", "steps", "method", "convention"});
    phaseCmd->add_option("--out", f.out, "output file (default stdout)");
    phaseCmd->add_option("--config", f.config, "key = value file");
    phaseCmd->add_flag("--closed-form", f.closedForm, "add the printed closed form and its difference");

    auto* verifyCmd = app.add_subcommand("verify", "run the oracle checks; --tol-<check> VALUE overrides a tolerance");
    f.add_spec_flags(verifyCmd, {"convention", "seed"});

    auto* figuresCmd = app.add_subcommand("figures", "write every figure panel CSV");
    f.options[figuresCmd];
    figuresCmd->add_option("--out-dir", f.outDir, "output directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    if (!tolerances.empty() && !verifyCmd->parsed()) throw UsageError("--tol-<check> applies to verify only");

    SweepSpec base;
    if (spectrumCmd->parsed()) return cmd_spectrum(f.resolve(spectrumCmd, base));
    if (evolveCmd->parsed()) return cmd_evolve(f.resolve(evolveCmd, base), f.out);
    if (scanCmd->parsed()) {
        emit(f.out, scan_table(f.resolve(scanCmd, base)).to_string());
        return 0;
    }
    if (brachCmd->parsed()) return cmd_brachistochrone(f.resolve(brachCmd, base));
    if (phaseCmd->parsed()) {
        base.n_points = 4001;
        return cmd_geomphase(f.resolve(phaseCmd, base), f.closedForm, f.out);
    }
    if (verifyCmd->parsed()) return cmd_verify(f.resolve(verifyCmd, base), tolerances);
    if (figuresCmd->parsed()) return cmd_figures(f.outDir);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
