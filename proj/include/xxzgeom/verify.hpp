#pragma once

// Oracle pairings run by `xxzgeom verify`.
//
// Each check compares two independent computations. Probes of printed
// formulas that are known not to hold are reported as known-discrepancy with
// both values shown; they never fail the run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "brachistochrone.hpp"
#include "config.hpp"
#include "entanglement.hpp"
#include "geometric_phase.hpp"
#include "geometry.hpp"
#include "milburn.hpp"
#include "sweep.hpp"

namespace xxzgeom {

enum class CheckStatus { Pass, Fail, KnownDiscrepancy };

inline std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::KnownDiscrepancy: return "known-discrepancy";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Fail;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool exit_ok() const {
        return std::none_of(checks.begin(), checks.end(),
                            [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
    }
    const CheckResult& find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw PreconditionError("VerificationReport: no check named " + name);
    }

    std::string to_text() const {
        std::string out;
        char buf[512];
        for (const auto& c : checks) {
            std::snprintf(buf, sizeof buf, "%-18s %-34s measured=%-20.12g expected=%-20.12g tol=%.3g", to_string(c.status).c_str(),
                          c.name.c_str(), c.measured, c.expected, c.tolerance);
            out += buf;
            if (!c.note.empty()) out += "  # " + c.note;
            out += '\n';
        }
        int failed = 0;
        int known = 0;
        for (const auto& c : checks) {
            failed += c.status == CheckStatus::Fail;
            known += c.status == CheckStatus::KnownDiscrepancy;
        }
        std::snprintf(buf, sizeof buf, "%zu checks, %d failed, %d known discrepancies\n", checks.size(), failed, known);
        out += buf;
        return out;
    }
};

struct VerifyOptions {
    RateConvention convention = RateConvention::PaperConsistent;
    std::map<std::string, double> tolerance_overrides;
    std::uint64_t seed = 20240607;
};

/// Checks that accept a --tol-<name> override, with their default tolerances.
inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t{
        {"spectrum-energies", 1e-14},
        {"route-rk4-vs-analytic", 1e-8},
        {"route-closed-vs-analytic", 1e-12},
        {"concurrence-wootters-vs-closed", 1e-10},
        {"concurrence-peaks-alpha0", 1e-10},
        {"hs-rate-numeric-vs-closed", 1e-5},
        {"hs-speed-identity", 1e-12},
        {"hs-speed-finite-difference", 1e-8},
        {"hs-speed-substitution", 1e-12},
        {"bures-endpoints", 1e-12},
        {"bures-monotonicity", 0.0},
        {"bures-speed-identity", 1e-15},
        {"separable-search-bound", 1e-6},
        {"separable-search-coverage", 0.01},
        {"brachistochrone-t-min", 1e-15},
        {"brachistochrone-residual", 1e-6},
        {"printed-optimal-state", 1e-12},
        {"phase-gauge-invariance", 1e-9},
        {"phase-grid-convergence", 1e-6},
        {"phase-pure-state-oracle", 1e-6},
        {"phase-bargmann-cross-check", 1e-8},
        {"gamma-B-invariance", 1e-9},
        {"printed-density-eigenvalues", 1e-6},
        {"printed-phase-closed-form", 1e-6},
    };
    return t;
}

namespace detail {

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_state_diff(const Trajectory& a, const Trajectory& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, max_abs_diff(a.states[k].mat, b.states[k].mat));
    return m;
}

inline cplx phasor_from_raw(const Trajectory& traj, const std::vector<HermitianEig<4>>& raw) {
    const std::vector<EigenBranch> br = track_branches(traj.etas, raw);
    return tong_phasors(br, times_of(traj), kDefaultEpsP).back();
}

class Runner {
public:
    Runner(const VerifyOptions& o) : opts_(o) {
        for (const auto& [name, value] : o.tolerance_overrides) {
            if (!default_tolerances().count(name)) throw UsageError("--tol-" + name + ": unknown check");
        }
    }

    double tol(const std::string& name) const {
        if (auto it = opts_.tolerance_overrides.find(name); it != opts_.tolerance_overrides.end()) return it->second;
        return default_tolerances().at(name);
    }

    ModelParams params(double j, double alpha, bool forcePaper = false) const {
        ModelParams p;
        p.coupling_J = j;
        p.noise_alpha = alpha;
        p.convention = forcePaper ? RateConvention::PaperConsistent : opts_.convention;
        return p;
    }

    bool literal() const { return opts_.convention == RateConvention::LiteralInverse; }

    /// body returns {measured, expected}; the check passes when
    /// |measured - expected| <= tol (or the custom predicate holds).
    struct Outcome {
        double measured = 0.0;
        double expected = 0.0;
        std::string note;
        bool ok = true;
    };

    void run(const std::string& name, bool knownDiscrepancyOnMiss, const std::function<Outcome(double)>& body) {
        CheckResult r;
        r.name = name;
        r.tolerance = tol(name);
        try {
            const Outcome o = body(r.tolerance);
            r.measured = o.measured;
            r.expected = o.expected;
            r.note = o.note;
            r.status = o.ok ? CheckStatus::Pass : (knownDiscrepancyOnMiss ? CheckStatus::KnownDiscrepancy : CheckStatus::Fail);
        } catch (const std::exception& e) {
            r.status = CheckStatus::Fail;
            r.note = std::string("error: ") + e.what();
        }
        report.checks.push_back(std::move(r));
    }

    VerificationReport report;
    const VerifyOptions& opts_;
};

}  // namespace detail

inline VerificationReport run_verification(const VerifyOptions& opts = {}) {
    detail::Runner R(opts);
    using Outcome = detail::Runner::Outcome;
    constexpr double twoPi = 2.0 * std::numbers::pi;
    const bool literal = R.literal();
    const std::string routeNote = literal ? "closed form assumes kappa = alpha/2; literal rate differs" : "";

    R.run("spectrum-energies", false, [&](double tol) {
        ModelParams p = R.params(0.3, 0.0);
        const Spectrum sp = spectrum(p);
        const std::array<double, 4> want{2.0, -0.4, -1.6, 0.0};
        const CMat4 h = build_hamiltonian(p);
        double worst = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(sp.energies[k] - want[k]));
            const Vec4 hv = apply(h, sp.states[k]);
            for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(hv[i] - sp.energies[k] * sp.states[k][i]));
        }
        return Outcome{worst, 0.0, "J=0.3 gamma=1 B=0.5", worst <= tol};
    });

    const std::vector<double> routeAlphas = literal ? std::vector<double>{0.01, 0.1} : std::vector<double>{0.0, 0.01, 0.1};
    std::vector<Trajectory> analytic;
    for (double a : routeAlphas) analytic.push_back(make_trajectory(R.params(0.3, a), twoPi, 2001, Method::Analytic));

    R.run("route-rk4-vs-analytic", false, [&](double tol) {
        double worst = 0.0;
        for (std::size_t i = 0; i < routeAlphas.size(); ++i) {
            const Trajectory rk = make_trajectory(R.params(0.3, routeAlphas[i]), twoPi, 2001, Method::RK4);
            worst = std::max(worst, detail::max_state_diff(rk, analytic[i]));
        }
        return Outcome{worst, 0.0, "J=0.3, 2001 points on [0, 2pi]", worst <= tol};
    });

    R.run("route-closed-vs-analytic", literal, [&](double tol) {
        double worst = 0.0;
        for (std::size_t i = 0; i < routeAlphas.size(); ++i) {
            const Trajectory cf = make_trajectory(R.params(0.3, routeAlphas[i]), twoPi, 2001, Method::ClosedForm);
            worst = std::max(worst, detail::max_state_diff(cf, analytic[i]));
        }
        return Outcome{worst, 0.0, routeNote, worst <= tol};
    });

    R.run("concurrence-wootters-vs-closed", literal, [&](double tol) {
        double worst = 0.0;
        for (const Trajectory& tr : analytic) {
            std::vector<double> err(tr.size());
            parallel_for(tr.size(), [&](std::size_t k) {
                err[k] = std::abs(concurrence_wootters(tr.states[k]).value - concurrence_closed_form(tr.params, tr.etas[k]));
            });
            worst = std::max(worst, *std::max_element(err.begin(), err.end()));
        }
        return Outcome{worst, 0.0, routeNote, worst <= tol};
    });

    R.run("concurrence-peaks-alpha0", false, [&](double tol) {
        const ModelParams p = R.params(0.3, 0.0, true);
        double worst = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double eta = std::numbers::pi / 4.0 + k * std::numbers::pi / 2.0;
            const DensityMatrix d = propagate_analytic(p, DensityMatrix::initial(), t_of_eta(p, eta));
            worst = std::max(worst, std::abs(concurrence_wootters(d).value - 1.0));
        }
        return Outcome{worst, 0.0, "eta = pi/4 + k pi/2", worst <= tol};
    });

    R.run("hs-rate-numeric-vs-closed", literal, [&](double tol) {
        double worst = 0.0;
        for (double j : {0.3, 0.5}) {
            for (double a : {0.01, 0.05, 0.1}) {
                const ModelParams p = R.params(j, a);
                for (double eta : uniform_grid(twoPi, 401)) {
                    const double r = std::remainder(eta, std::numbers::pi / 2.0);
                    if (std::abs(r) < 1e-4) continue;
                    worst = std::max(worst, detail::relative_error(hs_rate_numeric(p, eta, 1e-6), hs_rate_closed_form(p, eta)));
                }
            }
        }
        return Outcome{worst, 0.0, routeNote.empty() ? "relative, delta=1e-6" : routeNote, worst <= tol};
    });

    R.run("hs-speed-identity", false, [&](double tol) {
        double worst = 0.0;
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
                for (int c = 0; c < 10; ++c) {
                    const ModelParams p = R.params(0.1 + 0.1 * a, 0.01 + 0.02 * b, true);
                    const double eta = 0.1 + 0.6 * c;
                    const double lhs = hs_speed(p, eta);
                    const double rhs = 4.0 * p.noise_alpha * p.coupling_J * hs_rate_closed_form(p, eta);
                    worst = std::max(worst, detail::relative_error(lhs, rhs));
                }
        return Outcome{worst, 0.0, "V_HS = 4 alpha J L_HS, relative", worst <= tol};
    });

    R.run("hs-speed-finite-difference", false, [&](double tol) {
        double worst = 0.0;
        const double h = 1e-4;
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
                for (int c = 0; c < 10; ++c) {
                    const ModelParams p = R.params(0.1 + 0.1 * a, 0.01 + 0.02 * b, true);
                    const double eta = 0.1 + 0.6 * c;
                    const double fd = std::abs(hs_rate_closed_form(p, eta + h) - hs_rate_closed_form(p, eta - h)) / (2.0 * h);
                    worst = std::max(worst, detail::relative_error(fd, hs_speed(p, eta)));
                }
        return Outcome{worst, 0.0, "relative, h=1e-4", worst <= tol};
    });

    R.run("hs-speed-substitution", false, [&](double tol) {
        const ModelParams p = R.params(0.65, 0.2, true);
        const double viaC = hs_speed_from_concurrence(p.coupling_J, p.noise_alpha, 1.0, 1.0);
        const BrachistochroneResult b = solve_brachistochrone(p);
        char note[160];
        std::snprintf(note, sizeof note, "dense-scan supremum %.9g at eta=%.6g", b.v_hs_scan_sup, b.v_hs_scan_argmax);
        return Outcome{b.v_hs_max, viaC, note, detail::relative_error(b.v_hs_max, viaC) <= tol};
    });

    R.run("bures-endpoints", false, [&](double tol) {
        const double worst = std::max({std::abs(fidelity_of_separability(0.0) - 1.0), std::abs(fidelity_of_separability(1.0) - 0.5),
                                       std::abs(bures_distance_normalized(0.0)), std::abs(bures_distance_normalized(1.0) - 1.0)});
        return Outcome{worst, 0.0, "F(0)=1, F(1)=1/2, L_B(0)=0, L_B(1)=1", worst <= tol};
    });

    R.run("bures-monotonicity", false, [&](double tol) {
        const std::vector<double> cs = uniform_grid(1.0, 1001);
        double violations = 0.0;
        for (std::size_t k = 1; k < cs.size(); ++k) {
            violations += !(bures_distance_normalized(cs[k]) > bures_distance_normalized(cs[k - 1]));
            violations += !(bures_speed(cs[k]) < bures_speed(cs[k - 1]));
        }
        return Outcome{violations, 0.0, "non-strict steps of L_B up / V_B down", violations <= tol};
    });

    R.run("bures-speed-identity", false, [&](double tol) {
        double worst = 0.0;
        for (double c : uniform_grid(1.0, 1001))
            worst = std::max(worst, std::abs(bures_speed(c) - std::sqrt(fidelity_of_separability(c) / 8.0)));
        return Outcome{worst, 0.0, "V_B = sqrt(F/8)", worst <= tol};
    });

    // 50 trajectory states, searched independently.
    struct SearchCase {
        double c = 0.0;
        double bound = 0.0;
        double found = 0.0;
    };
    std::vector<SearchCase> search;
    {
        std::vector<DensityMatrix> states;
        for (double a : {0.05, 0.1}) {
            const ModelParams p = R.params(0.3, a);
            for (double eta : uniform_grid(twoPi, 25)) states.push_back(propagate_analytic(p, DensityMatrix::initial(), t_of_eta(p, eta)));
        }
        search.resize(states.size());
        parallel_for(states.size(), [&](std::size_t k) {
            SearchCase& s = search[k];
            s.c = std::clamp(concurrence_wootters(states[k]).value, 0.0, 1.0);
            s.bound = fidelity_of_separability(s.c);
            s.found = separable_fidelity_search(states[k], 2000, opts.seed + k);
        });
    }

    R.run("separable-search-bound", false, [&](double tol) {
        double worst = -1.0;
        for (const auto& s : search) worst = std::max(worst, s.found - s.bound);
        return Outcome{worst, 0.0, "max(found - bound) over 50 states, 2000 samples", worst <= tol};
    });

    R.run("separable-search-coverage", false, [&](double tol) {
        double ratio = 1.0;
        double overall = 1.0;
        int lowC = 0;
        for (const auto& s : search) {
            overall = std::min(overall, s.found / s.bound);
            if (s.c < 0.05) {
                ratio = std::min(ratio, s.found / s.bound);
                ++lowC;
            }
        }
        char note[160];
        std::snprintf(note, sizeof note, "min found/bound over %d states with C<0.05; over all states %.6f", lowC, overall);
        return Outcome{ratio, 1.0, note, lowC > 0 && 1.0 - ratio <= tol};
    });

    const ModelParams brach = R.params(0.65, 0.2);
    R.run("brachistochrone-t-min", false, [&](double tol) {
        const double t = t_min(brach);
        const double want = 1.0 / (4.0 * 0.65 * 0.2);
        return Outcome{t, want, "J=0.65 alpha=0.2", std::abs(t - want) <= tol && std::abs(t - 1.923076923) < 1e-9};
    });

    R.run("brachistochrone-residual", false, [&](double tol) {
        const double r = milburn_residual(brach, t_min(brach));
        return Outcome{r, 0.0, "|| d rho/dt - generator || at t_min", r <= tol};
    });

    R.run("printed-optimal-state", true, [&](double tol) {
        const DensityMatrix reached = propagate_analytic(brach, DensityMatrix::initial(), t_min(brach));
        const DensityMatrix printed = optimal_state(brach);
        const double diff = max_abs_diff(reached.mat, printed.mat);
        const bool swapped = std::abs(reached(1, 1) - printed(2, 2)) <= tol && std::abs(reached(2, 2) - printed(1, 1)) <= tol;
        char note[200];
        std::snprintf(note, sizeof note, "rho_ud,ud propagated vs printed; max elementwise diff %.3g%s", diff,
                      swapped ? " (diagonal swapped)" : "");
        return Outcome{reached(1, 1).real(), printed(1, 1).real(), note, diff <= tol};
    });

    // Phase checks: alpha = 0 pieces always use the noiseless (paper) rate.
    const ModelParams phaseP = R.params(0.09, 0.06);
    const Trajectory phaseTraj = make_trajectory(phaseP, twoPi, 4001, Method::Analytic);
    std::vector<HermitianEig<4>> phaseRaw(phaseTraj.size());
    parallel_for(phaseTraj.size(), [&](std::size_t k) { phaseRaw[k] = eig_hermitian(hermitian_part(phaseTraj.states[k].mat)); });

    R.run("phase-gauge-invariance", false, [&](double tol) {
        const double base = std::arg(detail::phasor_from_raw(phaseTraj, phaseRaw));
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        std::vector<HermitianEig<4>> scrambled = phaseRaw;
        for (auto& e : scrambled)
            for (auto& v : e.vectors) {
                const cplx ph = std::polar(1.0, angle(rng));
                for (auto& c : v) c *= ph;
            }
        const double moved = std::arg(detail::phasor_from_raw(phaseTraj, scrambled));
        const double d = phase_distance(base, moved);
        return Outcome{d, 0.0, "J=0.09 alpha=0.06 eta_end=2pi, random eigenvector phases", d <= tol};
    });

    R.run("phase-grid-convergence", false, [&](double tol) {
        double worst = 0.0;
        for (double a : {0.0, 0.06, 0.2})
            for (double j : {0.09, 1.0})
                for (double etaEnd : {1.0, twoPi}) {
                    const ModelParams p = R.params(j, a, a == 0.0);
                    const double coarse = tong_phase(make_trajectory(p, etaEnd, 4001, Method::Analytic)).phase;
                    const double fine = tong_phase(make_trajectory(p, etaEnd, 8001, Method::Analytic)).phase;
                    worst = std::max(worst, phase_distance(coarse, fine));
                }
        return Outcome{worst, 0.0, "n=4001 vs 8001", worst <= tol};
    });

    R.run("phase-pure-state-oracle", false, [&](double tol) {
        const ModelParams p = R.params(0.09, 0.0, true);
        const std::vector<PhaseProfileRow> rows = phase_profile(p, twoPi, 4001);
        double worst = 0.0;
        int compared = 0;
        for (const auto& r : rows) {
            if (r.eta == 0.0 || std::abs(std::cos(r.eta)) < 1e-3) continue;
            worst = std::max(worst, phase_distance(r.phase, pure_state_phase_oracle(p, r.eta)));
            ++compared;
        }
        return Outcome{worst, 0.0, std::to_string(compared) + " endpoints on [0, 2pi], J=0.09", worst <= tol};
    });

    R.run("phase-bargmann-cross-check", false, [&](double tol) {
        const std::vector<EigenBranch> br = track_branches(phaseTraj.etas, phaseRaw);
        const double viaConnection = std::arg(tong_phasors(br, detail::times_of(phaseTraj), kDefaultEpsP).back());
        const double viaBargmann = std::arg(tong_phasor_bargmann(br, kDefaultEpsP));
        const double d = phase_distance(viaConnection, viaBargmann);
        return Outcome{viaConnection, viaBargmann, "connection integral vs overlap product", d <= tol};
    });

    R.run("gamma-B-invariance", false, [&](double tol) {
        const ModelParams ref = R.params(0.3, 0.1);
        const Trajectory refTraj = make_trajectory(ref, twoPi, 2001, Method::Analytic);
        const double refPhase = tong_phase(make_trajectory(ref, 1.0, 4001, Method::Analytic)).phase;
        double worst = 0.0;
        for (const auto& [g, b] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.5}, std::pair{-2.0, 3.0}}) {
            ModelParams p = ref;
            p.anisotropy_gamma = g;
            p.field_B = b;
            const Trajectory tr = make_trajectory(p, twoPi, 2001, Method::Analytic);
            worst = std::max(worst, detail::max_state_diff(tr, refTraj));
            const QuantitySet all = QuantitySet::all();
            for (std::size_t k = 0; k < tr.size(); k += 20) {
                const ScanRow x = scan_row(p, tr.etas[k], tr.states[k], all);
                const ScanRow y = scan_row(ref, refTraj.etas[k], refTraj.states[k], all);
                for (auto [u, v] : {std::pair{x.c, y.c}, {x.l_hs, y.l_hs}, {x.v_hs, y.v_hs}, {x.f_sep, y.f_sep}, {x.l_b, y.l_b}, {x.v_b, y.v_b}})
                    worst = std::max(worst, std::abs(u - v));
            }
            worst = std::max(worst, phase_distance(tong_phase(make_trajectory(p, 1.0, 4001, Method::Analytic)).phase, refPhase));
        }
        return Outcome{worst, 0.0, "(gamma, B) in {(0,0), (1,0.5), (-2,3)}", worst <= tol};
    });

    R.run("printed-density-eigenvalues", true, [&](double tol) {
        const ModelParams p = R.params(0.3, 0.1, true);
        const DensityMatrix d = evolved_state_closed_form(p, 1.0);
        const double computed = block_eigensystem(d).values[3];
        const double printed = printed_density_eigenvalues(p, 1.0).larger;
        return Outcome{computed, printed, "largest eigenvalue at J=0.3 alpha=0.1 eta=1", std::abs(computed - printed) <= tol};
    });

    R.run("printed-phase-closed-form", true, [&](double tol) {
        const ModelParams p = R.params(0.09, 0.06, true);
        const double tong = tong_phase(make_trajectory(p, 1.0, 4001, Method::Analytic)).phase;
        const double printed = printed_closed_form_phase(p, 1.0).phase;
        return Outcome{tong, printed, "Tong phase vs printed closed form at J=0.09 alpha=0.06 eta=1",
                       phase_distance(tong, printed) <= tol};
    });

    return R.report;
}

}  // namespace xxzgeom
