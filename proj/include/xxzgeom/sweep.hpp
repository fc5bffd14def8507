#pragma once

// Parameter sweeps and the figure data sets.

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "entanglement.hpp"
#include "geometric_phase.hpp"
#include "geometry.hpp"
#include "milburn.hpp"

namespace xxzgeom {

inline const std::vector<std::string>& scan_header() {
    static const std::vector<std::string> h{"eta", "alpha", "J",     "gamma", "B",   "C",
                                            "L_HS", "V_HS", "F_sep", "L_B",   "V_B", "Phi_g"};
    return h;
}

inline const std::vector<std::string>& geomphase_header() {
    static const std::vector<std::string> h{"eta", "Phi_g_tong", "Phi_g_closed_form", "delta", "converged"};
    return h;
}

/// Quantities of one trajectory point. NaN marks "not computed".
struct ScanRow {
    double eta = 0.0;
    ModelParams params;
    double c = NAN;
    double l_hs = NAN;
    double v_hs = NAN;
    double f_sep = NAN;
    double l_b = NAN;
    double v_b = NAN;
    double phi = NAN;

    std::vector<std::string> fields() const {
        return {format_number(eta),       format_number(params.noise_alpha), format_number(params.coupling_J),
                format_number(params.anisotropy_gamma), format_number(params.field_B), format_number(c),
                format_number(l_hs),      format_number(v_hs),               format_number(f_sep),
                format_number(l_b),       format_number(v_b),                format_number(phi)};
    }
};

/// HS rate ||d rho/dt|| and its eta-derivative taken straight from the master
/// equation: with G the (linear) generator, d/dt G(rho) = G(G(rho)).
struct HsKinematics {
    double rate = 0.0;   ///< per unit t
    double speed = 0.0;  ///< |d rate / d eta|
};

inline HsKinematics hs_kinematics(const ModelParams& p, const DensityMatrix& d) {
    const CMat4 h = build_hamiltonian(p);
    const double kappa = decoherence_rate(p);
    const CMat4 g1 = milburn_generator(h, kappa, d.mat);
    const CMat4 g2 = milburn_generator(h, kappa, g1);
    HsKinematics k;
    k.rate = std::sqrt(hs_inner(g1, g1).real());
    if (k.rate > 0.0) k.speed = std::abs(hs_inner(g1, g2).real()) / k.rate / (2.0 * p.coupling_J);
    return k;
}

inline ScanRow scan_row(const ModelParams& p, double eta, const DensityMatrix& d, const QuantitySet& q) {
    ScanRow r;
    r.eta = eta;
    r.params = p;
    const bool needC = q.has(Quantity::C) || q.has(Quantity::F) || q.has(Quantity::LB) || q.has(Quantity::VB);
    if (needC) {
        const double c = std::clamp(concurrence_wootters(d).value, 0.0, 1.0);
        if (q.has(Quantity::C)) r.c = c;
        if (q.has(Quantity::F)) r.f_sep = fidelity_of_separability(c);
        if (q.has(Quantity::LB)) r.l_b = bures_distance_normalized(c);
        if (q.has(Quantity::VB)) r.v_b = bures_speed(c);
    }
    if (q.has(Quantity::LHS) || q.has(Quantity::VHS)) {
        const HsKinematics k = hs_kinematics(p, d);
        if (q.has(Quantity::LHS)) r.l_hs = k.rate;
        if (q.has(Quantity::VHS)) r.v_hs = k.speed;
    }
    return r;
}

/// One row per (alpha, eta) cell in grid order.
inline CsvTable scan_table(const SweepSpec& spec) {
    validate(spec);
    CsvTable t;
    t.header = scan_header();
    for (double alpha : spec.alphas) {
        ModelParams p = spec.params_base;
        p.noise_alpha = alpha;
        const Trajectory traj = make_trajectory(p, spec.eta_max, spec.n_points, spec.method);

        std::vector<ScanRow> rows(traj.size());
        parallel_for(traj.size(), [&](std::size_t k) { rows[k] = scan_row(p, traj.etas[k], traj.states[k], spec.quantities); });

        if (spec.quantities.has(Quantity::PHI)) {
            std::vector<double> times(traj.size());
            for (std::size_t k = 0; k < traj.size(); ++k) times[k] = traj.time(k);
            const std::vector<cplx> s = tong_phasors(eigen_branches(traj), times, kDefaultEpsP);
            for (std::size_t k = 0; k < rows.size(); ++k)
                if (std::abs(s[k]) >= kSingularMagnitude) rows[k].phi = wrap_phase(std::arg(s[k]));
        }
        for (const ScanRow& r : rows) t.rows.push_back(r.fields());
    }
    return t;
}

/// Tong phase profile with optional printed closed form next to it.
inline CsvTable geomphase_table(const ModelParams& p, double etaMax, std::size_t nPoints, bool closedForm,
                                Method method = Method::Analytic) {
    const std::vector<PhaseProfileRow> rows = phase_profile(p, etaMax, nPoints, method);
    CsvTable t;
    t.header = geomphase_header();
    for (const PhaseProfileRow& r : rows) {
        std::string closed;
        std::string delta;
        if (closedForm) {
            const double cf = printed_closed_form_phase(p, r.eta).phase;
            closed = format_number(cf);
            if (!std::isnan(r.phase)) delta = format_number(wrap_phase(cf - r.phase));
        }
        t.rows.push_back({format_number(r.eta), format_number(r.phase), closed, delta, r.converged ? "true" : "false"});
    }
    return t;
}

namespace detail {

inline ModelParams figure_params(double j, double alpha) {
    ModelParams p;
    p.coupling_J = j;
    p.noise_alpha = alpha;
    return p;
}

// Rows at fixed eta with alpha swept over [0, alphaMax].
inline CsvTable alpha_sweep(double j, double eta, double alphaMax, std::size_t n, const QuantitySet& q) {
    const std::vector<double> alphas = uniform_grid(alphaMax, n);
    std::vector<ScanRow> rows(n);
    parallel_for(n, [&](std::size_t k) {
        const ModelParams p = figure_params(j, alphas[k]);
        rows[k] = scan_row(p, eta, propagate_analytic(p, DensityMatrix::initial(), t_of_eta(p, eta)), q);
    });
    CsvTable t;
    t.header = scan_header();
    for (const ScanRow& r : rows) t.rows.push_back(r.fields());
    return t;
}

// Rows with C swept over [0, 1] through the concurrence forms. Parameter
// columns are left empty where the quantity does not depend on them.
template <typename Fill>
CsvTable concurrence_sweep(std::size_t n, Fill fill) {
    const std::vector<double> cs = uniform_grid(1.0, n);
    CsvTable t;
    t.header = scan_header();
    for (double c : cs) {
        ScanRow r;
        r.eta = NAN;
        r.params.noise_alpha = NAN;
        r.params.coupling_J = NAN;
        r.params.anisotropy_gamma = NAN;
        r.params.field_B = NAN;
        r.c = c;
        fill(r);
        t.rows.push_back(r.fields());
    }
    return t;
}

inline QuantitySet only(std::initializer_list<Quantity> qs) {
    QuantitySet s;
    for (Quantity q : qs) s.add(q);
    return s;
}

}  // namespace detail

struct FigureFile {
    std::string name;
    CsvTable table;
};

/// Data behind every figure panel, using the caption parameters.
inline std::vector<FigureFile> figure_tables() {
    using detail::only;
    constexpr double twoPi = 2.0 * std::numbers::pi;
    std::vector<FigureFile> out;

    {
        SweepSpec s;
        s.params_base.coupling_J = 0.3;
        s.alphas = {0.0, 0.01, 0.03, 0.06, 0.1};
        s.eta_max = twoPi;
        s.n_points = 2001;
        s.quantities = only({Quantity::C});
        out.push_back({"fig3.csv", scan_table(s)});
    }
    {
        const double j = 0.3;
        const double alpha = 0.08;
        const double eta = std::numbers::pi / 6.0;
        const double c0 = std::abs(std::sin(2.0 * eta));
        out.push_back({"fig4a.csv", detail::concurrence_sweep(1001, [&](ScanRow& r) {
                           r.eta = eta;
                           r.params.noise_alpha = alpha;
                           r.params.coupling_J = j;
                           r.l_hs = hs_rate_from_concurrence(j, alpha, r.c, c0);
                       })});
    }
    out.push_back({"fig4b.csv", detail::alpha_sweep(0.3, 1.5, 1.0, 1001, only({Quantity::C, Quantity::LHS}))});
    out.push_back({"fig6a.csv", detail::concurrence_sweep(1001, [](ScanRow& r) { r.f_sep = fidelity_of_separability(r.c); })});
    out.push_back({"fig6b.csv", detail::alpha_sweep(0.8, 1.0, 1.0, 1001, only({Quantity::C, Quantity::F}))});
    out.push_back({"fig7a.csv", detail::concurrence_sweep(1001, [](ScanRow& r) { r.l_b = bures_distance_normalized(r.c); })});
    out.push_back({"fig7b.csv", detail::alpha_sweep(0.8, 16.0, 1.0, 1001, only({Quantity::C, Quantity::LB}))});

    for (const auto& [name, q] : {std::pair{"fig8a.csv", Quantity::VHS}, std::pair{"fig8b.csv", Quantity::VB}}) {
        SweepSpec s;
        s.params_base.coupling_J = 0.5;
        s.alphas = {0.01, 0.05, 0.1};
        s.eta_max = twoPi;
        s.n_points = 2001;
        s.quantities = only({Quantity::C, q});
        out.push_back({name, scan_table(s)});
    }
    {
        const double j = 0.65;
        const double alpha = 0.2;
        const double eta = std::numbers::pi / 4.0;
        out.push_back({"fig8-speeds.csv", detail::concurrence_sweep(1001, [&](ScanRow& r) {
                           r.eta = eta;
                           r.params.noise_alpha = alpha;
                           r.params.coupling_J = j;
                           r.v_hs = hs_speed_from_concurrence(j, alpha, r.c, 1.0);
                           r.v_b = bures_speed(r.c);
                       })});
    }
    {
        SweepSpec s;
        s.params_base.coupling_J = 0.09;
        s.alphas = {0.0, 0.01, 0.06, 0.1};
        s.eta_max = twoPi;
        s.n_points = 4001;
        s.quantities = only({Quantity::PHI});
        out.push_back({"fig9.csv", scan_table(s)});
    }
    return out;
}

inline std::vector<std::string> write_figures(const std::string& outDir) {
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec || !std::filesystem::is_directory(outDir)) throw IoError("cannot create output directory " + outDir);
    std::vector<std::string> written;
    for (const FigureFile& f : figure_tables()) {
        const std::string path = (std::filesystem::path(outDir) / f.name).string();
        write_csv(path, f.table);
        written.push_back(path);
    }
    return written;
}

}  // namespace xxzgeom
