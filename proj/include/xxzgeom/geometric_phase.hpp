#pragma once

// Kinematic (Tong) geometric phase of a mixed state along a trajectory:
//
//   phi = arg sum_i sqrt(p_i(0) p_i(tau)) <p_i(0)|p_i(tau)> exp(-int <p_i|dp_i/dt> dt)
//
// Eigenvectors of rho(t) are followed step to step (eigen-branch tracking)
// and rephased so consecutive overlaps are real and positive. Degenerate
// eigenvalue clusters are aligned as subspaces, since any basis inside them is
// as good as any other.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "cmat.hpp"
#include "eig.hpp"
#include "errors.hpp"
#include "milburn.hpp"

namespace xxzgeom {

struct EigenBranch {
    std::vector<double> etas;
    std::vector<double> p;
    std::vector<Vec4> vec;       ///< phase-aligned
    std::vector<Vec4> raw_vec;   ///< eigensolver output before rephasing
    bool negligible_at_start = false;
};

struct GeomPhaseResult {
    double eta_end = 0.0;
    double phase = 0.0;          ///< (-pi, pi]
    double magnitude = 0.0;      ///< |sum of weighted overlaps|
    int n_branches_used = 0;
    bool converged = false;
};

inline constexpr double kDefaultEpsP = 1e-12;
inline constexpr double kDegenerateGap = 1e-10;
inline constexpr double kMinStepOverlap = 0.9;
/// Below this |sum| the phase of the weighted overlap is numerically undefined.
inline constexpr double kSingularMagnitude = 1e-9;

/// Reduce to (-pi, pi].
inline double wrap_phase(double x) {
    double r = std::remainder(x, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

inline double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

namespace detail {

using Cluster = std::vector<std::size_t>;

inline std::vector<Cluster> clusters_of(const std::array<double, 4>& ascending) {
    std::vector<Cluster> out{{0}};
    for (std::size_t k = 1; k < 4; ++k) {
        if (ascending[k] - ascending[k - 1] <= kDegenerateGap) {
            out.back().push_back(k);
        } else {
            out.push_back({k});
        }
    }
    return out;
}

inline Vec4 project(const Vec4& v, const std::vector<Vec4>& basisVecs) {
    Vec4 r{};
    for (const Vec4& b : basisVecs) {
        const cplx c = inner(b, v);
        for (std::size_t i = 0; i < 4; ++i) r[i] += c * b[i];
    }
    return r;
}

// Symmetric (Loewdin) orthonormalization: the orthonormal set closest to the
// inputs. Returns false if the inputs are (numerically) linearly dependent.
inline bool lowdin(std::vector<Vec4>& vecs) {
    const std::size_t m = vecs.size();
    CMat4 gram = CMat4::identity();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) gram(i, j) = inner(vecs[i], vecs[j]);
    const HermitianEig<4> e = eig_hermitian(hermitian_part(gram));
    if (e.values[0] < 1e-8) return false;
    CMat4 invRoot;
    for (std::size_t k = 0; k < 4; ++k) invRoot += (1.0 / std::sqrt(e.values[k])) * outer(e.vectors[k], e.vectors[k]);
    std::vector<Vec4> out(m, Vec4{});
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < 4; ++r) out[j][r] += vecs[i][r] * invRoot(i, j);
    vecs = std::move(out);
    return true;
}

inline cplx unit_phase(cplx z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cplx(1.0);
}

}  // namespace detail

/// Follow the eigenpairs of rho along a grid. raw[k] is the ascending
/// eigensystem at etas[k]. Branch i starts on eigenpair i at etas[0].
inline std::vector<EigenBranch> track_branches(const std::vector<double>& etas, const std::vector<HermitianEig<4>>& raw,
                                               double epsP = kDefaultEpsP) {
    if (etas.size() != raw.size() || etas.empty()) {
        throw PreconditionError("track_branches: need one eigensystem per grid point");
    }
    const std::size_t steps = etas.size();
    std::vector<EigenBranch> br(4);
    for (std::size_t i = 0; i < 4; ++i) {
        br[i].etas = etas;
        br[i].p.resize(steps);
        br[i].vec.resize(steps);
        br[i].raw_vec.resize(steps);
        br[i].p[0] = raw[0].values[i];
        br[i].vec[0] = raw[0].vectors[i];
        br[i].raw_vec[0] = raw[0].vectors[i];
        br[i].negligible_at_start = raw[0].values[i] < epsP;
    }

    // Branch indices forming a degenerate cluster at the previous step, and
    // the first step of that contiguous degenerate run.
    std::array<std::size_t, 4> runStart{0, 0, 0, 0};
    std::array<std::vector<std::size_t>, 4> prevGroup;
    for (const auto& c : detail::clusters_of(raw[0].values))
        for (std::size_t i : c) prevGroup[i] = c;

    for (std::size_t k = 1; k < steps; ++k) {
        const HermitianEig<4>& cur = raw[k];
        const std::vector<detail::Cluster> newClusters = detail::clusters_of(cur.values);
        std::array<std::size_t, 4> clusterOf{};
        for (std::size_t c = 0; c < newClusters.size(); ++c)
            for (std::size_t j : newClusters[c]) clusterOf[j] = c;

        std::array<std::array<double, 4>, 4> overlap{};
        auto refresh = [&] {
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) overlap[i][j] = std::norm(inner(br[i].vec[k - 1], cur.vectors[j]));
        };
        refresh();

        // Best bijection branch -> eigenpair: maximize weight captured by the
        // target cluster first, individual overlaps second.
        std::array<std::size_t, 4> perm{0, 1, 2, 3};
        std::array<std::size_t, 4> best = perm;
        double bestCluster = -1.0;
        double bestSingle = -1.0;
        do {
            double cl = 0.0;
            double si = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j : newClusters[clusterOf[perm[i]]]) cl += overlap[i][j];
                si += overlap[i][perm[i]];
            }
            if (cl > bestCluster + 1e-12 || (std::abs(cl - bestCluster) <= 1e-12 && si > bestSingle)) {
                bestCluster = cl;
                bestSingle = si;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));

        // A degenerate group at k-1 whose members now land on different
        // clusters had an arbitrary basis; rotate it (and its degenerate
        // history) towards the vectors it splits into.
        std::array<bool, 4> handled{};
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& group = prevGroup[i];
            if (handled[i] || group.size() < 2) continue;
            for (std::size_t g : group) handled[g] = true;
            bool splits = false;
            for (std::size_t g : group) splits |= clusterOf[best[g]] != clusterOf[best[group[0]]];
            if (!splits) continue;

            std::vector<Vec4> span;
            for (std::size_t g : group) span.push_back(br[g].vec[k - 1]);
            std::vector<Vec4> rotated;
            for (std::size_t g : group) rotated.push_back(detail::project(cur.vectors[best[g]], span));
            if (!detail::lowdin(rotated)) {
                throw PreconditionError("eigen_branches: grid too coarse (degenerate subspace changed abruptly)");
            }
            // Coefficients X with rotated = span * X, applied to the whole run.
            const std::size_t m = group.size();
            std::vector<std::vector<cplx>> x(m, std::vector<cplx>(m));
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b) x[a][b] = inner(span[a], rotated[b]);
            for (std::size_t s = runStart[group[0]]; s < k; ++s) {
                std::vector<Vec4> old;
                for (std::size_t g : group) old.push_back(br[g].vec[s]);
                for (std::size_t b = 0; b < m; ++b) {
                    Vec4 v{};
                    for (std::size_t a = 0; a < m; ++a)
                        for (std::size_t r = 0; r < 4; ++r) v[r] += old[a][r] * x[a][b];
                    br[group[b]].vec[s] = v;
                    br[group[b]].raw_vec[s] = v;
                }
            }
        }
        refresh();

        // New vectors: subspace-aligned inside degenerate clusters, rephased
        // singletons otherwise.
        for (const auto& cluster : newClusters) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < 4; ++i)
                if (clusterOf[best[i]] == clusterOf[cluster[0]]) members.push_back(i);

            if (cluster.size() == 1) {
                const std::size_t i = members[0];
                const Vec4& v = cur.vectors[cluster[0]];
                const cplx fix = std::conj(detail::unit_phase(inner(br[i].vec[k - 1], v)));
                Vec4 aligned = v;
                for (auto& c : aligned) c *= fix;
                br[i].vec[k] = aligned;
                br[i].raw_vec[k] = v;
                br[i].p[k] = cur.values[cluster[0]];
                continue;
            }
            std::vector<Vec4> span;
            for (std::size_t j : cluster) span.push_back(cur.vectors[j]);
            std::vector<Vec4> aligned;
            for (std::size_t i : members) aligned.push_back(detail::project(br[i].vec[k - 1], span));
            if (!detail::lowdin(aligned)) {
                throw PreconditionError("eigen_branches: grid too coarse (degenerate subspace changed abruptly)");
            }
            for (std::size_t n = 0; n < members.size(); ++n) {
                const std::size_t i = members[n];
                br[i].vec[k] = aligned[n];
                br[i].raw_vec[k] = aligned[n];
                br[i].p[k] = cur.values[best[i]];
            }
        }

        for (std::size_t i = 0; i < 4; ++i) {
            if (std::abs(inner(br[i].vec[k - 1], br[i].vec[k])) < kMinStepOverlap) {
                throw PreconditionError("eigen_branches: grid too coarse (consecutive eigenvector overlap below 0.9)");
            }
        }

        // Degenerate-run bookkeeping for the next step.
        std::array<std::vector<std::size_t>, 4> group;
        for (const auto& cluster : newClusters) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < 4; ++i)
                if (clusterOf[best[i]] == clusterOf[cluster[0]]) members.push_back(i);
            for (std::size_t i : members) group[i] = members;
        }
        for (std::size_t i = 0; i < 4; ++i) {
            if (group[i] != prevGroup[i]) runStart[i] = k;
        }
        prevGroup = group;
    }
    return br;
}

inline std::vector<EigenBranch> eigen_branches(const Trajectory& traj, double epsP = kDefaultEpsP) {
    std::vector<HermitianEig<4>> raw(traj.size());
    parallel_for(traj.size(), [&](std::size_t k) { raw[k] = eig_hermitian(hermitian_part(traj.states[k].mat)); });
    return track_branches(traj.etas, raw, epsP);
}

/// Weighted overlap sum for every endpoint k along the branches.
/// times[k] is the laboratory time at grid point k.
inline std::vector<cplx> tong_phasors(const std::vector<EigenBranch>& branches, const std::vector<double>& times,
                                      double epsP, std::vector<int>* usedCounts = nullptr) {
    const std::size_t steps = times.size();
    std::vector<cplx> sum(steps, cplx{});
    if (usedCounts) usedCounts->assign(steps, 0);

    for (const EigenBranch& b : branches) {
        if (b.p[0] < epsP) continue;

        // Connection <v|dv/dt> is purely imaginary for unit vectors; keep the
        // imaginary part of the finite difference.
        std::vector<double> conn(steps, 0.0);
        for (std::size_t k = 0; k < steps && steps > 1; ++k) {
            const std::size_t lo = k == 0 ? 0 : k - 1;
            const std::size_t hi = k + 1 == steps ? k : k + 1;
            const double dt = times[hi] - times[lo];
            Vec4 d{};
            for (std::size_t r = 0; r < 4; ++r) d[r] = (b.vec[hi][r] - b.vec[lo][r]) / dt;
            conn[k] = inner(b.vec[k], d).imag();
        }

        double integral = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            if (k > 0) integral += 0.5 * (conn[k] + conn[k - 1]) * (times[k] - times[k - 1]);
            if (b.p[k] < epsP) continue;
            const double weight = std::sqrt(b.p[0] * b.p[k]);
            sum[k] += weight * inner(b.vec[0], b.vec[k]) * std::exp(cplx(0.0, -integral));
            if (usedCounts) ++(*usedCounts)[k];
        }
    }
    return sum;
}

/// Same sum with the per-branch phase taken from the gauge-invariant
/// Bargmann product of the unaligned eigenvectors,
///   <v0|v1><v1|v2>...<v_{K-1}|v_K><v_K|v0>.
inline cplx tong_phasor_bargmann(const std::vector<EigenBranch>& branches, double epsP) {
    cplx sum{};
    for (const EigenBranch& b : branches) {
        const std::size_t last = b.p.size() - 1;
        if (b.p[0] < epsP || b.p[last] < epsP) continue;
        double arg = 0.0;
        for (std::size_t k = 0; k < last; ++k) arg += std::arg(inner(b.raw_vec[k], b.raw_vec[k + 1]));
        arg += std::arg(inner(b.raw_vec[last], b.raw_vec[0]));
        const double weight = std::sqrt(b.p[0] * b.p[last]) * std::abs(inner(b.raw_vec[0], b.raw_vec[last]));
        sum += std::polar(weight, -arg);
    }
    return sum;
}

namespace detail {

inline std::vector<double> times_of(const Trajectory& traj) {
    std::vector<double> t(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) t[k] = traj.time(k);
    return t;
}

inline GeomPhaseResult phase_at_end(const Trajectory& traj, double epsP) {
    const std::vector<EigenBranch> br = eigen_branches(traj, epsP);
    std::vector<int> used;
    const std::vector<cplx> s = tong_phasors(br, times_of(traj), epsP, &used);
    GeomPhaseResult r;
    r.eta_end = traj.etas.back();
    r.n_branches_used = used.back();
    if (r.n_branches_used == 0) {
        throw DomainError("tong_phase: phase undefined, vanishing eigenvalue support");
    }
    r.magnitude = std::abs(s.back());
    r.phase = wrap_phase(std::arg(s.back()));
    return r;
}

inline Trajectory halved(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if ((n - 1) % 2 == 0) {
        Trajectory c;
        c.params = traj.params;
        c.method = traj.method;
        for (std::size_t k = 0; k < n; k += 2) {
            c.etas.push_back(traj.etas[k]);
            c.states.push_back(traj.states[k]);
        }
        return c;
    }
    TrajectoryOptions opts;
    opts.initial = traj.states.front();
    return make_trajectory(traj.params, traj.etas.back(), n / 2 + 1, traj.method, opts);
}

}  // namespace detail

/// Tong phase at the end of the trajectory. converged is set when the same
/// computation on the grid with every other point removed agrees to 1e-6.
inline GeomPhaseResult tong_phase(const Trajectory& traj, double epsP = kDefaultEpsP) {
    if (traj.size() < 2) throw PreconditionError("tong_phase: trajectory needs at least two points");
    GeomPhaseResult r = detail::phase_at_end(traj, epsP);
    if (traj.size() >= 3) {
        const GeomPhaseResult coarse = detail::phase_at_end(detail::halved(traj), epsP);
        r.converged = phase_distance(r.phase, coarse.phase) < 1e-6;
    }
    return r;
}

/// alpha = 0 reference: arg[<psi(0)|psi(tau)> exp(-int <psi|dpsi/dt> dt)] for
/// psi(t) = (e^{-i E2 t}|psi2> - e^{-i E3 t}|psi3>) / sqrt(2).
inline double pure_state_phase_oracle(const ModelParams& p, double etaEnd) {
    if (p.noise_alpha != 0.0) throw PreconditionError("pure_state_phase_oracle: requires alpha = 0");
    if (std::abs(std::cos(etaEnd)) < 1e-9) {
        throw DomainError("pure_state_phase_oracle: Pancharatnam phase singular, orthogonal endpoint");
    }
    const double tau = t_of_eta(p, etaEnd);
    const double gamma = p.anisotropy_gamma;
    const cplx overlap = std::exp(cplx(0.0, gamma * tau)) * std::cos(2.0 * p.coupling_J * tau);
    // <psi|dpsi/dt> = -i <H> = -i (E2 + E3) / 2 = i gamma
    const cplx dynamical = std::exp(cplx(0.0, -gamma * tau));
    return wrap_phase(std::arg(overlap * dynamical));
}

/// Sub-expressions of the printed closed-form phase, evaluated as typeset.
struct PrintedPhaseTerms {
    double a = 0.0;
    cplx b;
    double e = 0.0;
    cplx f;
    double g = 0.0;
    cplx k;
    double phase = 0.0;
};

/// Diagnostic only: reproduces the printed closed form term by term so the
/// discrepancy report can show it next to tong_phase. Not a correct phase.
inline PrintedPhaseTerms printed_closed_form_phase(const ModelParams& p, double eta) {
    const double j = p.coupling_J;
    const double al = p.noise_alpha;
    const double aj = al * j;
    const double c2 = std::cos(2.0 * eta);
    const double root = std::sqrt(0.5 * (1.0 - c2 + std::exp(6.0 * aj * eta) * (1.0 + c2)));

    PrintedPhaseTerms t;
    t.a = 0.5 * (1.0 + std::exp(-4.0 * aj * eta) * root);
    t.b = cplx(std::exp(3.0 * aj * eta) * std::cos(eta), std::sin(eta) * root);
    t.e = 0.5 * std::exp(6.0 * aj * eta) * std::cos(eta) * std::cos(eta);
    t.g = (-4.0 * c2 + std::cos(4.0 * eta) + 2.0 * std::exp(6.0 * j * al * eta)) / 16.0;

    const cplx jc = j;
    const cplx sq = std::sqrt(cplx(1.0 + 2.0 * j * eta * (eta / (2.0 * j) + 3.0 * al)));
    const cplx poly = -4.0 * eta / jc - 12.0 * al + 9.0 * j * eta * al * al * (1.0 + 4.5 * eta * eta) +
                      9.0 * j * j * al * al * al * (-13.0 + 2.0 * eta * eta) - 135.0 * j * j * j * std::pow(al, 4) * eta +
                      1215.0 * std::pow(j, 4) * std::pow(al, 5);
    const double pre = std::pow(1.0 - 9.0 * j * j * al * al, 2) * (4.0 + 45.0 * j * j * al * al);
    const cplx logArg = jc * (eta + 3.0 * j * al) + sq;
    t.f = cplx(0.0, -1.0 / 8.0) * (jc * sq * poly + pre * std::log(logArg));

    const double r = eta / j;
    const double innermost = 5.0 + 3.0 * j * j * (7.0 * r - 27.0 * al) * al;
    const double l4 = 2.0 + j * j * al * (81.0 * al - 2.0 * r * innermost);
    const double l3 = 3.0 * al + r * l4;
    const double l2 = -4.0 + 9.0 * j * j * al * l3;
    const double l1 = -9.0 * al + r * l2;
    const double bracket = 4.0 + 3.0 * j * j * al * l1;
    t.k = cplx(0.0, 1.0) * std::sqrt(cplx(1.0 + 6.0 * aj * eta)) / 1701.0 * bracket;

    const cplx total = std::sqrt(cplx(t.a)) * t.b * std::exp(-(t.e + t.f + t.g + t.k));
    t.phase = wrap_phase(std::arg(total));
    return t;
}

struct PhaseProfileRow {
    double eta = 0.0;
    double phase = std::numeric_limits<double>::quiet_NaN();  ///< NaN where undefined
    double magnitude = 0.0;
    bool converged = false;
};

/// Tong phase as a function of the endpoint eta over [0, eta_max]. Each row is
/// compared with the same endpoint on a grid of half the spacing.
inline std::vector<PhaseProfileRow> phase_profile(const ModelParams& p, double etaMax, std::size_t nPoints,
                                                  Method method = Method::Analytic, double epsP = kDefaultEpsP) {
    auto series = [&](std::size_t n) {
        const Trajectory traj = make_trajectory(p, etaMax, n, method);
        const std::vector<EigenBranch> br = eigen_branches(traj, epsP);
        return tong_phasors(br, detail::times_of(traj), epsP);
    };
    const std::vector<cplx> coarse = series(nPoints);
    const std::vector<cplx> fine = series(2 * nPoints - 1);
    const std::vector<double> etas = uniform_grid(etaMax, nPoints);

    std::vector<PhaseProfileRow> rows(nPoints);
    for (std::size_t k = 0; k < nPoints; ++k) {
        PhaseProfileRow& row = rows[k];
        row.eta = etas[k];
        row.magnitude = std::abs(coarse[k]);
        const double fineMagnitude = std::abs(fine[2 * k]);
        const bool defined = row.magnitude >= kSingularMagnitude;
        const bool fineDefined = fineMagnitude >= kSingularMagnitude;
        if (defined) row.phase = wrap_phase(std::arg(coarse[k]));
        if (defined && fineDefined) {
            row.converged = phase_distance(row.phase, std::arg(fine[2 * k])) < 1e-6;
        } else {
            row.converged = defined == fineDefined;
        }
    }
    return rows;
}

}  // namespace xxzgeom
