#pragma once

// Sweep description and the `key = value` configuration format.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "milburn.hpp"
#include "xxz_model.hpp"

namespace xxzgeom {

enum class Quantity { C, LHS, VHS, F, LB, VB, PHI };
inline constexpr std::array<Quantity, 7> kAllQuantities{Quantity::C,  Quantity::LHS, Quantity::VHS, Quantity::F,
                                                        Quantity::LB, Quantity::VB,  Quantity::PHI};

inline std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::C: return "C";
        case Quantity::LHS: return "LHS";
        case Quantity::VHS: return "VHS";
        case Quantity::F: return "F";
        case Quantity::LB: return "LB";
        case Quantity::VB: return "VB";
        case Quantity::PHI: return "PHI";
    }
    return "?";
}

struct QuantitySet {
    std::array<bool, 7> on{};

    static QuantitySet all() {
        QuantitySet s;
        s.on.fill(true);
        return s;
    }
    bool has(Quantity q) const { return on[static_cast<std::size_t>(q)]; }
    void add(Quantity q) { on[static_cast<std::size_t>(q)] = true; }
};

struct SweepSpec {
    ModelParams params_base;
    std::vector<double> alphas{0.0};
    double eta_max = 2.0 * std::numbers::pi;
    std::size_t n_points = 2001;
    /// Scans default to everything except the phase, which needs its own grid.
    QuantitySet quantities = [] {
        QuantitySet s = QuantitySet::all();
        s.on[static_cast<std::size_t>(Quantity::PHI)] = false;
        return s;
    }();
    Method method = Method::Analytic;
    std::uint64_t seed = 20240607;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace detail

/// Strict real parse: the whole field must be a finite number.
inline double parse_real(std::string_view text, const std::string& where) {
    text = detail::trim(text);
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw UsageError(where + ": malformed number '" + std::string(text) + "'");
    }
    return v;
}

inline long long parse_integer(std::string_view text, const std::string& where) {
    text = detail::trim(text);
    long long v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw UsageError(where + ": malformed integer '" + std::string(text) + "'");
    }
    return v;
}

inline Method parse_method(std::string_view s) {
    if (s == "analytic") return Method::Analytic;
    if (s == "closed") return Method::ClosedForm;
    if (s == "rk4") return Method::RK4;
    throw UsageError("unknown method '" + std::string(s) + "' (analytic, closed, rk4)");
}

inline RateConvention parse_convention(std::string_view s) {
    if (s == "paper") return RateConvention::PaperConsistent;
    if (s == "literal") return RateConvention::LiteralInverse;
    throw UsageError("unknown convention '" + std::string(s) + "' (paper, literal)");
}

inline std::string to_string(RateConvention c) {
    return c == RateConvention::PaperConsistent ? "paper" : "literal";
}

inline QuantitySet parse_quantities(std::string_view s) {
    QuantitySet out;
    for (std::string_view item : detail::split_list(s)) {
        bool found = false;
        for (Quantity q : kAllQuantities) {
            if (item == to_string(q)) {
                out.add(q);
                found = true;
            }
        }
        if (!found) throw UsageError("unknown quantity '" + std::string(item) + "' (C, LHS, VHS, F, LB, VB, PHI)");
    }
    return out;
}

/// Apply one setting. `where` names the origin for error messages
/// ("config.txt:3" or "--J").
inline void apply_setting(SweepSpec& spec, std::string_view key, std::string_view value, const std::string& where) {
    value = detail::trim(value);
    if (key == "J") {
        spec.params_base.coupling_J = parse_real(value, where);
    } else if (key == "gamma") {
        spec.params_base.anisotropy_gamma = parse_real(value, where);
    } else if (key == "B") {
        spec.params_base.field_B = parse_real(value, where);
    } else if (key == "alpha") {
        const double a = parse_real(value, where);
        spec.params_base.noise_alpha = a;
        spec.alphas = {a};
    } else if (key == "alphas") {
        std::vector<double> list;
        for (std::string_view item : detail::split_list(value)) list.push_back(parse_real(item, where));
        spec.alphas = std::move(list);
        spec.params_base.noise_alpha = spec.alphas.front();
    } else if (key == "eta_max") {
        spec.eta_max = parse_real(value, where);
    } else if (key == "n_points") {
        const long long n = parse_integer(value, where);
        if (n < 2) throw UsageError(where + ": n_points must be >= 2");
        spec.n_points = static_cast<std::size_t>(n);
    } else if (key == "method") {
        spec.method = parse_method(value);
    } else if (key == "convention") {
        spec.params_base.convention = parse_convention(value);
    } else if (key == "seed") {
        const long long s = parse_integer(value, where);
        if (s < 0) throw UsageError(where + ": seed must be >= 0");
        spec.seed = static_cast<std::uint64_t>(s);
    } else if (key == "quantities") {
        spec.quantities = parse_quantities(value);
    } else {
        throw UsageError(where + ": unknown key '" + std::string(key) + "'");
    }
}

inline void validate(const SweepSpec& spec) {
    if (spec.n_points < 2) throw UsageError("n_points must be >= 2");
    if (spec.alphas.empty()) throw UsageError("alphas must not be empty");
    for (double a : spec.alphas)
        if (a < 0.0) throw UsageError("noise rate alpha must be >= 0");
    if (!(spec.eta_max > 0.0)) throw UsageError("eta_max must be > 0");
}

inline SweepSpec parse_config(std::istream& in, const std::string& name, SweepSpec spec = {}) {
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineNo);
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw UsageError(where + ": expected 'key = value'");
        apply_setting(spec, detail::trim(view.substr(0, eq)), view.substr(eq + 1), where);
    }
    return spec;
}

inline SweepSpec load_config(const std::string& path, SweepSpec spec = {}) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file " + path);
    return parse_config(f, path, std::move(spec));
}

}  // namespace xxzgeom
