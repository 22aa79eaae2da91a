// Bond-operator transition sets, the model library, the peak-valley
// condition checker and the projector constructions.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pvfrag/spinchain.hpp"

namespace pvfrag {

/// One off-diagonal matrix element: inWindow -> outWindow with a coefficient.
struct Transition {
    std::vector<int> in, out;
    double coeff = 1.0;

    bool operator==(const Transition& t) const {
        return in == t.in && out == t.out && coeff == t.coeff;
    }
    bool operator<(const Transition& t) const {
        return std::tie(in, out, coeff) < std::tie(t.in, t.out, t.coeff);
    }
};

/// A q-site operator as an explicit transition list, closed under reversal.
struct BondOperator {
    int q = 2;
    std::vector<Transition> transitions;
};

struct ModelSpec {
    std::string name;
    int F = 1;
    std::vector<BondOperator> operators;
    // Allowed site values; defaults to -F..F. The Fredkin chain restricts
    // this to {-1, +1} (doubled spin-1/2 units).
    std::vector<int> alphabet;
    // Site values are 2x the physical spin (spin-1/2 chains only).
    bool halfSpinUnits = false;
    // Per-window couplings, all positive; empty means uniform 1.
    std::vector<double> siteCoefficients;

    int max_q() const {
        int q = 2;
        for (const auto& op : operators) q = std::max(q, op.q);
        return q;
    }
};

namespace detail {

inline void add_pair(std::vector<Transition>& ts, std::vector<int> in, std::vector<int> out,
                     double coeff = 1.0) {
    ts.push_back({in, out, coeff});
    ts.push_back({out, in, coeff});
}

inline void check_operator(const BondOperator& op) {
    for (const auto& t : op.transitions) {
        if (static_cast<int>(t.in.size()) != op.q || static_cast<int>(t.out.size()) != op.q)
            throw std::invalid_argument("transition window size mismatch");
        if (t.in == t.out) throw std::invalid_argument("diagonal transition");
        int si = 0, so = 0;
        for (int v : t.in) si += v;
        for (int v : t.out) so += v;
        if (si != so) throw std::invalid_argument("transition breaks window total spin");
        // hermiticity: the reversed element must be present with the same coeff
        bool found = false;
        for (const auto& u : op.transitions)
            if (u.in == t.out && u.out == t.in && u.coeff == t.coeff) found = true;
        if (!found) throw std::invalid_argument("transition set not closed under reversal");
    }
}

}  // namespace detail

/// 1 iff qval = lambda (mod 2F+1).
inline int modular_projector(long long qval, long long lambda, int F) {
    const long long m = 2 * F + 1;
    return ((qval - lambda) % m + m) % m == 0 ? 1 : 0;
}

/// Spin-2 H3 window rule: middle nonzero, or outer values of the same sign.
inline bool spin2_window_ok(const std::vector<int>& w) {
    return w[1] != 0 || w[0] * w[2] > 0;
}

inline bool spin2_projector_filter(const Transition& t) {
    return spin2_window_ok(t.in) && spin2_window_ok(t.out);
}

/// The explicit phase-factor projectors onto |m| = 2S, for F = 2S in 1..5.
/// Each product of (1 +/- e^{i pi m / 2^k})/2 factors reduces to parity and
/// residue tests; factors are evaluated left to right and any zero factor
/// short-circuits, so the pi/4 phases only ever see exponents that are
/// multiples of 4.
inline int pair_spin_projector(int F, int m) {
    auto mod = [](int a, int b) { return ((a % b) + b) % b; };
    switch (F) {
        case 1:  // (1 - e^{i pi m})/2
            return mod(m, 2) == 1;
        case 2:  // (1 + e^{i pi m})/2 * (1 - e^{i pi m/2})/2
            if (mod(m, 2) != 0) return 0;
            return mod(m, 4) == 2;
        case 3:  // (1 - e^{i pi m})/2 * (1 - e^{i pi (|m|-1)/2})/2
            if (mod(m, 2) != 1) return 0;
            return mod(std::abs(m) - 1, 4) == 2;
        case 4:  // (1 + e^{i pi m})/2 * (1 + e^{i pi m/2})/2 * (1 - e^{i pi m/4})/2
            if (mod(m, 2) != 0) return 0;
            if (mod(m, 4) != 0) return 0;
            return mod(m, 8) == 4;
        case 5:  // (1 - e^{i pi m})/2 * (1 + e^{i pi (|m|-1)/2})/2 * (1 - e^{i pi (|m|-1)/4})/2
            if (mod(m, 2) != 1) return 0;
            if (mod(std::abs(m) - 1, 4) != 0) return 0;
            return mod(std::abs(m) - 1, 8) == 4;
        default:
            throw std::invalid_argument("pair_spin_projector: F must be in 1..5");
    }
}

inline const std::vector<std::string>& model_names() {
    static const std::vector<std::string> names = {
        "tjz1", "h3_1", "h4_1", "motzkin", "tjz2",
        "h3_2_raw", "h3_2", "h_em", "h3_prime", "fredkin"};
    return names;
}

/// Construct a named model. params may carry "alpha" for h_em (default 1).
inline ModelSpec build_model(const std::string& name,
                             const std::map<std::string, double>& params = {}) {
    using detail::add_pair;
    ModelSpec m;
    m.name = name;
    std::vector<Transition> ts;

    if (name == "tjz1") {
        m.F = 1;
        add_pair(ts, {0, 1}, {1, 0});
        add_pair(ts, {-1, 0}, {0, -1});
        m.operators.push_back({2, ts});
    } else if (name == "h3_1") {
        m.F = 1;
        for (int a : {-1, 0})
            for (int b : {-1, 0}) add_pair(ts, {a, 1, b}, {a + 1, -1, b + 1});
        m.operators.push_back({3, ts});
    } else if (name == "h4_1") {
        m.F = 1;
        for (int a : {-1, 0})
            for (int b : {0, 1})
                for (int c : {0, 1})
                    for (int d : {-1, 0})
                        add_pair(ts, {a, b, c, d}, {a + 1, b - 1, c - 1, d + 1});
        m.operators.push_back({4, ts});
    } else if (name == "motzkin") {
        m.F = 1;
        add_pair(ts, {-1, 0}, {0, -1});
        add_pair(ts, {1, 0}, {0, 1});
        add_pair(ts, {1, -1}, {0, 0});
        m.operators.push_back({2, ts});
    } else if (name == "tjz2") {
        m.F = 2;
        add_pair(ts, {0, 2}, {1, 1});
        add_pair(ts, {1, 1}, {2, 0});
        add_pair(ts, {-2, 0}, {-1, -1});
        add_pair(ts, {-1, -1}, {0, -2});
        m.operators.push_back({2, ts});
    } else if (name == "h3_2_raw" || name == "h3_2") {
        m.F = 2;
        for (int a = -2; a <= 1; ++a)
            for (int b = 0; b <= 2; ++b)
                for (int c = -2; c <= 1; ++c) {
                    Transition t{{a, b, c}, {a + 1, b - 2, c + 1}, 1.0};
                    if (name == "h3_2" && !spin2_projector_filter(t)) continue;
                    add_pair(ts, t.in, t.out);
                }
        m.operators.push_back({3, ts});
    } else if (name == "h_em" || name == "h3_prime") {
        m.F = 1;
        double alpha = 1.0;
        if (auto it = params.find("alpha"); it != params.end()) alpha = it->second;
        if (name == "h_em" && alpha == 0.0)
            throw std::invalid_argument("h_em requires alpha != 0");
        add_pair(ts, {0, -1, 1}, {-1, 1, 0}, 1.0);
        add_pair(ts, {0, 1, -1}, {1, -1, 0}, name == "h_em" ? alpha : 1.0);
        if (name == "h3_prime") add_pair(ts, {1, -1, 1}, {0, 1, 0});
        m.operators.push_back({3, ts});
    } else if (name == "fredkin") {
        // Spin-1/2 chain; values are doubled (up = +1, down = -1).
        m.F = 1;
        m.halfSpinUnits = true;
        m.alphabet = {-1, 1};
        add_pair(ts, {1, -1, 1}, {1, 1, -1}, 1.0);
        add_pair(ts, {-1, 1, -1}, {1, -1, -1}, -1.0);
        m.operators.push_back({3, ts});
    } else {
        throw std::invalid_argument("unknown model: " + name);
    }

    if (m.alphabet.empty()) m.alphabet = full_alphabet(m.F);
    for (const auto& op : m.operators) detail::check_operator(op);
    return m;
}

// ---------------------------------------------------------------------------
// PV condition (window prefix-extrema preservation)

struct PVViolation {
    Transition transition;
    std::pair<int, int> inExtrema;   // (max, min) of in-window prefix sums
    std::pair<int, int> outExtrema;
};

struct PVReport {
    bool passed = true;
    std::vector<PVViolation> violations;
};

inline std::pair<int, int> window_prefix_extrema(const std::vector<int>& w) {
    int s = 0, mx = 0, mn = 0;
    for (int v : w) {
        s += v;
        mx = std::max(mx, s);
        mn = std::min(mn, s);
    }
    return {mx, mn};
}

/// A transition violates the PV condition iff the max or min of the prefix
/// partial-sum set {0, s1, ..., sq} differ between its two windows.
inline PVReport pv_check(const BondOperator& op) {
    PVReport r;
    for (const auto& t : op.transitions) {
        auto ein = window_prefix_extrema(t.in);
        auto eout = window_prefix_extrema(t.out);
        if (ein != eout) {
            r.passed = false;
            r.violations.push_back({t, ein, eout});
        }
    }
    return r;
}

inline PVReport pv_check(const ModelSpec& m) {
    PVReport r;
    for (const auto& op : m.operators) {
        PVReport partial = pv_check(op);
        if (!partial.passed) {
            r.passed = false;
            r.violations.insert(r.violations.end(), partial.violations.begin(),
                                partial.violations.end());
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Custom model files: {name?, F, transitions: [{in, out, coeff?}]}.
// Missing reversed elements are added automatically.

inline ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    ModelSpec m;
    m.name = j.value("name", std::string("custom"));
    m.F = j.at("F").get<int>();
    std::map<int, std::vector<Transition>> byWidth;
    for (const auto& jt : j.value("transitions", nlohmann::json::array())) {
        Transition t;
        t.in = jt.at("in").get<std::vector<int>>();
        t.out = jt.at("out").get<std::vector<int>>();
        t.coeff = jt.value("coeff", 1.0);
        byWidth[static_cast<int>(t.in.size())].push_back(t);
    }
    for (auto& [q, ts] : byWidth) {
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        std::vector<Transition> closed;
        for (const auto& t : ts) {
            if (seen.count({t.in, t.out})) continue;
            seen.insert({t.in, t.out});
            closed.push_back(t);
            if (!seen.count({t.out, t.in})) {
                seen.insert({t.out, t.in});
                closed.push_back({t.out, t.in, t.coeff});
            }
        }
        m.operators.push_back({q, closed});
    }
    if (m.alphabet.empty()) m.alphabet = full_alphabet(m.F);
    for (const auto& op : m.operators) detail::check_operator(op);
    return m;
}

/// Canonical serialization of the transition sets (sorted); the cache and
/// manifest content hashes are computed over this string, so equal custom
/// and built-in models share cache entries.
inline std::string canonical_model_string(const ModelSpec& m) {
    std::vector<Transition> all;
    for (const auto& op : m.operators)
        all.insert(all.end(), op.transitions.begin(), op.transitions.end());
    std::sort(all.begin(), all.end());
    std::string s = "F=" + std::to_string(m.F) + ";";
    for (const auto& t : all) {
        for (int v : t.in) s += std::to_string(v) + ",";
        s += ">";
        for (int v : t.out) s += std::to_string(v) + ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", t.coeff);
        s += "x";
        s += buf;
        s += ";";
    }
    return s;
}

/// True iff every transition preserves the window-local dipole sum, which
/// makes the global dipole a conserved sector label for this model.
inline bool conserves_dipole(const ModelSpec& m) {
    for (const auto& op : m.operators)
        for (const auto& t : op.transitions) {
            long long di = 0, dout = 0;
            for (int k = 0; k < op.q; ++k) {
                di += static_cast<long long>(k) * t.in[k];
                dout += static_cast<long long>(k) * t.out[k];
            }
            if (di != dout) return false;
        }
    return true;
}

/// Apply a transition at window start `pos`; nullopt if the window mismatches.
inline std::optional<SpinConfig> try_apply(const SpinConfig& c, const Transition& t, int pos) {
    const int q = static_cast<int>(t.in.size());
    if (pos < 0 || pos + q > c.size()) return std::nullopt;
    for (int k = 0; k < q; ++k)
        if (c.values[pos + k] != t.in[k]) return std::nullopt;
    SpinConfig out = c;
    for (int k = 0; k < q; ++k) out.values[pos + k] = t.out[k];
    return out;
}

}  // namespace pvfrag
