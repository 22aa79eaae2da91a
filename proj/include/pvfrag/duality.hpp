// Charge-path geometry: spin<->path duality, regional peaks/valleys,
// core-subspace membership and the spin-2 region decomposition.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pvfrag/spinchain.hpp"

namespace pvfrag {

/// Cumulative-sum height profile; heights[0] is the fixed left anchor (= 0).
struct ChargePath {
    int F = 1;
    std::vector<int> heights;  // L+1 entries
};

inline ChargePath to_path(const SpinConfig& c) {
    ChargePath p{c.F, {0}};
    p.heights.reserve(c.size() + 1);
    for (int v : c.values) p.heights.push_back(p.heights.back() + v);
    return p;
}

inline SpinConfig from_path(const ChargePath& p) {
    if (p.heights.size() < 2 || p.heights.front() != 0)
        throw std::invalid_argument("path must have >= 2 heights anchored at 0");
    SpinConfig c{p.F, {}};
    for (size_t k = 1; k < p.heights.size(); ++k) {
        int step = p.heights[k] - p.heights[k - 1];
        if (step < -p.F || step > p.F) throw std::invalid_argument("path step exceeds F");
        c.values.push_back(step);
    }
    return c;
}

enum class PVKind { Peak, Valley };

struct PVLabel {
    PVKind kind;
    int twicePosition;  // 2 * (half-integer bond position); height index j has 2j-1
    int height;

    bool operator==(const PVLabel& o) const {
        return kind == o.kind && twicePosition == o.twicePosition && height == o.height;
    }
};

namespace detail {

// Walk outward from height index j while heights stay on the "inner" side of
// h = heights[j] (<= h for a peak candidate). Returns the extremal inner value
// reached, or nullopt if the first step immediately leaves the region.
inline std::optional<int> region_extreme(const std::vector<int>& h, int j, int dir, bool peak) {
    const int n = static_cast<int>(h.size());
    std::optional<int> best;
    for (int i = j + dir; i >= 0 && i < n; i += dir) {
        if (peak ? (h[i] > h[j]) : (h[i] < h[j])) break;
        if (!best || (peak ? (h[i] < *best) : (h[i] > *best))) best = h[i];
    }
    return best;
}

// Is heights[j] the one-sided extremum all the way to the chain end?
inline bool extremal_to_end(const std::vector<int>& h, int j, int dir, bool peak) {
    const int n = static_cast<int>(h.size());
    for (int i = j + dir; i >= 0 && i < n; i += dir)
        if (peak ? (h[i] > h[j]) : (h[i] < h[j])) return false;
    return true;
}

}  // namespace detail

/// Regional peaks and valleys of a path for bond-operator window width q.
/// Interior rule: the height is the max (min) of a window on each side whose
/// min (max) sits at least qF below (above) it. Among the leftmost/rightmost
/// q height sites the depth requirement on the boundary-facing side may be
/// replaced by being extremal up to that end (the one-sided region runs into
/// the boundary before turning), but at least one side must still satisfy
/// the full depth rule. A run of consecutive labels of equal
/// kind and height is one plateau and reported once, and peaks and valleys
/// alternate by construction, so a path whose candidates are all of one kind
/// (e.g. a monotone path) carries no labels at all.
inline std::vector<PVLabel> regional_extrema(const ChargePath& p, int q) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    const auto& h = p.heights;
    const int n = static_cast<int>(h.size());  // = L+1
    const int depth = q * p.F;
    std::vector<PVLabel> out;
    for (int j = 0; j < n; ++j) {
        for (bool peak : {true, false}) {
            auto deep = [&](int dir) {
                auto m = detail::region_extreme(h, j, dir, peak);
                return m && std::abs(h[j] - *m) >= depth;
            };
            const bool deepLeft = deep(-1);
            const bool deepRight = deep(+1);
            const bool leftOK = deepLeft || detail::extremal_to_end(h, j, -1, peak);
            const bool rightOK = deepRight || detail::extremal_to_end(h, j, +1, peak);
            if (leftOK && rightOK && (deepLeft || deepRight))
                out.push_back({peak ? PVKind::Peak : PVKind::Valley, 2 * j - 1, h[j]});
        }
    }
    std::vector<PVLabel> merged;
    for (const auto& l : out)
        if (merged.empty() || merged.back().kind != l.kind || merged.back().height != l.height)
            merged.push_back(l);
    const bool hasPeak = std::any_of(merged.begin(), merged.end(),
                                     [](const PVLabel& l) { return l.kind == PVKind::Peak; });
    const bool hasValley = std::any_of(merged.begin(), merged.end(),
                                       [](const PVLabel& l) { return l.kind == PVKind::Valley; });
    if (!hasPeak || !hasValley) return {};
    return merged;
}

/// The conserved part of a label list: (kind, height) in position order.
inline std::vector<std::pair<PVKind, int>> pv_signature(const std::vector<PVLabel>& labels) {
    std::vector<std::pair<PVKind, int>> sig;
    for (const auto& l : labels) sig.emplace_back(l.kind, l.height);
    return sig;
}

/// True iff every prefix sum stays in [0, 2S] = [0, F].
inline bool core_membership(const SpinConfig& c) {
    int s = 0;
    for (int v : c.values) {
        s += v;
        if (s < 0 || s > c.F) return false;
    }
    return true;
}

/// All core configurations of length L, sorted by rank; |result| = (F+1)^L.
inline std::vector<SpinConfig> core_basis(int L, int F) {
    if (L < 1 || F < 1) throw std::invalid_argument("bad (L, F)");
    std::vector<SpinConfig> out;
    // Iterative digit generation in rank order: site L-1 is most significant,
    // but core membership constrains prefixes from site 0, so generate low
    // sites first and sort. Sizes here are (F+1)^L, small for tested ranges.
    std::vector<std::pair<std::vector<int>, int>> frontier = {{{}, 0}};  // (values, prefix)
    for (int k = 0; k < L; ++k) {
        std::vector<std::pair<std::vector<int>, int>> next;
        next.reserve(frontier.size() * (F + 1));
        for (auto& [vals, s] : frontier) {
            for (int v = -F; v <= F; ++v) {
                int ns = s + v;
                if (ns < 0 || ns > F) continue;
                auto nv = vals;
                nv.push_back(v);
                next.emplace_back(std::move(nv), ns);
            }
        }
        frontier = std::move(next);
    }
    out.reserve(frontier.size());
    for (auto& [vals, s] : frontier) out.push_back({F, std::move(vals)});
    std::sort(out.begin(), out.end(),
              [](const SpinConfig& a, const SpinConfig& b) { return rank(a) < rank(b); });
    return out;
}

/// Doubled charge values 2*C_{k+1/2} = 2*(prefix_k - S); length L, each in
/// [-F, F] stepping by 2*spin. Rejects non-core input.
inline std::vector<int> to_charge_string(const SpinConfig& c) {
    if (!core_membership(c)) throw std::invalid_argument("config outside core subspace");
    std::vector<int> charge;
    charge.reserve(c.size());
    int s = 0;
    for (int v : c.values) {
        s += v;
        charge.push_back(2 * s - c.F);
    }
    return charge;
}

/// Human rendering of a doubled charge value: arrows for S=1/2, integers else.
inline std::string render_charge(int twiceC) {
    if (twiceC == 1) return "↑";
    if (twiceC == -1) return "↓";
    if (twiceC % 2 == 0) return std::to_string(twiceC / 2);
    return std::to_string(twiceC) + "/2";
}

inline std::string render_charge_string(const std::vector<int>& s, const char* sep = ",") {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += sep;
        out += render_charge(s[i]);
    }
    return out;
}

struct Region {
    int sign;  // +1 or -1
    int totalSpin;
    int first, last;  // inclusive site span
};

struct RegionDecomposition {
    std::vector<Region> regions;
    std::vector<int> separatorZeros;  // site indices
};

/// Spin-2 region labeling: maximal same-sign runs of nonzero sites with
/// interior zeros reattached; zeros between regions (and leading/trailing
/// zeros) are separators.
inline RegionDecomposition region_decomposition(const SpinConfig& c) {
    if (c.F != 2) throw std::invalid_argument("region_decomposition is defined for F = 2");
    RegionDecomposition rd;
    const int L = c.size();
    int k = 0;
    while (k < L) {
        if (c.values[k] == 0) {
            rd.separatorZeros.push_back(k);
            ++k;
            continue;
        }
        const int sign = c.values[k] > 0 ? +1 : -1;
        Region r{sign, 0, k, k};
        int lastNonzero = k;
        int j = k;
        while (j < L) {
            if (c.values[j] == 0) {
                ++j;
                continue;
            }
            if ((c.values[j] > 0 ? +1 : -1) != sign) break;
            r.totalSpin += c.values[j];
            lastNonzero = j;
            ++j;
        }
        r.last = lastNonzero;
        rd.regions.push_back(r);
        // zeros strictly between lastNonzero and the next nonzero are separators,
        // handled by the outer loop.
        k = lastNonzero + 1;
    }
    return rd;
}

/// The class-conserved summary: ordered region total spins.
inline std::vector<int> region_spins(const RegionDecomposition& rd) {
    std::vector<int> s;
    for (const auto& r : rd.regions) s.push_back(r.totalSpin);
    return s;
}

}  // namespace pvfrag
