// Spin-F product-state representation, ranking and symmetry-sector enumeration.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pvfrag {

using Rank = std::uint64_t;

// Dipole moment uses site weight w(k) = k with 0-based sites. For spin-0
// sectors this coincides with the 1-based convention, so all reference
// sector dimensions are convention independent; the tag is embedded in
// every emitted manifest regardless.
inline constexpr const char* kDipoleConvention = "dipole-weight=k,0-based";

/// A length-L word of spin values in [-F, F].
struct SpinConfig {
    int F = 1;
    std::vector<int> values;

    int size() const { return static_cast<int>(values.size()); }
    bool operator==(const SpinConfig& o) const { return F == o.F && values == o.values; }
    bool operator!=(const SpinConfig& o) const { return !(*this == o); }
};

inline bool valid(const SpinConfig& c) {
    if (c.F < 1 || c.values.empty()) return false;
    return std::all_of(c.values.begin(), c.values.end(),
                       [&](int v) { return v >= -c.F && v <= c.F; });
}

inline void require_valid(const SpinConfig& c) {
    if (!valid(c)) throw std::invalid_argument("invalid SpinConfig");
}

/// Mixed-radix index in base 2F+1; site 0 is the least significant digit.
inline Rank rank(const SpinConfig& c) {
    const Rank base = 2 * static_cast<Rank>(c.F) + 1;
    Rank r = 0;
    for (int k = c.size() - 1; k >= 0; --k)
        r = r * base + static_cast<Rank>(c.values[k] + c.F);
    return r;
}

inline SpinConfig unrank(Rank r, int L, int F) {
    const Rank base = 2 * static_cast<Rank>(F) + 1;
    SpinConfig c{F, std::vector<int>(L)};
    for (int k = 0; k < L; ++k) {
        c.values[k] = static_cast<int>(r % base) - F;
        r /= base;
    }
    return c;
}

inline int total_spin(const SpinConfig& c) {
    int s = 0;
    for (int v : c.values) s += v;
    return s;
}

/// P = sum_k w(k) F_k^z with w(k) = k, 0-based (see kDipoleConvention).
inline long long dipole(const SpinConfig& c) {
    long long p = 0;
    for (int k = 0; k < c.size(); ++k) p += static_cast<long long>(k) * c.values[k];
    return p;
}

struct SectorKey {
    int L = 1;
    int F = 1;
    int totalSpin = 0;
    std::optional<long long> dipole;

    bool operator==(const SectorKey& o) const {
        return L == o.L && F == o.F && totalSpin == o.totalSpin && dipole == o.dipole;
    }
};

// "-1,0,1,0" <-> SpinConfig (whitespace tolerated).
inline SpinConfig parse_config(const std::string& text, int F) {
    SpinConfig c{F, {}};
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        size_t a = tok.find_first_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty field in config string");
        size_t b = tok.find_last_not_of(" \t");
        c.values.push_back(std::stoi(tok.substr(a, b - a + 1)));
    }
    require_valid(c);
    return c;
}

inline std::string format_config(const SpinConfig& c) {
    std::string s;
    for (int k = 0; k < c.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(c.values[k]);
    }
    return s;
}

namespace detail {

// Depth-first generation, most significant site first, so output is rank-sorted.
inline void scan_sector(const SectorKey& key, const std::vector<int>& alphabet,
                        std::vector<int>& partial, long long spinLeft, long long dipoleLeft,
                        std::vector<SpinConfig>& out) {
    const int site = key.L - 1 - static_cast<int>(partial.size());
    if (site < 0) {
        if (spinLeft == 0 && (!key.dipole || dipoleLeft == 0)) {
            SpinConfig c{key.F, std::vector<int>(partial.rbegin(), partial.rend())};
            out.push_back(std::move(c));
        }
        return;
    }
    // After choosing this site, sites 0..site-1 remain (weights 0..site-1).
    const long long m = site;
    for (int v : alphabet) {
        const long long s = spinLeft - v;
        if (std::abs(s) > m * key.F) continue;
        long long d = 0;
        if (key.dipole) {
            d = dipoleLeft - static_cast<long long>(site) * v;
            if (std::abs(d) > key.F * (m * (m - 1)) / 2) continue;
        }
        partial.push_back(v);
        scan_sector(key, alphabet, partial, s, d, out);
        partial.pop_back();
    }
}

}  // namespace detail

inline std::vector<int> full_alphabet(int F) {
    std::vector<int> a;
    for (int v = -F; v <= F; ++v) a.push_back(v);
    return a;
}

/// All configurations in the sector, sorted by rank. Empty if unattainable.
inline std::vector<SpinConfig> enumerate_sector(const SectorKey& key,
                                                const std::vector<int>& alphabet) {
    if (key.L < 1 || key.F < 1) throw std::invalid_argument("bad SectorKey");
    std::vector<SpinConfig> out;
    std::vector<int> partial;
    partial.reserve(key.L);
    detail::scan_sector(key, alphabet, partial, key.totalSpin, key.dipole.value_or(0), out);
    return out;
}

inline std::vector<SpinConfig> enumerate_sector(const SectorKey& key) {
    return enumerate_sector(key, full_alphabet(key.F));
}

/// Meet-in-the-middle enumeration: joins half-chain residual (spin, dipole)
/// tables. Same output contract as enumerate_sector; used for large L.
inline std::vector<SpinConfig> enumerate_sector_mitm(const SectorKey& key) {
    const int Lhi = key.L / 2;            // high (most significant) sites
    const int Llo = key.L - Lhi;          // low sites 0..Llo-1
    SectorKey any{Llo, key.F, 0, std::nullopt};

    struct Residual {
        long long spin, dip;
        bool operator==(const Residual& o) const { return spin == o.spin && dip == o.dip; }
    };
    struct ResidualHash {
        size_t operator()(const Residual& r) const {
            return std::hash<long long>()(r.spin * 1000003LL + r.dip);
        }
    };

    // Low halves grouped by (spin, dipole with low-site weights), rank-sorted
    // within each group by construction.
    std::unordered_map<Residual, std::vector<std::vector<int>>, ResidualHash> lows;
    {
        const Rank base = 2 * static_cast<Rank>(key.F) + 1;
        Rank total = 1;
        for (int i = 0; i < Llo; ++i) total *= base;
        for (Rank r = 0; r < total; ++r) {
            SpinConfig c = unrank(r, Llo, key.F);
            lows[{total_spin(c), dipole(c)}].push_back(c.values);
        }
        (void)any;
    }

    std::vector<SpinConfig> out;
    // High halves in rank order (they are the significant digits).
    const Rank base = 2 * static_cast<Rank>(key.F) + 1;
    Rank hiTotal = 1;
    for (int i = 0; i < Lhi; ++i) hiTotal *= base;
    for (Rank r = 0; r < hiTotal; ++r) {
        SpinConfig hi = unrank(r, Lhi, key.F);
        long long hiSpin = total_spin(hi);
        long long hiDip = 0;
        for (int k = 0; k < Lhi; ++k)
            hiDip += static_cast<long long>(Llo + k) * hi.values[k];
        long long needSpin = key.totalSpin - hiSpin;
        if (!key.dipole) {
            // join on spin only: collect every dipole bucket with that spin
            for (auto& [res, group] : lows) {
                if (res.spin != needSpin) continue;
                for (auto& lo : group) {
                    SpinConfig c{key.F, lo};
                    c.values.insert(c.values.end(), hi.values.begin(), hi.values.end());
                    out.push_back(std::move(c));
                }
            }
        } else {
            auto it = lows.find({needSpin, *key.dipole - hiDip});
            if (it == lows.end()) continue;
            for (auto& lo : it->second) {
                SpinConfig c{key.F, lo};
                c.values.insert(c.values.end(), hi.values.begin(), hi.values.end());
                out.push_back(std::move(c));
            }
        }
    }
    if (!key.dipole) {
        std::sort(out.begin(), out.end(),
                  [](const SpinConfig& a, const SpinConfig& b) { return rank(a) < rank(b); });
    }
    return out;
}

/// Sector dimension without materializing the basis (DP over sites).
inline std::uint64_t count_sector(const SectorKey& key) {
    // Shift both quantum numbers to non-negative offsets before packing.
    const long long sOff = static_cast<long long>(key.L) * key.F;
    const long long dOff = static_cast<long long>(key.F) * key.L * (key.L - 1) / 2;
    const long long dSpan = 2 * dOff + 1;
    auto pack = [&](long long s, long long d) { return (s + sOff) * dSpan + (d + dOff); };
    std::unordered_map<long long, std::uint64_t> cur;
    cur[pack(0, 0)] = 1;
    for (int k = 0; k < key.L; ++k) {
        std::unordered_map<long long, std::uint64_t> next;
        next.reserve(cur.size() * (2 * key.F + 1));
        for (auto& [pk, n] : cur) {
            const long long s = pk / dSpan - sOff;
            const long long d = pk % dSpan - dOff;
            for (int v = -key.F; v <= key.F; ++v)
                next[pack(s + v, d + static_cast<long long>(k) * v)] += n;
        }
        cur = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto& [pk, n] : cur) {
        const long long s = pk / dSpan - sOff;
        const long long d = pk % dSpan - dOff;
        if (s == key.totalSpin && (!key.dipole || d == *key.dipole)) total += n;
    }
    return total;
}

}  // namespace pvfrag
