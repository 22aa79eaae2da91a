// Krylov-class decomposition by connectivity, fragmentation metrics and
// projection of models onto the core subspace.

#pragma once

#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "pvfrag/duality.hpp"
#include "pvfrag/models.hpp"
#include "pvfrag/spinchain.hpp"

namespace pvfrag {

/// Connectivity classes of one symmetry sector. Class ids are the minimal
/// member rank, so partitions are reproducible across runs and schedules.
struct KrylovPartition {
    SectorKey sector;
    std::vector<Rank> basisRanks;        // sorted; basis index -> rank
    std::vector<std::uint32_t> classOf;  // basis index -> index of class id
    std::vector<Rank> classIds;          // sorted minimal member ranks
    std::vector<std::uint64_t> classSizes;  // parallel to classIds

    std::uint64_t dimension() const { return basisRanks.size(); }
};

struct FragmentationMetrics {
    std::uint64_t r = 0;       // number of classes
    double Sf = 0.0;           // entropy of fragmentation, in [0, 1]
    double DmaxOverDt = 0.0;
    std::uint64_t Dt = 0;
};

namespace detail {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Merge keeping the smaller index as root (canonical labeling).
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
    }
};

inline size_t basis_index(const std::vector<Rank>& ranks, Rank r) {
    auto it = std::lower_bound(ranks.begin(), ranks.end(), r);
    if (it == ranks.end() || *it != r) return ranks.size();
    return static_cast<size_t>(it - ranks.begin());
}

}  // namespace detail

inline KrylovPartition partition_basis(const SectorKey& sector,
                                       const std::vector<SpinConfig>& basis,
                                       const ModelSpec& model) {
    KrylovPartition part;
    part.sector = sector;
    part.basisRanks.reserve(basis.size());
    for (const auto& c : basis) part.basisRanks.push_back(rank(c));

    detail::UnionFind uf(basis.size());
    for (size_t n = 0; n < basis.size(); ++n) {
        const SpinConfig& c = basis[n];
        for (const auto& op : model.operators) {
            for (int pos = 0; pos + op.q <= c.size(); ++pos) {
                for (const auto& t : op.transitions) {
                    auto next = try_apply(c, t, pos);
                    if (!next) continue;
                    size_t m = detail::basis_index(part.basisRanks, rank(*next));
                    if (m == basis.size())
                        throw std::logic_error("transition leaves the sector basis");
                    uf.unite(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m));
                }
            }
        }
    }

    // Relabel roots to dense class indices; roots are minimal members already.
    std::unordered_map<std::uint32_t, std::uint32_t> rootToClass;
    part.classOf.resize(basis.size());
    for (std::uint32_t n = 0; n < basis.size(); ++n) {
        std::uint32_t root = uf.find(n);
        auto [it, inserted] = rootToClass.try_emplace(root, static_cast<std::uint32_t>(part.classIds.size()));
        if (inserted) {
            part.classIds.push_back(part.basisRanks[root]);
            part.classSizes.push_back(0);
        }
        part.classOf[n] = it->second;
        ++part.classSizes[it->second];
    }
    return part;
}

/// Union-find decomposition of a full symmetry sector. Coefficients never
/// affect the result; only transition presence does. Throws if the model
/// does not conserve a requested sector label.
inline KrylovPartition decompose(const ModelSpec& model, const SectorKey& sector) {
    if (model.F != sector.F) throw std::invalid_argument("model/sector spin mismatch");
    if (sector.dipole && !conserves_dipole(model))
        throw std::invalid_argument("model does not conserve dipole; sector key invalid");
    const double fullDim = std::pow(2.0 * sector.F + 1.0, sector.L);
    auto basis = fullDim > 1e8 ? enumerate_sector_mitm(sector)
                               : enumerate_sector(sector, model.alphabet);
    return partition_basis(sector, basis, model);
}

/// BFS closure of one initial state under the model's transitions,
/// returned sorted by rank together with its dimension.
inline std::pair<std::vector<SpinConfig>, std::uint64_t> class_of(const ModelSpec& model,
                                                                  const SpinConfig& initial) {
    require_valid(initial);
    std::unordered_set<Rank> seen{rank(initial)};
    std::queue<SpinConfig> frontier;
    frontier.push(initial);
    std::vector<SpinConfig> members{initial};
    while (!frontier.empty()) {
        SpinConfig c = frontier.front();
        frontier.pop();
        for (const auto& op : model.operators)
            for (int pos = 0; pos + op.q <= c.size(); ++pos)
                for (const auto& t : op.transitions) {
                    auto next = try_apply(c, t, pos);
                    if (!next) continue;
                    if (seen.insert(rank(*next)).second) {
                        members.push_back(*next);
                        frontier.push(*next);
                    }
                }
    }
    std::sort(members.begin(), members.end(),
              [](const SpinConfig& a, const SpinConfig& b) { return rank(a) < rank(b); });
    return {members, members.size()};
}

/// S_f = -sum p_i ln p_i / ln r (0 when r = 1), D_max and D_t.
inline FragmentationMetrics metrics(const KrylovPartition& part) {
    if (part.classSizes.empty()) throw std::invalid_argument("empty partition");
    FragmentationMetrics f;
    f.r = part.classSizes.size();
    f.Dt = part.dimension();
    std::uint64_t dmax = 0;
    double h = 0.0;
    for (std::uint64_t d : part.classSizes) {
        dmax = std::max(dmax, d);
        const double p = static_cast<double>(d) / static_cast<double>(f.Dt);
        h -= p * std::log(p);
    }
    f.DmaxOverDt = static_cast<double>(dmax) / static_cast<double>(f.Dt);
    f.Sf = f.r == 1 ? 0.0 : h / std::log(static_cast<double>(f.r));
    return f;
}

// ---------------------------------------------------------------------------
// Projection onto the core subspace

/// Induced transition on the charge alphabet (doubled values).
struct ChargeTransition {
    std::vector<int> in, out;
    bool operator==(const ChargeTransition& o) const { return in == o.in && out == o.out; }
    bool operator<(const ChargeTransition& o) const {
        return std::tie(in, out) < std::tie(o.in, o.out);
    }
};

struct CoreViolation {
    Transition transition;
    SpinConfig witness;  // core state mapped outside the core
    int position;
};

struct CoreProjection {
    bool protectsCore = true;
    std::vector<CoreViolation> violations;
    std::vector<ChargeTransition> induced;  // minimal-context rules, deduplicated
};

namespace detail {

// Drop context columns shared by every rule as long as the shrunk set
// regenerates exactly the original one under all charge extensions.
inline void minimize_context(std::vector<ChargeTransition>& rules, int F) {
    std::vector<int> chargeValues;
    for (int v = -F; v <= F; v += 2) chargeValues.push_back(v);
    auto contains = [&](const std::vector<ChargeTransition>& set, const ChargeTransition& r) {
        return std::binary_search(set.begin(), set.end(), r);
    };
    bool shrunk = true;
    while (shrunk && !rules.empty() && rules.front().in.size() > 1) {
        shrunk = false;
        for (int side : {0, 1}) {  // 0 = left column, 1 = right column
            bool unchanged = std::all_of(rules.begin(), rules.end(), [&](const ChargeTransition& r) {
                return side == 0 ? r.in.front() == r.out.front() : r.in.back() == r.out.back();
            });
            if (!unchanged) continue;
            std::vector<ChargeTransition> truncated;
            for (const auto& r : rules) {
                ChargeTransition t = r;
                if (side == 0) {
                    t.in.erase(t.in.begin());
                    t.out.erase(t.out.begin());
                } else {
                    t.in.pop_back();
                    t.out.pop_back();
                }
                truncated.push_back(t);
            }
            std::sort(truncated.begin(), truncated.end());
            truncated.erase(std::unique(truncated.begin(), truncated.end()), truncated.end());
            // No over-generation: every extension of a truncated rule must be
            // an original rule.
            bool exact = true;
            for (const auto& t : truncated) {
                for (int x : chargeValues) {
                    ChargeTransition ext = t;
                    if (side == 0) {
                        ext.in.insert(ext.in.begin(), x);
                        ext.out.insert(ext.out.begin(), x);
                    } else {
                        ext.in.push_back(x);
                        ext.out.push_back(x);
                    }
                    if (!contains(rules, ext)) {
                        exact = false;
                        break;
                    }
                }
                if (!exact) break;
            }
            if (exact) {
                rules = std::move(truncated);
                shrunk = true;
                break;
            }
        }
    }
}

}  // namespace detail

/// Restrict the model to the length-L core basis, flag transitions that map
/// core states outside the core, and extract the induced charge-alphabet
/// transitions with the smallest context that reproduces them exactly.
inline CoreProjection project_to_core(const ModelSpec& model, int L) {
    CoreProjection result;
    auto basis = core_basis(L, model.F);
    std::vector<ChargeTransition> rules;
    for (const auto& c : basis) {
        for (const auto& op : model.operators) {
            for (int pos = 0; pos + op.q <= L; ++pos) {
                for (const auto& t : op.transitions) {
                    auto next = try_apply(c, t, pos);
                    if (!next) continue;
                    if (!core_membership(*next)) {
                        result.protectsCore = false;
                        bool known = std::any_of(
                            result.violations.begin(), result.violations.end(),
                            [&](const CoreViolation& v) { return v.transition == t; });
                        if (!known) result.violations.push_back({t, c, pos});
                        continue;
                    }
                    // Interior placements only: the window maps one-to-one onto
                    // the charge substring [pos-1, pos+q-1].
                    if (pos == 0 || pos + op.q >= L) continue;
                    auto cin = to_charge_string(c);
                    auto cout = to_charge_string(*next);
                    ChargeTransition r;
                    r.in.assign(cin.begin() + pos - 1, cin.begin() + pos + op.q);
                    r.out.assign(cout.begin() + pos - 1, cout.begin() + pos + op.q);
                    if (r.in != r.out) rules.push_back(r);
                }
            }
        }
    }
    if (!result.protectsCore) return result;
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    detail::minimize_context(rules, model.F);
    result.induced = std::move(rules);
    return result;
}

// ---------------------------------------------------------------------------

struct TableRow {
    std::string model;
    int N = 0;
    FragmentationMetrics m;
};

/// One metrics row per (model, N): the Table-I style finite-size scan.
inline std::vector<TableRow> finite_size_table(const std::vector<ModelSpec>& models,
                                               const std::vector<int>& Ls, int totalSpin,
                                               std::optional<long long> dipole) {
    std::vector<TableRow> rows;
    for (const auto& model : models)
        for (int L : Ls) {
            SectorKey key{L, model.F, totalSpin, dipole};
            rows.push_back({model.name, L, metrics(decompose(model, key))});
        }
    return rows;
}

}  // namespace pvfrag
