// Exact unitary evolution inside one Krylov class and the entanglement /
// charge observables.

#pragma once

#include <complex>
#include <map>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "pvfrag/duality.hpp"
#include "pvfrag/models.hpp"

namespace pvfrag {

using Complex = std::complex<double>;

/// Real symmetric Hamiltonian of one Krylov class in its rank-sorted basis.
struct SectorHamiltonian {
    std::vector<SpinConfig> basis;
    Eigen::MatrixXd matrix;
};

inline constexpr std::size_t kExactEvolveLimit = 4000;
inline constexpr std::size_t kHardDimensionCap = 100000;

/// H(m, n) = sum over (window, transition) applications taking basis[n] to
/// basis[m] of siteCoefficient * transition coefficient. Rejects a basis not
/// closed under the model's transitions.
inline SectorHamiltonian assemble(const ModelSpec& model,
                                  std::vector<SpinConfig> classBasis) {
    std::sort(classBasis.begin(), classBasis.end(),
              [](const SpinConfig& a, const SpinConfig& b) { return rank(a) < rank(b); });
    std::vector<Rank> ranks;
    ranks.reserve(classBasis.size());
    for (const auto& c : classBasis) ranks.push_back(rank(c));

    const auto D = static_cast<Eigen::Index>(classBasis.size());
    SectorHamiltonian h{std::move(classBasis), Eigen::MatrixXd::Zero(D, D)};
    for (Eigen::Index n = 0; n < D; ++n) {
        for (const auto& op : model.operators) {
            for (int pos = 0; pos + op.q <= h.basis[n].size(); ++pos) {
                const double alpha = pos < static_cast<int>(model.siteCoefficients.size())
                                         ? model.siteCoefficients[pos]
                                         : 1.0;
                for (const auto& t : op.transitions) {
                    auto next = try_apply(h.basis[n], t, pos);
                    if (!next) continue;
                    auto it = std::lower_bound(ranks.begin(), ranks.end(), rank(*next));
                    if (it == ranks.end() || *it != rank(*next))
                        throw std::invalid_argument("class basis not closed under transitions");
                    h.matrix(it - ranks.begin(), n) += alpha * t.coeff;
                }
            }
        }
    }
    return h;
}

struct EvolutionResult {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> amplitudes;  // one vector per time
};

namespace detail {

/// One Lanczos step of exp(-i H dt) v for large classes; m is the Krylov
/// dimension actually built (breakdown-aware).
inline Eigen::VectorXcd lanczos_expmv(const Eigen::MatrixXd& H, const Eigen::VectorXcd& v,
                                      double dt, int mMax, double tol) {
    const double beta0 = v.norm();
    if (beta0 == 0.0) return v;
    const int m = std::min<int>(mMax, static_cast<int>(H.rows()));
    Eigen::MatrixXcd V(H.rows(), m);
    Eigen::VectorXd a(m), b(m);  // diagonal / subdiagonal
    V.col(0) = v / beta0;
    int k = 0;
    for (; k < m; ++k) {
        Eigen::VectorXcd w = H * V.col(k);
        if (k > 0) w -= b(k - 1) * V.col(k - 1);
        a(k) = std::real(V.col(k).dot(w));
        w -= a(k) * V.col(k);
        // full reorthogonalization; class dimensions are modest
        for (int j = 0; j <= k; ++j) w -= V.col(j).dot(w) * V.col(j);
        const double nb = w.norm();
        if (k + 1 == m || nb < tol) {
            ++k;
            break;
        }
        b(k) = nb;
        V.col(k + 1) = w / nb;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        T(i, i) = a(i);
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = b(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXcd phases(k);
    for (int i = 0; i < k; ++i) phases(i) = std::exp(Complex(0, -dt * es.eigenvalues()(i)));
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(k);
    e1(0) = beta0;
    Eigen::VectorXcd y = es.eigenvectors() * phases.asDiagonal() *
                         (es.eigenvectors().transpose() * e1.real()).cast<Complex>();
    // e1 is real; recombine with the complex coefficients of v in V
    return V.leftCols(k) * y;
}

}  // namespace detail

/// e^{-iHt} psi0 on a time grid. Dimensions up to kExactEvolveLimit use a
/// full eigendecomposition and phase rotation; larger classes use a Lanczos
/// propagator stepped between grid points (local tolerance 1e-8). Refuses
/// dimensions above kHardDimensionCap.
inline EvolutionResult evolve(const SectorHamiltonian& h, const Eigen::VectorXcd& psi0,
                              const std::vector<double>& times) {
    const auto D = static_cast<std::size_t>(h.matrix.rows());
    if (D > kHardDimensionCap)
        throw std::invalid_argument(
            "class dimension " + std::to_string(D) + " exceeds the solver cap (" +
            std::to_string(kHardDimensionCap) + "); restrict to a smaller Krylov class");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("initial state must be normalized");

    EvolutionResult res;
    res.times = times;
    res.amplitudes.reserve(times.size());
    if (D <= kExactEvolveLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
        const Eigen::VectorXcd c0 = es.eigenvectors().transpose() * psi0;
        for (double t : times) {
            Eigen::VectorXcd phased(c0.size());
            for (Eigen::Index i = 0; i < c0.size(); ++i)
                phased(i) = c0(i) * std::exp(Complex(0, -t * es.eigenvalues()(i)));
            res.amplitudes.push_back(es.eigenvectors() * phased);
        }
    } else {
        // sequential stepping; substep so that ||H|| dt stays moderate
        const double hnorm = h.matrix.cwiseAbs().rowwise().sum().maxCoeff();
        Eigen::VectorXcd psi = psi0;
        double now = 0.0;
        for (double t : times) {
            double remaining = t - now;
            const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(remaining) * hnorm / 10.0)));
            for (int s = 0; s < steps; ++s)
                psi = detail::lanczos_expmv(h.matrix, psi, remaining / steps, 60, 1e-8);
            psi /= psi.norm();
            now = t;
            res.amplitudes.push_back(psi);
        }
    }
    return res;
}

/// Von Neumann entropy of the left block after `cut` sites (1 <= cut <= L-1),
/// via singular values of the class-restricted amplitude matrix.
inline double entanglement_entropy(const Eigen::VectorXcd& state,
                                   const std::vector<SpinConfig>& classBasis, int cut) {
    const int L = classBasis.at(0).size();
    if (cut < 1 || cut > L - 1) throw std::invalid_argument("cut out of range");
    std::map<std::vector<int>, int> leftIdx, rightIdx;
    std::vector<std::pair<int, int>> coords(classBasis.size());
    for (size_t m = 0; m < classBasis.size(); ++m) {
        std::vector<int> left(classBasis[m].values.begin(), classBasis[m].values.begin() + cut);
        std::vector<int> right(classBasis[m].values.begin() + cut, classBasis[m].values.end());
        coords[m] = {
            leftIdx.try_emplace(std::move(left), static_cast<int>(leftIdx.size())).first->second,
            rightIdx.try_emplace(std::move(right), static_cast<int>(rightIdx.size())).first->second};
    }
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(leftIdx.size(), rightIdx.size());
    for (size_t m = 0; m < classBasis.size(); ++m)
        M(coords[m].first, coords[m].second) = state(static_cast<Eigen::Index>(m));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    double s = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double w = svd.singularValues()(i) * svd.singularValues()(i);
        if (w > 1e-14) s -= w * std::log(w);
    }
    return s;
}

/// <n~_{k+1/2}> for k = 0..L-1: the amplitude-weighted average of the
/// members' integer paths; need not be integer.
inline std::vector<double> charge_profile(const Eigen::VectorXcd& state,
                                          const std::vector<SpinConfig>& classBasis) {
    const int L = classBasis.at(0).size();
    std::vector<double> profile(L, 0.0);
    for (size_t m = 0; m < classBasis.size(); ++m) {
        const double w = std::norm(state(static_cast<Eigen::Index>(m)));
        auto path = to_path(classBasis[m]);
        for (int k = 0; k < L; ++k) profile[k] += w * path.heights[k + 1];
    }
    return profile;
}

/// Sufficient condition for an entanglement plateau across `site`: all class
/// members agree there, or any two members that differ there also differ on
/// both sides.
inline bool plateau_predicate(const std::vector<SpinConfig>& classBasis, int site) {
    const int L = classBasis.at(0).size();
    if (site < 0 || site >= L) throw std::invalid_argument("site out of range");
    for (size_t a = 0; a < classBasis.size(); ++a)
        for (size_t b = a + 1; b < classBasis.size(); ++b) {
            if (classBasis[a].values[site] == classBasis[b].values[site]) continue;
            const auto& va = classBasis[a].values;
            const auto& vb = classBasis[b].values;
            const bool leftEqual = std::equal(va.begin(), va.begin() + site, vb.begin());
            const bool rightEqual = std::equal(va.begin() + site + 1, va.end(),
                                               vb.begin() + site + 1);
            if (leftEqual || rightEqual) return false;
        }
    return true;
}

}  // namespace pvfrag
