#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "imkit/canonical.hpp"
#include "imkit/channels.hpp"
#include "imkit/linalg.hpp"

namespace imkit {

// I_g(|psi>) = (1 - |<psi*|psi>|)/2, in [0, 1/2].
inline double geometric_imaginarity_pure(const pure_state& psi) {
    return 0.5 * (1.0 - std::min(std::abs(conjugate_overlap(psi)), 1.0));
}

// I_R(rho) = (1/2) ||rho - rho^T||_1
inline double robustness(const quantum_state& rho) {
    ComplexMatrix diff = rho.rho - rho.rho.transpose();
    return 0.5 * trace_norm(diff);
}

// F_I(rho) = (1 + I_R(rho))/2
inline double fidelity_of_imaginarity(const quantum_state& rho) {
    return 0.5 * (1.0 + robustness(rho));
}

// Imaginarity quantifiers for one state. `geometric` is present only for pure
// inputs; no convex-roof evaluation is attempted for mixed states.
struct measure_report {
    std::optional<double> geometric;
    double robustness = 0.0;
    double fidelity_of_imaginarity = 0.5;
};

inline measure_report measure_state(const quantum_state& rho, const config& cfg = {}) {
    measure_report rep;
    rep.robustness = robustness(rho);
    rep.fidelity_of_imaginarity = 0.5 * (1.0 + rep.robustness);
    const double purity = (rho.rho * rho.rho).trace().real();
    if (purity >= 1.0 - cfg.fid) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.rho);
        ComplexVector psi = es.eigenvectors().col(rho.dim() - 1);
        rep.geometric = geometric_imaginarity_pure(pure_state{psi.normalized()});
    }
    return rep;
}

enum class measure_selector { robustness, geometric_pure };

namespace detail {

inline pure_state dominant_eigenvector(const quantum_state& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.rho);
    ComplexVector psi = es.eigenvectors().col(rho.dim() - 1);
    return pure_state{psi.normalized()};
}

inline bool is_pure(const quantum_state& rho, const config& cfg) {
    return (rho.rho * rho.rho).trace().real() >= 1.0 - cfg.fid;
}

}  // namespace detail

// P(rho -> sigma) <= min{ R(rho)/R(sigma), 1 }; a free target gives 1.
inline double conversion_probability_bound(const quantum_state& rho,
                                           const quantum_state& sigma,
                                           measure_selector measure,
                                           const config& cfg = {}) {
    double num = 0.0;
    double den = 0.0;
    switch (measure) {
        case measure_selector::robustness:
            num = robustness(rho);
            den = robustness(sigma);
            break;
        case measure_selector::geometric_pure:
            if (!detail::is_pure(rho, cfg) || !detail::is_pure(sigma, cfg)) {
                throw domain_error("GeometricRequiresPure",
                                   "geometric selector needs pure inputs");
            }
            num = geometric_imaginarity_pure(detail::dominant_eigenvector(rho));
            den = geometric_imaginarity_pure(detail::dominant_eigenvector(sigma));
            break;
    }
    if (den <= cfg.p0) return 1.0;
    return std::min(num / den, 1.0);
}

// I_R(p rho1 (+) (1-p) rho2) vs p I_R(rho1) + (1-p) I_R(rho2); the two agree
// by direct-sum additivity.
inline std::pair<double, double> direct_sum_robustness_check(const quantum_state& rho1,
                                                             const quantum_state& rho2,
                                                             double p) {
    const int d1 = rho1.dim();
    const int d2 = rho2.dim();
    ComplexMatrix block = ComplexMatrix::Zero(d1 + d2, d1 + d2);
    block.topLeftCorner(d1, d1) = p * rho1.rho;
    block.bottomRightCorner(d2, d2) = (1.0 - p) * rho2.rho;
    const double lhs = robustness(quantum_state{block});
    const double rhs = p * robustness(rho1) + (1.0 - p) * robustness(rho2);
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Channel discrimination advantage

struct ensemble_entry {
    double probability = 0.0;
    general_kraus_set channel;
};

struct advantage_ratio {
    double value = 0.0;
    bool denominator_zero = false;  // value is meaningless when set
};

// Uniform polar grid over the real-qubit Bloch disc (x-z plane).
inline std::vector<quantum_state> real_qubit_grid(int n_radial = 200, int n_angle = 200) {
    std::vector<quantum_state> grid;
    grid.reserve(static_cast<std::size_t>(n_radial) * n_angle);
    for (int i = 0; i < n_radial; ++i) {
        const double r = (n_radial == 1) ? 1.0 : static_cast<double>(i) / (n_radial - 1);
        for (int j = 0; j < n_angle; ++j) {
            const double theta = 2.0 * M_PI * j / n_angle;
            grid.push_back(state_from_bloch({r * std::sin(theta), 0.0, r * std::cos(theta)}));
        }
    }
    return grid;
}

// p_succ(rho) / max over the grid of p_succ(sigma) for the instance
// ({p_j, Lambda_j}, {M_j}). Stays below 1 + I_R(rho) since the grid states
// are free.
inline advantage_ratio discrimination_advantage_ratio(
    const quantum_state& rho, const std::vector<ensemble_entry>& ensemble,
    const std::vector<ComplexMatrix>& povm,
    const std::vector<quantum_state>& free_state_grid, const config& cfg = {}) {
    if (ensemble.empty() || povm.size() != ensemble.size()) {
        throw domain_error("InvalidEnsemble",
                           "ensemble and POVM must be nonempty and equally sized");
    }
    const int d = rho.dim();
    double psum = 0.0;
    for (const auto& e : ensemble) {
        if (e.probability < -cfg.tr) {
            throw domain_error("InvalidEnsemble", "negative probability");
        }
        psum += e.probability;
        validate_general(e.channel, true, cfg);
        if (e.channel.dim_in != d) {
            throw domain_error("DimMismatch", "channel input dim vs state dim");
        }
    }
    if (std::abs(psum - 1.0) > cfg.tr) {
        throw domain_error("InvalidEnsemble",
                           "probabilities sum to " + std::to_string(psum));
    }
    ComplexMatrix povm_sum = ComplexMatrix::Zero(d, d);
    for (const auto& m : povm) {
        if (m.rows() != d || m.cols() != d) {
            throw domain_error("InvalidPOVM", "POVM element dimension mismatch");
        }
        if (max_abs(ComplexMatrix(m - m.adjoint())) > cfg.herm) {
            throw domain_error("InvalidPOVM", "POVM element not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -cfg.psd) {
            throw domain_error("InvalidPOVM", "POVM element not PSD");
        }
        povm_sum += m;
    }
    if (max_abs(ComplexMatrix(povm_sum - ComplexMatrix::Identity(d, d))) > cfg.recon) {
        throw domain_error("InvalidPOVM", "POVM does not sum to identity");
    }

    // p_succ(sigma) = tr[W sigma] with W = sum_j p_j Lambda_j^dag(M_j).
    ComplexMatrix w = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
        for (const auto& op : ensemble[j].channel.kraus) {
            w += ensemble[j].probability * op.adjoint() * povm[j] * op;
        }
    }

    const double num = (w * rho.rho).trace().real();
    double den = -std::numeric_limits<double>::infinity();
    for (const auto& sigma : free_state_grid) {
        den = std::max(den, (w * sigma.rho).trace().real());
    }
    if (!(den > cfg.p0)) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {num / den, false};
}

}  // namespace imkit
