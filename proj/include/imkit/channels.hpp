#pragma once

#include <string>
#include <vector>

#include "imkit/linalg.hpp"

namespace imkit {

// Real operation given by an ordered, possibly incomplete set of real Kraus
// operators (dim_out x dim_in), sum_j K_j^T K_j <= I.
struct real_kraus_set {
    int dim_in = 0;
    int dim_out = 0;
    std::vector<RealMatrix> kraus;
};

// Complex counterpart, same contracts minus the reality invariant.
struct general_kraus_set {
    int dim_in = 0;
    int dim_out = 0;
    std::vector<ComplexMatrix> kraus;
};

struct channel_outcome {
    int index = 0;
    double probability = 0.0;
    quantum_state post_state;
};

namespace detail {

template <typename Set>
void check_shapes(const Set& k) {
    if (k.kraus.empty()) {
        throw domain_error("Incomplete", "empty Kraus set");
    }
    for (const auto& op : k.kraus) {
        if (op.rows() != k.dim_out || op.cols() != k.dim_in) {
            throw domain_error("DimMismatch", "Kraus operator shape mismatch");
        }
    }
}

inline RealMatrix completeness_sum(const real_kraus_set& k) {
    RealMatrix s = RealMatrix::Zero(k.dim_in, k.dim_in);
    for (const auto& op : k.kraus) s += op.transpose() * op;
    return s;
}

inline ComplexMatrix completeness_sum(const general_kraus_set& k) {
    ComplexMatrix s = ComplexMatrix::Zero(k.dim_in, k.dim_in);
    for (const auto& op : k.kraus) s += op.adjoint() * op;
    return s;
}

}  // namespace detail

inline general_kraus_set validate_general(const general_kraus_set& k, bool complete,
                                          const config& cfg = {}) {
    detail::check_shapes(k);
    ComplexMatrix s = detail::completeness_sum(k);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() > 1.0 + cfg.psd) {
        throw domain_error("Overcomplete",
                           "sum K^dag K has eigenvalue " +
                               std::to_string(es.eigenvalues().maxCoeff()));
    }
    if (complete) {
        const double residual =
            max_abs(ComplexMatrix(s - ComplexMatrix::Identity(k.dim_in, k.dim_in)));
        if (residual > cfg.recon) {
            throw domain_error("Incomplete",
                               "completeness residual " + std::to_string(residual));
        }
    }
    return k;
}

// Checks reality and the operator inequality; with `complete` also demands
// sum K^T K = I.
inline real_kraus_set validate_real(const general_kraus_set& k, bool complete,
                                    const config& cfg = {}) {
    detail::check_shapes(k);
    double imag_residual = 0.0;
    for (const auto& op : k.kraus) imag_residual = std::max(imag_residual, max_imag(op));
    if (imag_residual > cfg.real) {
        throw domain_error("NotReal",
                           "max imaginary residual " + std::to_string(imag_residual));
    }
    validate_general(k, complete, cfg);
    real_kraus_set out{k.dim_in, k.dim_out, {}};
    for (const auto& op : k.kraus) out.kraus.push_back(op.real());
    return out;
}

inline real_kraus_set validate_real(const real_kraus_set& k, bool complete,
                                    const config& cfg = {}) {
    general_kraus_set g{k.dim_in, k.dim_out, {}};
    for (const auto& op : k.kraus) g.kraus.push_back(op.cast<complex>());
    return validate_real(g, complete, cfg);
}

// Appends L0 = sqrt(I - sum_j K_j^T K_j), real symmetric PSD. Already-complete
// sets are returned unchanged (no zero operator appended).
inline real_kraus_set complete_set(const real_kraus_set& k, const config& cfg = {}) {
    detail::check_shapes(k);
    RealMatrix gap = RealMatrix::Identity(k.dim_in, k.dim_in) - detail::completeness_sum(k);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gap);
    if (es.eigenvalues().minCoeff() < -cfg.psd) {
        throw domain_error("Overcomplete",
                           "sum K^T K exceeds identity by " +
                               std::to_string(-es.eigenvalues().minCoeff()));
    }
    if (max_abs(gap) <= cfg.recon) {
        return k;
    }
    if (k.dim_out != k.dim_in) {
        throw domain_error("DimMismatch",
                           "completion of rectangular Kraus sets is not supported");
    }
    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    RealMatrix l0 = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                    es.eigenvectors().transpose();
    real_kraus_set out = k;
    out.kraus.push_back(l0);
    return out;
}

namespace detail {

template <typename Set>
ComplexMatrix apply_sum(const Set& k, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(k.dim_out, k.dim_out);
    for (const auto& op : k.kraus) {
        ComplexMatrix c = op.template cast<complex>();
        out += c * rho * c.adjoint();
    }
    return out;
}

}  // namespace detail

// Deterministic application Lambda[rho] = sum_j K_j rho K_j^T; requires a
// complete set.
inline quantum_state apply(const real_kraus_set& k, const quantum_state& rho,
                           const config& cfg = {}) {
    detail::check_shapes(k);
    if (rho.dim() != k.dim_in) {
        throw domain_error("DimMismatch", "state dim " + std::to_string(rho.dim()) +
                                              " vs channel input dim " +
                                              std::to_string(k.dim_in));
    }
    RealMatrix s = detail::completeness_sum(k);
    if (max_abs(RealMatrix(s - RealMatrix::Identity(k.dim_in, k.dim_in))) > cfg.recon) {
        throw domain_error("Incomplete", "Kraus set is not trace preserving");
    }
    return quantum_state{detail::apply_sum(k, rho.rho)};
}

inline quantum_state apply(const general_kraus_set& k, const quantum_state& rho,
                           const config& cfg = {}) {
    detail::check_shapes(k);
    if (rho.dim() != k.dim_in) {
        throw domain_error("DimMismatch", "state dim vs channel input dim");
    }
    ComplexMatrix s = detail::completeness_sum(k);
    if (max_abs(ComplexMatrix(s - ComplexMatrix::Identity(k.dim_in, k.dim_in))) > cfg.recon) {
        throw domain_error("Incomplete", "Kraus set is not trace preserving");
    }
    return quantum_state{detail::apply_sum(k, rho.rho)};
}

// Selective application: outcome j fires with p_j = tr[K_j rho K_j^T].
// Outcomes below the pruning threshold are omitted.
template <typename Set>
std::vector<channel_outcome> apply_outcomes(const Set& k, const quantum_state& rho,
                                            const config& cfg = {}) {
    detail::check_shapes(k);
    if (rho.dim() != k.dim_in) {
        throw domain_error("DimMismatch", "state dim vs channel input dim");
    }
    std::vector<channel_outcome> outcomes;
    for (std::size_t j = 0; j < k.kraus.size(); ++j) {
        ComplexMatrix op = k.kraus[j].template cast<complex>();
        ComplexMatrix post = op * rho.rho * op.adjoint();
        const double p = post.trace().real();
        if (p < cfg.p0) continue;
        outcomes.push_back({static_cast<int>(j), p, quantum_state{post / p}});
    }
    return outcomes;
}

// ---------------------------------------------------------------------------
// Random channels (test-harness sampling)

// n_kraus real Ginibre factors normalized to a trace-preserving set.
inline real_kraus_set random_real_channel(int dim, int n_kraus, std::uint64_t seed) {
    if (dim < 1 || n_kraus < 1) {
        throw domain_error("DimTooSmall", "need dim >= 1 and n_kraus >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<RealMatrix> g(n_kraus);
    RealMatrix s = RealMatrix::Zero(dim, dim);
    for (auto& m : g) {
        m.resize(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
        }
        s += m.transpose() * m;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
    RealMatrix inv_sqrt = es.eigenvectors() *
                          es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().transpose();
    real_kraus_set out{dim, dim, {}};
    for (const auto& m : g) out.kraus.push_back(m * inv_sqrt);
    return out;
}

inline general_kraus_set random_general_channel(int dim, int n_kraus, std::uint64_t seed) {
    if (dim < 1 || n_kraus < 1) {
        throw domain_error("DimTooSmall", "need dim >= 1 and n_kraus >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<ComplexMatrix> g(n_kraus);
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (auto& m : g) {
        m.resize(dim, dim);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                m(i, j) = complex(re, im);
            }
        }
        s += m.adjoint() * m;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
    ComplexMatrix inv_sqrt = es.eigenvectors() *
                             es.eigenvalues()
                                 .cwiseMax(1e-300)
                                 .cwiseSqrt()
                                 .cwiseInverse()
                                 .asDiagonal()
                                 .toDenseMatrix()
                                 .cast<complex>() *
                             es.eigenvectors().adjoint();
    general_kraus_set out{dim, dim, {}};
    for (const auto& m : g) out.kraus.push_back(m * inv_sqrt);
    return out;
}

}  // namespace imkit
