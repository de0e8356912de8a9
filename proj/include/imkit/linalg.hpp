#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "imkit/config.hpp"

namespace imkit {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Density matrix with the usual validity invariants (Hermitian, unit trace,
// PSD). Construct through validate_state unless validity is guaranteed by the
// producing operation.
struct quantum_state {
    ComplexMatrix rho;

    int dim() const { return static_cast<int>(rho.rows()); }
};

// Unit-norm complex amplitude vector.
struct pure_state {
    ComplexVector amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }

    quantum_state to_density() const {
        return quantum_state{amplitudes * amplitudes.adjoint()};
    }
};

struct bloch_vector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm2() const { return x * x + y * y + z * z; }
};

// Result of block-diagonalizing a real antisymmetric matrix A:
//   orthogonal * A * orthogonal^T = blkdiag(lambda_1*J, ..., lambda_r*J, 0)
// with J = [[0,1],[-1,0]], lambdas sorted descending and the zero block
// trailing. (The trailing-zero convention keeps the lambda blocks aligned
// with the index pairs (2m, 2m+1) consumed downstream.)
struct antisym_block_form {
    RealMatrix orthogonal;
    std::vector<double> lambdas;
    int zero_block_size = 0;
};

inline const complex imag_unit{0.0, 1.0};

// |+^> = (|0> + i|1>)/sqrt(2), the maximally imaginary state.
inline pure_state plus_i_state() {
    ComplexVector v(2);
    v << complex(1.0 / std::sqrt(2.0), 0.0), complex(0.0, 1.0 / std::sqrt(2.0));
    return pure_state{v};
}

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const RealMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_imag(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.imag().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Validation

inline quantum_state validate_state(const ComplexMatrix& m, const config& cfg = {}) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw domain_error("NonSquare", "density matrix must be square, got " +
                                            std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()));
    }
    const double herm_residual = max_abs(ComplexMatrix(m - m.adjoint()));
    if (herm_residual > cfg.herm) {
        throw domain_error("NotHermitian",
                           "hermiticity residual " + std::to_string(herm_residual));
    }
    const double tr_residual = std::abs(m.trace() - complex(1.0, 0.0));
    if (tr_residual > cfg.tr) {
        throw domain_error("NotUnitTrace",
                           "trace residual " + std::to_string(tr_residual));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -cfg.psd) {
        throw domain_error("NotPositive",
                           "minimum eigenvalue " + std::to_string(min_eig));
    }
    return quantum_state{m};
}

inline pure_state validate_pure(const ComplexVector& v, const config& cfg = {}) {
    if (v.size() < 1) {
        throw domain_error("NotNormalized", "empty amplitude vector");
    }
    const double n = v.norm();
    if (std::abs(n - 1.0) > cfg.norm) {
        throw domain_error("NotNormalized", "norm " + std::to_string(n));
    }
    return pure_state{v};
}

inline bloch_vector validate_bloch(double x, double y, double z, const config& cfg = {}) {
    const double n2 = x * x + y * y + z * z;
    if (n2 > 1.0 + cfg.bloch) {
        throw domain_error("InvalidBloch",
                           "Bloch norm^2 " + std::to_string(n2) + " exceeds 1");
    }
    return bloch_vector{x, y, z};
}

// rho = (I + r . sigma)/2
inline quantum_state state_from_bloch(const bloch_vector& r) {
    ComplexMatrix rho(2, 2);
    rho(0, 0) = complex(0.5 * (1.0 + r.z), 0.0);
    rho(1, 1) = complex(0.5 * (1.0 - r.z), 0.0);
    rho(0, 1) = complex(0.5 * r.x, -0.5 * r.y);
    rho(1, 0) = complex(0.5 * r.x, 0.5 * r.y);
    return quantum_state{rho};
}

inline bloch_vector bloch_from_state(const quantum_state& rho) {
    if (rho.dim() != 2) {
        throw domain_error("DimMismatch", "Bloch coordinates need a qubit state");
    }
    return bloch_vector{2.0 * rho.rho(0, 1).real(), 2.0 * rho.rho(1, 0).imag(),
                        rho.rho(0, 0).real() - rho.rho(1, 1).real()};
}

// ---------------------------------------------------------------------------
// Real/imaginary split and the trace norm

// rho = Re(rho) + i Im(rho) with Re(rho) = (rho + rho^T)/2 real symmetric and
// Im(rho) = (rho - rho^T)/(2i) real antisymmetric.
inline std::pair<RealMatrix, RealMatrix> real_imag_split(const quantum_state& rho) {
    return {rho.rho.real(), rho.rho.imag()};
}

// Sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw domain_error("NonSquare", "trace norm defined here for square input");
    }
    if (m.rows() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
}

inline double trace_norm(const RealMatrix& m) {
    return trace_norm(ComplexMatrix(m.cast<complex>()));
}

// ---------------------------------------------------------------------------
// Orthonormal completion helper

// Extends `rows` (orthonormal k x d) to a full d x d real orthogonal matrix by
// Gram-Schmidt over canonical basis vectors, lowest index first. Two
// projection passes keep the result orthogonal to ~1e-15.
inline RealMatrix complete_orthonormal_rows(const RealMatrix& rows, int dim) {
    RealMatrix out(dim, dim);
    int k = static_cast<int>(rows.rows());
    out.topRows(k) = rows;
    for (int e = 0; e < dim && k < dim; ++e) {
        RealVector v = RealVector::Zero(dim);
        v(e) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < k; ++i) {
                v -= out.row(i).dot(v) * out.row(i).transpose();
            }
        }
        const double n = v.norm();
        if (n > 1e-4) {
            out.row(k++) = v.transpose() / n;
        }
    }
    if (k != dim) {
        throw domain_error("NotOrthogonal", "failed to complete orthonormal basis");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Antisymmetric block-diagonalization

// Diagonalizes the Hermitian matrix iA; eigenpairs (+lambda, v = x + iy) give
// real 2-planes on which A acts as lambda*J. Rows are ordered so that
// O A O^T = blkdiag(lambda_1*J, ..., lambda_r*J, 0_{d-2r}) with lambdas
// descending.
inline antisym_block_form antisym_block_diagonalize(const RealMatrix& a,
                                                    const config& cfg = {}) {
    if (a.rows() != a.cols()) {
        throw domain_error("NotAntisymmetric", "input must be square");
    }
    const int d = static_cast<int>(a.rows());
    const double asym_residual = max_abs(RealMatrix(a + a.transpose()));
    if (asym_residual > cfg.antisym) {
        throw domain_error("NotAntisymmetric",
                           "antisymmetry residual " + std::to_string(asym_residual));
    }

    ComplexMatrix h = imag_unit * a.cast<complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) {
        throw domain_error("NotAntisymmetric", "eigendecomposition failed");
    }

    constexpr double zero_threshold = 1e-10;
    struct pair_entry {
        double lambda;
        int idx;
    };
    std::vector<pair_entry> pairs;
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) > zero_threshold) {
            pairs.push_back({es.eigenvalues()(i), i});
        }
    }
    // Eigenvalues come sorted ascending; reverse for descending lambdas, ties
    // keeping eigensolver order.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const pair_entry& l, const pair_entry& r) {
                         return l.lambda > r.lambda;
                     });

    antisym_block_form form;
    RealMatrix rows(2 * static_cast<int>(pairs.size()), d);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        ComplexVector v = es.eigenvectors().col(pairs[k].idx);
        RealVector x = std::sqrt(2.0) * v.real();
        RealVector y = std::sqrt(2.0) * v.imag();
        // A x = lambda y, A y = -lambda x; rows (y, x) produce the block
        // [[0, lambda], [-lambda, 0]].
        rows.row(2 * static_cast<int>(k)) = y.transpose();
        rows.row(2 * static_cast<int>(k) + 1) = x.transpose();
        form.lambdas.push_back(pairs[k].lambda);
    }
    form.zero_block_size = d - 2 * static_cast<int>(pairs.size());
    form.orthogonal = complete_orthonormal_rows(rows, d);
    return form;
}

// Canonical block matrix described by an antisym_block_form.
inline RealMatrix antisym_block_matrix(const antisym_block_form& form) {
    const int d = static_cast<int>(form.orthogonal.rows());
    RealMatrix b = RealMatrix::Zero(d, d);
    for (std::size_t k = 0; k < form.lambdas.size(); ++k) {
        const int i = 2 * static_cast<int>(k);
        b(i, i + 1) = form.lambdas[k];
        b(i + 1, i) = -form.lambdas[k];
    }
    return b;
}

// ---------------------------------------------------------------------------
// Fidelity

// F(rho, sigma) = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
inline double fidelity(const quantum_state& rho, const quantum_state& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw domain_error("DimMismatch",
                           "fidelity needs equal dimensions, got " +
                               std::to_string(rho.dim()) + " vs " +
                               std::to_string(sigma.dim()));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.rho);
    RealVector ev = es.eigenvalues().cwiseMax(0.0);
    ComplexMatrix sqrt_rho = es.eigenvectors() *
                             ev.cwiseSqrt().asDiagonal().toDenseMatrix().cast<complex>() *
                             es.eigenvectors().adjoint();
    ComplexMatrix inner = sqrt_rho * sigma.rho * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(inner, Eigen::EigenvaluesOnly);
    double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(root_sum * root_sum, 1.0);
}

// ---------------------------------------------------------------------------
// Random sampling (deterministic under a fixed seed)

inline ComplexVector sample_complex_gaussian(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = complex(re, im);
    }
    return v;
}

inline pure_state random_pure(int dim, std::uint64_t seed) {
    if (dim < 1) throw domain_error("DimTooSmall", "dim must be >= 1");
    std::mt19937_64 rng(seed);
    ComplexVector v = sample_complex_gaussian(dim, rng);
    return pure_state{v / v.norm()};
}

// Ginibre-induced mixed state G G^dag / tr, full rank with probability 1.
inline quantum_state random_state(int dim, std::uint64_t seed) {
    if (dim < 1) throw domain_error("DimTooSmall", "dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = complex(re, im);
        }
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return quantum_state{rho};
}

// Haar over O(d): QR of a real Ginibre matrix with the R-diagonal sign fix.
inline RealMatrix random_orthogonal(int dim, std::uint64_t seed) {
    if (dim < 1) throw domain_error("DimTooSmall", "dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            g(i, j) = gauss(rng);
        }
    }
    Eigen::HouseholderQR<RealMatrix> qr(g);
    RealMatrix q = qr.householderQ();
    RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return q;
}

}  // namespace imkit
