#pragma once

#include <random>
#include <vector>

#include "imkit/linalg.hpp"

namespace imkit {

// C_jk = <a_j|b_k> for the expansions |psi> = sum_j |j>|a_j>,
// |phi> = sum_j |j>|b_j>; orthogonality of the states forces tr C = 0.
struct correlation_data {
    int dim_a = 0;
    int dim_b = 0;
    RealMatrix entries;
    std::vector<RealVector> a;  // Alice-indexed Bob vectors of psi
    std::vector<RealVector> b;  // same for phi
};

// One Alice outcome: Bob's (unnormalized) conditional vectors and his
// two-outcome projective measurement. <a_tilde|b_tilde> = 0 by construction.
struct bob_branch {
    RealVector a_tilde;
    RealVector b_tilde;
    RealMatrix guess_psi;
    RealMatrix guess_phi;
};

struct discrimination_protocol {
    int dim_a = 0;
    int dim_b = 0;
    int padded_dim = 0;
    RealMatrix alice_rotation;  // padded_dim x padded_dim
    std::vector<bob_branch> branches;
};

enum class hypothesis { psi, phi };

inline correlation_data correlation_matrix(const pure_state& psi, const pure_state& phi,
                                           int dim_a, const config& cfg = {}) {
    const int total = psi.dim();
    if (phi.dim() != total || dim_a < 1 || total % dim_a != 0) {
        throw domain_error("BadFactorization",
                           "total dimension must factor as dim_a x dim_b");
    }
    const int dim_b = total / dim_a;
    if (dim_a > dim_b) {
        throw domain_error("BadFactorization", "expected dim_a <= dim_b");
    }
    const double imag_residual =
        std::max(psi.amplitudes.imag().cwiseAbs().maxCoeff(),
                 phi.amplitudes.imag().cwiseAbs().maxCoeff());
    if (imag_residual > cfg.real) {
        throw domain_error("NotReal",
                           "max imaginary residual " + std::to_string(imag_residual));
    }
    const double overlap = std::abs((psi.amplitudes.adjoint() * phi.amplitudes)(0, 0));
    if (overlap > cfg.fid) {
        throw domain_error("NotOrthogonal", "overlap " + std::to_string(overlap));
    }

    correlation_data c;
    c.dim_a = dim_a;
    c.dim_b = dim_b;
    c.entries.resize(dim_a, dim_a);
    for (int j = 0; j < dim_a; ++j) {
        c.a.push_back(psi.amplitudes.segment(j * dim_b, dim_b).real());
        c.b.push_back(phi.amplitudes.segment(j * dim_b, dim_b).real());
    }
    for (int j = 0; j < dim_a; ++j) {
        for (int k = 0; k < dim_a; ++k) {
            c.entries(j, k) = c.a[j].dot(c.b[k]);
        }
    }
    return c;
}

namespace detail {

inline int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

// Rotation on (i, j) making C_ii and C_jj equal; of the two solutions mod
// pi/2, the representative in [0, pi/2) is used.
inline void equalize_pair(RealMatrix& c, RealMatrix& o, int i, int j) {
    const double delta = c(i, i) - c(j, j);
    const double sigma = c(i, j) + c(j, i);
    double theta = 0.5 * std::atan2(delta, sigma);
    while (theta < 0.0) theta += M_PI / 2.0;
    while (theta >= M_PI / 2.0) theta -= M_PI / 2.0;
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    if (sn == 0.0) return;
    // rows of C and O, then columns of C: C <- G C G^T, O <- G O
    RealVector ri = c.row(i);
    RealVector rj = c.row(j);
    c.row(i) = cs * ri.transpose() - sn * rj.transpose();
    c.row(j) = sn * ri.transpose() + cs * rj.transpose();
    RealVector ci = c.col(i);
    RealVector cj = c.col(j);
    c.col(i) = cs * ci - sn * cj;
    c.col(j) = sn * ci + cs * cj;
    RealVector oi = o.row(i);
    RealVector oj = o.row(j);
    o.row(i) = cs * oi.transpose() - sn * oj.transpose();
    o.row(j) = sn * oi.transpose() + cs * oj.transpose();
}

}  // namespace detail

// Real orthogonal O on the 2^k padding of C with diag(O C O^T) = 0: pairwise
// equalization at stride 1, 2, 4, ... drives every diagonal entry to the
// (zero) mean.
inline RealMatrix zero_diagonal_rotation(const correlation_data& c) {
    const int p = detail::next_power_of_two(c.dim_a);
    RealMatrix work = RealMatrix::Zero(p, p);
    work.topLeftCorner(c.dim_a, c.dim_a) = c.entries;
    RealMatrix o = RealMatrix::Identity(p, p);
    for (int stride = 1; stride < p; stride *= 2) {
        for (int offset = 0; offset < p; offset += 2 * stride) {
            for (int i = 0; i < stride; ++i) {
                detail::equalize_pair(work, o, offset + i, offset + stride + i);
            }
        }
    }
    return o;
}

inline discrimination_protocol synthesize_protocol(const pure_state& psi,
                                                   const pure_state& phi, int dim_a,
                                                   const config& cfg = {}) {
    correlation_data c = correlation_matrix(psi, phi, dim_a, cfg);
    discrimination_protocol proto;
    proto.dim_a = c.dim_a;
    proto.dim_b = c.dim_b;
    proto.alice_rotation = zero_diagonal_rotation(c);
    proto.padded_dim = static_cast<int>(proto.alice_rotation.rows());

    for (int k = 0; k < proto.padded_dim; ++k) {
        bob_branch branch;
        branch.a_tilde = RealVector::Zero(c.dim_b);
        branch.b_tilde = RealVector::Zero(c.dim_b);
        for (int j = 0; j < c.dim_a; ++j) {
            branch.a_tilde += proto.alice_rotation(k, j) * c.a[j];
            branch.b_tilde += proto.alice_rotation(k, j) * c.b[j];
        }
        const double pa = branch.a_tilde.squaredNorm();
        const double pb = branch.b_tilde.squaredNorm();
        branch.guess_psi = RealMatrix::Zero(c.dim_b, c.dim_b);
        branch.guess_phi = RealMatrix::Zero(c.dim_b, c.dim_b);
        if (pa < cfg.p0 && pb < cfg.p0) {
            // dead branch, fires under neither hypothesis
        } else if (pa < cfg.p0) {
            branch.guess_phi = RealMatrix::Identity(c.dim_b, c.dim_b);
        } else if (pb < cfg.p0) {
            branch.guess_psi = RealMatrix::Identity(c.dim_b, c.dim_b);
        } else {
            RealVector ahat = branch.a_tilde / std::sqrt(pa);
            RealVector bhat = branch.b_tilde / std::sqrt(pb);
            // <ahat|bhat> is already zero to tau_diag; project the remainder
            // out so the measurement is exactly projective.
            bhat -= ahat.dot(bhat) * ahat;
            bhat.normalize();
            branch.guess_psi = ahat * ahat.transpose();
            branch.guess_phi = bhat * bhat.transpose();
        }
        proto.branches.push_back(std::move(branch));
    }
    return proto;
}

// trials = 0 computes the exact success probability by branch summation;
// otherwise Monte-Carlo sampling of Alice's and Bob's outcomes.
inline double simulate_protocol(const discrimination_protocol& proto, hypothesis which,
                                long trials, std::uint64_t seed = 0) {
    const bool under_psi = (which == hypothesis::psi);
    std::vector<double> branch_p;
    std::vector<double> branch_correct;
    double total_p = 0.0;
    for (const auto& branch : proto.branches) {
        const RealVector& v = under_psi ? branch.a_tilde : branch.b_tilde;
        const double p = v.squaredNorm();
        branch_p.push_back(p);
        total_p += p;
        if (p <= 0.0) {
            branch_correct.push_back(0.0);
            continue;
        }
        RealVector vhat = v / std::sqrt(p);
        const RealMatrix& correct = under_psi ? branch.guess_psi : branch.guess_phi;
        branch_correct.push_back(vhat.dot(correct * vhat));
    }

    if (trials == 0) {
        double success = 0.0;
        for (std::size_t k = 0; k < branch_p.size(); ++k) {
            success += branch_p[k] * branch_correct[k];
        }
        return success / total_p;  // zero-probability branches renormalize away
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    long correct_count = 0;
    for (long t = 0; t < trials; ++t) {
        double u = uniform(rng) * total_p;
        std::size_t k = 0;
        for (; k + 1 < branch_p.size(); ++k) {
            if (u < branch_p[k]) break;
            u -= branch_p[k];
        }
        if (uniform(rng) < branch_correct[k]) ++correct_count;
    }
    return static_cast<double>(correct_count) / static_cast<double>(trials);
}

}  // namespace imkit
