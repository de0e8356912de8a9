#pragma once

#include <cmath>
#include <vector>

#include "imkit/canonical.hpp"
#include "imkit/channels.hpp"
#include "imkit/linalg.hpp"

namespace imkit {

// Two-outcome protocol realizing the optimal pure-state conversion: rotate
// the input to canonical form, apply {K0, K1} on the 2-dimensional canonical
// support, rotate into the target frame. kraus_success alone reproduces the
// target; for deterministic conversions the fail branch does too.
struct pure_conversion_plan {
    double probability = 0.0;
    RealMatrix pre_rotation;       // dim_psi x dim_psi
    RealMatrix kraus_success;      // 2x2
    RealMatrix kraus_fail;         // 2x2
    RealMatrix post_rotation;      // dim_phi x dim_phi
};

struct qubit_region_sample {
    double target_sy = 0.0;
    double target_sz = 0.0;
    bool accessible = false;
};

struct distill_result {
    quantum_state output;
    double achieved = 0.0;
};

// P(|psi> -> |phi>) = min{ (1-|<psi*|psi>|)/(1-|<phi*|phi>|), 1 }; a real
// target (denominator 0) is free.
inline double pure_conversion_probability(const pure_state& psi, const pure_state& phi,
                                          const config& cfg = {}) {
    const double num = 1.0 - std::min(std::abs(conjugate_overlap(psi)), 1.0);
    const double den = 1.0 - std::min(std::abs(conjugate_overlap(phi)), 1.0);
    if (den <= cfg.deg) return 1.0;
    return std::min(num / den, 1.0);
}

namespace detail {

// Lemma-2 boundary pair in the y-axis convention, for a y-z initial state
// with z-coordinate rz: K1 = diag(a1, b1), K2 = [[0, -b2], [a2, 0]] with
// nu = arctan(rz tan theta), evaluated as atan2(rz sin theta, cos theta).
inline std::pair<RealMatrix, RealMatrix> boundary_kraus(double rz, double theta) {
    const double nu = std::atan2(rz * std::sin(theta), std::cos(theta));
    const double a1 = std::cos(0.5 * (theta - nu));
    const double a2 = std::sin(0.5 * (theta - nu));
    const double b1 = std::sin(0.5 * (theta + nu));
    const double b2 = std::cos(0.5 * (theta + nu));
    RealMatrix k1 = RealMatrix::Zero(2, 2);
    k1(0, 0) = a1;
    k1(1, 1) = b1;
    RealMatrix k2 = RealMatrix::Zero(2, 2);
    k2(0, 1) = -b2;
    k2(1, 0) = a2;
    return {k1, k2};
}

}  // namespace detail

inline pure_conversion_plan plan_pure_conversion(const pure_state& psi,
                                                 const pure_state& phi,
                                                 const config& cfg = {}) {
    if (psi.dim() < 2 || phi.dim() < 2) {
        throw domain_error("DimTooSmall", "conversion plans need dim >= 2");
    }
    canonical_pure_form src = canonical_form(psi, cfg);
    canonical_pure_form dst = canonical_form(phi, cfg);
    const double ov_psi = src.overlap_mod;
    const double ov_phi = dst.overlap_mod;

    pure_conversion_plan plan;
    plan.probability = pure_conversion_probability(psi, phi, cfg);
    plan.pre_rotation = src.orthogonal;
    plan.post_rotation = dst.orthogonal.transpose();

    if (ov_psi >= ov_phi) {
        // Stochastic branch: K0 = diag(a, 1) filters the |0> amplitude down
        // to the target ratio, K1 collects the failures.
        const double den = 1.0 - ov_phi;
        double a = 1.0;
        if (den > cfg.deg) {
            a = std::sqrt(((1.0 - ov_psi) / den) * ((1.0 + ov_phi) / (1.0 + ov_psi)));
        }
        a = std::min(a, 1.0);
        plan.kraus_success = RealMatrix::Zero(2, 2);
        plan.kraus_success(0, 0) = a;
        plan.kraus_success(1, 1) = 1.0;
        plan.kraus_fail = RealMatrix::Zero(2, 2);
        plan.kraus_fail(0, 0) = std::sqrt(std::max(0.0, 1.0 - a * a));
    } else {
        // Deterministic branch: the boundary pair at the theta whose output
        // z-coordinate equals the target overlap. Both outcomes land on the
        // (pure) target, so the conversion succeeds with probability 1.
        const double cos2 = (ov_phi * ov_phi - ov_psi * ov_psi) /
                            (1.0 - ov_psi * ov_psi);
        const double theta = std::acos(std::sqrt(std::min(std::max(cos2, 0.0), 1.0)));
        auto [k1, k2] = detail::boundary_kraus(ov_psi, theta);
        plan.kraus_success = k1;
        plan.kraus_fail = k2;
    }
    return plan;
}

// Full-dimension Kraus pair implementing the plan: dim_phi x dim_psi
// operators, incomplete when dim_psi > 2 (the remainder never fires on the
// canonical support).
inline real_kraus_set plan_to_kraus(const pure_conversion_plan& plan) {
    const int d_in = static_cast<int>(plan.pre_rotation.rows());
    const int d_out = static_cast<int>(plan.post_rotation.rows());
    RealMatrix project = RealMatrix::Zero(2, d_in);
    project(0, 0) = 1.0;
    project(1, 1) = 1.0;
    RealMatrix embed = RealMatrix::Zero(d_out, 2);
    embed(0, 0) = 1.0;
    embed(1, 1) = 1.0;
    real_kraus_set set{d_in, d_out, {}};
    set.kraus.push_back(plan.post_rotation * embed * plan.kraus_success * project *
                        plan.pre_rotation);
    set.kraus.push_back(plan.post_rotation * embed * plan.kraus_fail * project *
                        plan.pre_rotation);
    return set;
}

// ---------------------------------------------------------------------------
// Deterministic qubit conversion (accessibility of Bloch vector s from r)

//   s_y^2 <= r_y^2   and   (1 - s_z^2 - s_x^2)/s_y^2 >= (1 - r_z^2 - r_x^2)/r_y^2
// evaluated in cross-multiplied form; s_y = 0 makes the second condition
// vacuous (real targets are free).
inline bool qubit_deterministic_convertible(const bloch_vector& r, const bloch_vector& s,
                                            double slack = 1e-12) {
    if (s.y * s.y > r.y * r.y + slack) return false;
    const double lhs = (1.0 - s.z * s.z - s.x * s.x) * (r.y * r.y);
    const double rhs = (1.0 - r.z * r.z - r.x * r.x) * (s.y * s.y);
    return lhs + slack >= rhs;
}

// Inclusive grid over [-1,1]^2 in (s_y, s_z); out-of-disc samples are
// inaccessible by definition.
inline std::vector<qubit_region_sample> qubit_accessible_region(const bloch_vector& r,
                                                                int grid_n) {
    if (grid_n < 2) {
        throw domain_error("OutOfRange", "grid_n must be >= 2");
    }
    std::vector<qubit_region_sample> samples;
    samples.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    for (int iy = 0; iy < grid_n; ++iy) {
        const double sy = -1.0 + 2.0 * iy / (grid_n - 1);
        for (int iz = 0; iz < grid_n; ++iz) {
            const double sz = -1.0 + 2.0 * iz / (grid_n - 1);
            bool acc = false;
            if (sy * sy + sz * sz <= 1.0) {
                acc = qubit_deterministic_convertible(r, bloch_vector{0.0, sy, sz});
            }
            samples.push_back({sy, sz, acc});
        }
    }
    return samples;
}

// Boundary channel for a y-z plane initial state: sweeps the upper edge of
// the accessible region as theta runs over [0, pi/2], saturating the second
// Theorem-2 inequality.
inline real_kraus_set yz_boundary_channel(const bloch_vector& r, double theta,
                                          const config& cfg = {}) {
    if (std::abs(r.x) > cfg.bloch) {
        throw domain_error("OutOfPlane", "initial state must lie in the y-z plane");
    }
    if (theta < 0.0 || theta > M_PI / 2.0 + 1e-12) {
        throw domain_error("OutOfRange", "theta must lie in [0, pi/2]");
    }
    auto [k1, k2] = detail::boundary_kraus(r.z, theta);
    return real_kraus_set{2, 2, {k1, k2}};
}

// (1-p) rho + p Y rho Y^T with the real rotation Y = [[0,-1],[1,0]]: shrinks
// z by (1-2p) while preserving s_y.
inline real_kraus_set qubit_mixing_channel(double p) {
    if (p < 0.0 || p > 0.5) {
        throw domain_error("OutOfRange", "mixing weight must lie in [0, 1/2]");
    }
    RealMatrix k1 = std::sqrt(1.0 - p) * RealMatrix::Identity(2, 2);
    RealMatrix k2 = RealMatrix::Zero(2, 2);
    k2(0, 1) = -std::sqrt(p);
    k2(1, 0) = std::sqrt(p);
    return real_kraus_set{2, 2, {k1, k2}};
}

// ---------------------------------------------------------------------------
// Approximate imaginarity distillation (optimal fidelity with |+^>)

// K_m = |1><2m| + |0><2m+1| for m < floor(d/2), plus |0><d-1| when d is odd.
inline real_kraus_set distillation_channel(int dim) {
    if (dim < 2) {
        throw domain_error("DimTooSmall", "distillation channel needs dim >= 2");
    }
    real_kraus_set set{dim, 2, {}};
    for (int m = 0; m < dim / 2; ++m) {
        RealMatrix k = RealMatrix::Zero(2, dim);
        k(1, 2 * m) = 1.0;
        k(0, 2 * m + 1) = 1.0;
        set.kraus.push_back(k);
    }
    if (dim % 2 == 1) {
        RealMatrix k = RealMatrix::Zero(2, dim);
        k(0, dim - 1) = 1.0;
        set.kraus.push_back(k);
    }
    return set;
}

// Rotates Im(rho) into block form and funnels the lambda blocks onto the
// qubit: achieves <+^|out|+^> = (1 + I_R(rho))/2.
inline distill_result distill(const quantum_state& rho, const config& cfg = {}) {
    quantum_state work = rho;
    if (work.dim() == 1) {
        ComplexMatrix padded = ComplexMatrix::Zero(2, 2);
        padded(0, 0) = work.rho(0, 0);
        work = quantum_state{padded};
    }
    const int d = work.dim();
    auto [re_part, im_part] = real_imag_split(work);
    antisym_block_form form = antisym_block_diagonalize(im_part, cfg);
    ComplexMatrix o = form.orthogonal.cast<complex>();
    quantum_state rotated{o * work.rho * o.transpose()};
    quantum_state out = apply(distillation_channel(d), rotated, cfg);
    ComplexVector plus = plus_i_state().amplitudes;
    const double achieved = (plus.adjoint() * out.rho * plus)(0, 0).real();
    return {out, achieved};
}

}  // namespace imkit
