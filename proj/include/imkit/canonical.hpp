#pragma once

#include <cmath>
#include <utility>

#include "imkit/linalg.hpp"

namespace imkit {

// |psi> = a|gamma1> + i b|gamma2> with real unit vectors gamma_i, a,b >= 0,
// a^2 + b^2 = 1. The split is taken after stripping the global phase that
// makes <psi*|psi> real and nonnegative, which also forces gamma1 _|_ gamma2.
struct gamma_decomposition {
    double a = 0.0;
    double b = 0.0;
    RealVector gamma1;
    RealVector gamma2;
    bool degenerate = false;  // b (or the pre-strip a) below the deg tolerance
};

// O psi = sqrt((1+|<psi*|psi>|)/2)|0> + i sqrt((1-|<psi*|psi>|)/2)|1>, up to
// the input's global phase (a real orthogonal O cannot absorb a phase).
struct canonical_pure_form {
    RealMatrix orthogonal;
    double overlap_mod = 0.0;
    pure_state canonical;
};

// <psi*|psi> = sum_j c_j^2
inline complex conjugate_overlap(const pure_state& psi) {
    complex s(0.0, 0.0);
    for (int j = 0; j < psi.dim(); ++j) {
        s += psi.amplitudes(j) * psi.amplitudes(j);
    }
    return s;
}

namespace detail {

// Lowest-index canonical basis vector orthogonalized against `u`.
inline RealVector fallback_orthogonal_vector(const RealVector& u) {
    const int d = static_cast<int>(u.size());
    for (int e = 0; e < d; ++e) {
        RealVector v = RealVector::Zero(d);
        v(e) = 1.0;
        v -= u.dot(v) * u;
        const double n = v.norm();
        if (n > 1e-4) return v / n;
    }
    throw domain_error("DegenerateGamma", "no orthogonal direction available");
}

// Multiplies psi by the phase making <psi*|psi> real and >= 0.
inline ComplexVector strip_overlap_phase(const pure_state& psi, complex overlap) {
    if (std::abs(overlap) == 0.0) return psi.amplitudes;
    const complex phase = std::exp(complex(0.0, -0.5 * std::arg(overlap)));
    return phase * psi.amplitudes;
}

}  // namespace detail

inline gamma_decomposition gamma_decompose(const pure_state& psi, const config& cfg = {}) {
    const complex overlap = conjugate_overlap(psi);
    ComplexVector v = detail::strip_overlap_phase(psi, overlap);

    gamma_decomposition g;
    RealVector re = v.real();
    RealVector im = v.imag();
    g.a = re.norm();  // a|gamma1> = (|psi> + |psi*>)/2 = Re psi
    g.b = im.norm();  // b|gamma2> = (|psi> - |psi*>)/(2i) = Im psi
    if (g.a > cfg.deg) {
        g.gamma1 = re / g.a;
    }
    if (g.b > cfg.deg) {
        g.gamma2 = im / g.b;
    }
    if (g.b <= cfg.deg) {
        // Real state: gamma2 is undefined, fall back to a deterministic
        // orthogonal direction.
        g.degenerate = true;
        g.b = 0.0;
        g.a = 1.0;
        if (g.gamma1.size() == 0) g.gamma1 = re.normalized();
        g.gamma2 = detail::fallback_orthogonal_vector(g.gamma1);
    } else if (g.a <= cfg.deg) {
        // Phase stripping makes a >= 1/sqrt(2); reachable only for inputs that
        // were not normalized to begin with.
        g.degenerate = true;
        g.a = 0.0;
        g.b = 1.0;
        g.gamma1 = detail::fallback_orthogonal_vector(g.gamma2);
    } else {
        // Phase stripping leaves only rounding-level overlap between the
        // gammas; project it out so downstream orthogonality is exact.
        g.gamma2 -= g.gamma1.dot(g.gamma2) * g.gamma1;
        g.gamma2.normalize();
    }
    return g;
}

inline canonical_pure_form canonical_form(const pure_state& psi, const config& cfg = {}) {
    const int d = psi.dim();
    if (d < 2) {
        throw domain_error("DimTooSmall", "canonical form needs dim >= 2");
    }
    gamma_decomposition g = gamma_decompose(psi, cfg);

    RealMatrix rows(2, d);
    rows.row(0) = g.gamma1.transpose();
    rows.row(1) = g.gamma2.transpose();

    canonical_pure_form form;
    form.orthogonal = complete_orthonormal_rows(rows, d);
    form.overlap_mod = std::min(std::abs(conjugate_overlap(psi)), 1.0);
    ComplexVector target = ComplexVector::Zero(d);
    target(0) = complex(std::sqrt(0.5 * (1.0 + form.overlap_mod)), 0.0);
    target(1) = complex(0.0, std::sqrt(0.5 * (1.0 - form.overlap_mod)));
    form.canonical = pure_state{target};
    return form;
}

}  // namespace imkit
