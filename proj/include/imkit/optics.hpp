#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imkit/linalg.hpp"

namespace imkit {

struct two_level_rotation {
    int i = 0;
    int j = 0;
    double angle = 0.0;  // normalized to (-pi, pi]
};

// Ordered product of two-level rotations (left to right) reconstructing the
// source matrix; an improper input (det = -1) leaves a single recorded axis
// reflection that no rotation product can absorb.
struct rotation_plan {
    int dim = 0;
    std::vector<two_level_rotation> rotations;
    std::optional<int> reflection_axis;

    int count() const { return static_cast<int>(rotations.size()); }
};

enum class improper_policy { absorb, reject };

struct cost_report {
    std::int64_t general_count = 0;
    std::int64_t real_count = 0;
    double ratio = 0.0;
};

struct dilation_cost_report {
    std::int64_t dilation_dim = 0;
    std::int64_t general_count = 0;
    std::int64_t real_count = 0;
    double ratio = 0.0;
};

// Column-by-column Givens elimination below the diagonal on adjacent index
// pairs, bottom up. Residual diagonal signs are paired into pi-rotations.
inline rotation_plan decompose_orthogonal(const RealMatrix& o,
                                          improper_policy policy = improper_policy::absorb,
                                          const config& cfg = {}) {
    if (o.rows() != o.cols() || o.rows() < 1) {
        throw domain_error("NotOrthogonal", "input must be square");
    }
    const int d = static_cast<int>(o.rows());
    const double residual =
        max_abs(RealMatrix(o.transpose() * o - RealMatrix::Identity(d, d)));
    if (residual > cfg.orth) {
        throw domain_error("NotOrthogonal",
                           "orthogonality residual " + std::to_string(residual));
    }

    rotation_plan plan;
    plan.dim = d;
    RealMatrix work = o;
    for (int col = 0; col < d - 1; ++col) {
        for (int row = d - 1; row > col; --row) {
            const double x = work(row - 1, col);
            const double y = work(row, col);
            if (y == 0.0) continue;
            const double r = std::hypot(x, y);
            const double c = x / r;
            const double s = y / r;
            RealVector top = work.row(row - 1);
            RealVector bot = work.row(row);
            work.row(row - 1) = c * top.transpose() + s * bot.transpose();
            work.row(row) = -s * top.transpose() + c * bot.transpose();
            plan.rotations.push_back({row - 1, row, std::atan2(s, c)});
        }
    }

    std::vector<int> flips;
    for (int i = 0; i < d; ++i) {
        if (work(i, i) < 0.0) flips.push_back(i);
    }
    std::size_t t = 0;
    for (; t + 1 < flips.size(); t += 2) {
        plan.rotations.push_back({flips[t], flips[t + 1], M_PI});
    }
    if (t < flips.size()) {
        if (policy == improper_policy::reject) {
            throw domain_error("ImproperRotation", "input has determinant -1");
        }
        plan.reflection_axis = flips[t];
    }
    return plan;
}

inline RealMatrix compose_rotation_plan(const rotation_plan& plan) {
    RealMatrix m = RealMatrix::Identity(plan.dim, plan.dim);
    for (const auto& rot : plan.rotations) {
        const double c = std::cos(rot.angle);
        const double s = std::sin(rot.angle);
        RealVector ci = m.col(rot.i);
        RealVector cj = m.col(rot.j);
        m.col(rot.i) = c * ci + s * cj;
        m.col(rot.j) = -s * ci + c * cj;
    }
    if (plan.reflection_axis) {
        m.col(*plan.reflection_axis) *= -1.0;
    }
    return m;
}

// Single-qubit measurement with n outcomes: 8n-5 unset wave plates in
// general, 4n-3 when all Kraus operators are real.
inline cost_report measurement_cost(int n_outcomes) {
    if (n_outcomes < 2) {
        throw domain_error("TooFewOutcomes", "measurement needs >= 2 outcomes");
    }
    cost_report report;
    report.general_count = 8ll * n_outcomes - 5;
    report.real_count = 4ll * n_outcomes - 3;
    report.ratio = static_cast<double>(report.real_count) / report.general_count;
    return report;
}

// Dilation of a d-dimensional operation acts on dimension d^3: d^6 - 1 unset
// wave plates for a unitary dilation, (d^6 - d^3)/2 for a real orthogonal one.
inline dilation_cost_report dilation_cost(int d) {
    if (d < 2) {
        throw domain_error("OutOfRange", "dilation cost needs d >= 2");
    }
    const std::int64_t d3 = static_cast<std::int64_t>(d) * d * d;
    dilation_cost_report report;
    report.dilation_dim = d3;
    report.general_count = d3 * d3 - 1;
    report.real_count = (d3 * d3 - d3) / 2;
    report.ratio = static_cast<double>(report.real_count) / report.general_count;
    return report;
}

// m x m unitary in path encoding: m^2 - 1 real parameters.
inline std::int64_t unitary_param_count(int m) {
    if (m < 1) {
        throw domain_error("OutOfRange", "unitary parameter count needs m >= 1");
    }
    return static_cast<std::int64_t>(m) * m - 1;
}

}  // namespace imkit
