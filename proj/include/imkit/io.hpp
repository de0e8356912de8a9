#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "imkit/channels.hpp"
#include "imkit/conversion.hpp"
#include "imkit/discrimination.hpp"
#include "imkit/linalg.hpp"
#include "imkit/measures.hpp"
#include "imkit/optics.hpp"

namespace imkit {

using json = nlohmann::json;

// Matrices serialize as {"dim": d, "re": [[..]], "im": [[..]]} (square) or
// with explicit "rows"/"cols"; vectors use flat arrays. "im" may be omitted
// on input for real data.

inline json matrix_to_json(const ComplexMatrix& m) {
    json j;
    if (m.rows() == m.cols()) {
        j["dim"] = m.rows();
    } else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline json matrix_to_json(const RealMatrix& m) {
    return matrix_to_json(ComplexMatrix(m.cast<complex>()));
}

inline ComplexMatrix json_to_matrix(const json& j) {
    if (!j.contains("re") || !j["re"].is_array() || j["re"].empty() ||
        !j["re"][0].is_array()) {
        throw domain_error("InvalidInput", "matrix JSON needs a nested 're' array");
    }
    const auto& re = j["re"];
    const Eigen::Index rows = j.contains("rows") ? j["rows"].get<Eigen::Index>()
                             : j.contains("dim") ? j["dim"].get<Eigen::Index>()
                                                 : static_cast<Eigen::Index>(re.size());
    const Eigen::Index cols = j.contains("cols") ? j["cols"].get<Eigen::Index>() : rows;
    if (static_cast<Eigen::Index>(re.size()) != rows) {
        throw domain_error("InvalidInput", "matrix 're' row count mismatch");
    }
    const bool has_im = j.contains("im");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(re[r].size()) != cols) {
            throw domain_error("InvalidInput", "matrix 're' column count mismatch");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double rv = re[r][c].get<double>();
            const double iv = has_im ? j["im"][r][c].get<double>() : 0.0;
            m(r, c) = complex(rv, iv);
        }
    }
    return m;
}

inline json vector_to_json(const ComplexVector& v) {
    json j;
    j["dim"] = v.size();
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

inline json vector_to_json(const RealVector& v) {
    return vector_to_json(ComplexVector(v.cast<complex>()));
}

inline ComplexVector json_to_vector(const json& j) {
    if (!j.contains("re") || !j["re"].is_array() || (!j["re"].empty() && j["re"][0].is_array())) {
        throw domain_error("InvalidInput", "vector JSON needs a flat 're' array");
    }
    const auto& re = j["re"];
    const Eigen::Index dim =
        j.contains("dim") ? j["dim"].get<Eigen::Index>() : static_cast<Eigen::Index>(re.size());
    if (static_cast<Eigen::Index>(re.size()) != dim) {
        throw domain_error("InvalidInput", "vector 're' length mismatch");
    }
    const bool has_im = j.contains("im");
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v(i) = complex(re[i].get<double>(), has_im ? j["im"][i].get<double>() : 0.0);
    }
    return v;
}

inline json kraus_to_json(const real_kraus_set& k) {
    json j;
    j["outcomes"] = k.kraus.size();
    j["dim_in"] = k.dim_in;
    j["dim_out"] = k.dim_out;
    json ops = json::array();
    for (const auto& op : k.kraus) ops.push_back(matrix_to_json(op));
    j["kraus"] = std::move(ops);
    return j;
}

inline real_kraus_set json_to_kraus(const json& j, const config& cfg = {}) {
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
        throw domain_error("InvalidInput", "Kraus JSON needs a nonempty 'kraus' array");
    }
    general_kraus_set g;
    for (const auto& op : j["kraus"]) g.kraus.push_back(json_to_matrix(op));
    g.dim_out = static_cast<int>(g.kraus.front().rows());
    g.dim_in = static_cast<int>(g.kraus.front().cols());
    return validate_real(g, false, cfg);
}

inline json measure_report_to_json(const measure_report& rep) {
    json j;
    j["robustness"] = rep.robustness;
    j["fidelity_of_imaginarity"] = rep.fidelity_of_imaginarity;
    if (rep.geometric) j["geometric"] = *rep.geometric;
    return j;
}

inline json plan_to_json(const pure_conversion_plan& plan) {
    json j;
    j["probability"] = plan.probability;
    j["pre_rotation"] = matrix_to_json(plan.pre_rotation);
    j["kraus_success"] = matrix_to_json(plan.kraus_success);
    j["kraus_fail"] = matrix_to_json(plan.kraus_fail);
    j["post_rotation"] = matrix_to_json(plan.post_rotation);
    return j;
}

inline json rotation_plan_to_json(const rotation_plan& plan) {
    json j;
    j["dim"] = plan.dim;
    j["count"] = plan.count();
    json rots = json::array();
    for (const auto& rot : plan.rotations) {
        rots.push_back({{"i", rot.i}, {"j", rot.j}, {"angle", rot.angle}});
    }
    j["rotations"] = std::move(rots);
    if (plan.reflection_axis) {
        j["reflection_axis"] = *plan.reflection_axis;
    } else {
        j["reflection_axis"] = nullptr;
    }
    return j;
}

inline json protocol_to_json(const discrimination_protocol& proto) {
    json j;
    j["dim_a"] = proto.dim_a;
    j["dim_b"] = proto.dim_b;
    j["padded_dim"] = proto.padded_dim;
    j["alice_rotation"] = matrix_to_json(proto.alice_rotation);
    json branches = json::array();
    for (const auto& branch : proto.branches) {
        json b;
        b["a_tilde"] = vector_to_json(branch.a_tilde);
        b["b_tilde"] = vector_to_json(branch.b_tilde);
        b["guess_psi"] = matrix_to_json(branch.guess_psi);
        b["guess_phi"] = matrix_to_json(branch.guess_phi);
        branches.push_back(std::move(b));
    }
    j["outcomes"] = std::move(branches);
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw domain_error("InvalidInput", "cannot open file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw domain_error("InvalidInput", "JSON parse failure in '" + path + "': " + e.what());
    }
    return j;
}

}  // namespace imkit
