// imkit command-line front-end: JSON/CSV in, JSON/CSV out, deterministic for
// fixed inputs and seed. Exit codes: 0 success, 1 domain error (JSON error
// report on stderr), 2 usage error.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imkit/imkit.hpp"

namespace {

using imkit::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct cli_state {
    imkit::config cfg;
    std::vector<std::string> tol_overrides;
    std::optional<std::uint64_t> seed_flag;
    std::string out_path;

    std::uint64_t seed() const {
        if (seed_flag) return *seed_flag;
        if (const char* env = std::getenv("IMKIT_SEED")) {
            return std::strtoull(env, nullptr, 10);
        }
        return 0;
    }

    void apply_tolerances() {
        for (const auto& spec : tol_overrides) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) {
                throw CLI::ValidationError("--tol", "expected NAME=VALUE, got '" + spec + "'");
            }
            const std::string name = spec.substr(0, eq);
            double value = 0.0;
            try {
                value = std::stod(spec.substr(eq + 1));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--tol", "bad value in '" + spec + "'");
            }
            try {
                cfg.by_name(name) = value;
            } catch (const imkit::domain_error&) {
                throw CLI::ValidationError("--tol", "unknown tolerance '" + name + "'");
            }
        }
    }

    void emit(const std::string& text) const {
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw imkit::domain_error("InvalidInput", "cannot write '" + out_path + "'");
        }
        out << text;
    }

    void emit_json(const json& j) const { emit(j.dump() + "\n"); }
};

enum class state_kind { density, vector };

state_kind classify_state_json(const json& j) {
    if (j.contains("re") && j["re"].is_array() && !j["re"].empty() && j["re"][0].is_array()) {
        return state_kind::density;
    }
    return state_kind::vector;
}

imkit::quantum_state load_density(const std::string& path, const imkit::config& cfg) {
    json j = imkit::read_json_file(path);
    if (classify_state_json(j) == state_kind::density) {
        return imkit::validate_state(imkit::json_to_matrix(j), cfg);
    }
    return imkit::validate_pure(imkit::json_to_vector(j), cfg).to_density();
}

imkit::pure_state load_pure(const std::string& path, const imkit::config& cfg) {
    json j = imkit::read_json_file(path);
    if (classify_state_json(j) == state_kind::density) {
        throw imkit::domain_error("InvalidInput",
                                  "'" + path + "' holds a matrix; a pure-state vector is needed");
    }
    return imkit::validate_pure(imkit::json_to_vector(j), cfg);
}

imkit::bloch_vector parse_bloch(const std::string& text, const imkit::config& cfg) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw imkit::domain_error("InvalidInput", "bad Bloch component '" + item + "'");
        }
    }
    if (parts.size() != 3) {
        throw imkit::domain_error("InvalidInput", "--bloch expects x,y,z");
    }
    return imkit::validate_bloch(parts[0], parts[1], parts[2], cfg);
}

int run(int argc, char** argv) {
    CLI::App app{"imaginarity-resource toolkit"};
    app.require_subcommand(1);

    cli_state st;
    app.add_option("--tol", st.tol_overrides, "tolerance override NAME=VALUE")
        ->take_all()
        ->expected(0, -1);
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (env IMKIT_SEED as fallback)");
    app.add_option("--out", st.out_path, "output file (default stdout)");

    std::string state_path, target_path, bloch_text, kind = "pure", matrix_path;
    int grid_n = 401, dim_a = 0, dim = 2;
    long trials = 0;
    int cost_measurement = 0, cost_dilation = 0, cost_unitary = 0;

    auto* validate_cmd = app.add_subcommand("validate", "validate a density matrix");
    validate_cmd->add_option("--state", state_path, "state JSON file")->required();

    auto* measure_cmd = app.add_subcommand("measure", "imaginarity measures of a state");
    measure_cmd->add_option("--state", state_path, "state JSON file")->required();

    auto* convert_cmd = app.add_subcommand("convert", "optimal pure-state conversion plan");
    convert_cmd->add_option("--state", state_path, "initial pure state JSON")->required();
    convert_cmd->add_option("--target", target_path, "target pure state JSON")->required();

    auto* region_cmd = app.add_subcommand("region", "deterministic qubit accessibility grid");
    region_cmd->add_option("--bloch", bloch_text, "initial Bloch vector x,y,z")->required();
    region_cmd->add_option("--grid", grid_n, "grid resolution per axis");

    auto* distill_cmd = app.add_subcommand("distill", "optimal approximate distillation");
    distill_cmd->add_option("--state", state_path, "state JSON file")->required();

    auto* disc_cmd = app.add_subcommand("discriminate", "LRCC discrimination protocol");
    disc_cmd->add_option("--state", state_path, "first bipartite pure state JSON")->required();
    disc_cmd->add_option("--target", target_path, "second bipartite pure state JSON")->required();
    disc_cmd->add_option("--dim-a", dim_a, "Alice's local dimension")->required();
    disc_cmd->add_option("--trials", trials, "Monte-Carlo trials (0 = exact)");

    auto* optics_cmd = app.add_subcommand("optics", "optical cost accounting");
    optics_cmd->require_subcommand(1);
    auto* decomp_cmd = optics_cmd->add_subcommand("decompose", "two-level rotation decomposition");
    decomp_cmd->add_option("--state", matrix_path, "orthogonal matrix JSON")->required();
    auto* cost_cmd = optics_cmd->add_subcommand("cost", "wave-plate counts");
    auto* m_opt = cost_cmd->add_option("--measurement", cost_measurement, "qubit measurement outcomes");
    auto* d_opt = cost_cmd->add_option("--dilation", cost_dilation, "system dimension for dilation");
    auto* u_opt = cost_cmd->add_option("--unitary", cost_unitary, "unitary dimension");
    m_opt->excludes(d_opt)->excludes(u_opt);
    d_opt->excludes(u_opt);

    auto* random_cmd = app.add_subcommand("random", "seeded random states and matrices");
    random_cmd->add_option("--kind", kind, "pure | mixed | orthogonal")
        ->check(CLI::IsMember({"pure", "mixed", "orthogonal"}));
    random_cmd->add_option("--dim", dim, "dimension")->required();

    // global flags (--seed, --out, --tol) may appear after the subcommand
    for (auto* sub : {validate_cmd, measure_cmd, convert_cmd, region_cmd, distill_cmd,
                      disc_cmd, optics_cmd, decomp_cmd, cost_cmd, random_cmd}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (*seed_opt) st.seed_flag = seed_value;

    try {
        st.apply_tolerances();
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*validate_cmd) {
            imkit::quantum_state rho = load_density(state_path, st.cfg);
            json j;
            j["dim"] = rho.dim();
            j["valid"] = true;
            st.emit_json(j);
        } else if (*measure_cmd) {
            imkit::quantum_state rho = load_density(state_path, st.cfg);
            st.emit_json(imkit::measure_report_to_json(imkit::measure_state(rho, st.cfg)));
        } else if (*convert_cmd) {
            imkit::pure_state psi = load_pure(state_path, st.cfg);
            imkit::pure_state phi = load_pure(target_path, st.cfg);
            imkit::pure_conversion_plan plan = imkit::plan_pure_conversion(psi, phi, st.cfg);
            st.emit_json(imkit::plan_to_json(plan));
        } else if (*region_cmd) {
            imkit::bloch_vector r = parse_bloch(bloch_text, st.cfg);
            auto samples = imkit::qubit_accessible_region(r, grid_n);
            std::string csv = "s_y,s_z,accessible\n";
            for (const auto& s : samples) {
                csv += format_double(s.target_sy);
                csv += ',';
                csv += format_double(s.target_sz);
                csv += ',';
                csv += s.accessible ? '1' : '0';
                csv += '\n';
            }
            st.emit(csv);
        } else if (*distill_cmd) {
            imkit::quantum_state rho = load_density(state_path, st.cfg);
            imkit::distill_result res = imkit::distill(rho, st.cfg);
            json j;
            j["achieved"] = res.achieved;
            j["output"] = imkit::matrix_to_json(res.output.rho);
            st.emit_json(j);
        } else if (*disc_cmd) {
            imkit::pure_state psi = load_pure(state_path, st.cfg);
            imkit::pure_state phi = load_pure(target_path, st.cfg);
            auto proto = imkit::synthesize_protocol(psi, phi, dim_a, st.cfg);
            json j = imkit::protocol_to_json(proto);
            j["success_psi"] = imkit::simulate_protocol(proto, imkit::hypothesis::psi, 0);
            j["success_phi"] = imkit::simulate_protocol(proto, imkit::hypothesis::phi, 0);
            j["success"] = 0.5 * (j["success_psi"].get<double>() + j["success_phi"].get<double>());
            if (trials > 0) {
                j["empirical_psi"] =
                    imkit::simulate_protocol(proto, imkit::hypothesis::psi, trials, st.seed());
                j["empirical_phi"] =
                    imkit::simulate_protocol(proto, imkit::hypothesis::phi, trials, st.seed());
            }
            st.emit_json(j);
        } else if (*decomp_cmd) {
            json j = imkit::read_json_file(matrix_path);
            imkit::ComplexMatrix m = imkit::json_to_matrix(j);
            if (imkit::max_imag(m) > st.cfg.real) {
                throw imkit::domain_error("NotReal", "orthogonal matrix must be real");
            }
            auto plan = imkit::decompose_orthogonal(m.real(), imkit::improper_policy::absorb,
                                                    st.cfg);
            st.emit_json(imkit::rotation_plan_to_json(plan));
        } else if (*cost_cmd) {
            json j;
            if (*m_opt) {
                auto rep = imkit::measurement_cost(cost_measurement);
                j["general"] = rep.general_count;
                j["real"] = rep.real_count;
                j["ratio"] = rep.ratio;
            } else if (*d_opt) {
                auto rep = imkit::dilation_cost(cost_dilation);
                j["dilation_dim"] = rep.dilation_dim;
                j["general"] = rep.general_count;
                j["real"] = rep.real_count;
                j["ratio"] = rep.ratio;
            } else if (*u_opt) {
                j["unitary_params"] = imkit::unitary_param_count(cost_unitary);
            } else {
                std::cerr << "optics cost needs --measurement, --dilation, or --unitary\n";
                return 2;
            }
            st.emit_json(j);
        } else if (*random_cmd) {
            if (kind == "pure") {
                st.emit_json(imkit::vector_to_json(imkit::random_pure(dim, st.seed()).amplitudes));
            } else if (kind == "mixed") {
                st.emit_json(imkit::matrix_to_json(imkit::random_state(dim, st.seed()).rho));
            } else {
                st.emit_json(imkit::matrix_to_json(imkit::random_orthogonal(dim, st.seed())));
            }
        }
    } catch (const imkit::domain_error& e) {
        json err;
        err["error"] = e.name();
        std::string what = e.what();
        const std::string prefix = e.name() + ": ";
        err["detail"] = what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
