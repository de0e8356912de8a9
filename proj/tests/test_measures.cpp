#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace imkit;
using namespace imkit::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("geometric imaginarity of pure states") {
    REQUIRE_THAT(geometric_imaginarity_pure(random_real_pure(4, 1)), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(geometric_imaginarity_pure(plus_i_state()), WithinAbs(0.5, 1e-12));
    for (double alpha : {0.1, 0.4, M_PI / 4}) {
        REQUIRE_THAT(geometric_imaginarity_pure(alpha_state(alpha)),
                     WithinAbs(std::sin(alpha) * std::sin(alpha), 1e-12));
    }
}

TEST_CASE("robustness of imaginarity") {
    REQUIRE_THAT(robustness(random_real_state(5, 2)), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(robustness(state_from_bloch({0.0, 0.6, 0.4})), WithinAbs(0.6, 1e-12));

    SECTION("qubit closed form |r_y|") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            quantum_state rho = random_state(2, seed);
            bloch_vector r = bloch_from_state(rho);
            REQUIRE_THAT(robustness(rho), WithinAbs(std::abs(r.y), 1e-10));
        }
    }
    SECTION("pure closed form sqrt(1 - overlap^2)") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            pure_state psi = random_pure(4, seed);
            const double ov = std::abs(conjugate_overlap(psi));
            REQUIRE_THAT(robustness(psi.to_density()),
                         WithinAbs(std::sqrt(1.0 - ov * ov), 1e-10));
        }
    }
}

TEST_CASE("fidelity of imaginarity") {
    REQUIRE_THAT(fidelity_of_imaginarity(random_real_state(3, 4)), WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(fidelity_of_imaginarity(plus_i_state().to_density()), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(fidelity_of_imaginarity(state_from_bloch({0.0, 0.6, 0.4})),
                 WithinAbs(0.8, 1e-12));
}

TEST_CASE("measure_state report") {
    SECTION("pure report carries geometric and satisfies the circle identity") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            pure_state psi = random_pure(3, seed);
            measure_report rep = measure_state(psi.to_density());
            REQUIRE(rep.geometric.has_value());
            REQUIRE_THAT(rep.fidelity_of_imaginarity, WithinAbs(0.5 * (1.0 + rep.robustness), 1e-12));
            const double x = 1.0 - 2.0 * *rep.geometric;
            REQUIRE_THAT(rep.robustness * rep.robustness + x * x, WithinAbs(1.0, 1e-9));
        }
    }
    SECTION("mixed report omits geometric") {
        measure_report rep = measure_state(maximally_mixed(2));
        REQUIRE_FALSE(rep.geometric.has_value());
        REQUIRE_THAT(rep.robustness, WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("conversion probability bound") {
    quantum_state rho = plus_i_state().to_density();
    SECTION("free target gives 1") {
        REQUIRE_THAT(conversion_probability_bound(rho, random_real_state(2, 1),
                                                  measure_selector::robustness),
                     WithinAbs(1.0, 1e-12));
    }
    SECTION("identical states give 1") {
        quantum_state sigma = random_state(3, 9);
        REQUIRE_THAT(conversion_probability_bound(sigma, sigma, measure_selector::robustness),
                     WithinAbs(1.0, 1e-12));
    }
    SECTION("geometric selector matches the pure-state formula") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            pure_state psi = random_pure(3, seed);
            pure_state phi = random_pure(3, seed + 40);
            const double expected =
                std::min((1.0 - std::abs(conjugate_overlap(psi))) /
                             (1.0 - std::abs(conjugate_overlap(phi))),
                         1.0);
            REQUIRE_THAT(conversion_probability_bound(psi.to_density(), phi.to_density(),
                                                      measure_selector::geometric_pure),
                         WithinAbs(expected, 1e-9));
        }
    }
    SECTION("geometric selector rejects mixed inputs") {
        REQUIRE_THROWS_MATCHES(
            conversion_probability_bound(maximally_mixed(2), rho,
                                         measure_selector::geometric_pure),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "GeometricRequiresPure";
            }));
    }
}

TEST_CASE("direct sum robustness additivity") {
    quantum_state q1 = random_state(2, 3);
    quantum_state q2 = random_state(2, 8);

    auto [lhs0, rhs0] = direct_sum_robustness_check(q1, q2, 0.0);
    REQUIRE_THAT(lhs0, WithinAbs(robustness(q2), 1e-10));
    REQUIRE_THAT(lhs0, WithinAbs(rhs0, 1e-10));

    auto [lhs_r, rhs_r] =
        direct_sum_robustness_check(random_real_state(2, 5), random_real_state(3, 6), 0.4);
    REQUIRE_THAT(lhs_r, WithinAbs(0.0, 1e-10));
    REQUIRE_THAT(rhs_r, WithinAbs(0.0, 1e-10));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto [lhs, rhs] =
            direct_sum_robustness_check(random_state(2, seed), random_state(2, seed + 90), 0.3);
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-9));
    }
}

TEST_CASE("measure invariance and monotonicity") {
    SECTION("orthogonal invariance") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            quantum_state rho = random_state(4, seed);
            RealMatrix o = random_orthogonal(4, seed + 300);
            quantum_state rotated{o.cast<complex>() * rho.rho * o.transpose().cast<complex>()};
            REQUIRE_THAT(robustness(rotated), WithinAbs(robustness(rho), 1e-9));

            pure_state psi = random_pure(4, seed);
            pure_state rpsi{o.cast<complex>() * psi.amplitudes};
            REQUIRE_THAT(geometric_imaginarity_pure(rpsi),
                         WithinAbs(geometric_imaginarity_pure(psi), 1e-9));
        }
    }
    SECTION("robustness never increases under real channels") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const int dim = 2 + static_cast<int>(seed % 3);
            quantum_state rho = random_state(dim, seed);
            quantum_state out = apply(random_real_channel(dim, 2, seed + 1000), rho);
            REQUIRE(robustness(out) <= robustness(rho) + 1e-9);
        }
    }
    SECTION("strong monotonicity of the geometric measure") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const int dim = 2 + static_cast<int>(seed % 2);
            pure_state psi = random_pure(dim, seed);
            real_kraus_set ch = random_real_channel(dim, 3, seed + 2000);
            double avg = 0.0;
            for (const auto& k : ch.kraus) {
                ComplexVector v = k.cast<complex>() * psi.amplitudes;
                const double q = v.squaredNorm();
                if (q < 1e-12) continue;
                avg += q * geometric_imaginarity_pure(pure_state{v / std::sqrt(q)});
            }
            REQUIRE(avg <= geometric_imaginarity_pure(psi) + 1e-9);
        }
    }
    SECTION("real states never beat 1/2 fidelity with |+^>") {
        ComplexVector plus = plus_i_state().amplitudes;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            quantum_state rho = random_real_state(2, seed);
            const double f = (plus.adjoint() * rho.rho * plus)(0, 0).real();
            REQUIRE(f <= 0.5 + 1e-9);
        }
    }
}

TEST_CASE("geometric measure brute-force oracle") {
    // definition route: 1 - max over real unit vectors of |<phi|psi>|^2
    std::mt19937_64 rng(404);
    std::normal_distribution<double> gauss;
    for (int dim = 2; dim <= 3; ++dim) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            pure_state psi = random_pure(dim, seed);
            double best = 0.0;
            for (int s = 0; s < 100000; ++s) {
                RealVector phi(dim);
                for (int i = 0; i < dim; ++i) phi(i) = gauss(rng);
                phi.normalize();
                const complex ip = (phi.cast<complex>().adjoint() * psi.amplitudes)(0, 0);
                best = std::max(best, std::norm(ip));
            }
            const double sampled = 1.0 - best;
            const double closed = geometric_imaginarity_pure(psi);
            REQUIRE(closed <= sampled + 1e-9);  // sampling can only overshoot
            REQUIRE_THAT(closed, WithinAbs(sampled, 1e-3));
        }
    }
}

TEST_CASE("discrimination advantage ratio") {
    const auto grid = real_qubit_grid();

    SECTION("state-independent instance gives ratio 1") {
        general_kraus_set id{2, 2, {ComplexMatrix::Identity(2, 2)}};
        std::vector<ensemble_entry> ens{{0.5, id}, {0.5, id}};
        std::vector<ComplexMatrix> povm{0.5 * ComplexMatrix::Identity(2, 2),
                                        0.5 * ComplexMatrix::Identity(2, 2)};
        advantage_ratio r =
            discrimination_advantage_ratio(random_state(2, 17), ens, povm, grid);
        REQUIRE_FALSE(r.denominator_zero);
        REQUIRE_THAT(r.value, WithinAbs(1.0, 1e-9));
    }
    SECTION("a real state on the grid cannot have an advantage") {
        quantum_state rho = random_real_state(2, 21);
        general_kraus_set ch = random_general_channel(2, 2, 3);
        general_kraus_set id{2, 2, {ComplexMatrix::Identity(2, 2)}};
        ComplexMatrix m0 = 0.3 * ComplexMatrix::Identity(2, 2);
        std::vector<ComplexMatrix> povm{m0, ComplexMatrix::Identity(2, 2) - m0};
        std::vector<quantum_state> grid_plus = grid;
        grid_plus.push_back(rho);
        advantage_ratio r = discrimination_advantage_ratio(
            rho, {{0.5, ch}, {0.5, id}}, povm, grid_plus);
        REQUIRE(r.value <= 1.0 + 1e-9);
    }
    SECTION("the sigma_z instance on |+^> attains 1 + robustness = 2") {
        ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
        sz(0, 0) = 1;
        sz(1, 1) = -1;
        general_kraus_set id{2, 2, {ComplexMatrix::Identity(2, 2)}};
        general_kraus_set zch{2, 2, {sz}};
        quantum_state plus = plus_i_state().to_density();
        ComplexVector minus(2);
        minus << complex(1.0 / std::sqrt(2.0), 0.0), complex(0.0, -1.0 / std::sqrt(2.0));
        std::vector<ComplexMatrix> povm{plus.rho, minus * minus.adjoint()};
        advantage_ratio r =
            discrimination_advantage_ratio(plus, {{0.5, id}, {0.5, zch}}, povm, grid);
        REQUIRE(r.value <= 2.0 + 1e-9);
        REQUIRE_THAT(r.value, WithinAbs(2.0, 1e-9));
    }
    SECTION("vanishing denominator flags instead of dividing") {
        general_kraus_set id{2, 2, {ComplexMatrix::Identity(2, 2)}};
        std::vector<ComplexMatrix> povm{ComplexMatrix::Zero(2, 2),
                                        ComplexMatrix::Identity(2, 2)};
        std::vector<quantum_state> tiny_grid{basis_state(2, 1).to_density()};
        advantage_ratio r = discrimination_advantage_ratio(
            plus_i_state().to_density(), {{1.0, id}, {0.0, id}},
            std::vector<ComplexMatrix>{povm[0], povm[1]}, tiny_grid);
        // p_succ = 1 * tr[0 sigma] + 0 * tr[I sigma] = 0 on every grid state
        REQUIRE(r.denominator_zero);
    }
    SECTION("invalid instances are rejected") {
        general_kraus_set id{2, 2, {ComplexMatrix::Identity(2, 2)}};
        std::vector<ComplexMatrix> povm{ComplexMatrix::Identity(2, 2)};
        REQUIRE_THROWS_MATCHES(
            discrimination_advantage_ratio(maximally_mixed(2), {{0.7, id}}, povm, grid),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "InvalidEnsemble";
            }));
        std::vector<ComplexMatrix> bad_povm{2.0 * ComplexMatrix::Identity(2, 2)};
        REQUIRE_THROWS_MATCHES(
            discrimination_advantage_ratio(maximally_mixed(2), {{1.0, id}}, bad_povm, grid),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "InvalidPOVM";
            }));
    }
}
