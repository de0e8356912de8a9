#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace imkit;
using namespace imkit::testing;
using Catch::Matchers::WithinAbs;

namespace {

pure_state real_vector_state(std::initializer_list<double> values) {
    RealVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    v.normalize();
    return pure_state{v.cast<complex>()};
}

// Random orthogonal real pure pair on a dim_a x dim_b system.
std::pair<pure_state, pure_state> random_real_orthogonal_pair(int total, std::uint64_t seed) {
    RealMatrix o = random_orthogonal(total, seed);
    return {pure_state{o.col(0).cast<complex>()}, pure_state{o.col(1).cast<complex>()}};
}

}  // namespace

TEST_CASE("correlation matrix") {
    SECTION("Bell-type pair") {
        pure_state psi = real_vector_state({1, 0, 0, 1});
        pure_state phi = real_vector_state({0, 1, -1, 0});
        correlation_data c = correlation_matrix(psi, phi, 2);
        RealMatrix expected(2, 2);
        expected << 0.0, -0.5, 0.5, 0.0;
        REQUIRE(max_abs(RealMatrix(c.entries - expected)) < 1e-12);
    }
    SECTION("disjoint supports give the zero matrix") {
        correlation_data c =
            correlation_matrix(real_vector_state({1, 0, 0, 0}), real_vector_state({0, 0, 0, 1}), 2);
        REQUIRE(max_abs(c.entries) < 1e-15);
    }
    SECTION("|+->|0> pair") {
        pure_state psi = real_vector_state({1, 0, 1, 0});
        pure_state phi = real_vector_state({1, 0, -1, 0});
        correlation_data c = correlation_matrix(psi, phi, 2);
        RealMatrix expected(2, 2);
        expected << 0.5, -0.5, 0.5, -0.5;
        REQUIRE(max_abs(RealMatrix(c.entries - expected)) < 1e-12);
        REQUIRE_THAT(c.entries.trace(), WithinAbs(0.0, 1e-12));
    }
    SECTION("trace is the state overlap, hence zero") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto [psi, phi] = random_real_orthogonal_pair(12, seed);
            correlation_data c = correlation_matrix(psi, phi, 3);
            REQUIRE_THAT(c.entries.trace(), WithinAbs(0.0, 1e-10));
        }
    }
    SECTION("input checks") {
        REQUIRE_THROWS_MATCHES(
            correlation_matrix(pure_state{plus_i_state().amplitudes}, real_vector_state({0, 1}),
                               1),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "NotReal";
            }));
        REQUIRE_THROWS_MATCHES(
            correlation_matrix(real_vector_state({1, 0, 0, 0}), real_vector_state({1, 0, 0, 0}),
                               2),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "NotOrthogonal";
            }));
        REQUIRE_THROWS_MATCHES(
            correlation_matrix(real_vector_state({1, 0, 0, 0}), real_vector_state({0, 0, 0, 1}),
                               3),
            domain_error, Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                return e.name() == "BadFactorization";
            }));
    }
}

TEST_CASE("zero diagonal rotation") {
    SECTION("zero-diagonal input keeps the identity") {
        pure_state psi = real_vector_state({1, 0, 0, 1});
        pure_state phi = real_vector_state({0, 1, -1, 0});
        correlation_data c = correlation_matrix(psi, phi, 2);
        RealMatrix o = zero_diagonal_rotation(c);
        REQUIRE(max_abs(RealMatrix(o - RealMatrix::Identity(2, 2))) < 1e-12);
    }
    SECTION("the 2x2 diagonal case rotates by the equalizing angle") {
        correlation_data c;
        c.dim_a = 2;
        c.dim_b = 2;
        c.entries = RealMatrix::Zero(2, 2);
        c.entries(0, 0) = 0.5;
        c.entries(1, 1) = -0.5;
        RealMatrix o = zero_diagonal_rotation(c);
        RealMatrix rotated = o * c.entries * o.transpose();
        REQUIRE(rotated.diagonal().cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(max_abs(RealMatrix(o.transpose() * o - RealMatrix::Identity(2, 2))) < 1e-12);
    }
    SECTION("random trace-zero 3x3 pads to 4 and zeroes the diagonal") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> gauss;
        for (int rep = 0; rep < 20; ++rep) {
            correlation_data c;
            c.dim_a = 3;
            c.dim_b = 3;
            c.entries.resize(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) c.entries(i, j) = gauss(rng);
            c.entries(2, 2) = -c.entries(0, 0) - c.entries(1, 1);
            RealMatrix o = zero_diagonal_rotation(c);
            REQUIRE(o.rows() == 4);
            RealMatrix padded = RealMatrix::Zero(4, 4);
            padded.topLeftCorner(3, 3) = c.entries;
            RealMatrix rotated = o * padded * o.transpose();
            REQUIRE(rotated.diagonal().cwiseAbs().maxCoeff() < 1e-9);
            REQUIRE(max_abs(RealMatrix(o.transpose() * o - RealMatrix::Identity(4, 4))) < 1e-10);
        }
    }
}

TEST_CASE("protocol synthesis and simulation") {
    SECTION("Bell pair discriminates with the identity rotation") {
        pure_state psi = real_vector_state({1, 0, 0, 1});
        pure_state phi = real_vector_state({0, 1, -1, 0});
        discrimination_protocol proto = synthesize_protocol(psi, phi, 2);
        REQUIRE(max_abs(RealMatrix(proto.alice_rotation - RealMatrix::Identity(2, 2))) < 1e-12);
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::psi, 0), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::phi, 0), WithinAbs(1.0, 1e-12));
    }
    SECTION("|+->|0> pair needs a nontrivial rotation and succeeds") {
        pure_state psi = real_vector_state({1, 0, 1, 0});
        pure_state phi = real_vector_state({1, 0, -1, 0});
        discrimination_protocol proto = synthesize_protocol(psi, phi, 2);
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::psi, 0), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::phi, 0), WithinAbs(1.0, 1e-12));
    }
    SECTION("branch overlaps vanish and all operators are real by construction") {
        auto [psi, phi] = random_real_orthogonal_pair(12, 8);
        discrimination_protocol proto = synthesize_protocol(psi, phi, 3);
        for (const auto& branch : proto.branches) {
            REQUIRE_THAT(branch.a_tilde.dot(branch.b_tilde), WithinAbs(0.0, 1e-9));
            // projective two-outcome measurement plus implicit discard
            REQUIRE(max_abs(RealMatrix(branch.guess_psi * branch.guess_psi - branch.guess_psi)) <
                    1e-10);
            REQUIRE(max_abs(RealMatrix(branch.guess_phi * branch.guess_phi - branch.guess_phi)) <
                    1e-10);
            REQUIRE(max_abs(RealMatrix(branch.guess_psi * branch.guess_phi)) < 1e-10);
        }
    }
    SECTION("random pairs across system shapes discriminate perfectly") {
        const std::pair<int, int> shapes[] = {{2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 4}};
        std::uint64_t seed = 100;
        for (auto [da, db] : shapes) {
            for (int rep = 0; rep < 10; ++rep) {
                auto [psi, phi] = random_real_orthogonal_pair(da * db, seed++);
                discrimination_protocol proto = synthesize_protocol(psi, phi, da);
                REQUIRE_THAT(simulate_protocol(proto, hypothesis::psi, 0), WithinAbs(1.0, 1e-9));
                REQUIRE_THAT(simulate_protocol(proto, hypothesis::phi, 0), WithinAbs(1.0, 1e-9));
            }
        }
    }
    SECTION("empirical rate stays within the binomial envelope") {
        auto [psi, phi] = random_real_orthogonal_pair(6, 10);
        discrimination_protocol proto = synthesize_protocol(psi, phi, 2);
        const double exact = simulate_protocol(proto, hypothesis::psi, 0);
        const long trials = 100000;
        const double rate = simulate_protocol(proto, hypothesis::psi, trials, 99);
        const double sigma = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / trials);
        REQUIRE(std::abs(rate - exact) <= 3.0 * sigma + 1e-9);
    }
    SECTION("degenerate Alice branches renormalize away") {
        // |0>|0> vs |1>|1>: Alice outcome 1 never fires under psi
        pure_state psi = real_vector_state({1, 0, 0, 0});
        pure_state phi = real_vector_state({0, 0, 0, 1});
        discrimination_protocol proto = synthesize_protocol(psi, phi, 2);
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::psi, 0), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(simulate_protocol(proto, hypothesis::phi, 0), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("padding correctness") {
    // padded protocol on dim_a = 3 keeps the original-index overlaps intact
    auto [psi, phi] = random_real_orthogonal_pair(9, 20);
    correlation_data c = correlation_matrix(psi, phi, 3);
    discrimination_protocol proto = synthesize_protocol(psi, phi, 3);
    REQUIRE(proto.padded_dim == 4);
    // total branch probabilities still sum to one under each hypothesis
    double total_psi = 0.0, total_phi = 0.0;
    for (const auto& branch : proto.branches) {
        total_psi += branch.a_tilde.squaredNorm();
        total_phi += branch.b_tilde.squaredNorm();
    }
    REQUIRE_THAT(total_psi, WithinAbs(1.0, 1e-10));
    REQUIRE_THAT(total_phi, WithinAbs(1.0, 1e-10));
}

TEST_CASE("rotation count bound") {
    // the pairwise recursion uses at most p log2(p) two-level rotations; the
    // synthesized orthogonal matrix on p = 4 must decompose within that budget
    auto [psi, phi] = random_real_orthogonal_pair(12, 30);
    correlation_data c = correlation_matrix(psi, phi, 3);
    RealMatrix o = zero_diagonal_rotation(c);
    const int p = static_cast<int>(o.rows());
    // p/2 rotations per level, log2 p levels
    int budget = 0;
    for (int stride = 1; stride < p; stride *= 2) budget += p / 2;
    REQUIRE(budget <= p * static_cast<int>(std::log2(p)));
    REQUIRE(max_abs(RealMatrix(o.transpose() * o - RealMatrix::Identity(p, p))) < 1e-10);
}
