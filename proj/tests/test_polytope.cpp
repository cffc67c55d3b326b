#include "gpc/polytope.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gpc/circuits.hpp"
#include "test_util.hpp"

using namespace gpc;
using namespace gpc::testing;

namespace {

bool has_vertex(const PolytopeMesh& m, Eigen::Vector3d v) {
    return std::any_of(m.vertices.begin(), m.vertices.end(), [&](const auto& x) { return (x - v).norm() < 1e-12; });
}

}  // namespace

TEST(polytope, check_examples) {
    auto r = check(OccupationTriple{0.25, 0.20, 0.10});
    EXPECT_NEAR(r.bd_slack, 0.05, 1e-15);
    EXPECT_TRUE(r.inside_pauli);
    EXPECT_TRUE(r.inside_gpc);
    EXPECT_FALSE(r.in_forbidden_region());

    r = check(OccupationTriple{0.50, 0.20, 0.20});
    EXPECT_NEAR(r.bd_slack, -0.10, 1e-15);
    EXPECT_TRUE(r.inside_pauli);
    EXPECT_FALSE(r.inside_gpc);
    EXPECT_TRUE(r.in_forbidden_region());

    r = check(OccupationTriple{0.5, 0.5, 0.5});
    EXPECT_DOUBLE_EQ(r.bd_slack, 0.5);
    EXPECT_TRUE(r.inside_gpc);
}

TEST(polytope, check_reports_raw_measured_values) {
    const auto r = check(OccupationTriple{0.52, 0.3, -0.01}, kMeasuredTolerance);
    EXPECT_TRUE(r.inside_pauli);
    EXPECT_NEAR(r.pauli_slacks[5], -0.01, 1e-15);
    const auto bad = check(OccupationTriple{0.1, 0.3, 0.2});
    EXPECT_TRUE(bad.ordering_violation);
    EXPECT_FALSE(bad.inside_pauli);
}

TEST(polytope, check_six_values) {
    const std::vector<double> six{0.9, 0.8, 0.75, 0.25, 0.2, 0.1};
    const auto r = check(six);
    for (double e : r.equality_residuals) EXPECT_NEAR(e, 0.0, 1e-15);
    EXPECT_NEAR(r.bd_slack, 0.05, 1e-15);
    EXPECT_NEAR(r.higuchi_slack, 0.05, 1e-15);
    EXPECT_THROW(check(std::vector<double>{0.1, 0.2}), std::invalid_argument);
}

TEST(polytope, inside_gpc_implies_inside_pauli) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-0.1, 0.6);
    for (int k = 0; k < 10'000; ++k) {
        const auto r = check(OccupationTriple{u(rng), u(rng), u(rng)});
        if (r.inside_gpc) ASSERT_TRUE(r.inside_pauli);
    }
}

TEST(polytope, facet_distance_examples) {
    EXPECT_DOUBLE_EQ(distance_to_bd_facet({0, 0, 0}), 0.0);
    EXPECT_NEAR(distance_to_bd_facet({0.5, 0.5, 0.5}), 1 / (2 * std::sqrt(3.0)), 1e-15);
    EXPECT_NEAR(distance_to_bd_facet({0.4, 0.3, 0.1}), 0.0, 1e-15);
}

TEST(polytope, mesh_vertices) {
    const auto pauli = enumerate_mesh(pauli_polytope());
    ASSERT_EQ(pauli.vertices.size(), 4u);
    EXPECT_TRUE(has_vertex(pauli, {0, 0, 0}));
    EXPECT_TRUE(has_vertex(pauli, {0.5, 0, 0}));
    EXPECT_TRUE(has_vertex(pauli, {0.5, 0.5, 0}));
    EXPECT_TRUE(has_vertex(pauli, {0.5, 0.5, 0.5}));
    EXPECT_EQ(pauli.facets.size(), 4u);

    const auto gpc = enumerate_mesh(gpc_polytope());
    ASSERT_EQ(gpc.vertices.size(), 4u);
    EXPECT_TRUE(has_vertex(gpc, {0, 0, 0}));
    EXPECT_TRUE(has_vertex(gpc, {0.5, 0.5, 0}));
    EXPECT_TRUE(has_vertex(gpc, {0.5, 0.5, 0.5}));
    EXPECT_TRUE(has_vertex(gpc, {0.5, 0.25, 0.25}));
    EXPECT_EQ(gpc.facets.size(), 4u);
    for (const auto& f : gpc.facets) EXPECT_EQ(f.vertices.size(), 3u);
}

TEST(polytope, volume_ratio) {
    const auto v = monte_carlo_volume_ratio(2'000'000, 3);
    EXPECT_NEAR(v.ratio, 2.0, 0.05);
    EXPECT_NEAR(v.pauli_volume, 1.0 / 48, 0.02 / 48);
    EXPECT_NEAR(v.gpc_volume, 1.0 / 96, 0.03 / 96);
    EXPECT_THROW(monte_carlo_volume_ratio(10, 1), std::invalid_argument);
}

TEST(polytope, volume_independent_of_threads) {
    const auto a = monte_carlo_volume_ratio(300'000, 9, 1);
    const auto b = monte_carlo_volume_ratio(300'000, 9, 4);
    EXPECT_EQ(a.pauli_hits, b.pauli_hits);
    EXPECT_EQ(a.gpc_hits, b.gpc_hits);
}

TEST(polytope, violation_confidence_values) {
    EXPECT_EQ(violation_confidence(0), 1.0);
    EXPECT_EQ(violation_confidence(1), 0.5);
    EXPECT_EQ(violation_confidence(60), std::ldexp(1.0, -60));
    EXPECT_NEAR(violation_confidence(60), 8.67e-19, 0.01e-19);
    EXPECT_THROW(violation_confidence(-1), std::invalid_argument);
}

TEST(polytope, ideal_states_never_enter_blue_region) {
    std::mt19937_64 rng(62);
    for (auto a : {Algorithm::Alg1, Algorithm::Alg2}) {
        for (int k = 0; k < 50'000; ++k) {
            const auto p = random_angles(rng, parameter_count(a));
            const auto r = check(occupations_exact(run_circuit(build_circuit(a, p))));
            ASSERT_GE(r.bd_slack, -1e-12);
            ASSERT_FALSE(r.in_forbidden_region());
        }
    }
}

TEST(polytope, contains_matches_check) {
    const auto pauli = pauli_polytope();
    const auto gpc = gpc_polytope();
    EXPECT_TRUE(gpc.contains({0.25, 0.2, 0.1}));
    EXPECT_FALSE(gpc.contains({0.5, 0.2, 0.2}));
    EXPECT_TRUE(pauli.contains({0.5, 0.2, 0.2}));
}
