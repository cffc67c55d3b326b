#include "gpc/tomography.hpp"

#include <gtest/gtest.h>

#include "gpc/fockspace.hpp"
#include "gpc/stats.hpp"
#include "test_util.hpp"

using namespace gpc;
using namespace gpc::testing;

namespace {

CountsTable ideal_counts(const StateVector& s, Basis b, std::uint64_t shots) {
    StateVector r = s;
    for (const auto& g : MeasurementSetting{b}.pre_rotation(s.n_qubits())) r = apply_gate(r, g);
    const auto p = r.probabilities();
    std::vector<std::uint64_t> c(p.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) total += c[i] = static_cast<std::uint64_t>(std::llround(p[i] * shots));
    return CountsTable(s.n_qubits(), total, c);
}

}  // namespace

TEST(tomography, rotation_unitary_examples) {
    EXPECT_LT((build_rotation_unitary(0, 1) - Matrix2c::Identity()).norm(), 1e-15);
    Matrix2c flip;
    flip << 0, -1, 1, 0;
    EXPECT_LT((build_rotation_unitary(kPi / 2, 1) - flip).norm(), 1e-15);
    EXPECT_THROW(build_rotation_unitary(0.1, 0), std::invalid_argument);
    for (double phi : {0.0, 0.3, 1.7}) {
        const Matrix2c u = build_rotation_unitary(phi, -1);
        EXPECT_LT((u * u.adjoint() - Matrix2c::Identity()).norm(), 1e-15);
    }
}

TEST(tomography, quarter_pi_rotation_is_hz_and_zh) {
    Matrix2c z;
    z << 1, 0, 0, -1;
    const Matrix2c h = hadamard_matrix();
    EXPECT_LT((build_rotation_unitary(kPi / 4, 1) - h * z).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((build_rotation_unitary(kPi / 4, -1) - z * h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(tomography, estimate_rdm_examples) {
    const std::uint64_t shots = 1'000'000;
    const StateVector zero(1);
    auto r = estimate_rdm(ideal_counts(zero, Basis::Z, shots), ideal_counts(zero, Basis::X, shots),
                          ideal_counts(zero, Basis::Y, shots), 0);
    EXPECT_NEAR(r.d00, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(r.d01), 0.0, 1e-12);

    const double h = 1 / std::sqrt(2.0);
    const StateVector plus(1, {h, h});
    r = estimate_rdm(ideal_counts(plus, Basis::Z, shots), ideal_counts(plus, Basis::X, shots),
                     ideal_counts(plus, Basis::Y, shots), 0);
    EXPECT_NEAR(r.d00, 0.5, 1e-12);
    EXPECT_NEAR(r.d01.real(), 0.5, 1e-12);
    EXPECT_NEAR(r.d01.imag(), 0.0, 1e-12);
}

TEST(tomography, y_basis_sign_convention) {
    // (|0> + i|1>)/sqrt2 has <0|rho|1> = -i/2.
    const double h = 1 / std::sqrt(2.0);
    const StateVector s(1, {cplx(h, 0), cplx(0, h)});
    const std::uint64_t shots = 1000;
    const auto r = estimate_rdm(ideal_counts(s, Basis::Z, shots), ideal_counts(s, Basis::X, shots),
                                ideal_counts(s, Basis::Y, shots), 0);
    EXPECT_NEAR(r.d01.imag(), -0.5, 1e-12);
    EXPECT_NEAR(reduced_1q_rdm(s, 0).d01.imag(), -0.5, 1e-15);
}

TEST(tomography, estimate_rdm_errors) {
    const CountsTable a(1, 10, {10, 0}), b(1, 20, {20, 0}), empty;
    EXPECT_THROW(estimate_rdm(a, a, b, 0), std::invalid_argument);
    EXPECT_THROW(estimate_rdm(a, empty, a, 0), std::invalid_argument);
}

TEST(tomography, exact_occupation_examples) {
    const auto zero = occupations_exact(StateVector(3));
    EXPECT_EQ(zero.values(), (std::array<double, 3>{0, 0, 0}));
    const auto g = occupations_exact(ghz());
    for (double v : g.values()) EXPECT_NEAR(v, 0.5, 1e-12);
    const auto w = occupations_exact(w_state());
    for (double v : w.values()) EXPECT_NEAR(v, 1.0 / 3, 1e-12);
}

TEST(tomography, analytic_limit_matches_exact) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 200; ++k) {
        const auto s = random_state(rng);
        const auto a = occupations_analytic(s), e = occupations_exact(s);
        ASSERT_NEAR(a.distance(e), 0.0, 1e-12);
    }
}

TEST(tomography, measured_is_deterministic_and_close) {
    const auto circuit = build_alg1({deg(43), deg(3), deg(39)});
    const auto s = run_circuit(circuit);
    const auto a = occupations_measured(s, 2048, 5);
    const auto b = occupations_measured(circuit, 2048, 5);
    EXPECT_EQ(a.occupations.values(), b.occupations.values());
    EXPECT_EQ(a.counts[2].counts, b.counts[2].counts);
    // Within a few 2048-shot standard errors of the exact triple.
    EXPECT_LT(a.occupations.distance(occupations_exact(s)), 0.05);
    EXPECT_THROW(occupations_measured(s, 0, 1), std::invalid_argument);
}

TEST(tomography, shot_noise_shrinks_with_shots) {
    const auto s = run_circuit(build_alg1({deg(43), deg(3), deg(39)}));
    const auto exact = occupations_exact(s);
    auto spread = [&](std::uint64_t shots) {
        double sum = 0;
        for (std::uint64_t k = 0; k < 100; ++k) sum += occupations_measured(s, shots, 1000 + k).occupations.distance(exact);
        return sum / 100;
    };
    const double d1024 = spread(1024), d2048 = spread(2048), d8192 = spread(8192);
    EXPECT_LT(d2048, d1024);
    EXPECT_LT(d8192, d2048);
    EXPECT_NEAR(d1024 / d8192, std::sqrt(8.0), 0.8);
}

TEST(tomography, estimator_converges_to_partial_trace) {
    std::mt19937_64 rng(42);
    const auto s = random_state(rng);
    const std::uint64_t shots = 1'000'000;
    const auto m = occupations_measured(s, shots, 77);
    for (int q = 0; q < 3; ++q) {
        const auto exact = reduced_1q_rdm(s, q);
        const auto& est = m.rdms[static_cast<std::size_t>(q)];
        const double sd = 0.5 / std::sqrt(static_cast<double>(shots));  // binomial sd bound
        EXPECT_NEAR(est.d00, exact.d00, 3 * sd * 2);
        EXPECT_NEAR(est.d01.real(), exact.d01.real(), 3 * sd * 2);
        EXPECT_NEAR(est.d01.imag(), exact.d01.imag(), 3 * sd * 2);
    }
}

TEST(tomography, clamping_is_counted) {
    // fX = fY = 1 makes |d01|^2 = 1/2 at d00 = 1/2, so the small eigenvalue is negative.
    const std::array<OneQubitRDM, 3> rdms{rdm_from_frequencies(0.5, 1.0, 0.0), rdm_from_frequencies(0.5, 0.5, 0.5),
                                          rdm_from_frequencies(1.0, 0.5, 0.5)};
    const auto c = occupations_from_rdms(rdms);
    EXPECT_EQ(c.clamp_events, 1);
    EXPECT_EQ(c.occupations.n6, 0.0);
    EXPECT_NEAR(c.occupations.n4, 0.5, 1e-15);
}

TEST(tomography, sorted_triple) {
    const auto t = OccupationTriple::sorted(0.1, 0.3, 0.2);
    EXPECT_EQ(t.values(), (std::array<double, 3>{0.3, 0.2, 0.1}));
}

TEST(tomography, interference_identities_against_fock_space) {
    // Real-part and imaginary-part identities at phi = pi/4 on every orbital pair
    // of a qubit, evaluated in the 64-dim Fock space.
    std::mt19937_64 rng(43);
    for (int k = 0; k < 100; ++k) {
        const auto f = map_qubit_to_fermion(random_state(rng));
        const auto d = one_rdm(f);
        for (int q = 0; q < 3; ++q) {
            const int i = q + 1, j = 6 - q;
            // notation: ^1D^i_j = <a^dag_i a_j> = d(j-1, i-1)
            const cplx dii = d(i - 1, i - 1), djj = d(j - 1, j - 1), dij = d(j - 1, i - 1), dji = d(i - 1, j - 1);
            const double real_expected = 0.5 * (dii + djj + dij + dji).real();
            const double imag_expected = 0.5 * (dii + djj + cplx(0, 1) * (dij - dji)).real();
            ASSERT_NEAR(bch_observable(f, i, j, kPi / 4, AlphaVariant::Real), real_expected, 1e-10);
            ASSERT_NEAR(bch_observable(f, i, j, kPi / 4, AlphaVariant::Imaginary), imag_expected, 1e-10);
        }
    }
}
