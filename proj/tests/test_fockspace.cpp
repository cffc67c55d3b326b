#include "gpc/fockspace.hpp"

#include <gtest/gtest.h>

#include "gpc/expm.hpp"
#include "gpc/polytope.hpp"
#include "gpc/sampler.hpp"
#include "gpc/tomography.hpp"
#include "test_util.hpp"

using namespace gpc;
using namespace gpc::testing;

TEST(fockspace, creation_on_vacuum) {
    FockVector vac = FockVector::Zero();
    vac(0) = 1;
    const Eigen::VectorXd out = creation_matrix(1) * vac.real();
    EXPECT_EQ(out(0b100000), 1.0);
    EXPECT_EQ(out.cwiseAbs().sum(), 1.0);
    EXPECT_THROW(creation_matrix(7), std::out_of_range);
    EXPECT_THROW(annihilation_matrix(0), std::out_of_range);
}

TEST(fockspace, anticommutation_relations) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(kFockDim, kFockDim);
    for (int i = 1; i <= 6; ++i) {
        for (int j = 1; j <= 6; ++j) {
            const Eigen::MatrixXd ac = annihilation_matrix(i) * creation_matrix(j) + creation_matrix(j) * annihilation_matrix(i);
            if (i == j) {
                EXPECT_EQ((ac - id).cwiseAbs().maxCoeff(), 0.0);
            } else {
                EXPECT_EQ(ac.cwiseAbs().maxCoeff(), 0.0);
            }
            const Eigen::MatrixXd cc = creation_matrix(i) * creation_matrix(j) + creation_matrix(j) * creation_matrix(i);
            EXPECT_EQ(cc.cwiseAbs().maxCoeff(), 0.0);
        }
    }
    EXPECT_EQ((annihilation_matrix(3) - creation_matrix(3).transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(fockspace, qubit_map_examples) {
    const auto ref = map_qubit_to_fermion(StateVector(3));
    EXPECT_EQ(ref.amplitude(0b111000), cplx(1.0));
    const auto top = map_qubit_to_fermion(StateVector::basis_state(3, 7));
    EXPECT_NEAR(std::abs(top.amplitude(0b000111)), 1.0, 0.0);
    const auto g = map_qubit_to_fermion(ghz());
    EXPECT_NEAR(std::abs(g.amplitude(0b111000)), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(g.amplitude(0b000111)), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(map_qubit_to_fermion(StateVector(2)), std::invalid_argument);
}

TEST(fockspace, fermion_state_validation) {
    FockVector v = FockVector::Zero();
    v(0b110000) = 1;  // two electrons
    EXPECT_THROW(FermionState{v}, std::invalid_argument);
    v = FockVector::Zero();
    v(0b111000) = 2;
    EXPECT_THROW(FermionState{v}, std::invalid_argument);
}

TEST(fockspace, one_rdm_examples) {
    const auto ref = one_rdm(map_qubit_to_fermion(StateVector(3)));
    Eigen::Matrix<cplx, 6, 6> expected = Eigen::Matrix<cplx, 6, 6>::Zero();
    expected.diagonal() << 1, 1, 1, 0, 0, 0;
    EXPECT_LT((ref - expected).norm(), 1e-15);
    const auto g = one_rdm(map_qubit_to_fermion(ghz()));
    EXPECT_LT((g - 0.5 * Eigen::Matrix<cplx, 6, 6>::Identity()).norm(), 1e-15);
}

TEST(fockspace, rdm_index_convention_single_electron) {
    // One electron in (a|orbital 1> + b|orbital 2>): D(i,j) = <a^dag_j a_i> = c_i conj(c_j).
    // Embedded as a three-electron state with orbitals 3 and 4 always filled.
    const cplx a(0.6, 0), b(0, 0.8);
    FockVector v = FockVector::Zero();
    v(0b101100) = a;
    v(0b011100) = b;
    const auto d = one_rdm(FermionState(v));
    EXPECT_NEAR(std::abs(d(0, 1) - a * std::conj(b)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(d(1, 0) - b * std::conj(a)), 0.0, 1e-15);
}

TEST(fockspace, pauli_bounds_trace_and_hermiticity) {
    std::mt19937_64 rng(51);
    for (int k = 0; k < 200; ++k) {
        const auto d = one_rdm(map_qubit_to_fermion(random_state(rng)));
        EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(d.trace().real(), 3.0, 1e-10);
        const auto n = natural_occupations(d);
        double sum = 0;
        for (double x : n) {
            EXPECT_GE(x, -1e-10);
            EXPECT_LE(x, 1 + 1e-10);
            sum += x;
        }
        EXPECT_NEAR(sum, 3.0, 1e-10);
    }
}

TEST(fockspace, oracle_matches_qubit_occupations) {
    std::mt19937_64 rng(52);
    for (int k = 0; k < 200; ++k) {
        const auto s = random_state(rng);
        const auto n = natural_occupations(one_rdm(map_qubit_to_fermion(s)));
        EXPECT_NEAR(n[0] + n[5], 1.0, 1e-10);
        EXPECT_NEAR(n[1] + n[4], 1.0, 1e-10);
        EXPECT_NEAR(n[2] + n[3], 1.0, 1e-10);
        const auto q = occupations_exact(s);
        EXPECT_NEAR(n[3], q.n4, 1e-10);
        EXPECT_NEAR(n[4], q.n5, 1e-10);
        EXPECT_NEAR(n[5], q.n6, 1e-10);
        const std::vector<double> six(n.begin(), n.end());
        const auto report = check(six);
        EXPECT_NEAR(report.bd_slack, report.higuchi_slack, 1e-9);
    }
}

TEST(fockspace, orbital_rotation_preserves_spectrum) {
    std::mt19937_64 rng(53);
    const auto f = map_qubit_to_fermion(random_state(rng));
    Eigen::Matrix<cplx, 6, 6> m = Eigen::Matrix<cplx, 6, 6>::Random();
    Eigen::HouseholderQR<Eigen::Matrix<cplx, 6, 6>> qr(m);
    const Eigen::Matrix<cplx, 6, 6> v = qr.householderQ();
    const auto a = natural_occupations(one_rdm(f)), b = natural_occupations(one_rdm(rotate_orbitals(f, v)));
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)], 1e-12);
    // D transforms as V^dag D V
    const auto d0 = one_rdm(f), d1 = one_rdm(rotate_orbitals(f, v));
    EXPECT_LT((d1 - v.adjoint() * d0 * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(fockspace, excitation_weights_sum_to_occupations) {
    std::mt19937_64 rng(54);
    for (int k = 0; k < 100; ++k) {
        const auto w = excitation_weights(map_qubit_to_fermion(random_state(rng)));
        for (std::size_t u = 0; u < 3; ++u) {
            const auto& b = w.by_orbital[u];
            EXPECT_GE(b.singles, 0);
            EXPECT_GE(b.doubles, 0);
            EXPECT_GE(b.triples, 0);
            EXPECT_NEAR(b.total(), w.natural_occupations[3 + u], 1e-10);
        }
    }
}

TEST(fockspace, reference_determinant_has_no_excitations) {
    const auto w = excitation_weights(map_qubit_to_fermion(StateVector(3)));
    for (const auto& b : w.by_orbital) EXPECT_EQ(b.total(), 0.0);
    EXPECT_EQ(w.natural_occupations[3], 0.0);
}

TEST(fockspace, ghz_has_triple_excitation) {
    const auto w = excitation_weights(map_qubit_to_fermion(ghz()));
    EXPECT_TRUE(w.degenerate);
    EXPECT_NEAR(w.by_orbital[0].triples, 0.5, 1e-12);
}

TEST(fockspace, pinned_state_has_no_triples) {
    // First point of a 1-degree alg1 grid that is pinned to the Borland-Dennis
    // facet, correlated (n6 > 0.01) and free of degenerate natural orbitals.
    int checked = 0;
    for (int i = 1; i <= 45 && checked < 5; ++i) {
        for (int j = 1; j <= 45 && checked < 5; ++j) {
            for (int k = 1; k <= 45 && checked < 5; ++k) {
                const std::array<double, 3> d{double(i), double(j), double(k)};
                const auto r = ry_arguments_from_degrees(d, AngleConvention::Doubled);
                const auto o = fast_occupations(Algorithm::Alg1, r);
                if (std::abs(bd_slack(o)) >= 1e-8 || o.n6 < 0.01) continue;
                const auto w = excitation_weights(map_qubit_to_fermion(run_circuit(build_circuit(Algorithm::Alg1, r))));
                if (w.degenerate) continue;
                for (const auto& b : w.by_orbital) EXPECT_LT(b.triples, 1e-8);
                ++checked;
            }
        }
    }
    EXPECT_EQ(checked, 5);
}

TEST(fockspace, triples_invariant_on_degenerate_edge) {
    // Pinned points with n4 = n5 and n6 = 0 are degenerate; the triples weight
    // still vanishes whatever rotation is chosen inside the degenerate block.
    const auto r = ry_arguments_from_degrees(std::array<double, 3>{0, 0, 20}, AngleConvention::Doubled);
    const auto w = excitation_weights(map_qubit_to_fermion(run_circuit(build_circuit(Algorithm::Alg1, r))));
    EXPECT_TRUE(w.degenerate);
    for (const auto& b : w.by_orbital) EXPECT_LT(b.triples, 1e-12);
}

TEST(fockspace, beta_closed_form_exponential) {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(kFockDim, kFockDim);
    for (int k = 0; k < 20; ++k) {
        const double phi = u(rng);
        for (int q = 0; q < 3; ++q) {
            const int i = q + 1, j = 6 - q;
            for (auto variant : {AlphaVariant::Real, AlphaVariant::Imaginary}) {
                const Eigen::MatrixXcd a = alpha_operator(i, j, variant);
                const Eigen::MatrixXcd b = beta_operator(i, j);
                const Eigen::MatrixXcd closed = b * std::cos(phi) + a * std::sin(phi) + (id - b);
                ASSERT_LT((expm(phi * a) - closed).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(fockspace, bch_observable_limits) {
    std::mt19937_64 rng(56);
    const auto f = map_qubit_to_fermion(random_state(rng));
    const auto d = one_rdm(f);
    EXPECT_NEAR(bch_observable(f, 2, 5, 0.0, AlphaVariant::Real), d(1, 1).real(), 1e-14);
    EXPECT_THROW(bch_observable(f, 2, 2, 0.1, AlphaVariant::Real), std::invalid_argument);
    // off-pair orbitals work too
    EXPECT_NO_THROW(bch_observable(f, 1, 2, 0.7, AlphaVariant::Imaginary));
}

TEST(fockspace, expm_basics) {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(4, 4);
    EXPECT_LT((expm(z) - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-15);
    Eigen::MatrixXcd gen(2, 2);
    gen << 0, -3.0, 3.0, 0;  // rotation generator, exp = [[cos, -sin],[sin, cos]]
    const Eigen::MatrixXcd r = expm(gen);
    EXPECT_NEAR(r(0, 0).real(), std::cos(3.0), 1e-13);
    EXPECT_NEAR(r(1, 0).real(), std::sin(3.0), 1e-13);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(2, 2);
    diag(0, 0) = 20;
    diag(1, 1) = cplx(0, 1);
    const Eigen::MatrixXcd e = expm(diag);
    EXPECT_NEAR(std::abs(e(0, 0) - std::exp(20.0)) / std::exp(20.0), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e(1, 1) - std::exp(cplx(0, 1))), 0.0, 1e-14);
}
