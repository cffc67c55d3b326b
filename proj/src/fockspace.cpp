#include "gpc/fockspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gpc/expm.hpp"

namespace gpc {

namespace {

void check_orbital(int orbital) {
    if (orbital < 1 || orbital > kOrbitals) {
        throw std::out_of_range("orbital " + std::to_string(orbital) + " outside 1..6");
    }
}

std::array<Eigen::MatrixXd, kOrbitals> build_creation() {
    std::array<Eigen::MatrixXd, kOrbitals> ops;
    for (int p = 1; p <= kOrbitals; ++p) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kFockDim, kFockDim);
        const std::uint32_t bit = orbital_bit(p);
        const std::uint32_t lower_orbitals = ~((bit << 1) - 1) & 0x3Fu;  // more significant bits
        for (std::uint32_t n = 0; n < kFockDim; ++n) {
            if (n & bit) continue;
            const int sign = (std::popcount(n & lower_orbitals) % 2) ? -1 : 1;
            m(n | bit, n) = sign;
        }
        ops[static_cast<std::size_t>(p - 1)] = std::move(m);
    }
    return ops;
}

const std::array<Eigen::MatrixXd, kOrbitals>& creation_ops() {
    static const auto ops = build_creation();
    return ops;
}

const std::array<Eigen::MatrixXd, kOrbitals>& annihilation_ops() {
    static const auto ops = [] {
        std::array<Eigen::MatrixXd, kOrbitals> a;
        for (std::size_t p = 0; p < kOrbitals; ++p) a[p] = creation_ops()[p].transpose();
        return a;
    }();
    return ops;
}

Eigen::MatrixXcd c(int p) { return creation_matrix(p).cast<cplx>(); }
Eigen::MatrixXcd a(int p) { return annihilation_matrix(p).cast<cplx>(); }

cplx expectation(const FockVector& psi, const Eigen::MatrixXcd& op) { return psi.dot(op * psi); }

}  // namespace

FermionState::FermionState(const FockVector& amplitudes) : amplitudes_(amplitudes) {
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) throw std::invalid_argument("fermion state is not normalized");
    for (std::uint32_t n = 0; n < kFockDim; ++n) {
        if (std::popcount(n) != 3 && std::abs(amplitudes_(n)) > 1e-12) {
            throw std::invalid_argument("fermion state leaves the three-electron sector");
        }
    }
}

const Eigen::MatrixXd& creation_matrix(int orbital) {
    check_orbital(orbital);
    return creation_ops()[static_cast<std::size_t>(orbital - 1)];
}

const Eigen::MatrixXd& annihilation_matrix(int orbital) {
    check_orbital(orbital);
    return annihilation_ops()[static_cast<std::size_t>(orbital - 1)];
}

FermionState map_qubit_to_fermion(const StateVector& state) {
    if (state.n_qubits() != 3) throw std::invalid_argument("qubit-to-fermion map needs exactly 3 qubits");
    FockVector f = FockVector::Zero();
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        std::uint32_t occ = 0;
        for (int k = 0; k < 3; ++k) {
            const bool one = (idx & qubit_mask(3, k)) != 0;
            occ |= orbital_bit(one ? 6 - k : k + 1);
        }
        f(occ) = state[idx];
    }
    return FermionState(f);
}

OneRDM6 one_rdm(const FermionState& state) {
    const FockVector& psi = state.amplitudes();
    OneRDM6 d;
    for (int i = 1; i <= kOrbitals; ++i) {
        const FockVector ai = annihilation_matrix(i).cast<cplx>() * psi;
        for (int j = 1; j <= kOrbitals; ++j) {
            // <psi| a^dag_j a_i |psi> = (a_j psi)^dag (a_i psi)
            const FockVector aj = annihilation_matrix(j).cast<cplx>() * psi;
            d(i - 1, j - 1) = aj.dot(ai);
        }
    }
    return d;
}

std::array<double, 6> natural_occupations(const OneRDM6& rdm) {
    Eigen::SelfAdjointEigenSolver<OneRDM6> es(rdm, Eigen::EigenvaluesOnly);
    std::array<double, 6> v{};
    for (int k = 0; k < 6; ++k) v[static_cast<std::size_t>(k)] = es.eigenvalues()(5 - k);
    return v;
}

FermionState rotate_orbitals(const FermionState& state, const Eigen::Matrix<cplx, 6, 6>& v) {
    if (((v.adjoint() * v) - Eigen::Matrix<cplx, 6, 6>::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("orbital rotation is not unitary");
    }
    auto orbitals_of = [](std::uint32_t n) {
        std::array<int, 3> o{};
        int k = 0;
        for (int p = 1; p <= kOrbitals; ++p) {
            if (n & orbital_bit(p)) o[static_cast<std::size_t>(k++)] = p - 1;
        }
        return o;
    };
    const Eigen::Matrix<cplx, 6, 6> vc = v.conjugate();
    FockVector out = FockVector::Zero();
    for (std::uint32_t old = 0; old < kFockDim; ++old) {
        if (std::popcount(old) != 3) continue;
        const cplx amp = state.amplitude(old);
        if (amp == cplx(0.0)) continue;
        const auto rows = orbitals_of(old);
        for (std::uint32_t fresh = 0; fresh < kFockDim; ++fresh) {
            if (std::popcount(fresh) != 3) continue;
            const auto cols = orbitals_of(fresh);
            Eigen::Matrix3cd minor;
            for (int r = 0; r < 3; ++r) {
                for (int col = 0; col < 3; ++col) {
                    minor(r, col) = vc(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(col)]);
                }
            }
            out(fresh) += amp * minor.determinant();
        }
    }
    return FermionState(out);
}

ExcitationWeights excitation_weights(const FermionState& state) {
    const OneRDM6 d = one_rdm(state);
    ExcitationWeights w;
    std::array<double, 6> values{};

    const double offdiag = (d - OneRDM6(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
    if (offdiag < 1e-12) {
        // Already natural: keep the orbital order, only sort by occupation (stable on ties).
        std::array<int, 6> order{};
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int x, int y) { return d(x, x).real() > d(y, y).real(); });
        w.rotation.setZero();
        for (int k = 0; k < 6; ++k) {
            w.rotation(order[static_cast<std::size_t>(k)], k) = 1.0;
            values[static_cast<std::size_t>(k)] = d(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        }
    } else {
        Eigen::SelfAdjointEigenSolver<OneRDM6> es(d);
        for (int k = 0; k < 6; ++k) {
            w.rotation.col(k) = es.eigenvectors().col(5 - k);
            values[static_cast<std::size_t>(k)] = es.eigenvalues()(5 - k);
        }
    }
    w.natural_occupations = values;
    for (std::size_t k = 0; k + 1 < 6; ++k) {
        if (std::abs(values[k] - values[k + 1]) < 1e-8) w.degenerate = true;
    }

    const FermionState natural = rotate_orbitals(state, w.rotation);
    const std::uint32_t virtuals = orbital_bit(4) | orbital_bit(5) | orbital_bit(6);
    for (std::uint32_t n = 0; n < kFockDim; ++n) {
        if (std::popcount(n) != 3) continue;
        const double weight = std::norm(natural.amplitude(n));
        const int rank = std::popcount(n & virtuals);
        for (int u = 4; u <= 6; ++u) {
            if (!(n & orbital_bit(u))) continue;
            auto& slot = w.by_orbital[static_cast<std::size_t>(u - 4)];
            if (rank == 1) slot.singles += weight;
            else if (rank == 2) slot.doubles += weight;
            else slot.triples += weight;
        }
    }
    return w;
}

Eigen::MatrixXcd alpha_operator(int i, int j, AlphaVariant variant) {
    if (i == j) throw std::invalid_argument("alpha operator needs two distinct orbitals");
    if (variant == AlphaVariant::Real) return c(i) * a(j) - c(j) * a(i);
    return cplx(0, 1) * (c(i) * a(j) + c(j) * a(i));
}

Eigen::MatrixXcd beta_operator(int i, int j) {
    if (i == j) throw std::invalid_argument("beta operator needs two distinct orbitals");
    return c(i) * a(i) + c(j) * a(j) + c(i) * c(j) * a(i) * a(j) + c(j) * c(i) * a(j) * a(i);
}

Eigen::MatrixXcd number_operator(int i) { return c(i) * a(i); }

double bch_observable(const FermionState& state, int i, int j, double phi, AlphaVariant variant) {
    check_orbital(i);
    check_orbital(j);
    if (i == j) throw std::invalid_argument("bch_observable needs i != j");
    const FockVector& psi = state.amplitudes();
    const Eigen::MatrixXcd alpha = alpha_operator(i, j, variant);
    const Eigen::MatrixXcd forward = expm(phi * alpha);
    const Eigen::MatrixXcd backward = expm(-phi * alpha);
    const cplx direct = expectation(psi, backward * number_operator(i) * forward);

    const OneRDM6 d = one_rdm(state);
    const cplx dii = d(i - 1, i - 1), djj = d(j - 1, j - 1);
    const cplx ij = d(j - 1, i - 1);  // <a^dag_i a_j>
    const cplx ji = d(i - 1, j - 1);  // <a^dag_j a_i>
    const cplx zeta = variant == AlphaVariant::Real ? ij + ji : cplx(0, 1) * (ij - ji);
    const cplx closed = dii + 0.5 * std::sin(2 * phi) * zeta - std::sin(phi) * std::sin(phi) * (dii - djj);

    if (std::abs(direct - closed) > 1e-10 || std::abs(direct.imag()) > 1e-10) {
        throw std::logic_error("BCH observable: matrix exponential and closed form disagree");
    }
    return direct.real();
}

}  // namespace gpc
