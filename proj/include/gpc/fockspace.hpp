#pragma once

// Three electrons in six spin orbitals, represented on the full 64-dim Fock
// space. This is an independent route to the occupation numbers: it never
// touches the qubit RDM code path.
//
// Orbitals are numbered 1..6; orbital 1 is the most significant bit of a
// 6-bit occupation string. A basis vector is a^dag_{p1} a^dag_{p2} a^dag_{p3} |vac>
// with p1 < p2 < p3, and a^dag_p carries the sign (-1)^(occupied orbitals < p).

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gpc/qstate.hpp"

namespace gpc {

inline constexpr int kOrbitals = 6;
inline constexpr int kFockDim = 64;

using FockVector = Eigen::Matrix<cplx, kFockDim, 1>;
using OneRDM6 = Eigen::Matrix<cplx, kOrbitals, kOrbitals>;

inline std::uint32_t orbital_bit(int orbital) { return 1u << (kOrbitals - orbital); }

class FermionState {
  public:
    /// Throws std::invalid_argument unless normalized (1e-10) and supported on
    /// three-electron strings only.
    explicit FermionState(const FockVector& amplitudes);

    const FockVector& amplitudes() const { return amplitudes_; }
    cplx amplitude(std::uint32_t occupation_string) const { return amplitudes_(occupation_string); }

  private:
    FockVector amplitudes_;
};

/// Matrices are built once and shared read-only. Throws std::out_of_range for orbital outside 1..6.
const Eigen::MatrixXd& creation_matrix(int orbital);
const Eigen::MatrixXd& annihilation_matrix(int orbital);

/// Qubit k (0-based) in |0> occupies orbital k+1, in |1> orbital 6-k, so the
/// pairs {1,6}, {2,5}, {3,4} each hold one electron.
FermionState map_qubit_to_fermion(const StateVector& state);

/// D(i,j) = <a^dag_j a_i> (0-based storage of 1-based orbitals).
OneRDM6 one_rdm(const FermionState& state);

/// Eigenvalues sorted descending.
std::array<double, 6> natural_occupations(const OneRDM6& rdm);

/// New orbital p is sum_a V(a,p) * old orbital a; V must be unitary.
FermionState rotate_orbitals(const FermionState& state, const Eigen::Matrix<cplx, 6, 6>& v);

struct ExcitationWeight {
    double singles = 0;
    double doubles = 0;
    double triples = 0;
    double total() const { return singles + doubles + triples; }
};

struct ExcitationWeights {
    std::array<ExcitationWeight, 3> by_orbital{};  // u = 4, 5, 6
    std::array<double, 6> natural_occupations{};  // n1 >= ... >= n6
    Eigen::Matrix<cplx, 6, 6> rotation;  // natural orbitals as columns
    /// Some natural occupations coincide within 1e-8, so the natural orbitals
    /// (and the split of n_u into ranks) depend on the recorded rotation.
    bool degenerate = false;
};

/// Decompose n4, n5, n6 into single, double and triple excitations from the
/// determinant of the three most occupied natural orbitals.
ExcitationWeights excitation_weights(const FermionState& state);

enum class AlphaVariant { Real, Imaginary };

/// alpha = a^dag_i a_j - a^dag_j a_i (Real) or i(a^dag_i a_j + a^dag_j a_i) (Imaginary).
Eigen::MatrixXcd alpha_operator(int i, int j, AlphaVariant variant);
/// n_i + n_j - 2 n_i n_j, written as in the closed-form exponential.
Eigen::MatrixXcd beta_operator(int i, int j);
Eigen::MatrixXcd number_operator(int i);

/// <psi| e^{-phi alpha} a^dag_i a_i e^{phi alpha} |psi>, evaluated through the
/// 64x64 matrix exponential and cross-checked against the closed form
/// D_ii + (sin 2phi / 2) <zeta> - sin^2(phi) (D_ii - D_jj). Throws std::logic_error
/// if the two disagree by more than 1e-10.
double bch_observable(const FermionState& state, int i, int j, double phi, AlphaVariant variant);

}  // namespace gpc
