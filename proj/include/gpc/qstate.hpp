#pragma once

// Exact simulation of small qubit registers.
//
// Bit ordering: qubit 0 is the most significant bit of a basis-state index,
// so for three qubits |q0 q1 q2> has index 4*q0 + 2*q1 + q2. Every module
// (tomography, fock-space mapping, noise) relies on this single convention.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gpc {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

inline std::uint64_t qubit_mask(int n_qubits, int qubit) {
    return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

struct Gate;
struct Circuit;

/// Bitstring of a basis index, qubit 0 first.
std::string bitstring(std::uint64_t index, int n_qubits);

class StateVector {
  public:
    /// |0...0> on n_qubits.
    explicit StateVector(int n_qubits);
    /// Throws std::invalid_argument unless the length is 2^n and the norm is 1 within 1e-10.
    StateVector(int n_qubits, std::vector<cplx> amplitudes);

    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    cplx operator[](std::size_t i) const { return amplitudes_[i]; }
    double norm() const;
    std::vector<double> probabilities() const;

  private:
    friend StateVector apply_gate(const StateVector&, const Gate&);
    friend StateVector run_circuit(const Circuit&, const StateVector&);
    struct Unchecked {};
    StateVector(Unchecked, int n_qubits, std::vector<cplx> amplitudes);

    int n_qubits_;
    std::vector<cplx> amplitudes_;
};

enum class GateKind { Ry, CNOT, H, X, Z, SDagger, Unitary1Q };

std::string to_string(GateKind kind);

struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    std::optional<int> control;
    double angle = 0.0;  // radians, Ry only
    Matrix2c matrix = Matrix2c::Identity();  // Unitary1Q only

    static Gate ry(int qubit, double theta);
    static Gate cnot(int control, int target);
    static Gate h(int qubit);
    static Gate x(int qubit);
    static Gate z(int qubit);
    static Gate sdg(int qubit);
    /// Throws std::invalid_argument if the matrix is not unitary within 1e-12.
    static Gate unitary(int qubit, const Matrix2c& u);

    bool is_two_qubit() const { return kind == GateKind::CNOT; }
    /// 2x2 matrix of a single-qubit gate; throws std::logic_error for CNOT.
    Matrix2c single_qubit_matrix() const;
};

/// Ry(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
Matrix2c ry_matrix(double theta);
Matrix2c hadamard_matrix();

struct Circuit {
    int n_qubits = 3;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n) {}

    Circuit& add(const Gate& g);
    Circuit& append(const Circuit& other);
    /// Throws std::out_of_range on bad qubit indices, std::invalid_argument on control == target.
    void validate() const;
};

/// Full 2^n x 2^n unitary of a circuit (tests and small identities only).
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);
Eigen::MatrixXcd gate_unitary(const Gate& gate, int n_qubits);

StateVector apply_gate(const StateVector& state, const Gate& gate);
StateVector run_circuit(const Circuit& circuit, const StateVector& initial);
inline StateVector run_circuit(const Circuit& circuit) {
    return run_circuit(circuit, StateVector(circuit.n_qubits));
}

struct CountsTable {
    int n_qubits = 0;
    std::uint64_t shots = 0;
    std::vector<std::uint64_t> counts;  // indexed by basis index

    CountsTable() = default;
    CountsTable(int n, std::uint64_t total_shots, std::vector<std::uint64_t> c);

    std::uint64_t count(const std::string& bits) const;
    /// Fraction of shots in which `qubit` read 0.
    double frequency_zero(int qubit) const;
};

/// Multinomial draw of `shots` outcomes from a probability vector.
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities,
                                              std::uint64_t shots, std::mt19937_64& rng);

CountsTable sample_counts(const StateVector& state, std::uint64_t shots, std::uint64_t seed);

struct OneQubitRDM {
    double d00 = 1.0;
    double d11 = 0.0;
    cplx d01 = 0.0;  // <0|rho|1>; d10 = conj(d01)

    Matrix2c matrix() const;
    /// Closed-form eigenvalues, ascending: 1/2*(d00+d11) -+ sqrt((d00-d11)^2/4 + |d01|^2).
    std::pair<double, double> eigenvalues() const;
    double min_eigenvalue() const { return eigenvalues().first; }
};

OneQubitRDM reduced_1q_rdm(const StateVector& state, int qubit);

class DensityMatrix {
  public:
    explicit DensityMatrix(int n_qubits);  // |0..0><0..0|
    DensityMatrix(int n_qubits, Eigen::MatrixXcd rho);

    int n_qubits() const { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }
    double trace() const { return rho_.trace().real(); }
    std::vector<double> probabilities() const;

  private:
    int n_qubits_;
    Eigen::MatrixXcd rho_;
};

DensityMatrix to_density_matrix(const StateVector& state);
DensityMatrix apply_gate(const DensityMatrix& dm, const Gate& gate);
/// Kraus operators act on the full register. Throws std::invalid_argument unless
/// sum K^dagger K = I within 1e-10.
DensityMatrix apply_channel(const DensityMatrix& dm, std::span<const Eigen::MatrixXcd> kraus_ops);
OneQubitRDM reduced_1q_rdm(const DensityMatrix& dm, int qubit);

/// Embed an operator on `qubits` (listed most significant first) into the n-qubit space.
Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, std::span<const int> qubits,
                                int n_qubits);

}  // namespace gpc
