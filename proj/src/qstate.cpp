#include "gpc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpc {

namespace {

constexpr double kNormTol = 1e-10;

void check_qubit(int qubit, int n_qubits) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(n_qubits) + " qubits");
    }
}

bool is_unitary(const Matrix2c& u, double tol) {
    return ((u.adjoint() * u) - Matrix2c::Identity()).cwiseAbs().maxCoeff() < tol;
}

// In-place single-qubit gate on a 2^n amplitude vector.
void apply_1q(std::vector<cplx>& amps, int n_qubits, int qubit, const Matrix2c& u) {
    const std::uint64_t mask = qubit_mask(n_qubits, qubit);
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const cplx a0 = amps[i];
        const cplx a1 = amps[i | mask];
        amps[i] = u00 * a0 + u01 * a1;
        amps[i | mask] = u10 * a0 + u11 * a1;
    }
}

void apply_cnot(std::vector<cplx>& amps, int n_qubits, int control, int target) {
    const std::uint64_t cm = qubit_mask(n_qubits, control);
    const std::uint64_t tm = qubit_mask(n_qubits, target);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & cm) && !(i & tm)) std::swap(amps[i], amps[i | tm]);
    }
}

void apply_in_place(std::vector<cplx>& amps, int n_qubits, const Gate& gate) {
    check_qubit(gate.target, n_qubits);
    if (gate.kind == GateKind::CNOT) {
        check_qubit(*gate.control, n_qubits);
        apply_cnot(amps, n_qubits, *gate.control, gate.target);
    } else {
        apply_1q(amps, n_qubits, gate.target, gate.single_qubit_matrix());
    }
}

}  // namespace

std::string bitstring(std::uint64_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if (index & qubit_mask(n_qubits, q)) s[static_cast<std::size_t>(q)] = '1';
    }
    return s;
}

// ---- StateVector ----------------------------------------------------------

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("n_qubits must be in [1, 20]");
    amplitudes_.assign(std::size_t{1} << n_qubits, cplx{0.0});
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("n_qubits must be in [1, 20]");
    if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
        throw std::invalid_argument("amplitude vector length must be 2^n_qubits");
    }
    if (std::abs(norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

StateVector::StateVector(Unchecked, int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes_) acc += std::norm(a);
    return std::sqrt(acc);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
    return p;
}

// ---- Gates ----------------------------------------------------------------

std::string to_string(GateKind kind) {
    switch (kind) {
        case GateKind::Ry: return "ry";
        case GateKind::CNOT: return "cx";
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::SDagger: return "sdg";
        case GateKind::Unitary1Q: return "u";
    }
    return "?";
}

Matrix2c ry_matrix(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Matrix2c m;
    m << c, -s, s, c;
    return m;
}

Matrix2c hadamard_matrix() {
    const double r = std::numbers::sqrt2 / 2;
    Matrix2c m;
    m << r, r, r, -r;
    return m;
}

Gate Gate::ry(int qubit, double theta) {
    Gate g;
    g.kind = GateKind::Ry;
    g.target = qubit;
    g.angle = theta;
    return g;
}

Gate Gate::cnot(int control, int target) {
    if (control == target) throw std::invalid_argument("CNOT control equals target");
    Gate g;
    g.kind = GateKind::CNOT;
    g.control = control;
    g.target = target;
    return g;
}

Gate Gate::h(int qubit) { Gate g; g.kind = GateKind::H; g.target = qubit; return g; }
Gate Gate::x(int qubit) { Gate g; g.kind = GateKind::X; g.target = qubit; return g; }
Gate Gate::z(int qubit) { Gate g; g.kind = GateKind::Z; g.target = qubit; return g; }
Gate Gate::sdg(int qubit) { Gate g; g.kind = GateKind::SDagger; g.target = qubit; return g; }

Gate Gate::unitary(int qubit, const Matrix2c& u) {
    if (!is_unitary(u, 1e-12)) throw std::invalid_argument("Unitary1Q matrix is not unitary");
    Gate g;
    g.kind = GateKind::Unitary1Q;
    g.target = qubit;
    g.matrix = u;
    return g;
}

Matrix2c Gate::single_qubit_matrix() const {
    Matrix2c m;
    switch (kind) {
        case GateKind::Ry: return ry_matrix(angle);
        case GateKind::H: return hadamard_matrix();
        case GateKind::X: m << 0, 1, 1, 0; return m;
        case GateKind::Z: m << 1, 0, 0, -1; return m;
        case GateKind::SDagger: m << 1, 0, 0, cplx(0, -1); return m;
        case GateKind::Unitary1Q:
            if (!is_unitary(matrix, 1e-12)) throw std::invalid_argument("Unitary1Q matrix is not unitary");
            return matrix;
        case GateKind::CNOT: break;
    }
    throw std::logic_error("CNOT has no single-qubit matrix");
}

// ---- Circuit --------------------------------------------------------------

Circuit& Circuit::add(const Gate& g) {
    gates.push_back(g);
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_qubits != n_qubits) throw std::invalid_argument("circuit width mismatch");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    return *this;
}

void Circuit::validate() const {
    for (const auto& g : gates) {
        check_qubit(g.target, n_qubits);
        if (g.kind == GateKind::CNOT) {
            if (!g.control) throw std::invalid_argument("CNOT without control");
            check_qubit(*g.control, n_qubits);
            if (*g.control == g.target) throw std::invalid_argument("CNOT control equals target");
        }
    }
}

Eigen::MatrixXcd gate_unitary(const Gate& gate, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<cplx> e(dim, 0.0);
        e[col] = 1.0;
        apply_in_place(e, n_qubits, gate);
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = e[row];
    }
    return u;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
    circuit.validate();
    const std::size_t dim = std::size_t{1} << circuit.n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : circuit.gates) u = gate_unitary(g, circuit.n_qubits) * u;
    return u;
}

StateVector apply_gate(const StateVector& state, const Gate& gate) {
    std::vector<cplx> amps(state.amplitudes_);
    apply_in_place(amps, state.n_qubits(), gate);
    return StateVector(StateVector::Unchecked{}, state.n_qubits(), std::move(amps));
}

StateVector run_circuit(const Circuit& circuit, const StateVector& initial) {
    if (circuit.n_qubits != initial.n_qubits()) {
        throw std::invalid_argument("circuit and state qubit counts differ");
    }
    circuit.validate();
    std::vector<cplx> amps(initial.amplitudes_);
    for (const auto& g : circuit.gates) apply_in_place(amps, circuit.n_qubits, g);
    return StateVector(StateVector::Unchecked{}, circuit.n_qubits, std::move(amps));
}

// ---- Sampling -------------------------------------------------------------

CountsTable::CountsTable(int n, std::uint64_t total_shots, std::vector<std::uint64_t> c)
    : n_qubits(n), shots(total_shots), counts(std::move(c)) {
    if (counts.size() != (std::size_t{1} << n)) throw std::invalid_argument("counts length must be 2^n");
    std::uint64_t sum = 0;
    for (auto v : counts) sum += v;
    if (sum != shots) throw std::invalid_argument("counts do not sum to shots");
}

std::uint64_t CountsTable::count(const std::string& bits) const {
    if (static_cast<int>(bits.size()) != n_qubits) throw std::invalid_argument("bitstring width mismatch");
    std::uint64_t idx = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("bitstring must contain only 0/1");
        idx = (idx << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return counts[idx];
}

double CountsTable::frequency_zero(int qubit) const {
    check_qubit(qubit, n_qubits);
    if (shots == 0) throw std::invalid_argument("empty counts table");
    const std::uint64_t mask = qubit_mask(n_qubits, qubit);
    std::uint64_t zeros = 0;
    for (std::uint64_t i = 0; i < counts.size(); ++i) {
        if (!(i & mask)) zeros += counts[i];
    }
    return static_cast<double>(zeros) / static_cast<double>(shots);
}

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probabilities,
                                              std::uint64_t shots, std::mt19937_64& rng) {
    // Sequential conditional binomials.
    std::vector<std::uint64_t> out(probabilities.size(), 0);
    double remaining_p = 0.0;
    for (double p : probabilities) remaining_p += std::max(p, 0.0);
    std::uint64_t remaining = shots;
    for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
        const double p = std::max(probabilities[i], 0.0);
        if (i + 1 == probabilities.size() || remaining_p <= 0.0) {
            out[i] = remaining;
            remaining = 0;
            break;
        }
        const double q = std::clamp(p / remaining_p, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> bin(remaining, q);
        const std::uint64_t k = bin(rng);
        out[i] = k;
        remaining -= k;
        remaining_p -= p;
    }
    return out;
}

CountsTable sample_counts(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::mt19937_64 rng(seed);
    const auto probs = state.probabilities();
    return CountsTable(state.n_qubits(), shots, sample_multinomial(probs, shots, rng));
}

// ---- Reduced density matrices -----------------------------------------------

Matrix2c OneQubitRDM::matrix() const {
    Matrix2c m;
    m << d00, d01, std::conj(d01), d11;
    return m;
}

std::pair<double, double> OneQubitRDM::eigenvalues() const {
    const double mean = 0.5 * (d00 + d11);
    const double half_gap = 0.5 * (d00 - d11);
    const double r = std::sqrt(half_gap * half_gap + std::norm(d01));
    return {mean - r, mean + r};
}

OneQubitRDM reduced_1q_rdm(const StateVector& state, int qubit) {
    check_qubit(qubit, state.n_qubits());
    const std::uint64_t mask = qubit_mask(state.n_qubits(), qubit);
    OneQubitRDM r{0.0, 0.0, 0.0};
    const auto a = state.amplitudes();
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        if (i & mask) continue;
        r.d00 += std::norm(a[i]);
        r.d11 += std::norm(a[i | mask]);
        r.d01 += a[i] * std::conj(a[i | mask]);
    }
    return r;
}

// ---- Density matrices -------------------------------------------------------

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    rho_ = Eigen::MatrixXcd::Zero(dim, dim);
    rho_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd rho) : n_qubits_(n_qubits), rho_(std::move(rho)) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    if (rho_.rows() != dim || rho_.cols() != dim) throw std::invalid_argument("density matrix must be 2^n x 2^n");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(trace() - 1.0) > 1e-10) throw std::invalid_argument("density matrix trace is not 1");
}

std::vector<double> DensityMatrix::probabilities() const {
    std::vector<double> p(static_cast<std::size_t>(rho_.rows()));
    for (Eigen::Index i = 0; i < rho_.rows(); ++i) p[static_cast<std::size_t>(i)] = rho_(i, i).real();
    return p;
}

DensityMatrix to_density_matrix(const StateVector& state) {
    Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(), static_cast<Eigen::Index>(state.dim()));
    return DensityMatrix(state.n_qubits(), v * v.adjoint());
}

DensityMatrix apply_gate(const DensityMatrix& dm, const Gate& gate) {
    const Eigen::MatrixXcd u = gate_unitary(gate, dm.n_qubits());
    Eigen::MatrixXcd rho = u * dm.matrix() * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(dm.n_qubits(), std::move(rho));
}

DensityMatrix apply_channel(const DensityMatrix& dm, std::span<const Eigen::MatrixXcd> kraus_ops) {
    const auto dim = dm.matrix().rows();
    Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& k : kraus_ops) {
        if (k.rows() != dim || k.cols() != dim) throw std::invalid_argument("Kraus operator dimension mismatch");
        completeness += k.adjoint() * k;
        out += k * dm.matrix() * k.adjoint();
    }
    if ((completeness - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("Kraus operators are not trace preserving");
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(dm.n_qubits(), std::move(out));
}

OneQubitRDM reduced_1q_rdm(const DensityMatrix& dm, int qubit) {
    check_qubit(qubit, dm.n_qubits());
    const std::uint64_t mask = qubit_mask(dm.n_qubits(), qubit);
    const auto& rho = dm.matrix();
    OneQubitRDM r{0.0, 0.0, 0.0};
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(rho.rows()); ++i) {
        if (i & mask) continue;
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(i | mask);
        r.d00 += rho(a, a).real();
        r.d11 += rho(b, b).real();
        r.d01 += rho(a, b);
    }
    return r;
}

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, std::span<const int> qubits, int n_qubits) {
    const int k = static_cast<int>(qubits.size());
    if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
        throw std::invalid_argument("operator size does not match qubit list");
    }
    for (int q : qubits) check_qubit(q, n_qubits);
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    auto local_index = [&](std::uint64_t full) {
        std::uint64_t idx = 0;
        for (int q : qubits) idx = (idx << 1) | static_cast<std::uint64_t>((full & qubit_mask(n_qubits, q)) != 0);
        return idx;
    };
    std::uint64_t support = 0;
    for (int q : qubits) support |= qubit_mask(n_qubits, q);
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            if ((r & ~support) != (c & ~support)) continue;
            full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                op(static_cast<Eigen::Index>(local_index(r)), static_cast<Eigen::Index>(local_index(c)));
        }
    }
    return full;
}

}  // namespace gpc
