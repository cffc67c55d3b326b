#include "gpc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gpc/seeds.hpp"

namespace gpc {

OccupationTriple OccupationTriple::sorted(double a, double b, double c) {
    std::array<double, 3> v{a, b, c};
    std::sort(v.begin(), v.end(), std::greater<>());
    return {v[0], v[1], v[2]};
}

double OccupationTriple::distance(const OccupationTriple& o) const {
    return std::sqrt((n4 - o.n4) * (n4 - o.n4) + (n5 - o.n5) * (n5 - o.n5) + (n6 - o.n6) * (n6 - o.n6));
}

const char* to_string(Basis b) {
    switch (b) {
        case Basis::Z: return "Z";
        case Basis::X: return "X";
        case Basis::Y: return "Y";
    }
    return "?";
}

std::vector<Gate> MeasurementSetting::pre_rotation(int n_qubits) const {
    std::vector<Gate> gates;
    for (int q = 0; q < n_qubits; ++q) {
        if (basis == Basis::Y) gates.push_back(Gate::sdg(q));
        if (basis != Basis::Z) gates.push_back(Gate::h(q));
    }
    return gates;
}

Matrix2c build_rotation_unitary(double phi, int gamma_sign) {
    if (gamma_sign != 1 && gamma_sign != -1) throw std::invalid_argument("gamma_sign must be +1 or -1");
    const double c = std::cos(phi), s = std::sin(phi);
    const double g = gamma_sign;
    Matrix2c u;
    u << c, -g * s, g * s, c;
    return u;
}

OneQubitRDM rdm_from_frequencies(double fz0, double fx0, double fy0) {
    return OneQubitRDM{fz0, 1.0 - fz0, cplx(fx0 - 0.5, 0.5 - fy0)};
}

OneQubitRDM estimate_rdm(const CountsTable& z, const CountsTable& x, const CountsTable& y, int qubit) {
    if (z.shots == 0 || x.shots == 0 || y.shots == 0) throw std::invalid_argument("empty counts table");
    if (z.shots != x.shots || z.shots != y.shots) {
        throw std::invalid_argument("shot totals differ across measurement settings");
    }
    if (z.n_qubits != x.n_qubits || z.n_qubits != y.n_qubits) {
        throw std::invalid_argument("qubit counts differ across measurement settings");
    }
    return rdm_from_frequencies(z.frequency_zero(qubit), x.frequency_zero(qubit), y.frequency_zero(qubit));
}

ClampedOccupations occupations_from_rdms(std::span<const OneQubitRDM> rdms) {
    if (rdms.size() != 3) throw std::invalid_argument("occupation triple needs three qubit RDMs");
    ClampedOccupations out;
    std::array<double, 3> v{};
    for (std::size_t q = 0; q < 3; ++q) {
        double e = rdms[q].min_eigenvalue();
        if (e < 0.0 || e > 1.0) {
            ++out.clamp_events;
            e = std::clamp(e, 0.0, 1.0);
        }
        v[q] = e;
    }
    out.occupations = OccupationTriple::sorted(v[0], v[1], v[2]);
    return out;
}

OccupationTriple occupations_exact(const StateVector& state) {
    if (state.n_qubits() != 3) throw std::invalid_argument("occupations need a 3-qubit state");
    const std::array rdms{reduced_1q_rdm(state, 0), reduced_1q_rdm(state, 1), reduced_1q_rdm(state, 2)};
    return OccupationTriple::sorted(rdms[0].min_eigenvalue(), rdms[1].min_eigenvalue(), rdms[2].min_eigenvalue());
}

namespace {

StateVector rotate_for(const StateVector& state, Basis b) {
    StateVector s = state;
    for (const auto& g : MeasurementSetting{b}.pre_rotation(state.n_qubits())) s = apply_gate(s, g);
    return s;
}

double marginal_zero(std::span<const double> probs, int n_qubits, int qubit) {
    const std::uint64_t mask = qubit_mask(n_qubits, qubit);
    double p = 0.0;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
        if (!(i & mask)) p += probs[i];
    }
    return p;
}

MeasuredOccupations finish(std::array<CountsTable, 3> counts) {
    MeasuredOccupations m;
    for (int q = 0; q < 3; ++q) {
        m.rdms[static_cast<std::size_t>(q)] = estimate_rdm(counts[0], counts[1], counts[2], q);
    }
    const auto c = occupations_from_rdms(m.rdms);
    m.occupations = c.occupations;
    m.clamp_events = c.clamp_events;
    m.counts = std::move(counts);
    return m;
}

}  // namespace

OccupationTriple occupations_analytic(const StateVector& state) {
    if (state.n_qubits() != 3) throw std::invalid_argument("occupations need a 3-qubit state");
    std::array<std::vector<double>, 3> probs;
    for (std::size_t k = 0; k < 3; ++k) probs[k] = rotate_for(state, kAllBases[k]).probabilities();
    std::array<OneQubitRDM, 3> rdms;
    for (int q = 0; q < 3; ++q) {
        rdms[static_cast<std::size_t>(q)] =
            rdm_from_frequencies(marginal_zero(probs[0], 3, q), marginal_zero(probs[1], 3, q),
                                 marginal_zero(probs[2], 3, q));
    }
    return occupations_from_rdms(rdms).occupations;
}

MeasuredOccupations occupations_measured(const StateVector& state, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel* noise) {
    if (state.n_qubits() != 3) throw std::invalid_argument("occupations need a 3-qubit state");
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    if (noise && !noise->is_identity()) {
        return occupations_measured(to_density_matrix(state), shots, seed, *noise);
    }
    std::array<CountsTable, 3> counts;
    for (std::size_t k = 0; k < 3; ++k) {
        counts[k] = sample_counts(rotate_for(state, kAllBases[k]), shots, derive_seed(seed, {k}));
    }
    return finish(std::move(counts));
}

MeasuredOccupations occupations_measured(const DensityMatrix& prepared, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel& noise) {
    if (prepared.n_qubits() != 3) throw std::invalid_argument("occupations need a 3-qubit state");
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::array<CountsTable, 3> counts;
    for (std::size_t k = 0; k < 3; ++k) {
        Circuit rot(3);
        for (const auto& g : MeasurementSetting{kAllBases[k]}.pre_rotation(3)) rot.add(g);
        const DensityMatrix rotated = evolve_noisy(rot, prepared, noise);
        std::mt19937_64 rng(derive_seed(seed, {k}));
        counts[k] = sample_with_readout(rotated, noise, shots, rng);
    }
    return finish(std::move(counts));
}

MeasuredOccupations occupations_measured(const Circuit& preparation, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel* noise) {
    if (noise && !noise->is_identity()) {
        const DensityMatrix dm = evolve_noisy(preparation, DensityMatrix(preparation.n_qubits), *noise);
        return occupations_measured(dm, shots, seed, *noise);
    }
    return occupations_measured(run_circuit(preparation), shots, seed, nullptr);
}

}  // namespace gpc
