#pragma once

// Linear-inversion tomography of single-qubit reduced density matrices and
// the occupation triple (n4, n5, n6) derived from them.

#include <array>
#include <cstdint>
#include <vector>

#include "gpc/noise.hpp"
#include "gpc/qstate.hpp"

namespace gpc {

/// Three smallest natural occupations, sorted n4 >= n5 >= n6.
struct OccupationTriple {
    double n4 = 0, n5 = 0, n6 = 0;

    static OccupationTriple sorted(double a, double b, double c);
    std::array<double, 3> values() const { return {n4, n5, n6}; }
    double distance(const OccupationTriple& other) const;
};

enum class Basis { Z, X, Y };

constexpr std::array<Basis, 3> kAllBases{Basis::Z, Basis::X, Basis::Y};

const char* to_string(Basis b);

struct MeasurementSetting {
    Basis basis = Basis::Z;

    /// Pre-rotation applied to every qubit before a computational-basis
    /// readout: Z none, X H, Y S-dagger then H.
    std::vector<Gate> pre_rotation(int n_qubits) const;
};

/// [[cos phi, -g sin phi], [g sin phi, cos phi]] with g = gamma_sign in {+1, -1}.
/// At phi = pi/4 this is H*Z for g = +1 and Z*H for g = -1.
Matrix2c build_rotation_unitary(double phi, int gamma_sign);

/// Linear inversion from the probability that the qubit reads 0 in each basis:
/// d00 = fZ, Re d01 = fX - 1/2, Im d01 = 1/2 - fY.
OneQubitRDM rdm_from_frequencies(double fz0, double fx0, double fy0);

/// Throws std::invalid_argument on empty tables or disagreeing shot totals.
OneQubitRDM estimate_rdm(const CountsTable& z, const CountsTable& x, const CountsTable& y, int qubit);

struct ClampedOccupations {
    OccupationTriple occupations;
    int clamp_events = 0;
};

/// Minimum eigenvalue per qubit, clamped to [0,1] and sorted descending.
ClampedOccupations occupations_from_rdms(std::span<const OneQubitRDM> rdms);

OccupationTriple occupations_exact(const StateVector& state);

/// Infinite-shot tomography: exact outcome probabilities of each setting.
OccupationTriple occupations_analytic(const StateVector& state);

struct MeasuredOccupations {
    OccupationTriple occupations;
    std::array<OneQubitRDM, 3> rdms{};
    std::array<CountsTable, 3> counts{};  // Z, X, Y
    int clamp_events = 0;
};

// Shot-based tomography with `shots` per measurement setting. Per-setting
// streams are seeded with derive_seed(seed, {setting}).
//
// The state overload treats `state` as already prepared: noise, if given,
// acts on the pre-rotation gates and the readout. The circuit overload also
// applies gate noise while preparing the state from |000>.
MeasuredOccupations occupations_measured(const StateVector& state, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel* noise = nullptr);
MeasuredOccupations occupations_measured(const Circuit& preparation, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel* noise = nullptr);
/// Tomography of an already-evolved (noisy) density matrix.
MeasuredOccupations occupations_measured(const DensityMatrix& prepared, std::uint64_t shots, std::uint64_t seed,
                                         const NoiseModel& noise);

}  // namespace gpc
