#pragma once

// Hardware noise driven by device calibration data: depolarizing noise after
// every gate, symmetric readout flips, and optional T1/T2 damping.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gpc/circuits.hpp"
#include "gpc/qstate.hpp"

namespace gpc {

struct QubitCalibration {
    int id = 0;
    double t1_us = 0;
    double t2_us = 0;
    double frequency_ghz = 0;
    double gate_error = 0;
    double readout_error = 0;
};

struct PairCalibration {
    int a = 0;
    int b = 0;
    double error = 0;
};

struct CalibrationTable {
    std::string device;
    std::string date;
    double temperature_k = 0;
    std::string version;
    double buffer_ns = 0;
    double gate_time_ns = 0;
    std::vector<QubitCalibration> qubits;
    std::vector<PairCalibration> pairs;

    /// Throws std::invalid_argument on error rates outside [0,1] or non-positive T1/T2.
    void validate() const;
    const QubitCalibration& qubit(int id) const;
    /// Pair lookup is undirected.
    std::optional<double> pair_error(int a, int b) const;
};

/// Parse from the JSON calibration schema (see data/ibmqx2_2018-02-23.json).
CalibrationTable parse_calibration(const std::string& json_text);
CalibrationTable load_calibration(const std::string& path);
std::string calibration_to_json(const CalibrationTable& table);

/// The ibmqx2 calibration of 2018-02-23, five qubits.
CalibrationTable ibmqx2_calibration();

struct NoiseOptions {
    /// Device qubit used for each circuit qubit. Default maps the
    /// alg1 CNOT directions onto ibmqx2's lowest-error triangle {2,3,4}.
    std::array<int, 3> layout{3, 2, 4};
    bool gate_noise = true;
    bool readout_noise = true;
    bool damping = false;
};

struct NoiseModel {
    std::string id = "ideal";
    int n_qubits = 3;
    std::vector<double> readout_flip;  // per circuit qubit
    std::vector<double> depolarizing_1q;  // per circuit qubit
    std::map<std::pair<int, int>, double> depolarizing_2q;  // key (min, max) circuit qubits
    bool damping = false;
    std::vector<double> amplitude_damping;  // gamma per gate duration
    std::vector<double> phase_damping;  // lambda per gate duration

    static NoiseModel identity(int n_qubits = 3);
    /// Uniform depolarizing probability for every gate, no readout error.
    static NoiseModel uniform_depolarizing(double p, int n_qubits = 3);
    static NoiseModel readout_only(std::span<const double> flips);

    /// Throws std::invalid_argument if a probability is outside [0,1] or sizes disagree.
    void validate() const;
    bool is_identity() const;
    /// Throws std::out_of_range if the pair has no calibrated error.
    double two_qubit_error(int a, int b) const;
};

NoiseModel noise_model_from_calibration(const CalibrationTable& table, const NoiseOptions& options = {});

/// Kraus operators of the n-qubit depolarizing channel rho -> (1-p) rho + p I/2^n.
std::vector<Eigen::MatrixXcd> depolarizing_kraus(double p, int n_local);

/// Unitary of `gate` followed by its noise channel.
DensityMatrix apply_gate_noisy(const DensityMatrix& dm, const Gate& gate, const NoiseModel& model);
DensityMatrix evolve_noisy(const Circuit& circuit, const DensityMatrix& initial, const NoiseModel& model);

/// Sample measurement outcomes from the diagonal, then flip each bit independently.
CountsTable sample_with_readout(const DensityMatrix& dm, const NoiseModel& model, std::uint64_t shots,
                                std::mt19937_64& rng);

CountsTable run_noisy(const Circuit& circuit, const NoiseModel& model, std::uint64_t shots, std::uint64_t seed);

struct ShiftStats {
    std::vector<double> params;  // radians (Ry arguments)
    std::array<double, 3> ideal{};
    std::array<double, 3> mean_noisy{};
    std::array<double, 3> mean_displacement{};
    double mean_distance = 0;  // mean over trials of |noisy - ideal|
    double ideal_bd_slack = 0;
    double mean_bd_slack = 0;
    double delta_bd_slack = 0;
    double fraction_increased = 0;  // trials whose bd_slack exceeds the ideal one
    std::uint64_t clamp_events = 0;
};

/// For each parameter vector, run `trials` noisy tomography experiments of
/// `shots` per setting and summarize how the occupations move.
std::vector<ShiftStats> shift_study(Algorithm algorithm, std::span<const std::vector<double>> params,
                                    const NoiseModel& model, std::uint64_t shots, int trials,
                                    std::uint64_t seed);

}  // namespace gpc
