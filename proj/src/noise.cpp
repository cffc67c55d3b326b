#include "gpc/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gpc/errors.hpp"
#include "gpc/polytope.hpp"
#include "gpc/seeds.hpp"
#include "gpc/tomography.hpp"

namespace gpc {

using json = nlohmann::json;

namespace {

void check_probability(double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(what + " must lie in [0, 1]");
}

Eigen::MatrixXcd pauli(int k) {
    Eigen::MatrixXcd m(2, 2);
    switch (k) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DensityMatrix apply_local_channel(const DensityMatrix& dm, const std::vector<Eigen::MatrixXcd>& local,
                                  std::span<const int> qubits) {
    std::vector<Eigen::MatrixXcd> full;
    full.reserve(local.size());
    for (const auto& k : local) full.push_back(embed_operator(k, qubits, dm.n_qubits()));
    return apply_channel(dm, full);
}

std::vector<Eigen::MatrixXcd> amplitude_damping_kraus(double gamma) {
    Eigen::MatrixXcd k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1 - gamma);
    k1 << 0, std::sqrt(gamma), 0, 0;
    return {k0, k1};
}

std::vector<Eigen::MatrixXcd> phase_damping_kraus(double lambda) {
    Eigen::MatrixXcd k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1 - lambda);
    k1 << 0, 0, 0, std::sqrt(lambda);
    return {k0, k1};
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw DataError(std::string("calibration: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("calibration: bad field '") + key + "': " + e.what());
    }
}

}  // namespace

// ---- CalibrationTable ---------------------------------------------------------

void CalibrationTable::validate() const {
    for (const auto& q : qubits) {
        check_probability(q.gate_error, "gate_error");
        check_probability(q.readout_error, "readout_error");
        if (!(q.t1_us > 0) || !(q.t2_us > 0)) throw std::invalid_argument("T1 and T2 must be positive");
    }
    for (const auto& p : pairs) check_probability(p.error, "two-qubit gate error");
    if (buffer_ns < 0 || gate_time_ns < 0) throw std::invalid_argument("gate timings must be non-negative");
}

const QubitCalibration& CalibrationTable::qubit(int id) const {
    for (const auto& q : qubits) {
        if (q.id == id) return q;
    }
    throw std::out_of_range("calibration has no qubit " + std::to_string(id));
}

std::optional<double> CalibrationTable::pair_error(int a, int b) const {
    for (const auto& p : pairs) {
        if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return p.error;
    }
    return std::nullopt;
}

CalibrationTable parse_calibration(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("calibration: invalid JSON: ") + e.what());
    }
    CalibrationTable t;
    t.device = require<std::string>(j, "device");
    t.date = require<std::string>(j, "calibration_date");
    t.temperature_k = require<double>(j, "temperature_k");
    t.version = j.value("device_version", "");
    t.buffer_ns = require<double>(j, "buffer_ns");
    t.gate_time_ns = require<double>(j, "gate_time_ns");
    for (const auto& q : require<json>(j, "qubits")) {
        QubitCalibration c;
        c.id = require<int>(q, "qubit");
        c.t1_us = require<double>(q, "T1_us");
        c.t2_us = require<double>(q, "T2_us");
        c.frequency_ghz = require<double>(q, "f_GHz");
        c.gate_error = require<double>(q, "gate_error");
        c.readout_error = require<double>(q, "readout_error");
        t.qubits.push_back(c);
    }
    for (const auto& p : require<json>(j, "multi_qubit")) {
        const auto pair = require<std::vector<int>>(p, "pair");
        if (pair.size() != 2) throw DataError("calibration: 'pair' must list two qubits");
        t.pairs.push_back({pair[0], pair[1], require<double>(p, "error")});
    }
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("calibration: ") + e.what());
    }
    return t;
}

CalibrationTable load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open calibration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_calibration(ss.str());
}

std::string calibration_to_json(const CalibrationTable& t) {
    json j;
    j["schema"] = "gpc.calibration";
    j["schema_version"] = 1;
    j["device"] = t.device;
    j["calibration_date"] = t.date;
    j["temperature_k"] = t.temperature_k;
    j["device_version"] = t.version;
    j["buffer_ns"] = t.buffer_ns;
    j["gate_time_ns"] = t.gate_time_ns;
    j["qubits"] = json::array();
    for (const auto& q : t.qubits) {
        j["qubits"].push_back({{"qubit", q.id}, {"T2_us", q.t2_us}, {"f_GHz", q.frequency_ghz}, {"T1_us", q.t1_us},
                               {"gate_error", q.gate_error}, {"readout_error", q.readout_error}});
    }
    j["multi_qubit"] = json::array();
    for (const auto& p : t.pairs) j["multi_qubit"].push_back({{"pair", {p.a, p.b}}, {"error", p.error}});
    return j.dump(2);
}

CalibrationTable ibmqx2_calibration() {
    CalibrationTable t;
    t.device = "ibmqx2 (Sparrow)";
    t.date = "2018-02-23";
    t.temperature_k = 0.0164;
    t.version = "3.0";
    t.buffer_ns = 6.7;
    t.gate_time_ns = 83.3;
    t.qubits = {
        {0, 59.4, 41.5, 5.27603, 1.98e-3, 45e-3},
        {1, 67.8, 55.3, 5.21224, 1.29e-3, 36e-3},
        {2, 68.9, 67.1, 5.01541, 1.98e-3, 20e-3},
        {3, 48.9, 69.8, 5.28059, 1.63e-3, 16e-3},
        {4, 66.0, 44.2, 5.07117, 0.94e-3, 25e-3},
    };
    t.pairs = {{0, 1, 34.6e-3}, {0, 2, 40.7e-3}, {1, 2, 32.6e-3},
               {3, 2, 27.6e-3}, {3, 4, 22.3e-3}, {4, 2, 26.6e-3}};
    return t;
}

// ---- NoiseModel ---------------------------------------------------------------

NoiseModel NoiseModel::identity(int n_qubits) {
    NoiseModel m;
    m.id = "ideal";
    m.n_qubits = n_qubits;
    m.readout_flip.assign(static_cast<std::size_t>(n_qubits), 0.0);
    m.depolarizing_1q.assign(static_cast<std::size_t>(n_qubits), 0.0);
    for (int a = 0; a < n_qubits; ++a) {
        for (int b = a + 1; b < n_qubits; ++b) m.depolarizing_2q[{a, b}] = 0.0;
    }
    return m;
}

NoiseModel NoiseModel::uniform_depolarizing(double p, int n_qubits) {
    check_probability(p, "depolarizing probability");
    NoiseModel m = identity(n_qubits);
    m.id = "depolarizing(" + std::to_string(p) + ")";
    std::fill(m.depolarizing_1q.begin(), m.depolarizing_1q.end(), p);
    for (auto& [k, v] : m.depolarizing_2q) v = p;
    return m;
}

NoiseModel NoiseModel::readout_only(std::span<const double> flips) {
    NoiseModel m = identity(static_cast<int>(flips.size()));
    m.id = "readout";
    m.readout_flip.assign(flips.begin(), flips.end());
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    const auto n = static_cast<std::size_t>(n_qubits);
    if (readout_flip.size() != n || depolarizing_1q.size() != n) {
        throw std::invalid_argument("noise model vectors must have one entry per qubit");
    }
    for (double p : readout_flip) check_probability(p, "readout flip probability");
    for (double p : depolarizing_1q) check_probability(p, "depolarizing probability");
    for (const auto& [k, p] : depolarizing_2q) check_probability(p, "two-qubit depolarizing probability");
    if (damping) {
        if (amplitude_damping.size() != n || phase_damping.size() != n) {
            throw std::invalid_argument("damping vectors must have one entry per qubit");
        }
        for (double p : amplitude_damping) check_probability(p, "amplitude damping");
        for (double p : phase_damping) check_probability(p, "phase damping");
    }
}

bool NoiseModel::is_identity() const {
    auto zero = [](double v) { return v == 0.0; };
    if (!std::all_of(readout_flip.begin(), readout_flip.end(), zero)) return false;
    if (!std::all_of(depolarizing_1q.begin(), depolarizing_1q.end(), zero)) return false;
    for (const auto& [k, p] : depolarizing_2q) {
        if (p != 0.0) return false;
    }
    if (damping) {
        if (!std::all_of(amplitude_damping.begin(), amplitude_damping.end(), zero)) return false;
        if (!std::all_of(phase_damping.begin(), phase_damping.end(), zero)) return false;
    }
    return true;
}

double NoiseModel::two_qubit_error(int a, int b) const {
    const auto it = depolarizing_2q.find({std::min(a, b), std::max(a, b)});
    if (it == depolarizing_2q.end()) {
        throw std::out_of_range("noise model has no two-qubit error for qubits " + std::to_string(a) + "," +
                                std::to_string(b));
    }
    return it->second;
}

NoiseModel noise_model_from_calibration(const CalibrationTable& table, const NoiseOptions& options) {
    table.validate();
    NoiseModel m = NoiseModel::identity(3);
    m.depolarizing_2q.clear();
    const double t_us = (table.gate_time_ns + table.buffer_ns) * 1e-3;
    if (options.damping) {
        m.damping = true;
        m.amplitude_damping.assign(3, 0.0);
        m.phase_damping.assign(3, 0.0);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& q = table.qubit(options.layout[k]);
        if (options.readout_noise) m.readout_flip[k] = q.readout_error;
        if (options.gate_noise) m.depolarizing_1q[k] = q.gate_error;
        if (options.damping) {
            m.amplitude_damping[k] = 1.0 - std::exp(-t_us / q.t1_us);
            const double dephasing_rate = std::max(0.0, 1.0 / q.t2_us - 0.5 / q.t1_us);
            m.phase_damping[k] = 1.0 - std::exp(-2.0 * t_us * dephasing_rate);
        }
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
            const auto err = table.pair_error(options.layout[static_cast<std::size_t>(a)],
                                              options.layout[static_cast<std::size_t>(b)]);
            if (err) m.depolarizing_2q[{a, b}] = options.gate_noise ? *err : 0.0;
        }
    }
    std::ostringstream id;
    id << table.device << " " << table.date << " layout=" << options.layout[0] << "," << options.layout[1] << ","
       << options.layout[2];
    if (!options.gate_noise) id << " no-gate";
    if (!options.readout_noise) id << " no-readout";
    if (options.damping) id << " damping";
    m.id = id.str();
    m.validate();
    return m;
}

std::vector<Eigen::MatrixXcd> depolarizing_kraus(double p, int n_local) {
    check_probability(p, "depolarizing probability");
    if (n_local < 1 || n_local > 2) throw std::invalid_argument("depolarizing channel supports 1 or 2 qubits");
    const int terms = n_local == 1 ? 4 : 16;
    const double w_rest = p / terms;
    std::vector<Eigen::MatrixXcd> ops;
    for (int k = 0; k < terms; ++k) {
        Eigen::MatrixXcd P = n_local == 1 ? pauli(k) : kron(pauli(k / 4), pauli(k % 4));
        const double w = k == 0 ? 1.0 - p + w_rest : w_rest;
        if (w > 0) ops.push_back(std::sqrt(w) * P);
    }
    return ops;
}

DensityMatrix apply_gate_noisy(const DensityMatrix& dm, const Gate& gate, const NoiseModel& model) {
    DensityMatrix out = apply_gate(dm, gate);
    if (gate.kind == GateKind::CNOT) {
        const std::array<int, 2> support{*gate.control, gate.target};
        const double p = model.two_qubit_error(support[0], support[1]);
        if (p > 0) out = apply_local_channel(out, depolarizing_kraus(p, 2), support);
    } else {
        const double p = model.depolarizing_1q.at(static_cast<std::size_t>(gate.target));
        const std::array<int, 1> support{gate.target};
        if (p > 0) out = apply_local_channel(out, depolarizing_kraus(p, 1), support);
    }
    if (model.damping) {
        std::vector<int> support{gate.target};
        if (gate.control) support.push_back(*gate.control);
        for (int q : support) {
            const std::array<int, 1> one{q};
            const double g = model.amplitude_damping.at(static_cast<std::size_t>(q));
            const double l = model.phase_damping.at(static_cast<std::size_t>(q));
            if (g > 0) out = apply_local_channel(out, amplitude_damping_kraus(g), one);
            if (l > 0) out = apply_local_channel(out, phase_damping_kraus(l), one);
        }
    }
    return out;
}

DensityMatrix evolve_noisy(const Circuit& circuit, const DensityMatrix& initial, const NoiseModel& model) {
    if (circuit.n_qubits != initial.n_qubits() || circuit.n_qubits != model.n_qubits) {
        throw std::invalid_argument("circuit, state and noise model qubit counts differ");
    }
    circuit.validate();
    DensityMatrix dm = initial;
    for (const auto& g : circuit.gates) dm = apply_gate_noisy(dm, g, model);
    return dm;
}

CountsTable sample_with_readout(const DensityMatrix& dm, const NoiseModel& model, std::uint64_t shots,
                                std::mt19937_64& rng) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const int n = dm.n_qubits();
    std::vector<double> probs = dm.probabilities();
    for (auto& p : probs) p = std::max(p, 0.0);
    const auto ideal = sample_multinomial(probs, shots, rng);

    const std::size_t dim = probs.size();
    std::vector<double> flip_probs(dim, 1.0);
    for (std::uint64_t pattern = 0; pattern < dim; ++pattern) {
        for (int q = 0; q < n; ++q) {
            const double f = model.readout_flip.at(static_cast<std::size_t>(q));
            flip_probs[pattern] *= (pattern & qubit_mask(n, q)) ? f : 1.0 - f;
        }
    }
    std::vector<std::uint64_t> counts(dim, 0);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (ideal[i] == 0) continue;
        const auto flips = sample_multinomial(flip_probs, ideal[i], rng);
        for (std::uint64_t pattern = 0; pattern < dim; ++pattern) counts[i ^ pattern] += flips[pattern];
    }
    return CountsTable(n, shots, std::move(counts));
}

CountsTable run_noisy(const Circuit& circuit, const NoiseModel& model, std::uint64_t shots, std::uint64_t seed) {
    model.validate();
    const DensityMatrix dm = evolve_noisy(circuit, DensityMatrix(circuit.n_qubits), model);
    std::mt19937_64 rng(seed);
    return sample_with_readout(dm, model, shots, rng);
}

std::vector<ShiftStats> shift_study(Algorithm algorithm, std::span<const std::vector<double>> params,
                                    const NoiseModel& model, std::uint64_t shots, int trials, std::uint64_t seed) {
    if (params.empty()) throw std::invalid_argument("shift study needs at least one point");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    model.validate();
    std::vector<ShiftStats> out;
    out.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Circuit circuit = build_circuit(algorithm, params[i]);
        const StateVector ideal_state = run_circuit(circuit);
        const OccupationTriple ideal = occupations_exact(ideal_state);
        const bool noisy = !model.is_identity();
        std::optional<DensityMatrix> prepared;
        if (noisy) prepared = evolve_noisy(circuit, DensityMatrix(3), model);

        ShiftStats s;
        s.params = params[i];
        s.ideal = ideal.values();
        s.ideal_bd_slack = bd_slack(ideal);
        int increased = 0;
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t trial_seed = derive_seed(seed, {i, static_cast<std::uint64_t>(t)});
            const MeasuredOccupations m = noisy ? occupations_measured(*prepared, shots, trial_seed, model)
                                                : occupations_measured(ideal_state, shots, trial_seed, nullptr);
            const auto v = m.occupations.values();
            for (std::size_t k = 0; k < 3; ++k) s.mean_noisy[k] += v[k];
            s.mean_distance += m.occupations.distance(ideal);
            const double slack = bd_slack(m.occupations);
            s.mean_bd_slack += slack;
            if (slack > s.ideal_bd_slack) ++increased;
            s.clamp_events += static_cast<std::uint64_t>(m.clamp_events);
        }
        for (std::size_t k = 0; k < 3; ++k) {
            s.mean_noisy[k] /= trials;
            s.mean_displacement[k] = s.mean_noisy[k] - s.ideal[k];
        }
        s.mean_distance /= trials;
        s.mean_bd_slack /= trials;
        s.delta_bd_slack = s.mean_bd_slack - s.ideal_bd_slack;
        s.fraction_increased = static_cast<double>(increased) / trials;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace gpc
