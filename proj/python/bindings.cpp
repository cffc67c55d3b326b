#include <sstream>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpc/cli.hpp"
#include "gpc/fockspace.hpp"
#include "gpc/polytope.hpp"
#include "gpc/sampler.hpp"
#include "gpc/stats.hpp"
#include "gpc/tomography.hpp"

namespace py = pybind11;

namespace {

using Triple = std::tuple<double, double, double>;

Triple as_tuple(const gpc::OccupationTriple& o) { return {o.n4, o.n5, o.n6}; }

gpc::Circuit circuit_from_degrees(const std::string& algorithm, const std::vector<double>& degrees,
                                  const std::string& convention) {
    const auto a = gpc::parse_algorithm(algorithm);
    const auto radians = gpc::ry_arguments_from_degrees(degrees, gpc::parse_angle_convention(convention));
    return gpc::build_circuit(a, radians);
}

gpc::StateVector state_from(const std::vector<std::complex<double>>& amplitudes) {
    return gpc::StateVector(3, amplitudes);
}

py::dict report_dict(const gpc::ConstraintReport& r) {
    py::dict d;
    d["pauli_slacks"] = r.pauli_slacks;
    d["equality_residuals"] = r.equality_residuals;
    d["bd_slack"] = r.bd_slack;
    d["higuchi_slack"] = r.higuchi_slack;
    d["ordering_violation"] = r.ordering_violation;
    d["inside_pauli"] = r.inside_pauli;
    d["inside_gpc"] = r.inside_gpc;
    d["in_forbidden_region"] = r.in_forbidden_region();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Generalized Pauli constraint simulation core";

    m.def(
        "statevector",
        [](const std::string& algorithm, const std::vector<double>& degrees, const std::string& convention) {
            const auto s = gpc::run_circuit(circuit_from_degrees(algorithm, degrees, convention));
            return std::vector<std::complex<double>>(s.amplitudes().begin(), s.amplitudes().end());
        },
        py::arg("algorithm"), py::arg("degrees"), py::arg("convention") = "doubled",
        "Final 8-component state vector; qubit 0 is the most significant bit.");

    m.def(
        "occupations",
        [](const std::string& algorithm, const std::vector<double>& degrees, const std::string& convention) {
            return as_tuple(gpc::occupations_exact(gpc::run_circuit(circuit_from_degrees(algorithm, degrees, convention))));
        },
        py::arg("algorithm"), py::arg("degrees"), py::arg("convention") = "doubled",
        "Exact sorted occupation triple (n4, n5, n6).");

    m.def(
        "occupations_measured",
        [](const std::string& algorithm, const std::vector<double>& degrees, std::uint64_t shots, std::uint64_t seed,
           const std::string& convention) {
            const auto m = gpc::occupations_measured(circuit_from_degrees(algorithm, degrees, convention), shots, seed);
            return as_tuple(m.occupations);
        },
        py::arg("algorithm"), py::arg("degrees"), py::arg("shots") = 2048, py::arg("seed") = 0,
        py::arg("convention") = "doubled", "Noiseless shot-based tomography with `shots` per setting.");

    m.def(
        "natural_occupations",
        [](const std::vector<std::complex<double>>& amplitudes) {
            return gpc::natural_occupations(gpc::one_rdm(gpc::map_qubit_to_fermion(state_from(amplitudes))));
        },
        py::arg("amplitudes"), "Six natural occupations, descending, from the fermionic 1-RDM.");

    m.def(
        "excitation_weights",
        [](const std::vector<std::complex<double>>& amplitudes) {
            const auto w = gpc::excitation_weights(gpc::map_qubit_to_fermion(state_from(amplitudes)));
            py::list out;
            for (const auto& b : w.by_orbital) out.append(py::make_tuple(b.singles, b.doubles, b.triples));
            return out;
        },
        py::arg("amplitudes"), "(singles, doubles, triples) weights for orbitals 4, 5 and 6.");

    m.def("bd_slack", [](double n4, double n5, double n6) { return gpc::bd_slack({n4, n5, n6}); });

    m.def(
        "check", [](double n4, double n5, double n6, double tol) { return report_dict(gpc::check({n4, n5, n6}, tol)); },
        py::arg("n4"), py::arg("n5"), py::arg("n6"), py::arg("tolerance") = gpc::kIdealTolerance);

    m.def("violation_confidence", &gpc::violation_confidence, py::arg("n_points"));

    m.def(
        "standard_error",
        [](double sigma, std::uint64_t total) {
            const auto s = gpc::standard_error(sigma, total);
            return py::make_tuple(s.se, s.ci95);
        },
        py::arg("sigma"), py::arg("total_measurements"));

    m.def(
        "monte_carlo_volume_ratio",
        [](std::uint64_t samples, std::uint64_t seed) {
            const auto v = gpc::monte_carlo_volume_ratio(samples, seed);
            py::dict d;
            d["ratio"] = v.ratio;
            d["pauli_volume"] = v.pauli_volume;
            d["gpc_volume"] = v.gpc_volume;
            return d;
        },
        py::arg("samples"), py::arg("seed") = 0);

    m.def(
        "grid_scan",
        [](const std::string& algorithm, double step, double min_distance, std::uint64_t budget, std::uint64_t seed,
           const std::string& convention) {
            gpc::ScanConfig c;
            c.algorithm = gpc::parse_algorithm(algorithm);
            c.step_deg = step;
            c.min_distance = min_distance;
            c.max_budget = budget;
            c.seed = seed;
            c.convention = gpc::parse_angle_convention(convention);
            const auto r = [&] {
                py::gil_scoped_release release;
                return gpc::grid_scan(c);
            }();
            py::list points;
            for (const auto& p : r.points) points.append(py::make_tuple(p.params_deg, as_tuple(p.occupations)));
            return points;
        },
        py::arg("algorithm") = "alg1", py::arg("step") = 0.1, py::arg("min_distance") = 0.075,
        py::arg("budget") = 10'000'000, py::arg("seed") = 0, py::arg("convention") = "doubled",
        "List of (degrees, (n4, n5, n6)) for the selected points.");

    m.def(
        "main",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"gpcsim"};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = gpc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool; returns (exit_code, stdout, stderr).");
}
