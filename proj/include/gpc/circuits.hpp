#pragma once

// State-preparation circuits. Gate lists are stored in application order
// (first element acts first on |000>).

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gpc/qstate.hpp"

namespace gpc {

enum class Algorithm { Alg1, Alg2, Main };

std::string to_string(Algorithm a);
/// Accepts "alg1", "alg2", "main"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);
int parameter_count(Algorithm a);

struct Alg1Params {
    double theta1 = 0, theta2 = 0, theta3 = 0;  // radians
};

struct Alg2Params {
    std::array<double, 6> theta{};  // radians
};

// C_1^3 Ry(gamma) C_3^1 Ry(beta) C_1^2 Ry(alpha), each rotation on the control
// of the following CNOT.
Circuit build_main_circuit(double alpha, double beta, double gamma);
Circuit build_alg1(const Alg1Params& p);
Circuit build_alg2(const Alg2Params& p);
/// Dispatch on algorithm; `radians.size()` must equal parameter_count(a).
Circuit build_circuit(Algorithm a, std::span<const double> radians);

/// One step of a parameterized circuit: either Ry(params[param]) on `target`
/// or CNOT(control -> target).
struct TemplateOp {
    bool is_cnot = false;
    int target = 0;
    int control = -1;
    int param = -1;
};

/// The parameterized gate sequence behind build_circuit; the single source of
/// truth for gate order, also consumed by the grid-scan kernel.
std::span<const TemplateOp> circuit_template(Algorithm a);

// Conversion between quoted experiment angles (degrees) and Ry arguments.
//
// Doubled: the quoted angle is the rotation's half-angle, i.e. the gate is
//          Ry(2*angle) whose matrix entries are cos/sin of the quoted angle.
//          With this reading a 0..45 degree grid reaches every vertex of the
//          occupation polytope.
// Direct:  the quoted angle is the Ry argument itself.
enum class AngleConvention { Doubled, Direct };

std::string to_string(AngleConvention c);
AngleConvention parse_angle_convention(const std::string& name);

double ry_argument_from_degrees(double degrees, AngleConvention c);
std::vector<double> ry_arguments_from_degrees(std::span<const double> degrees, AngleConvention c);

}  // namespace gpc
