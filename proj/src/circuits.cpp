#include "gpc/circuits.hpp"

#include <numbers>
#include <stdexcept>

namespace gpc {

namespace {

// Qubits are 0-based here: circuit qubit k in the usual 1-based notation is index k-1.
constexpr TemplateOp ry_op(int q, int param) { return {false, q, -1, param}; }
constexpr TemplateOp cx_op(int c, int t) { return {true, t, c, -1}; }

constexpr std::array kMainTemplate{
    ry_op(0, 0), cx_op(0, 1),  //
    ry_op(2, 1), cx_op(2, 0),  //
    ry_op(0, 2), cx_op(0, 2),
};

constexpr std::array kAlg1Template{
    ry_op(0, 0), cx_op(0, 2),  //
    ry_op(0, 1), cx_op(0, 1),  //
    ry_op(2, 2), cx_op(2, 1),
};

constexpr std::array kAlg2Template{
    ry_op(0, 0), ry_op(1, 1), cx_op(1, 0),  //
    ry_op(2, 2), ry_op(1, 3), cx_op(1, 2),  //
    ry_op(0, 4), ry_op(2, 5), cx_op(2, 0),
};

Circuit instantiate(std::span<const TemplateOp> ops, std::span<const double> radians) {
    Circuit c(3);
    for (const auto& op : ops) {
        if (op.is_cnot) {
            c.add(Gate::cnot(op.control, op.target));
        } else {
            c.add(Gate::ry(op.target, radians[static_cast<std::size_t>(op.param)]));
        }
    }
    return c;
}

}  // namespace

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Alg1: return "alg1";
        case Algorithm::Alg2: return "alg2";
        case Algorithm::Main: return "main";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "alg1") return Algorithm::Alg1;
    if (name == "alg2") return Algorithm::Alg2;
    if (name == "main") return Algorithm::Main;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected alg1, alg2 or main)");
}

int parameter_count(Algorithm a) { return a == Algorithm::Alg2 ? 6 : 3; }

std::span<const TemplateOp> circuit_template(Algorithm a) {
    switch (a) {
        case Algorithm::Alg1: return kAlg1Template;
        case Algorithm::Alg2: return kAlg2Template;
        case Algorithm::Main: return kMainTemplate;
    }
    throw std::invalid_argument("unknown algorithm");
}

Circuit build_main_circuit(double alpha, double beta, double gamma) {
    const std::array p{alpha, beta, gamma};
    return instantiate(kMainTemplate, p);
}

Circuit build_alg1(const Alg1Params& p) {
    const std::array v{p.theta1, p.theta2, p.theta3};
    return instantiate(kAlg1Template, v);
}

Circuit build_alg2(const Alg2Params& p) { return instantiate(kAlg2Template, p.theta); }

Circuit build_circuit(Algorithm a, std::span<const double> radians) {
    if (static_cast<int>(radians.size()) != parameter_count(a)) {
        throw std::invalid_argument(to_string(a) + " expects " + std::to_string(parameter_count(a)) +
                                    " parameters, got " + std::to_string(radians.size()));
    }
    return instantiate(circuit_template(a), radians);
}

std::string to_string(AngleConvention c) { return c == AngleConvention::Doubled ? "doubled" : "direct"; }

AngleConvention parse_angle_convention(const std::string& name) {
    if (name == "doubled") return AngleConvention::Doubled;
    if (name == "direct") return AngleConvention::Direct;
    throw std::invalid_argument("unknown angle convention '" + name + "' (expected doubled or direct)");
}

double ry_argument_from_degrees(double degrees, AngleConvention c) {
    const double rad = degrees * std::numbers::pi / 180.0;
    return c == AngleConvention::Doubled ? 2.0 * rad : rad;
}

std::vector<double> ry_arguments_from_degrees(std::span<const double> degrees, AngleConvention c) {
    std::vector<double> out;
    out.reserve(degrees.size());
    for (double d : degrees) out.push_back(ry_argument_from_degrees(d, c));
    return out;
}

}  // namespace gpc
