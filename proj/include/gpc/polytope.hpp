#pragma once

// Pauli and generalized-Pauli (Borland-Dennis) polytopes over the three
// smallest natural occupations (n4, n5, n6).

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpc/tomography.hpp"

namespace gpc {

/// Tolerance used for exact (simulated, noiseless) occupations.
inline constexpr double kIdealTolerance = 1e-9;
/// Default tolerance for measured occupations, of the order of the 2048-shot confidence interval.
inline constexpr double kMeasuredTolerance = 0.02;

/// n5 + n6 - n4; non-negative for every pure state.
inline double bd_slack(const OccupationTriple& o) { return o.n5 + o.n6 - o.n4; }

struct ConstraintReport {
    std::array<double, 6> pauli_slacks{};  // min(n_i, 1 - n_i)
    std::array<double, 3> equality_residuals{};  // n1+n6-1, n2+n5-1, n3+n4-1
    double bd_slack = 0;
    double higuchi_slack = 0;
    bool ordering_violation = false;
    bool inside_pauli = false;
    bool inside_gpc = false;

    /// Inside the Pauli polytope but across the Borland-Dennis facet.
    bool in_forbidden_region() const { return inside_pauli && !inside_gpc; }
};

/// Triple input: the full spectrum is completed as (1-n6, 1-n5, 1-n4, n4, n5, n6).
/// The values are used as given, without re-sorting or clamping.
ConstraintReport check(const OccupationTriple& occ, double tolerance = kIdealTolerance);
/// Six natural occupations, expected in descending order.
ConstraintReport check(std::span<const double> six, double tolerance = kIdealTolerance);

/// Signed distance to the plane n5 + n6 = n4; positive on the allowed side.
double distance_to_bd_facet(const OccupationTriple& occ);

struct HalfSpace {
    Eigen::Vector3d normal;  // a in a.x <= b
    double offset = 0;  // b
    std::string label;
};

struct PolytopeSpec {
    std::string name;
    std::vector<HalfSpace> half_spaces;

    bool contains(const Eigen::Vector3d& x, double tolerance = kIdealTolerance) const;
};

/// {0 <= n6 <= n5 <= n4 <= 1/2}
PolytopeSpec pauli_polytope();
/// Pauli polytope plus n4 - n5 - n6 <= 0.
PolytopeSpec gpc_polytope();

struct Facet {
    std::string label;
    std::vector<std::size_t> vertices;  // indices into PolytopeMesh::vertices
};

struct PolytopeMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<Facet> facets;
};

/// Vertices from all feasible intersections of three bounding planes; facets
/// list the vertices lying on each plane.
PolytopeMesh enumerate_mesh(const PolytopeSpec& spec);

struct VolumeEstimate {
    std::uint64_t samples = 0;
    std::uint64_t pauli_hits = 0;
    std::uint64_t gpc_hits = 0;
    double ratio = 0;  // pauli_hits / gpc_hits
    double pauli_volume = 0;  // hit fraction times the [0,1/2]^3 box volume
    double gpc_volume = 0;
};

/// Uniform sampling of the [0,1/2]^3 box. Shards of fixed size draw from
/// derive_seed(seed, {shard}); the result does not depend on thread count.
/// Throws std::invalid_argument below 10^4 samples and std::runtime_error on zero GPC hits.
VolumeEstimate monte_carlo_volume_ratio(std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

/// 2^-n: chance that n independent states all land on the allowed side if the
/// allowed region were an arbitrary half of the Pauli polytope.
double violation_confidence(int n_points);

}  // namespace gpc
