#pragma once

// Parameter generation: evaluate the exact occupation triple over an angle
// grid and greedily keep points that are at least `min_distance` away from
// every point kept so far.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gpc/circuits.hpp"
#include "gpc/tomography.hpp"

namespace gpc {

struct ScanConfig {
    Algorithm algorithm = Algorithm::Alg1;
    double angle_min_deg = 0.0;
    double angle_max_deg = 45.0;
    double step_deg = 0.1;
    double min_distance = 0.075;
    /// Random grid points drawn when the grid is larger than this (alg2 only).
    std::uint64_t max_budget = 10'000'000;
    std::uint64_t seed = 0;
    AngleConvention convention = AngleConvention::Doubled;
    unsigned threads = 0;  // 0: hardware concurrency

    /// Throws std::invalid_argument on step <= 0, min_distance <= 0 or an empty range.
    void validate() const;
    std::uint64_t axis_points() const;
    /// Number of grid points; may exceed 2^64 in principle, hence long double.
    long double grid_size() const;
    double axis_value(std::uint64_t k) const { return angle_min_deg + static_cast<double>(k) * step_deg; }
};

/// Reads `key = value` lines ('#' starts a comment). Keys mirror ScanConfig:
/// algorithm, angle_min, angle_max, step, min_distance, max_budget, seed,
/// angle_convention, threads. Throws DataError on unknown keys or bad values.
ScanConfig parse_scan_config(const std::string& text);
ScanConfig load_scan_config(const std::string& path);

struct SelectedPoint {
    std::vector<double> params_deg;
    OccupationTriple occupations;
    double bd_slack = 0;
};

/// Closest approach of the evaluated (not only selected) points to each
/// facet and vertex of the generalized Pauli polytope.
struct ScanCoverage {
    static constexpr std::array<const char*, 5> kFacets{"n6=0", "n5=n6", "n4=n5", "n4=1/2", "n5+n6=n4"};
    static constexpr std::array<const char*, 4> kVertices{"(0,0,0)", "(1/2,1/2,0)", "(1/2,1/2,1/2)", "(1/2,1/4,1/4)"};

    std::array<double, 5> facet_distance{};
    std::array<double, 4> vertex_distance{};
    std::array<double, 3> max_occupation{};
    double min_bd_slack = 0;
};

struct ScanResult {
    std::vector<SelectedPoint> points;
    std::uint64_t evaluated = 0;
    long double grid_size = 0;
    /// False when the grid exceeded max_budget and was subsampled.
    bool exhaustive = true;
    ScanCoverage coverage;
};

ScanResult grid_scan(const ScanConfig& config);

/// Exact occupations through a real-amplitude kernel driven by circuit_template;
/// `radians` are Ry arguments. Agrees with occupations_exact(run_circuit(...)).
OccupationTriple fast_occupations(Algorithm algorithm, std::span<const double> radians);

struct PointsFile {
    Algorithm algorithm = Algorithm::Alg1;
    AngleConvention convention = AngleConvention::Doubled;
    std::vector<SelectedPoint> points;
};

/// Columns: algorithm, theta1..thetaK (degrees), n4, n5, n6, bd_slack; 17 significant digits.
void write_points_csv(std::ostream& out, Algorithm algorithm, std::span<const SelectedPoint> points);
/// Throws DataError on malformed input. The angle convention is not stored in CSV.
PointsFile read_points_csv(std::istream& in);
void write_points_json(std::ostream& out, const PointsFile& file, const ScanConfig* config = nullptr);
PointsFile read_points_json(std::istream& in);
/// Dispatches on the file extension (.json, otherwise CSV).
PointsFile load_points(const std::string& path);

}  // namespace gpc
