#pragma once

// Distance statistics for repeated small-batch tomography runs.

#include <cstdint>
#include <string>
#include <vector>

#include "gpc/noise.hpp"
#include "gpc/tomography.hpp"

namespace gpc {

/// Batch size used for the distance variable: 2^2 times the 8 qubit basis states.
inline constexpr std::uint64_t kBatchSize = 32;

struct DistanceSample {
    std::string id;
    std::vector<double> distances;  // Euclidean distance of each batch's triple to the ideal one
};

struct BatchStats {
    double mu = 0;
    double sigma = 0;  // sample standard deviation (n - 1)
};

/// Throws std::invalid_argument with fewer than two distances.
BatchStats batch_stats(const DistanceSample& sample);

struct StandardError {
    std::uint64_t batches = 0;
    double se = 0;
    double ci95 = 0;  // 2 * se
};

/// se = sigma / sqrt(floor(total / batch_size)). Throws std::invalid_argument on zero batches.
StandardError standard_error(double sigma, std::uint64_t total_measurements, std::uint64_t batch_size = kBatchSize);

/// Round half away from zero to `places` decimals.
double round_to(double value, int places);

/// Run `n_batches` tomography experiments of `batch_shots` shots per setting
/// on `state` and record each triple's distance to the exact occupations.
DistanceSample batch_distances(const StateVector& state, std::uint64_t batch_shots, int n_batches,
                               std::uint64_t seed, const NoiseModel* noise = nullptr);

}  // namespace gpc
