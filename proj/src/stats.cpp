#include "gpc/stats.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "gpc/seeds.hpp"

namespace gpc {

BatchStats batch_stats(const DistanceSample& sample) {
    const auto& d = sample.distances;
    if (d.size() < 2) throw std::invalid_argument("batch statistics need at least two distances");
    const double n = static_cast<double>(d.size());
    const double mu = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0;
    for (double x : d) ss += (x - mu) * (x - mu);
    return {mu, std::sqrt(ss / (n - 1))};
}

StandardError standard_error(double sigma, std::uint64_t total_measurements, std::uint64_t batch_size) {
    if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
    const std::uint64_t batches = total_measurements / batch_size;
    if (batches == 0) throw std::invalid_argument("no complete batch in the measurement budget");
    const double se = sigma / std::sqrt(static_cast<double>(batches));
    return {batches, se, 2.0 * se};
}

double round_to(double value, int places) {
    const double scale = std::pow(10.0, places);
    return std::round(value * scale) / scale;
}

DistanceSample batch_distances(const StateVector& state, std::uint64_t batch_shots, int n_batches,
                               std::uint64_t seed, const NoiseModel* noise) {
    if (n_batches < 1) throw std::invalid_argument("need at least one batch");
    const OccupationTriple ideal = occupations_exact(state);
    std::optional<DensityMatrix> prepared;
    if (noise && !noise->is_identity()) prepared = to_density_matrix(state);
    DistanceSample s;
    s.distances.reserve(static_cast<std::size_t>(n_batches));
    for (int b = 0; b < n_batches; ++b) {
        const std::uint64_t bseed = derive_seed(seed, {static_cast<std::uint64_t>(b)});
        const auto m = prepared ? occupations_measured(*prepared, batch_shots, bseed, *noise)
                                : occupations_measured(state, batch_shots, bseed, nullptr);
        s.distances.push_back(m.occupations.distance(ideal));
    }
    return s;
}

}  // namespace gpc
