#include "gpc/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "gpc/seeds.hpp"

namespace gpc {

ConstraintReport check(std::span<const double> six, double tolerance) {
    if (six.size() != 6) throw std::invalid_argument("expected six occupation numbers");
    ConstraintReport r;
    for (std::size_t i = 0; i < 6; ++i) r.pauli_slacks[i] = std::min(six[i], 1.0 - six[i]);
    r.equality_residuals = {six[0] + six[5] - 1.0, six[1] + six[4] - 1.0, six[2] + six[3] - 1.0};
    r.bd_slack = six[4] + six[5] - six[3];
    // Qubit occupations p1 >= p2 >= p3 read from the complements of the three largest.
    const double p1 = 1.0 - six[2], p2 = 1.0 - six[1], p3 = 1.0 - six[0];
    r.higuchi_slack = p2 + p3 - p1;
    for (std::size_t i = 0; i + 1 < 6; ++i) {
        if (six[i] < six[i + 1]) r.ordering_violation = true;
    }
    // Pauli polytope in (n4, n5, n6) plus the pairing equalities.
    const bool ordered = six[3] + tolerance >= six[4] && six[4] + tolerance >= six[5];
    const bool bounded = six[5] >= -tolerance && six[3] <= 0.5 + tolerance;
    const bool paired = std::all_of(r.equality_residuals.begin(), r.equality_residuals.end(),
                                    [&](double v) { return std::abs(v) <= tolerance; });
    const bool pauli = std::all_of(six.begin(), six.end(),
                                   [&](double v) { return v >= -tolerance && v <= 1.0 + tolerance; });
    r.inside_pauli = ordered && bounded && paired && pauli;
    r.inside_gpc = r.inside_pauli && r.bd_slack >= -tolerance;
    return r;
}

ConstraintReport check(const OccupationTriple& occ, double tolerance) {
    const std::array<double, 6> six{1.0 - occ.n6, 1.0 - occ.n5, 1.0 - occ.n4, occ.n4, occ.n5, occ.n6};
    return check(std::span<const double>(six), tolerance);
}

double distance_to_bd_facet(const OccupationTriple& occ) { return bd_slack(occ) / std::numbers::sqrt3; }

bool PolytopeSpec::contains(const Eigen::Vector3d& x, double tolerance) const {
    return std::all_of(half_spaces.begin(), half_spaces.end(),
                       [&](const HalfSpace& h) { return h.normal.dot(x) <= h.offset + tolerance; });
}

PolytopeSpec pauli_polytope() {
    return {"pauli",
            {
                {Eigen::Vector3d(0, 0, -1), 0.0, "n6>=0"},
                {Eigen::Vector3d(0, -1, 1), 0.0, "n5>=n6"},
                {Eigen::Vector3d(-1, 1, 0), 0.0, "n4>=n5"},
                {Eigen::Vector3d(1, 0, 0), 0.5, "n4<=1/2"},
            }};
}

PolytopeSpec gpc_polytope() {
    PolytopeSpec s = pauli_polytope();
    s.name = "gpc";
    s.half_spaces.push_back({Eigen::Vector3d(1, -1, -1), 0.0, "n5+n6>=n4"});
    return s;
}

PolytopeMesh enumerate_mesh(const PolytopeSpec& spec) {
    constexpr double kTol = 1e-12;
    PolytopeMesh mesh;
    const auto& hs = spec.half_spaces;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            for (std::size_t k = j + 1; k < hs.size(); ++k) {
                Eigen::Matrix3d A;
                A.row(0) = hs[i].normal.transpose();
                A.row(1) = hs[j].normal.transpose();
                A.row(2) = hs[k].normal.transpose();
                if (std::abs(A.determinant()) < kTol) continue;
                const Eigen::Vector3d x = A.partialPivLu().solve(Eigen::Vector3d(hs[i].offset, hs[j].offset, hs[k].offset));
                if (!spec.contains(x, kTol)) continue;
                const bool seen = std::any_of(mesh.vertices.begin(), mesh.vertices.end(),
                                              [&](const Eigen::Vector3d& v) { return (v - x).norm() < 1e-9; });
                if (!seen) mesh.vertices.push_back(x);
            }
        }
    }
    for (const auto& h : hs) {
        Facet f{h.label, {}};
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (std::abs(h.normal.dot(mesh.vertices[v]) - h.offset) < 1e-9) f.vertices.push_back(v);
        }
        if (f.vertices.size() >= 3) mesh.facets.push_back(std::move(f));
    }
    return mesh;
}

VolumeEstimate monte_carlo_volume_ratio(std::uint64_t samples, std::uint64_t seed, unsigned threads) {
    if (samples < 10'000) throw std::invalid_argument("volume estimate needs at least 10^4 samples");
    constexpr std::uint64_t kShard = 1u << 16;
    const std::uint64_t n_shards = (samples + kShard - 1) / kShard;
    std::vector<std::uint64_t> pauli(n_shards, 0), gpc(n_shards, 0);

    auto run_shard = [&](std::uint64_t s) {
        std::mt19937_64 rng(derive_seed(seed, {s}));
        std::uniform_real_distribution<double> u(0.0, 0.5);
        const std::uint64_t n = std::min(kShard, samples - s * kShard);
        std::uint64_t p = 0, g = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double a = u(rng), b = u(rng), c = u(rng);
            if (a >= b && b >= c) {
                ++p;
                if (b + c >= a) ++g;
            }
        }
        pauli[s] = p;
        gpc[s] = g;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_shards));
    if (threads <= 1) {
        for (std::uint64_t s = 0; s < n_shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t s = t; s < n_shards; s += threads) run_shard(s);
            });
        }
        for (auto& th : pool) th.join();
    }

    VolumeEstimate e;
    e.samples = samples;
    for (std::uint64_t s = 0; s < n_shards; ++s) {
        e.pauli_hits += pauli[s];
        e.gpc_hits += gpc[s];
    }
    if (e.gpc_hits == 0) throw std::runtime_error("no samples landed in the GPC polytope");
    constexpr double kBox = 0.125;
    e.ratio = static_cast<double>(e.pauli_hits) / static_cast<double>(e.gpc_hits);
    e.pauli_volume = kBox * static_cast<double>(e.pauli_hits) / static_cast<double>(samples);
    e.gpc_volume = kBox * static_cast<double>(e.gpc_hits) / static_cast<double>(samples);
    return e;
}

double violation_confidence(int n_points) {
    if (n_points < 0) throw std::invalid_argument("number of points must be non-negative");
    return std::ldexp(1.0, -n_points);
}

}  // namespace gpc
