#include "gpc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gpc/errors.hpp"
#include "gpc/polytope.hpp"
#include "gpc/seeds.hpp"

namespace gpc {

namespace {

constexpr int kMaxParams = 6;
constexpr std::uint64_t kBlock = 1u << 18;  // grid points per work unit

struct Trig {
    double c = 1, s = 0;  // cos/sin of half the Ry argument
};

// Real 3-qubit statevector kernel. All scan circuits use Ry and CNOT only, so
// amplitudes stay real.
class Kernel {
  public:
    explicit Kernel(Algorithm a) {
        const auto t = circuit_template(a);
        ops_.assign(t.begin(), t.end());
    }

    std::array<double, 3> occupations(const Trig* params) const {
        std::array<double, 8> s{1, 0, 0, 0, 0, 0, 0, 0};
        for (const auto& op : ops_) {
            const unsigned tm = 4u >> op.target;
            if (op.is_cnot) {
                const unsigned cm = 4u >> op.control;
                for (unsigned i = 0; i < 8; ++i) {
                    if ((i & cm) && !(i & tm)) std::swap(s[i], s[i | tm]);
                }
            } else {
                const Trig& g = params[op.param];
                for (unsigned i = 0; i < 8; ++i) {
                    if (i & tm) continue;
                    const double a0 = s[i], a1 = s[i | tm];
                    s[i] = g.c * a0 - g.s * a1;
                    s[i | tm] = g.s * a0 + g.c * a1;
                }
            }
        }
        std::array<double, 3> occ{};
        for (unsigned q = 0; q < 3; ++q) {
            const unsigned m = 4u >> q;
            double d00 = 0, d01 = 0;
            for (unsigned i = 0; i < 8; ++i) {
                if (i & m) continue;
                d00 += s[i] * s[i];
                d01 += s[i] * s[i | m];
            }
            const double h = d00 - 0.5;
            occ[q] = 0.5 - std::sqrt(h * h + d01 * d01);
        }
        if (occ[0] < occ[1]) std::swap(occ[0], occ[1]);
        if (occ[1] < occ[2]) std::swap(occ[1], occ[2]);
        if (occ[0] < occ[1]) std::swap(occ[0], occ[1]);
        return occ;
    }

  private:
    std::vector<TemplateOp> ops_;
};

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double x = a[0] - b[0], y = a[1] - b[1], z = a[2] - b[2];
    return x * x + y * y + z * z;
}

struct Candidate {
    std::array<int, kMaxParams> digits{};
    std::array<double, 3> occ{};
};

struct CoverageAcc {
    std::array<double, 5> facet;
    std::array<double, 4> vertex;
    std::array<double, 3> max_occ{};
    double min_bd = std::numeric_limits<double>::infinity();

    CoverageAcc() {
        facet.fill(std::numeric_limits<double>::infinity());
        vertex.fill(std::numeric_limits<double>::infinity());
    }

    void add(const std::array<double, 3>& o) {
        static constexpr std::array<std::array<double, 3>, 4> kV{
            {{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0.5, 0.5}, {0.5, 0.25, 0.25}}};
        const double bd = o[1] + o[2] - o[0];
        const std::array<double, 5> f{std::abs(o[2]), std::abs(o[1] - o[2]) / std::numbers::sqrt2,
                                      std::abs(o[0] - o[1]) / std::numbers::sqrt2, std::abs(0.5 - o[0]),
                                      std::abs(bd) / std::numbers::sqrt3};
        for (std::size_t k = 0; k < 5; ++k) facet[k] = std::min(facet[k], f[k]);
        for (std::size_t k = 0; k < 4; ++k) vertex[k] = std::min(vertex[k], dist2(o, kV[k]));
        for (std::size_t k = 0; k < 3; ++k) max_occ[k] = std::max(max_occ[k], o[k]);
        min_bd = std::min(min_bd, bd);
    }

    void merge(const CoverageAcc& o) {
        for (std::size_t k = 0; k < 5; ++k) facet[k] = std::min(facet[k], o.facet[k]);
        for (std::size_t k = 0; k < 4; ++k) vertex[k] = std::min(vertex[k], o.vertex[k]);
        for (std::size_t k = 0; k < 3; ++k) max_occ[k] = std::max(max_occ[k], o.max_occ[k]);
        min_bd = std::min(min_bd, o.min_bd);
    }
};

struct BlockOutput {
    std::vector<Candidate> candidates;
    CoverageAcc coverage;
};

// Greedy selection state. A candidate is kept only if it is at least
// min_distance from every kept point; since the kept set only grows, a point
// rejected against any earlier snapshot of it stays rejected.
class Selector {
  public:
    explicit Selector(double min_distance) : md2_(min_distance * min_distance) {}

    static bool far_from(const std::vector<std::array<double, 3>>& kept, const std::array<double, 3>& o,
                         double md2, std::size_t& hint) {
        if (kept.empty()) return true;
        if (hint < kept.size() && dist2(kept[hint], o) < md2) return false;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            if (dist2(kept[k], o) < md2) {
                hint = k;
                return false;
            }
        }
        return true;
    }

    void fold(const BlockOutput& block, std::vector<Candidate>& accepted) {
        for (const auto& c : block.candidates) {
            if (far_from(kept_, c.occ, md2_, hint_)) {
                kept_.push_back(c.occ);
                accepted.push_back(c);
            }
        }
    }

    const std::vector<std::array<double, 3>>& kept() const { return kept_; }
    double md2() const { return md2_; }

  private:
    double md2_;
    std::size_t hint_ = 0;
    std::vector<std::array<double, 3>> kept_;
};

}  // namespace

// ---- ScanConfig -------------------------------------------------------------

void ScanConfig::validate() const {
    if (!(step_deg > 0)) throw std::invalid_argument("scan step must be positive");
    if (!(min_distance > 0)) throw std::invalid_argument("minimum distance must be positive");
    if (!(angle_max_deg >= angle_min_deg)) throw std::invalid_argument("angle range is empty");
    if (!std::isfinite(angle_min_deg) || !std::isfinite(angle_max_deg)) {
        throw std::invalid_argument("angle range must be finite");
    }
    if (max_budget < 1) throw std::invalid_argument("budget must be positive");
}

std::uint64_t ScanConfig::axis_points() const {
    return static_cast<std::uint64_t>(std::floor((angle_max_deg - angle_min_deg) / step_deg + 1e-9)) + 1;
}

long double ScanConfig::grid_size() const {
    return std::pow(static_cast<long double>(axis_points()), parameter_count(algorithm));
}

ScanConfig parse_scan_config(const std::string& text) {
    ScanConfig c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "algorithm") c.algorithm = parse_algorithm(value);
            else if (key == "angle_min") c.angle_min_deg = std::stod(value);
            else if (key == "angle_max") c.angle_max_deg = std::stod(value);
            else if (key == "step") c.step_deg = std::stod(value);
            else if (key == "min_distance") c.min_distance = std::stod(value);
            else if (key == "max_budget") c.max_budget = std::stoull(value);
            else if (key == "seed") c.seed = std::stoull(value);
            else if (key == "angle_convention") c.convention = parse_angle_convention(value);
            else if (key == "threads") c.threads = static_cast<unsigned>(std::stoul(value));
            else throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError("config line " + std::to_string(line_no) + ": bad value for '" + key + "': " + e.what());
        }
    }
    return c;
}

ScanConfig load_scan_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scan_config(ss.str());
}

// ---- Scan -------------------------------------------------------------------

OccupationTriple fast_occupations(Algorithm algorithm, std::span<const double> radians) {
    if (static_cast<int>(radians.size()) != parameter_count(algorithm)) {
        throw std::invalid_argument("wrong number of parameters for " + to_string(algorithm));
    }
    std::array<Trig, kMaxParams> t{};
    for (std::size_t k = 0; k < radians.size(); ++k) t[k] = {std::cos(radians[k] / 2), std::sin(radians[k] / 2)};
    const auto o = Kernel(algorithm).occupations(t.data());
    return {o[0], o[1], o[2]};
}

ScanResult grid_scan(const ScanConfig& config) {
    config.validate();
    const int n_params = parameter_count(config.algorithm);
    const std::uint64_t axis = config.axis_points();
    std::vector<Trig> table(axis);
    for (std::uint64_t k = 0; k < axis; ++k) {
        const double rad = ry_argument_from_degrees(config.axis_value(k), config.convention);
        table[k] = {std::cos(rad / 2), std::sin(rad / 2)};
    }

    ScanResult result;
    result.grid_size = config.grid_size();
    const bool subsample =
        config.algorithm == Algorithm::Alg2 && result.grid_size > static_cast<long double>(config.max_budget);
    result.exhaustive = !subsample;
    const std::uint64_t total =
        subsample ? config.max_budget : static_cast<std::uint64_t>(std::llround(result.grid_size));
    const std::uint64_t n_blocks = (total + kBlock - 1) / kBlock;

    const Kernel kernel(config.algorithm);
    Selector selector(config.min_distance);

    auto run_block = [&](std::uint64_t b, const std::vector<std::array<double, 3>>& snapshot, BlockOutput& out) {
        const std::uint64_t begin = b * kBlock;
        const std::uint64_t end = std::min(total, begin + kBlock);
        std::mt19937_64 rng(derive_seed(config.seed, {b}));
        std::uniform_int_distribution<std::uint64_t> pick(0, axis - 1);
        std::array<int, kMaxParams> digits{};
        std::array<Trig, kMaxParams> params{};
        std::size_t hint = 0;
        for (std::uint64_t flat = begin; flat < end; ++flat) {
            if (subsample) {
                for (int p = 0; p < n_params; ++p) digits[static_cast<std::size_t>(p)] = static_cast<int>(pick(rng));
            } else {
                std::uint64_t rest = flat;
                for (int p = n_params - 1; p >= 0; --p) {
                    digits[static_cast<std::size_t>(p)] = static_cast<int>(rest % axis);
                    rest /= axis;
                }
            }
            for (int p = 0; p < n_params; ++p) {
                params[static_cast<std::size_t>(p)] = table[static_cast<std::size_t>(digits[static_cast<std::size_t>(p)])];
            }
            const auto occ = kernel.occupations(params.data());
            out.coverage.add(occ);
            if (Selector::far_from(snapshot, occ, selector.md2(), hint)) out.candidates.push_back({digits, occ});
        }
    };

    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_blocks)));

    CoverageAcc coverage;
    std::vector<Candidate> accepted;
    for (std::uint64_t wave = 0; wave < n_blocks; wave += threads) {
        const std::uint64_t wave_end = std::min(n_blocks, wave + threads);
        const auto snapshot = selector.kept();
        std::vector<BlockOutput> outputs(wave_end - wave);
        if (outputs.size() == 1) {
            run_block(wave, snapshot, outputs[0]);
        } else {
            std::vector<std::thread> pool;
            for (std::uint64_t b = wave; b < wave_end; ++b) {
                pool.emplace_back([&, b] { run_block(b, snapshot, outputs[b - wave]); });
            }
            for (auto& t : pool) t.join();
        }
        for (const auto& out : outputs) {
            selector.fold(out, accepted);
            coverage.merge(out.coverage);
        }
    }

    result.evaluated = total;
    for (const auto& c : accepted) {
        SelectedPoint p;
        for (int k = 0; k < n_params; ++k) {
            p.params_deg.push_back(config.axis_value(static_cast<std::uint64_t>(c.digits[static_cast<std::size_t>(k)])));
        }
        p.occupations = {c.occ[0], c.occ[1], c.occ[2]};
        p.bd_slack = bd_slack(p.occupations);
        result.points.push_back(std::move(p));
    }
    result.coverage.facet_distance = coverage.facet;
    for (std::size_t k = 0; k < 4; ++k) result.coverage.vertex_distance[k] = std::sqrt(coverage.vertex[k]);
    result.coverage.max_occupation = coverage.max_occ;
    result.coverage.min_bd_slack = coverage.min_bd;
    return result;
}

// ---- Points files -------------------------------------------------------------

void write_points_csv(std::ostream& out, Algorithm algorithm, std::span<const SelectedPoint> points) {
    const int n = parameter_count(algorithm);
    out << "algorithm";
    for (int k = 1; k <= n; ++k) out << ",theta" << k;
    out << ",n4,n5,n6,bd_slack\n";
    const auto old_precision = out.precision(17);
    for (const auto& p : points) {
        if (static_cast<int>(p.params_deg.size()) != n) throw std::invalid_argument("point has wrong parameter count");
        out << to_string(algorithm);
        for (double v : p.params_deg) out << ',' << v;
        out << ',' << p.occupations.n4 << ',' << p.occupations.n5 << ',' << p.occupations.n6 << ',' << p.bd_slack
            << '\n';
    }
    out.precision(old_precision);
}

PointsFile read_points_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            cells.push_back(cell);
        }
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw DataError("points CSV: missing header");
    const auto header = split(line);
    if (header.size() < 5 || header.front() != "algorithm") throw DataError("points CSV: bad header");
    const int n_params = static_cast<int>(header.size()) - 5;
    PointsFile file;
    file.algorithm = n_params == 6 ? Algorithm::Alg2 : Algorithm::Alg1;
    bool first = true;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw DataError("points CSV line " + std::to_string(line_no) + ": wrong column count");
        try {
            const Algorithm a = parse_algorithm(cells[0]);
            if (parameter_count(a) != n_params) throw DataError("points CSV: algorithm does not match header");
            if (first) file.algorithm = a;
            else if (a != file.algorithm) throw DataError("points CSV: mixed algorithms");
            first = false;
            SelectedPoint p;
            for (int k = 0; k < n_params; ++k) p.params_deg.push_back(std::stod(cells[static_cast<std::size_t>(1 + k)]));
            const auto base = static_cast<std::size_t>(1 + n_params);
            p.occupations = {std::stod(cells[base]), std::stod(cells[base + 1]), std::stod(cells[base + 2])};
            p.bd_slack = std::stod(cells[base + 3]);
            file.points.push_back(std::move(p));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError("points CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return file;
}

void write_points_json(std::ostream& out, const PointsFile& file, const ScanConfig* config) {
    nlohmann::ordered_json j;
    j["schema"] = "gpc.points";
    j["schema_version"] = 1;
    j["algorithm"] = to_string(file.algorithm);
    j["angle_convention"] = to_string(file.convention);
    if (config) {
        j["config"] = {{"angle_min", config->angle_min_deg}, {"angle_max", config->angle_max_deg},
                       {"step", config->step_deg},           {"min_distance", config->min_distance},
                       {"max_budget", config->max_budget},   {"seed", config->seed}};
    }
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : file.points) {
        j["points"].push_back({{"params_deg", p.params_deg},
                               {"n4", p.occupations.n4},
                               {"n5", p.occupations.n5},
                               {"n6", p.occupations.n6},
                               {"bd_slack", p.bd_slack}});
    }
    out << j.dump(2) << '\n';
}

PointsFile read_points_json(std::istream& in) {
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.value("schema", "") != "gpc.points") throw DataError("points JSON: wrong schema");
        PointsFile file;
        file.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
        file.convention = parse_angle_convention(j.value("angle_convention", "doubled"));
        for (const auto& p : j.at("points")) {
            SelectedPoint s;
            s.params_deg = p.at("params_deg").get<std::vector<double>>();
            if (static_cast<int>(s.params_deg.size()) != parameter_count(file.algorithm)) {
                throw DataError("points JSON: wrong parameter count");
            }
            s.occupations = {p.at("n4").get<double>(), p.at("n5").get<double>(), p.at("n6").get<double>()};
            s.bd_slack = p.at("bd_slack").get<double>();
            file.points.push_back(std::move(s));
        }
        return file;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("points JSON: ") + e.what());
    }
}

PointsFile load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open points file '" + path + "'");
    const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return is_json ? read_points_json(in) : read_points_csv(in);
}

}  // namespace gpc
