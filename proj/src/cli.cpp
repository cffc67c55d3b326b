#include "gpc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gpc/errors.hpp"
#include "gpc/noise.hpp"
#include "gpc/polytope.hpp"
#include "gpc/records.hpp"
#include "gpc/sampler.hpp"
#include "gpc/seeds.hpp"

namespace gpc {

namespace {

// Raised for argument combinations CLI11 cannot validate on its own.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::ofstream open_output(const std::string& path) {
    if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
    }
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    f.precision(17);
    return f;
}

unsigned resolve_threads(unsigned requested) {
    return requested ? requested : std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on `threads` workers; results are written by index.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ---- scan -------------------------------------------------------------------

struct ScanArgs {
    std::string config_file;
    std::string algorithm = "alg1";
    double step = 0.1;
    double min_dist = 0.075;
    double angle_min = 0;
    double angle_max = 45;
    double budget = 1e7;
    std::uint64_t seed = 0;
    std::string convention = "doubled";
    unsigned threads = 0;
    std::string out = "points";
};

int cmd_scan(const ScanArgs& a, const CLI::App& sub, std::ostream& out) {
    ScanConfig c;
    if (!a.config_file.empty()) c = load_scan_config(a.config_file);
    if (a.config_file.empty() || sub.count("--algorithm")) c.algorithm = parse_algorithm(a.algorithm);
    if (a.config_file.empty() || sub.count("--step")) c.step_deg = a.step;
    if (a.config_file.empty() || sub.count("--min-dist")) c.min_distance = a.min_dist;
    if (a.config_file.empty() || sub.count("--angle-min")) c.angle_min_deg = a.angle_min;
    if (a.config_file.empty() || sub.count("--angle-max")) c.angle_max_deg = a.angle_max;
    if (a.config_file.empty() || sub.count("--budget")) {
        if (!(a.budget >= 1)) throw UsageError("--budget must be at least 1");
        c.max_budget = static_cast<std::uint64_t>(a.budget);
    }
    if (a.config_file.empty() || sub.count("--seed")) c.seed = a.seed;
    if (a.config_file.empty() || sub.count("--angle-convention")) c.convention = parse_angle_convention(a.convention);
    if (sub.count("--threads")) c.threads = a.threads;
    c.validate();

    const ScanResult r = grid_scan(c);
    {
        auto f = open_output(a.out + ".csv");
        write_points_csv(f, c.algorithm, r.points);
    }
    {
        auto f = open_output(a.out + ".json");
        write_points_json(f, PointsFile{c.algorithm, c.convention, r.points}, &c);
    }
    out << "algorithm " << to_string(c.algorithm) << ", convention " << to_string(c.convention) << "\n";
    out << "evaluated " << r.evaluated << " of " << static_cast<double>(r.grid_size) << " grid points"
        << (r.exhaustive ? "" : " (budget exhausted, random subsample)") << "\n";
    out << "selected " << r.points.size() << " points\n";
    out << std::setprecision(4);
    out << "coverage: max occupations (" << r.coverage.max_occupation[0] << ", " << r.coverage.max_occupation[1]
        << ", " << r.coverage.max_occupation[2] << "), min bd_slack " << r.coverage.min_bd_slack << "\n";
    for (std::size_t k = 0; k < r.coverage.facet_distance.size(); ++k) {
        out << "  closest to facet " << ScanCoverage::kFacets[k] << ": " << r.coverage.facet_distance[k] << "\n";
    }
    for (std::size_t k = 0; k < r.coverage.vertex_distance.size(); ++k) {
        out << "  closest to vertex " << ScanCoverage::kVertices[k] << ": " << r.coverage.vertex_distance[k] << "\n";
    }
    out << "wrote " << a.out << ".csv and " << a.out << ".json\n";
    return kExitOk;
}

// ---- run ----------------------------------------------------------------------

struct RunArgs {
    std::string points;
    std::uint64_t shots = 2048;
    std::string noise;
    bool readout_only = false;
    std::uint64_t seed = 0;
    std::string convention;
    std::string out = "records.json";
    bool no_timestamp = false;
    unsigned threads = 0;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
    if (a.shots < 1) throw UsageError("--shots must be at least 1");
    const PointsFile pf = load_points(a.points);
    const AngleConvention conv = a.convention.empty() ? pf.convention : parse_angle_convention(a.convention);
    std::optional<NoiseModel> noise;
    if (!a.noise.empty()) {
        NoiseOptions opts;
        opts.gate_noise = !a.readout_only;
        noise = noise_model_from_calibration(load_calibration(a.noise), opts);
    }

    RecordsFile rf;
    rf.created = a.no_timestamp ? "" : utc_timestamp();
    rf.records.resize(pf.points.size());
    parallel_for(pf.points.size(), resolve_threads(a.threads), [&](std::size_t i) {
        const auto& p = pf.points[i];
        const auto radians = ry_arguments_from_degrees(p.params_deg, conv);
        const Circuit circuit = build_circuit(pf.algorithm, radians);
        const std::uint64_t seed = derive_seed(a.seed, {i});
        const auto m = occupations_measured(circuit, a.shots, seed, noise ? &*noise : nullptr);
        ExperimentRecord& r = rf.records[i];
        r.point_id = i;
        r.algorithm = pf.algorithm;
        r.params_deg = p.params_deg;
        r.convention = conv;
        r.shots = a.shots;
        r.seed = seed;
        r.noise_id = noise ? noise->id : "ideal";
        r.ideal = occupations_exact(run_circuit(circuit));
        r.measured = m.occupations;
        r.distance = r.measured.distance(r.ideal);
        r.report = check(r.measured, kMeasuredTolerance);
        for (std::size_t k = 0; k < 3; ++k) r.counts[k] = m.counts[k].counts;
        r.counts_digest = counts_digest(r.counts);
        r.clamp_events = m.clamp_events;
    });
    {
        auto f = open_output(a.out);
        write_records(f, rf);
    }
    std::size_t blue = 0;
    double mean_distance = 0;
    double min_slack = rf.records.empty() ? 0 : rf.records.front().report.bd_slack;
    for (const auto& r : rf.records) {
        blue += r.report.in_forbidden_region();
        mean_distance += r.distance;
        min_slack = std::min(min_slack, r.report.bd_slack);
    }
    if (!rf.records.empty()) mean_distance /= static_cast<double>(rf.records.size());
    out << "ran " << rf.records.size() << " points at " << a.shots << " shots per setting ("
        << (noise ? noise->id : "ideal") << ")\n";
    out << std::setprecision(4) << "mean distance to ideal " << mean_distance << ", min bd_slack " << min_slack
        << ", blue-region points " << blue << "\n";
    out << "wrote " << a.out << "\n";
    return kExitOk;
}

// ---- check --------------------------------------------------------------------

int cmd_check(const std::string& path, std::ostream& out) {
    const RecordsFile rf = load_records(path);
    std::size_t inside = 0, blue = 0, outside_pauli = 0;
    for (const auto& r : rf.records) {
        if (r.report.inside_gpc) ++inside;
        if (r.report.in_forbidden_region()) {
            ++blue;
            out << "blue-region: point " << r.point_id << " bd_slack " << r.report.bd_slack << "\n";
        } else if (!r.report.inside_pauli) {
            ++outside_pauli;
            out << "outside Pauli polytope: point " << r.point_id << "\n";
        }
    }
    out << "records " << rf.records.size() << "\n";
    out << "inside GPC polytope " << inside << "\n";
    out << "blue region " << blue << "\n";
    if (outside_pauli) out << "outside Pauli polytope " << outside_pauli << "\n";
    const int n = static_cast<int>(inside);
    std::ostringstream conf;
    conf << std::setprecision(3) << violation_confidence(n);
    out << "violation confidence 2^-" << n << " = " << conf.str() << "\n";
    return kExitOk;
}

// ---- polytope -----------------------------------------------------------------

struct PolytopeArgs {
    std::string emit = "mesh";
    double samples = 1e7;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string points;
    unsigned threads = 0;
};

int cmd_polytope(const PolytopeArgs& a, std::ostream& out) {
    if (a.emit == "volume") {
        if (!(a.samples >= 1)) throw UsageError("--samples must be positive");
        const auto v = monte_carlo_volume_ratio(static_cast<std::uint64_t>(a.samples), a.seed, a.threads);
        out << std::setprecision(6);
        out << "samples " << v.samples << "\n";
        out << "pauli hits " << v.pauli_hits << ", gpc hits " << v.gpc_hits << "\n";
        out << "pauli volume " << v.pauli_volume << " (exact 1/48 = " << 1.0 / 48 << ")\n";
        out << "gpc volume " << v.gpc_volume << " (exact 1/96 = " << 1.0 / 96 << ")\n";
        out << "volume ratio " << v.ratio << "\n";
        return kExitOk;
    }
    std::filesystem::create_directories(a.out_dir);
    const std::string dir = a.out_dir + "/";
    auto vf = open_output(dir + "polytope_vertices.csv");
    auto ff = open_output(dir + "polytope_facets.csv");
    vf << "polytope,vertex,n4,n5,n6\n";
    ff << "polytope,facet,label,vertices\n";
    for (const auto& spec : {pauli_polytope(), gpc_polytope()}) {
        const auto mesh = enumerate_mesh(spec);
        for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
            const auto& v = mesh.vertices[k];
            vf << spec.name << ',' << k << ',' << v.x() << ',' << v.y() << ',' << v.z() << '\n';
        }
        for (std::size_t k = 0; k < mesh.facets.size(); ++k) {
            ff << spec.name << ',' << k << ',' << mesh.facets[k].label << ',';
            for (std::size_t i = 0; i < mesh.facets[k].vertices.size(); ++i) {
                ff << (i ? " " : "") << mesh.facets[k].vertices[i];
            }
            ff << '\n';
        }
        out << spec.name << ": " << mesh.vertices.size() << " vertices, " << mesh.facets.size() << " facets\n";
    }
    if (!a.points.empty()) {
        const PointsFile pf = load_points(a.points);
        auto sf = open_output(dir + "scatter.csv");
        sf << "point_id,n4,n5,n6,bd_slack,inside_gpc\n";
        for (std::size_t i = 0; i < pf.points.size(); ++i) {
            const auto& o = pf.points[i].occupations;
            sf << i << ',' << o.n4 << ',' << o.n5 << ',' << o.n6 << ',' << bd_slack(o) << ','
               << (check(o, kIdealTolerance).inside_gpc ? 1 : 0) << '\n';
        }
        out << "scatter overlay: " << pf.points.size() << " points\n";
    }
    out << "wrote mesh files to " << a.out_dir << "\n";
    return kExitOk;
}

// ---- noise-study --------------------------------------------------------------

struct NoiseStudyArgs {
    std::string points;
    std::string calibration;
    int trials = 100;
    std::uint64_t shots = 1024;
    std::uint64_t seed = 0;
    bool readout_only = false;
    bool damping = false;
    std::string convention;
    std::string out = "shift.csv";
};

int cmd_noise_study(const NoiseStudyArgs& a, std::ostream& out) {
    if (a.trials < 1) throw UsageError("--trials must be at least 1");
    if (a.shots < 1) throw UsageError("--shots must be at least 1");
    const PointsFile pf = load_points(a.points);
    const AngleConvention conv = a.convention.empty() ? pf.convention : parse_angle_convention(a.convention);
    const CalibrationTable table = a.calibration.empty() ? ibmqx2_calibration() : load_calibration(a.calibration);
    NoiseOptions opts;
    opts.gate_noise = !a.readout_only;
    opts.damping = a.damping;
    const NoiseModel model = noise_model_from_calibration(table, opts);

    std::vector<std::vector<double>> params;
    for (const auto& p : pf.points) params.push_back(ry_arguments_from_degrees(p.params_deg, conv));
    const auto stats = shift_study(pf.algorithm, params, model, a.shots, a.trials, a.seed);

    auto f = open_output(a.out);
    f << "point_id";
    for (int k = 1; k <= parameter_count(pf.algorithm); ++k) f << ",theta" << k;
    f << ",ideal_n4,ideal_n5,ideal_n6,mean_n4,mean_n5,mean_n6,d_n4,d_n5,d_n6,mean_distance,ideal_bd_slack,"
         "mean_bd_slack,delta_bd_slack,fraction_increased,clamp_events\n";
    std::size_t inward = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& s = stats[i];
        f << i;
        for (double d : pf.points[i].params_deg) f << ',' << d;
        for (double v : s.ideal) f << ',' << v;
        for (double v : s.mean_noisy) f << ',' << v;
        for (double v : s.mean_displacement) f << ',' << v;
        f << ',' << s.mean_distance << ',' << s.ideal_bd_slack << ',' << s.mean_bd_slack << ',' << s.delta_bd_slack
          << ',' << s.fraction_increased << ',' << s.clamp_events << '\n';
        if (s.delta_bd_slack > 0) ++inward;
    }
    out << "noise model " << model.id << ", " << a.trials << " trials at " << a.shots << " shots per setting\n";
    out << "points shifted inward (mean bd_slack increased): " << inward << " of " << stats.size();
    if (!stats.empty()) {
        out << std::setprecision(4) << " (" << static_cast<double>(inward) / static_cast<double>(stats.size())
            << ")";
    }
    out << "\nwrote " << a.out << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized Pauli constraint experiments on a simulated 3-qubit device", "gpcsim"};
    app.require_subcommand(1);

    ScanArgs scan;
    auto* s = app.add_subcommand("scan", "Grid-scan circuit angles and select well-separated occupation points");
    s->add_option("--config", scan.config_file, "key = value scan configuration file");
    s->add_option("--algorithm", scan.algorithm, "alg1, alg2 or main")->check(CLI::IsMember({"alg1", "alg2", "main"}));
    s->add_option("--step", scan.step, "grid step in degrees");
    s->add_option("--min-dist", scan.min_dist, "minimum Euclidean distance between selected points");
    s->add_option("--angle-min", scan.angle_min, "lower angle bound in degrees");
    s->add_option("--angle-max", scan.angle_max, "upper angle bound in degrees");
    s->add_option("--budget", scan.budget, "maximum evaluations before alg2 switches to random subsampling");
    s->add_option("--seed", scan.seed, "root seed");
    s->add_option("--angle-convention", scan.convention, "doubled: Ry(2 theta); direct: Ry(theta)")
        ->check(CLI::IsMember({"doubled", "direct"}));
    s->add_option("--threads", scan.threads, "worker threads (0: all cores)");
    s->add_option("--out", scan.out, "output prefix; writes PREFIX.csv and PREFIX.json");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Simulate tomography of each point and write experiment records");
    r->add_option("--points", run.points, "points file (.csv or .json)")->required();
    r->add_option("--shots", run.shots, "shots per measurement setting");
    r->add_option("--noise", run.noise, "calibration JSON enabling the device noise model");
    r->add_flag("--readout-only", run.readout_only, "with --noise, apply readout errors only");
    r->add_option("--seed", run.seed, "root seed");
    r->add_option("--angle-convention", run.convention, "override the points file convention")
        ->check(CLI::IsMember({"doubled", "direct"}));
    r->add_option("--out", run.out, "records file");
    r->add_flag("--no-timestamp", run.no_timestamp, "omit the creation timestamp");
    r->add_option("--threads", run.threads, "worker threads (0: all cores)");

    std::string records_path;
    auto* c = app.add_subcommand("check", "Summarize constraint reports of a records file");
    c->add_option("--records", records_path, "records file")->required();

    PolytopeArgs poly;
    auto* p = app.add_subcommand("polytope", "Emit polytope meshes or estimate the volume ratio");
    p->add_option("--emit", poly.emit, "mesh or volume")->check(CLI::IsMember({"mesh", "volume"}));
    p->add_option("--samples", poly.samples, "Monte-Carlo samples for --emit volume");
    p->add_option("--seed", poly.seed, "root seed");
    p->add_option("--out-dir", poly.out_dir, "directory for mesh CSV files");
    p->add_option("--points", poly.points, "points file to export as a scatter overlay");
    p->add_option("--threads", poly.threads, "worker threads (0: all cores)");

    NoiseStudyArgs ns;
    auto* n = app.add_subcommand("noise-study", "Measure how device noise shifts the occupations of each point");
    n->add_option("--points", ns.points, "points file (.csv or .json)")->required();
    n->add_option("--calibration", ns.calibration, "calibration JSON (default: built-in ibmqx2 table)");
    n->add_option("--trials", ns.trials, "noisy experiments per point");
    n->add_option("--shots", ns.shots, "shots per measurement setting");
    n->add_option("--seed", ns.seed, "root seed");
    n->add_flag("--readout-only", ns.readout_only, "readout errors only");
    n->add_flag("--damping", ns.damping, "add T1/T2 damping after each gate");
    n->add_option("--angle-convention", ns.convention, "override the points file convention")
        ->check(CLI::IsMember({"doubled", "direct"}));
    n->add_option("--out", ns.out, "per-point shift report CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (s->parsed()) return cmd_scan(scan, *s, out);
        if (r->parsed()) return cmd_run(run, out);
        if (c->parsed()) return cmd_check(records_path, out);
        if (p->parsed()) return cmd_polytope(poly, out);
        if (n->parsed()) return cmd_noise_study(ns, out);
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace gpc
