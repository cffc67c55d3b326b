#include "gpc/cli.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpc/errors.hpp"
#include "gpc/records.hpp"
#include "gpc/sampler.hpp"

using namespace gpc;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"gpcsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gpc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

ExperimentRecord fake_record(std::uint64_t id, OccupationTriple occ) {
    ExperimentRecord r;
    r.point_id = id;
    r.params_deg = {0, 0, 0};
    r.shots = 2048;
    r.measured = occ;
    r.report = check(occ, kMeasuredTolerance);
    r.counts = {std::vector<std::uint64_t>(8, 256), std::vector<std::uint64_t>(8, 256),
                std::vector<std::uint64_t>(8, 256)};
    r.counts_digest = counts_digest(r.counts);
    return r;
}

}  // namespace

TEST_F(CliTest, usage_errors) {
    EXPECT_EQ(cli({}).code, kExitUsage);
    EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
    EXPECT_EQ(cli({"scan", "--algorithm", "alg9"}).code, kExitUsage);
    EXPECT_EQ(cli({"scan", "--step", "0", "--out", path("p")}).code, kExitUsage);
    EXPECT_EQ(cli({"polytope", "--emit", "volume", "--samples", "0"}).code, kExitUsage);
    EXPECT_EQ(cli({"run"}).code, kExitUsage);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, data_errors) {
    EXPECT_EQ(cli({"run", "--points", path("missing.csv")}).code, kExitData);
    std::ofstream(path("bad.json")) << "{\"schema\": \"nope\"}";
    EXPECT_EQ(cli({"check", "--records", path("bad.json")}).code, kExitData);
    std::ofstream(path("pts.csv")) << "algorithm,theta1,theta2,theta3,n4,n5,n6,bd_slack\n";
    std::ofstream(path("cal.json")) << "{\"qubits\": 3}";
    EXPECT_EQ(cli({"run", "--points", path("pts.csv"), "--noise", path("cal.json"), "--out", path("r.json")}).code,
              kExitData);
}

TEST_F(CliTest, scan_writes_csv_and_json) {
    const auto start = std::chrono::steady_clock::now();
    const auto r = cli({"scan", "--step", "5.0", "--out", path("coarse")});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_LT(secs, 1.0);
    EXPECT_NE(r.out.find("selected"), std::string::npos);
    EXPECT_NE(r.out.find("closest to facet"), std::string::npos);
    const auto csv = load_points(path("coarse.csv"));
    const auto json = load_points(path("coarse.json"));
    EXPECT_EQ(csv.points.size(), json.points.size());
    EXPECT_GT(csv.points.size(), 5u);
}

TEST_F(CliTest, scan_min_dist_ten_keeps_one_point) {
    ASSERT_EQ(cli({"scan", "--step", "5", "--min-dist", "10", "--out", path("one")}).code, kExitOk);
    EXPECT_EQ(load_points(path("one.csv")).points.size(), 1u);
}

TEST_F(CliTest, scan_config_file_with_override) {
    std::ofstream(path("scan.cfg")) << "algorithm = main\nstep = 5\nmin_distance = 10\n";
    ASSERT_EQ(cli({"scan", "--config", path("scan.cfg"), "--min-dist", "0.075", "--out", path("cfg")}).code, kExitOk);
    const auto p = load_points(path("cfg.json"));
    EXPECT_EQ(p.algorithm, Algorithm::Main);
    EXPECT_GT(p.points.size(), 1u);
}

TEST_F(CliTest, pipeline_is_deterministic_and_clean) {
    ASSERT_EQ(cli({"scan", "--step", "3", "--out", path("pts")}).code, kExitOk);
    const auto a = cli({"run", "--points", path("pts.csv"), "--seed", "5", "--out", path("a.json")});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    ASSERT_EQ(cli({"run", "--points", path("pts.csv"), "--seed", "5", "--out", path("b.json"), "--threads", "2"}).code,
              kExitOk);
    EXPECT_EQ(record_digest(load_records(path("a.json"))), record_digest(load_records(path("b.json"))));
    ASSERT_EQ(cli({"run", "--points", path("pts.csv"), "--seed", "5", "--no-timestamp", "--out", path("c.json")}).code,
              kExitOk);
    ASSERT_EQ(cli({"run", "--points", path("pts.csv"), "--seed", "5", "--no-timestamp", "--out", path("d.json")}).code,
              kExitOk);
    EXPECT_EQ(slurp(path("c.json")), slurp(path("d.json")));

    const auto rf = load_records(path("a.json"));
    EXPECT_EQ(rf.records.size(), load_points(path("pts.csv")).points.size());
    for (const auto& r : rf.records) {
        EXPECT_FALSE(r.report.in_forbidden_region());
        EXPECT_GE(r.report.bd_slack, -kMeasuredTolerance);
    }
    const auto c = cli({"check", "--records", path("a.json")});
    ASSERT_EQ(c.code, kExitOk);
    EXPECT_NE(c.out.find("blue region 0"), std::string::npos) << c.out;
}

TEST_F(CliTest, run_with_noise_fixture) {
    ASSERT_EQ(cli({"scan", "--step", "15", "--out", path("pts")}).code, kExitOk);
    const auto r = cli({"run", "--points", path("pts.json"), "--shots", "1024", "--noise",
                        GPC_DATA_DIR "/ibmqx2_2018-02-23.json", "--out", path("n.json")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rf = load_records(path("n.json"));
    ASSERT_FALSE(rf.records.empty());
    EXPECT_NE(rf.records[0].noise_id.find("ibmqx2"), std::string::npos);
}

TEST_F(CliTest, empty_points_give_empty_records) {
    std::ofstream(path("empty.csv")) << "algorithm,theta1,theta2,theta3,n4,n5,n6,bd_slack\n";
    ASSERT_EQ(cli({"run", "--points", path("empty.csv"), "--out", path("r.json")}).code, kExitOk);
    EXPECT_TRUE(load_records(path("r.json")).records.empty());
}

TEST_F(CliTest, check_confidence_lines) {
    RecordsFile sixty;
    for (std::uint64_t i = 0; i < 60; ++i) sixty.records.push_back(fake_record(i, {0.25, 0.2, 0.1}));
    {
        std::ofstream f(path("sixty.json"));
        write_records(f, sixty);
    }
    auto r = cli({"check", "--records", path("sixty.json")});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("2^-60 = 8.67e-19"), std::string::npos) << r.out;

    RecordsFile mixed;
    mixed.records.push_back(fake_record(0, {0.25, 0.2, 0.1}));
    mixed.records.push_back(fake_record(1, {0.5, 0.2, 0.2}));  // bd_slack -0.1
    {
        std::ofstream f(path("mixed.json"));
        write_records(f, mixed);
    }
    r = cli({"check", "--records", path("mixed.json")});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_NE(r.out.find("2^-1 = 0.5"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("blue-region: point 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, records_round_trip_and_digest_check) {
    RecordsFile f;
    f.created = "2020-01-01T00:00:00Z";
    f.records.push_back(fake_record(3, {0.3, 0.2, 0.15}));
    std::stringstream ss;
    write_records(ss, f);
    const auto back = read_records(ss);
    EXPECT_EQ(back.created, f.created);
    ASSERT_EQ(back.records.size(), 1u);
    EXPECT_EQ(back.records[0].measured.values(), f.records[0].measured.values());
    EXPECT_EQ(back.records[0].report.bd_slack, f.records[0].report.bd_slack);
    f.created = "2030-01-01T00:00:00Z";
    EXPECT_EQ(record_digest(back), record_digest(f));

    std::string text = ss.str();
    const auto pos = text.find("\"counts_digest\": \"") + 18;
    text[pos] = text[pos] == '0' ? '1' : '0';
    std::stringstream tampered(text);
    EXPECT_THROW(read_records(tampered), DataError);
}

TEST_F(CliTest, polytope_mesh_and_volume) {
    ASSERT_EQ(cli({"scan", "--step", "9", "--out", path("pts")}).code, kExitOk);
    const auto m = cli({"polytope", "--emit", "mesh", "--out-dir", path("mesh"), "--points", path("pts.csv")});
    ASSERT_EQ(m.code, kExitOk) << m.err;
    EXPECT_NE(m.out.find("pauli: 4 vertices"), std::string::npos) << m.out;
    EXPECT_NE(m.out.find("gpc: 4 vertices"), std::string::npos) << m.out;
    EXPECT_TRUE(fs::exists(path("mesh/polytope_vertices.csv")));
    EXPECT_TRUE(fs::exists(path("mesh/scatter.csv")));
    const auto v = cli({"polytope", "--emit", "volume", "--samples", "1e5"});
    ASSERT_EQ(v.code, kExitOk);
    EXPECT_NE(v.out.find("volume ratio"), std::string::npos);
}

TEST_F(CliTest, noise_study_report) {
    ASSERT_EQ(cli({"scan", "--step", "15", "--out", path("pts")}).code, kExitOk);
    const auto r = cli({"noise-study", "--points", path("pts.csv"), "--trials", "3", "--shots", "256", "--out",
                        path("shift.csv")});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("shifted inward"), std::string::npos);
    const std::string csv = slurp(path("shift.csv"));
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
              load_points(path("pts.csv")).points.size() + 1);
    EXPECT_EQ(cli({"noise-study", "--points", path("pts.csv"), "--trials", "0"}).code, kExitUsage);
}
