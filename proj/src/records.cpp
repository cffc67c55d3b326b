#include "gpc/records.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gpc/errors.hpp"

namespace gpc {

namespace {

using nlohmann::ordered_json;

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t value) {
    for (int b = 0; b < 8; ++b) {
        h ^= (value >> (8 * b)) & 0xFF;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ordered_json triple_json(const OccupationTriple& t) { return ordered_json::array({t.n4, t.n5, t.n6}); }

OccupationTriple triple_from(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) throw DataError("occupation triple must have three entries");
    return {v[0], v[1], v[2]};
}

ordered_json report_json(const ConstraintReport& r) {
    return {{"pauli_slacks", r.pauli_slacks},
            {"equality_residuals", r.equality_residuals},
            {"bd_slack", r.bd_slack},
            {"higuchi_slack", r.higuchi_slack},
            {"ordering_violation", r.ordering_violation},
            {"inside_pauli", r.inside_pauli},
            {"inside_gpc", r.inside_gpc}};
}

ConstraintReport report_from(const nlohmann::json& j) {
    ConstraintReport r;
    r.pauli_slacks = j.at("pauli_slacks").get<std::array<double, 6>>();
    r.equality_residuals = j.at("equality_residuals").get<std::array<double, 3>>();
    r.bd_slack = j.at("bd_slack").get<double>();
    r.higuchi_slack = j.at("higuchi_slack").get<double>();
    r.ordering_violation = j.at("ordering_violation").get<bool>();
    r.inside_pauli = j.at("inside_pauli").get<bool>();
    r.inside_gpc = j.at("inside_gpc").get<bool>();
    return r;
}

ordered_json record_json(const ExperimentRecord& r) {
    return {{"schema_version", r.schema_version},
            {"point_id", r.point_id},
            {"algorithm", to_string(r.algorithm)},
            {"params_deg", r.params_deg},
            {"angle_convention", to_string(r.convention)},
            {"shots", r.shots},
            {"seed", r.seed},
            {"noise_id", r.noise_id},
            {"ideal", triple_json(r.ideal)},
            {"measured", triple_json(r.measured)},
            {"distance", r.distance},
            {"report", report_json(r.report)},
            {"counts", {{"Z", r.counts[0]}, {"X", r.counts[1]}, {"Y", r.counts[2]}}},
            {"counts_digest", r.counts_digest},
            {"clamp_events", r.clamp_events}};
}

ordered_json file_json(const RecordsFile& file, bool with_timestamp) {
    ordered_json j;
    j["schema"] = "gpc.records";
    j["schema_version"] = kRecordSchemaVersion;
    if (with_timestamp && !file.created.empty()) j["created"] = file.created;
    j["records"] = ordered_json::array();
    for (const auto& r : file.records) j["records"].push_back(record_json(r));
    return j;
}

}  // namespace

std::string counts_digest(const std::array<std::vector<std::uint64_t>, 3>& counts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& table : counts) {
        h = fnv1a(h, table.size());
        for (auto c : table) h = fnv1a(h, c);
    }
    return hex16(h);
}

void write_records(std::ostream& out, const RecordsFile& file) { out << file_json(file, true).dump(2) << '\n'; }

RecordsFile read_records(std::istream& in) {
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.value("schema", "") != "gpc.records") throw DataError("records: wrong schema");
        if (j.at("schema_version").get<int>() > kRecordSchemaVersion) {
            throw DataError("records: unsupported schema version");
        }
        RecordsFile file;
        file.created = j.value("created", "");
        for (const auto& e : j.at("records")) {
            ExperimentRecord r;
            r.schema_version = e.at("schema_version").get<int>();
            r.point_id = e.at("point_id").get<std::uint64_t>();
            r.algorithm = parse_algorithm(e.at("algorithm").get<std::string>());
            r.params_deg = e.at("params_deg").get<std::vector<double>>();
            if (static_cast<int>(r.params_deg.size()) != parameter_count(r.algorithm)) {
                throw DataError("records: wrong parameter count");
            }
            r.convention = parse_angle_convention(e.at("angle_convention").get<std::string>());
            r.shots = e.at("shots").get<std::uint64_t>();
            r.seed = e.at("seed").get<std::uint64_t>();
            r.noise_id = e.at("noise_id").get<std::string>();
            r.ideal = triple_from(e.at("ideal"));
            r.measured = triple_from(e.at("measured"));
            r.distance = e.at("distance").get<double>();
            r.report = report_from(e.at("report"));
            const auto& c = e.at("counts");
            r.counts = {c.at("Z").get<std::vector<std::uint64_t>>(), c.at("X").get<std::vector<std::uint64_t>>(),
                        c.at("Y").get<std::vector<std::uint64_t>>()};
            r.counts_digest = e.at("counts_digest").get<std::string>();
            if (r.counts_digest != counts_digest(r.counts)) throw DataError("records: counts digest mismatch");
            r.clamp_events = e.at("clamp_events").get<int>();
            file.records.push_back(std::move(r));
        }
        return file;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("records: ") + e.what());
    }
}

RecordsFile load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open records file '" + path + "'");
    return read_records(in);
}

std::string record_digest(const RecordsFile& file) {
    const std::string text = file_json(file, false).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return hex16(h);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace gpc
