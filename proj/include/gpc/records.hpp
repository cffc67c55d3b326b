#pragma once

// Experiment records: one measured point per record, serialized as JSON.
// The file-level "created" timestamp is the only field that varies between
// identical runs and is left out of record_digest().

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpc/circuits.hpp"
#include "gpc/polytope.hpp"
#include "gpc/tomography.hpp"

namespace gpc {

inline constexpr int kRecordSchemaVersion = 1;

struct ExperimentRecord {
    int schema_version = kRecordSchemaVersion;
    std::uint64_t point_id = 0;
    Algorithm algorithm = Algorithm::Alg1;
    std::vector<double> params_deg;
    AngleConvention convention = AngleConvention::Doubled;
    std::uint64_t shots = 0;  // per measurement setting
    std::uint64_t seed = 0;
    std::string noise_id = "ideal";
    OccupationTriple ideal;
    OccupationTriple measured;
    double distance = 0;
    ConstraintReport report;
    std::array<std::vector<std::uint64_t>, 3> counts{};  // Z, X, Y
    std::string counts_digest;
    int clamp_events = 0;
};

/// FNV-1a over the three counts tables, as 16 hex digits.
std::string counts_digest(const std::array<std::vector<std::uint64_t>, 3>& counts);

struct RecordsFile {
    std::string created;  // ISO-8601 UTC; empty to omit
    std::vector<ExperimentRecord> records;
};

void write_records(std::ostream& out, const RecordsFile& file);
/// Throws DataError on malformed JSON, a wrong schema, or a digest mismatch.
RecordsFile read_records(std::istream& in);
RecordsFile load_records(const std::string& path);

/// Digest of the serialized records with the timestamp removed.
std::string record_digest(const RecordsFile& file);

std::string utc_timestamp();

}  // namespace gpc
