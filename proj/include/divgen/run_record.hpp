#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/landscape.hpp"
#include "divgen/moea.hpp"
#include "divgen/search_config.hpp"

namespace divgen {

struct EvaluatedSuite {
    TestSuite suite;
    FitnessTriple fitness;

    bool operator==(const EvaluatedSuite&) const = default;
};

struct CrashLogEntry {
    int signature = 0;
    int first_generation = 0;
    int min_case_length = 0;  // shortest revealing case seen anywhere in the run

    bool operator==(const CrashLogEntry&) const = default;
};

// Cumulative run-level metrics per generation, read back by the comparison
// harness at adjusted generation indices.
struct ProgressRow {
    int generation = 0;
    double cum_coverage = 0.0;  // blocks ever covered / total_blocks
    int cum_unique_crashes = 0;
    std::optional<double> mean_min_crash_length;

    bool operator==(const ProgressRow&) const = default;
};

struct RunRecord {
    std::vector<LandscapeSnapshot> snapshots;  // generation 0 .. g_max
    std::vector<ProgressRow> progress;
    std::vector<EvaluatedSuite> final_population;
    std::vector<EvaluatedSuite> archive;  // all non-dominated solutions ever evaluated
    std::vector<CrashLogEntry> crash_log; // ascending by signature
    double duration_seconds = 0.0;
    SearchConfig config;
    uint64_t seed = 0;

    bool operator==(const RunRecord&) const = default;
};

std::string run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const std::string& text);

// File writes go through a temp file + rename so interrupted runs leave no
// partial artifact.
void save_run_record(const RunRecord& record, const std::string& path);
RunRecord load_run_record(const std::string& path);

inline constexpr const char* kSnapshotCsvHeader =
    "generation,ppos,hv,maxdiam,avgdiam,mindiam,reldiam,pconnec,nconnec,kconnec,lconnec,hvconnec";

std::string snapshots_to_csv(const std::vector<LandscapeSnapshot>& snapshots);
void save_snapshots_csv(const std::vector<LandscapeSnapshot>& snapshots, const std::string& path);

}  // namespace divgen
