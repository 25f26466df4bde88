#include "divgen/run_record.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "divgen/errors.hpp"
#include "divgen/io_util.hpp"

namespace divgen {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const char* name) {
    if (!j.contains(name))
        throw ParseError(std::string("run record: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("run record: field '") + name + "' has the wrong type");
    }
}

json config_to_json(const SearchConfig& cfg) {
    json j;
    j["crossover_prob"] = cfg.crossover_prob;
    j["mutation_prob"] = cfg.mutation_prob;
    j["inner_prob"] = cfg.inner_prob;
    j["size_pop"] = cfg.size_pop;
    j["size_off"] = cfg.size_off;
    j["suite_size"] = cfg.suite_size;
    j["min_seq_len"] = cfg.min_seq_len;
    j["max_seq_len"] = cfg.max_seq_len;
    j["g_max"] = cfg.g_max;
    j["size_init"] = cfg.size_init;
    j["div_limit"] = cfg.div_limit;
    j["n_div"] = cfg.n_div;
    j["mode"] = cfg.mode == Mode::div ? "div" : "baseline";
    j["seed"] = cfg.seed;
    j["connectedness_k"] = cfg.connectedness_k;
    j["length_objective_mean"] = cfg.length_objective_mean;
    return j;
}

SearchConfig config_from_json(const json& j) {
    SearchConfig cfg;
    cfg.crossover_prob = get_field<double>(j, "crossover_prob");
    cfg.mutation_prob = get_field<double>(j, "mutation_prob");
    cfg.inner_prob = get_field<double>(j, "inner_prob");
    cfg.size_pop = get_field<int>(j, "size_pop");
    cfg.size_off = get_field<int>(j, "size_off");
    cfg.suite_size = get_field<int>(j, "suite_size");
    cfg.min_seq_len = get_field<int>(j, "min_seq_len");
    cfg.max_seq_len = get_field<int>(j, "max_seq_len");
    cfg.g_max = get_field<int>(j, "g_max");
    cfg.size_init = get_field<int>(j, "size_init");
    cfg.div_limit = get_field<double>(j, "div_limit");
    cfg.n_div = get_field<int>(j, "n_div");
    std::string mode = get_field<std::string>(j, "mode");
    if (mode == "baseline")
        cfg.mode = Mode::baseline;
    else if (mode == "div")
        cfg.mode = Mode::div;
    else
        throw ParseError("run record: field 'mode' must be 'baseline' or 'div'");
    cfg.seed = get_field<uint64_t>(j, "seed");
    cfg.connectedness_k = get_field<int64_t>(j, "connectedness_k");
    cfg.length_objective_mean = get_field<bool>(j, "length_objective_mean");
    return cfg;
}

json fitness_to_json(const FitnessTriple& f) {
    json j;
    j["crashes"] = f.crashes;
    j["coverage"] = f.coverage;
    j["length"] = f.length;
    return j;
}

FitnessTriple fitness_from_json(const json& j) {
    FitnessTriple f;
    f.crashes = get_field<int>(j, "crashes");
    f.coverage = get_field<double>(j, "coverage");
    f.length = get_field<double>(j, "length");
    return f;
}

json evaluated_to_json(const EvaluatedSuite& e) {
    json j;
    j["fitness"] = fitness_to_json(e.fitness);
    j["suite"] = e.suite.cases;
    return j;
}

EvaluatedSuite evaluated_from_json(const json& j) {
    EvaluatedSuite e;
    e.fitness = fitness_from_json(get_field<json>(j, "fitness"));
    e.suite.cases = get_field<std::vector<TestCase>>(j, "suite");
    return e;
}

json snapshot_to_json(const LandscapeSnapshot& s) {
    json j;
    j["generation"] = s.generation;
    j["ppos"] = s.ppos;
    j["hv"] = s.hv;
    j["maxdiam"] = s.maxdiam;
    j["avgdiam"] = s.avgdiam;
    j["mindiam"] = s.mindiam;
    j["reldiam"] = s.reldiam;
    j["pconnec"] = s.pconnec;
    j["nconnec"] = s.nconnec;
    j["kconnec"] = s.kconnec;
    j["lconnec"] = s.lconnec;
    j["hvconnec"] = s.hvconnec;
    j["div_pop"] = s.div_pop;
    j["dedup_shortfall"] = s.dedup_shortfall;
    j["fresh_injection"] = s.fresh_injection;
    j["nconnec_with_singletons"] = s.nconnec_with_singletons;
    return j;
}

LandscapeSnapshot snapshot_from_json(const json& j) {
    LandscapeSnapshot s;
    s.generation = get_field<int>(j, "generation");
    s.ppos = get_field<double>(j, "ppos");
    s.hv = get_field<double>(j, "hv");
    s.maxdiam = get_field<int64_t>(j, "maxdiam");
    s.avgdiam = get_field<double>(j, "avgdiam");
    s.mindiam = get_field<int64_t>(j, "mindiam");
    s.reldiam = get_field<double>(j, "reldiam");
    s.pconnec = get_field<double>(j, "pconnec");
    s.nconnec = get_field<int>(j, "nconnec");
    s.kconnec = get_field<int64_t>(j, "kconnec");
    s.lconnec = get_field<int>(j, "lconnec");
    s.hvconnec = get_field<double>(j, "hvconnec");
    s.div_pop = get_field<double>(j, "div_pop");
    s.dedup_shortfall = get_field<bool>(j, "dedup_shortfall");
    s.fresh_injection = get_field<bool>(j, "fresh_injection");
    s.nconnec_with_singletons = get_field<int>(j, "nconnec_with_singletons");
    return s;
}

}  // namespace

std::string run_record_to_json(const RunRecord& record) {
    json j;
    json snapshots = json::array();
    for (const LandscapeSnapshot& s : record.snapshots) snapshots.push_back(snapshot_to_json(s));
    j["snapshots"] = std::move(snapshots);
    json progress = json::array();
    for (const ProgressRow& p : record.progress) {
        json row;
        row["generation"] = p.generation;
        row["cum_coverage"] = p.cum_coverage;
        row["cum_unique_crashes"] = p.cum_unique_crashes;
        if (p.mean_min_crash_length)
            row["mean_min_crash_length"] = *p.mean_min_crash_length;
        else
            row["mean_min_crash_length"] = nullptr;
        progress.push_back(std::move(row));
    }
    j["progress"] = std::move(progress);
    json pop = json::array();
    for (const EvaluatedSuite& e : record.final_population) pop.push_back(evaluated_to_json(e));
    j["final_population"] = std::move(pop);
    json archive = json::array();
    for (const EvaluatedSuite& e : record.archive) archive.push_back(evaluated_to_json(e));
    j["archive"] = std::move(archive);
    json crash_log = json::array();
    for (const CrashLogEntry& e : record.crash_log) {
        json row;
        row["signature"] = e.signature;
        row["first_generation"] = e.first_generation;
        row["min_case_length"] = e.min_case_length;
        crash_log.push_back(std::move(row));
    }
    j["crash_log"] = std::move(crash_log);
    j["duration_seconds"] = record.duration_seconds;
    j["config"] = config_to_json(record.config);
    j["seed"] = record.seed;
    return j.dump() + "\n";
}

RunRecord run_record_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("run record: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("run record: top-level value must be an object");
    RunRecord record;
    for (const json& s : get_field<json>(j, "snapshots")) record.snapshots.push_back(snapshot_from_json(s));
    for (const json& p : get_field<json>(j, "progress")) {
        ProgressRow row;
        row.generation = get_field<int>(p, "generation");
        row.cum_coverage = get_field<double>(p, "cum_coverage");
        row.cum_unique_crashes = get_field<int>(p, "cum_unique_crashes");
        if (!p.contains("mean_min_crash_length"))
            throw ParseError("run record: missing field 'mean_min_crash_length'");
        if (!p.at("mean_min_crash_length").is_null())
            row.mean_min_crash_length = get_field<double>(p, "mean_min_crash_length");
        record.progress.push_back(std::move(row));
    }
    for (const json& e : get_field<json>(j, "final_population"))
        record.final_population.push_back(evaluated_from_json(e));
    for (const json& e : get_field<json>(j, "archive"))
        record.archive.push_back(evaluated_from_json(e));
    for (const json& e : get_field<json>(j, "crash_log")) {
        CrashLogEntry entry;
        entry.signature = get_field<int>(e, "signature");
        entry.first_generation = get_field<int>(e, "first_generation");
        entry.min_case_length = get_field<int>(e, "min_case_length");
        record.crash_log.push_back(entry);
    }
    record.duration_seconds = get_field<double>(j, "duration_seconds");
    record.config = config_from_json(get_field<json>(j, "config"));
    record.seed = get_field<uint64_t>(j, "seed");
    return record;
}

void save_run_record(const RunRecord& record, const std::string& path) {
    write_file_atomic(path, run_record_to_json(record));
}

RunRecord load_run_record(const std::string& path) {
    return run_record_from_json(read_file(path));
}

std::string snapshots_to_csv(const std::vector<LandscapeSnapshot>& snapshots) {
    std::string out = kSnapshotCsvHeader;
    out += '\n';
    for (const LandscapeSnapshot& s : snapshots) {
        out += std::to_string(s.generation);
        out += ',';
        out += format_double(s.ppos);
        out += ',';
        out += format_double(s.hv);
        out += ',';
        out += std::to_string(s.maxdiam);
        out += ',';
        out += format_double(s.avgdiam);
        out += ',';
        out += std::to_string(s.mindiam);
        out += ',';
        out += format_double(s.reldiam);
        out += ',';
        out += format_double(s.pconnec);
        out += ',';
        out += std::to_string(s.nconnec);
        out += ',';
        out += std::to_string(s.kconnec);
        out += ',';
        out += std::to_string(s.lconnec);
        out += ',';
        out += format_double(s.hvconnec);
        out += '\n';
    }
    return out;
}

void save_snapshots_csv(const std::vector<LandscapeSnapshot>& snapshots, const std::string& path) {
    write_file_atomic(path, snapshots_to_csv(snapshots));
}

}  // namespace divgen
