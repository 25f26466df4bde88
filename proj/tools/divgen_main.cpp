// Command-line front end. Talks to the engine exclusively through the C API
// in divgen.h; everything else here is argument parsing and CSV plumbing.
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "divgen.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;

int exit_code_for(divgen_status s) {
    return s == DIVGEN_ERR_INTERNAL ? kExitInternal : kExitUsage;
}

int report_api_error(const char* context, divgen_status s) {
    std::fprintf(stderr, "error: %s: %s\n", context, divgen_last_error());
    return exit_code_for(s);
}

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool write_text_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        if (!out) return false;
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    return !ec;
}

struct ModelHandle {
    divgen_model* ptr = nullptr;
    ModelHandle() = default;
    ModelHandle(const ModelHandle&) = delete;
    ModelHandle& operator=(const ModelHandle&) = delete;
    ~ModelHandle() { divgen_model_free(ptr); }
};

struct RecordHandle {
    divgen_run_record* ptr = nullptr;
    RecordHandle() = default;
    RecordHandle(const RecordHandle&) = delete;
    RecordHandle& operator=(const RecordHandle&) = delete;
    ~RecordHandle() { divgen_record_free(ptr); }
};

const char* mode_name(int mode) { return mode == DIVGEN_MODE_DIV ? "div" : "baseline"; }

std::string run_stem(const std::string& model_id, int mode, int rep) {
    return "run_" + model_id + "_" + mode_name(mode) + "_" + std::to_string(rep);
}

struct ParsedRunName {
    std::string model_id;
    int mode = DIVGEN_MODE_BASELINE;
    int rep = 0;
};

// Filenames look like run_<model>_<mode>_<rep>.json; the model id may itself
// contain underscores, so the mode and rep are peeled off from the right.
std::optional<ParsedRunName> parse_run_filename(const fs::path& path) {
    if (path.extension() != ".json") return std::nullopt;
    std::string stem = path.stem().string();
    if (stem.rfind("run_", 0) != 0) return std::nullopt;
    stem.erase(0, 4);
    size_t rep_sep = stem.find_last_of('_');
    if (rep_sep == std::string::npos) return std::nullopt;
    std::string rep_str = stem.substr(rep_sep + 1);
    stem.erase(rep_sep);
    size_t mode_sep = stem.find_last_of('_');
    if (mode_sep == std::string::npos) return std::nullopt;
    std::string mode_str = stem.substr(mode_sep + 1);
    ParsedRunName out;
    out.model_id = stem.substr(0, mode_sep);
    if (out.model_id.empty()) return std::nullopt;
    if (mode_str == "baseline")
        out.mode = DIVGEN_MODE_BASELINE;
    else if (mode_str == "div")
        out.mode = DIVGEN_MODE_DIV;
    else
        return std::nullopt;
    int rep = 0;
    auto res = std::from_chars(rep_str.data(), rep_str.data() + rep_str.size(), rep);
    if (res.ec != std::errc() || res.ptr != rep_str.data() + rep_str.size() || rep < 0)
        return std::nullopt;
    out.rep = rep;
    return out;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---- generate-model ---------------------------------------------------------

struct GenerateArgs {
    uint64_t seed = 1;
    int32_t states = 30;
    int32_t alphabet = 12;
    int32_t blocks = 200;
    int32_t crash_rules = 8;
    double branching = 0.35;
    std::string out;
};

int cmd_generate_model(const GenerateArgs& args) {
    ModelHandle model;
    divgen_status s = divgen_model_generate(args.seed, args.states, args.alphabet, args.blocks,
                                            args.crash_rules, args.branching, &model.ptr);
    if (s != DIVGEN_OK) return report_api_error("generate-model", s);
    s = divgen_model_save(model.ptr, args.out.c_str());
    if (s != DIVGEN_OK) return report_api_error("generate-model", s);
    std::printf("%s: %d states, alphabet %d, %d crash rules, %d blocks, %d transitions\n",
                args.out.c_str(), divgen_model_n_states(model.ptr),
                divgen_model_alphabet_size(model.ptr), divgen_model_n_crash_rules(model.ptr),
                divgen_model_total_blocks(model.ptr), divgen_model_n_transitions(model.ptr));
    return 0;
}

// ---- run --------------------------------------------------------------------

struct RunArgs {
    std::vector<std::string> models;
    std::vector<std::string> modes{"baseline"};
    int32_t reps = 1;
    uint64_t seed = 1;
    int32_t workers = 1;
    std::string out;
    divgen_search_config cfg{};
    bool off_given = false;
    bool quiet = false;
};

struct ProgressLabel {
    std::string text;
};

void print_progress(int32_t generation, int32_t g_max, double hv, void* user) {
    const auto* label = static_cast<const ProgressLabel*>(user);
    std::printf("%s gen %d/%d hv=%s\n", label->text.c_str(), generation, g_max,
                fmt_double(hv).c_str());
}

int cmd_run(RunArgs& args) {
    if (!args.off_given) args.cfg.size_off = args.cfg.size_pop;
    std::error_code ec;
    fs::create_directories(args.out, ec);
    if (ec) {
        std::fprintf(stderr, "error: run: cannot create output directory %s: %s\n",
                     args.out.c_str(), ec.message().c_str());
        return kExitUsage;
    }
    for (const std::string& model_path : args.models) {
        ModelHandle model;
        divgen_status s = divgen_model_load(model_path.c_str(), &model.ptr);
        if (s != DIVGEN_OK) return report_api_error("run", s);
        std::string model_id = fs::path(model_path).stem().string();
        for (const std::string& mode_str : args.modes) {
            int mode = mode_str == "div" ? DIVGEN_MODE_DIV : DIVGEN_MODE_BASELINE;
            for (int32_t rep = 0; rep < args.reps; ++rep) {
                divgen_search_config cfg = args.cfg;
                cfg.mode = mode;
                cfg.seed = divgen_derive_run_seed(args.seed, model_id.c_str(), mode, rep);
                ProgressLabel label{model_id + " " + mode_str + " rep " + std::to_string(rep)};
                RecordHandle rec;
                s = divgen_run(model.ptr, &cfg, args.workers,
                               args.quiet ? nullptr : print_progress, &label, &rec.ptr);
                if (s != DIVGEN_OK) return report_api_error("run", s);
                std::string stem = run_stem(model_id, mode, rep);
                fs::path json_path = fs::path(args.out) / (stem + ".json");
                fs::path csv_path =
                    fs::path(args.out) / ("snapshots_" + stem.substr(4) + ".csv");
                s = divgen_record_save_json(rec.ptr, json_path.string().c_str());
                if (s != DIVGEN_OK) return report_api_error("run", s);
                s = divgen_record_save_snapshots_csv(rec.ptr, csv_path.string().c_str());
                if (s != DIVGEN_OK) return report_api_error("run", s);
                std::printf("%s done in %ss -> %s\n", label.text.c_str(),
                            fmt_double(divgen_record_duration_seconds(rec.ptr)).c_str(),
                            json_path.string().c_str());
            }
        }
    }
    return 0;
}

// ---- compare ----------------------------------------------------------------

struct RunData {
    int rep = 0;
    int mode = DIVGEN_MODE_BASELINE;
    double duration = 0.0;
    std::vector<double> coverage;        // cumulative, indexed by generation
    std::vector<double> crashes;         // cumulative unique crashes
    std::vector<double> min_crash_len;   // -1 while the run has found no crash
};

using SideData = std::map<std::string, std::vector<RunData>>;

bool load_side(const std::string& dir, SideData& out) {
    if (!fs::is_directory(dir)) {
        std::fprintf(stderr, "error: %s is not a directory\n", dir.c_str());
        return false;
    }
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto parsed = parse_run_filename(entry.path());
        if (!parsed) continue;
        RecordHandle rec;
        divgen_status s = divgen_record_load_json(entry.path().string().c_str(), &rec.ptr);
        if (s != DIVGEN_OK) {
            std::fprintf(stderr, "error: %s: %s\n", entry.path().string().c_str(),
                         divgen_last_error());
            return false;
        }
        RunData data;
        data.rep = parsed->rep;
        data.duration = divgen_record_duration_seconds(rec.ptr);
        divgen_search_config cfg;
        divgen_record_config(rec.ptr, &cfg);
        data.mode = cfg.mode;
        int32_t gens = divgen_record_generations(rec.ptr);
        for (int32_t g = 0; g < gens; ++g) {
            double cov = 0.0, mlen = -1.0;
            int64_t ncrash = 0;
            divgen_record_progress(rec.ptr, g, &cov, &ncrash, &mlen);
            data.coverage.push_back(cov);
            data.crashes.push_back(static_cast<double>(ncrash));
            data.min_crash_len.push_back(mlen);
        }
        out[parsed->model_id].push_back(std::move(data));
    }
    return true;
}

int min_generation_index(const std::vector<RunData>& runs) {
    size_t rows = runs.front().coverage.size();
    for (const RunData& r : runs) rows = std::min(rows, r.coverage.size());
    return static_cast<int>(rows) - 1;
}

struct Concern {
    const char* name;
    bool larger_is_better;
    bool budget_adjusted;
};

constexpr Concern kConcerns[] = {
    {"duration", false, false},
    {"coverage", true, true},
    {"crashes", true, true},
    {"min_crash_len", false, true},
};

std::vector<double> concern_sample(const std::vector<RunData>& runs, const Concern& concern,
                                   int gen) {
    std::vector<double> sample;
    for (const RunData& r : runs) {
        if (std::string_view(concern.name) == "duration") {
            sample.push_back(r.duration);
        } else if (std::string_view(concern.name) == "coverage") {
            sample.push_back(r.coverage[gen]);
        } else if (std::string_view(concern.name) == "crashes") {
            sample.push_back(r.crashes[gen]);
        } else {
            double v = r.min_crash_len[gen];
            if (v >= 0.0) sample.push_back(v);  // runs without crashes carry no length
        }
    }
    return sample;
}

const char* effect_name(int32_t e) {
    switch (e) {
        case DIVGEN_EFFECT_SMALL: return "small";
        case DIVGEN_EFFECT_MEDIUM: return "medium";
        case DIVGEN_EFFECT_LARGE: return "large";
        default: return "negligible";
    }
}

const char* direction_name(int32_t d) {
    if (d == DIVGEN_DIRECTION_BETTER) return "better";
    if (d == DIVGEN_DIRECTION_WORSE) return "worse";
    return "equal";
}

std::string csv_field(double v) { return std::isnan(v) ? std::string() : fmt_double(v); }

int cmd_compare(const std::string& dir_a, const std::string& dir_b, const std::string& out) {
    SideData side_a, side_b;
    if (!load_side(dir_a, side_a) || !load_side(dir_b, side_b)) return kExitUsage;
    if (side_a.empty() || side_b.empty()) {
        std::fprintf(stderr, "error: compare: no run artifacts found in %s\n",
                     side_a.empty() ? dir_a.c_str() : dir_b.c_str());
        return kExitUsage;
    }
    std::vector<std::string> only_a, only_b;
    for (const auto& [id, runs] : side_a)
        if (!side_b.count(id)) only_a.push_back(id);
    for (const auto& [id, runs] : side_b)
        if (!side_a.count(id)) only_b.push_back(id);
    if (!only_a.empty() || !only_b.empty()) {
        std::fprintf(stderr, "error: compare: model sets differ\n");
        for (const std::string& id : only_a)
            std::fprintf(stderr, "  only in %s: %s\n", dir_a.c_str(), id.c_str());
        for (const std::string& id : only_b)
            std::fprintf(stderr, "  only in %s: %s\n", dir_b.c_str(), id.c_str());
        return kExitUsage;
    }

    std::string csv =
        "subject,gen_a,mean_a,median_a,sd_a,gen_b,mean_b,median_b,sd_b,p_value,a12,"
        "effect_class,direction\n";
    std::vector<std::string> table;
    for (const auto& [model_id, runs_a] : side_a) {
        const std::vector<RunData>& runs_b = side_b.at(model_id);
        int full_a = min_generation_index(runs_a);
        int full_b = min_generation_index(runs_b);
        int read_a = full_a;
        int read_b = full_b;
        // The same-time-budget rule: when one side is the diversity mode and
        // the other the baseline, the diversity side's per-generation metrics
        // are read at the generation count that fits the baseline's wall
        // clock. Duration itself always compares full budgets.
        int mode_a = runs_a.front().mode;
        int mode_b = runs_b.front().mode;
        if (mode_a != mode_b) {
            std::vector<double> dur_a, dur_b;
            for (const RunData& r : runs_a) dur_a.push_back(r.duration);
            for (const RunData& r : runs_b) dur_b.push_back(r.duration);
            double med_a = median_of(dur_a);
            double med_b = median_of(dur_b);
            bool div_is_b = mode_b == DIVGEN_MODE_DIV;
            double med_base = div_is_b ? med_a : med_b;
            double med_div = div_is_b ? med_b : med_a;
            if (med_base > 0.0) {
                double overhead = 0.0;
                divgen_overhead_percent(med_base, med_div, &overhead);
                if (div_is_b)
                    read_b = std::min(full_b, divgen_adjusted_generations(full_b, overhead));
                else
                    read_a = std::min(full_a, divgen_adjusted_generations(full_a, overhead));
            }
        }
        for (const Concern& concern : kConcerns) {
            int gen_a = concern.budget_adjusted ? read_a : full_a;
            int gen_b = concern.budget_adjusted ? read_b : full_b;
            std::vector<double> sample_a = concern_sample(runs_a, concern, gen_a);
            std::vector<double> sample_b = concern_sample(runs_b, concern, gen_b);
            if (sample_a.empty() || sample_b.empty()) {
                std::fprintf(stderr, "warning: %s:%s skipped (one side has no crashing runs)\n",
                             model_id.c_str(), concern.name);
                continue;
            }
            divgen_comparison cmp;
            divgen_status s =
                divgen_compare(sample_a.data(), sample_a.size(), sample_b.data(),
                               sample_b.size(), concern.larger_is_better ? 1 : 0, &cmp);
            if (s != DIVGEN_OK) return report_api_error("compare", s);
            std::string subject = model_id + ":" + concern.name;
            csv += subject + "," + std::to_string(gen_a) + "," + csv_field(cmp.mean_a) + "," +
                   csv_field(cmp.median_a) + "," + csv_field(cmp.sd_a) + "," +
                   std::to_string(gen_b) + "," + csv_field(cmp.mean_b) + "," +
                   csv_field(cmp.median_b) + "," + csv_field(cmp.sd_b) + "," +
                   csv_field(cmp.p_value) + "," + csv_field(cmp.a12) + "," +
                   effect_name(cmp.effect_class) + "," + direction_name(cmp.direction) + "\n";
            char line[256];
            std::snprintf(line, sizeof line, "%-32s %12g %12g %9.4f %7.3f %-10s %s",
                          subject.c_str(), cmp.median_a, cmp.median_b, cmp.p_value, cmp.a12,
                          effect_name(cmp.effect_class), direction_name(cmp.direction));
            table.push_back(line);
        }
    }

    if (!out.empty()) {
        if (!write_text_atomic(out, csv)) {
            std::fprintf(stderr, "error: compare: cannot write %s\n", out.c_str());
            return kExitInternal;
        }
    } else {
        std::fputs(csv.c_str(), stdout);
        std::printf("\n");
    }
    std::printf("%-32s %12s %12s %9s %7s %-10s %s\n", "subject", "median_a", "median_b", "p",
                "a12", "effect", "direction");
    for (const std::string& line : table) std::printf("%s\n", line.c_str());
    return 0;
}

// ---- landscape --------------------------------------------------------------

int cmd_landscape(const std::string& runs_dir, const std::string& out_dir) {
    if (!fs::is_directory(runs_dir)) {
        std::fprintf(stderr, "error: %s is not a directory\n", runs_dir.c_str());
        return kExitUsage;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: landscape: cannot create output directory %s: %s\n",
                     out_dir.c_str(), ec.message().c_str());
        return kExitUsage;
    }
    // (model, mode) -> per-rep metric series; series[rep][generation][metric].
    std::map<std::pair<std::string, int>, std::vector<std::vector<std::array<double, 11>>>>
        groups;
    for (const fs::directory_entry& entry : fs::directory_iterator(runs_dir)) {
        if (!entry.is_regular_file()) continue;
        auto parsed = parse_run_filename(entry.path());
        if (!parsed) continue;
        RecordHandle rec;
        divgen_status s = divgen_record_load_json(entry.path().string().c_str(), &rec.ptr);
        if (s != DIVGEN_OK) {
            std::fprintf(stderr, "error: %s: %s\n", entry.path().string().c_str(),
                         divgen_last_error());
            return kExitUsage;
        }
        std::string stem = run_stem(parsed->model_id, parsed->mode, parsed->rep);
        fs::path raw = fs::path(out_dir) / ("snapshots_" + stem.substr(4) + ".csv");
        s = divgen_record_save_snapshots_csv(rec.ptr, raw.string().c_str());
        if (s != DIVGEN_OK) return report_api_error("landscape", s);
        std::vector<std::array<double, 11>> series;
        int32_t gens = divgen_record_generations(rec.ptr);
        for (int32_t g = 0; g < gens; ++g) {
            std::array<double, 11> metrics{};
            divgen_record_snapshot_metrics(rec.ptr, g, metrics.data());
            series.push_back(metrics);
        }
        groups[{parsed->model_id, parsed->mode}].push_back(std::move(series));
    }
    if (groups.empty()) {
        std::fprintf(stderr, "error: landscape: no run artifacts found in %s\n",
                     runs_dir.c_str());
        return kExitUsage;
    }
    for (const auto& [key, reps] : groups) {
        size_t rows = reps.front().size();
        for (const auto& series : reps) rows = std::min(rows, series.size());
        std::string csv =
            "generation,ppos,hv,maxdiam,avgdiam,mindiam,reldiam,pconnec,nconnec,kconnec,"
            "lconnec,hvconnec\n";
        for (size_t g = 0; g < rows; ++g) {
            csv += std::to_string(g);
            for (size_t k = 0; k < 11; ++k) {
                double sum = 0.0;
                for (const auto& series : reps) sum += series[g][k];
                csv += "," + fmt_double(sum / static_cast<double>(reps.size()));
            }
            csv += "\n";
        }
        fs::path path = fs::path(out_dir) /
                        ("landscape_" + key.first + "_" + mode_name(key.second) + ".csv");
        if (!write_text_atomic(path, csv)) {
            std::fprintf(stderr, "error: landscape: cannot write %s\n", path.string().c_str());
            return kExitInternal;
        }
        std::printf("%s: %d reps, %zu generations\n", path.string().c_str(),
                    static_cast<int>(reps.size()), rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-based test-suite generation with diversity-aware NSGA-II"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate-model", "Generate a synthetic app model");
    gen->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
    gen->add_option("--states", gen_args.states, "Number of states")->capture_default_str();
    gen->add_option("--alphabet", gen_args.alphabet, "Event alphabet size")
        ->capture_default_str();
    gen->add_option("--blocks", gen_args.blocks, "Total coverable blocks")
        ->capture_default_str();
    gen->add_option("--crash-rules", gen_args.crash_rules, "Number of crashing (state, event) pairs")
        ->capture_default_str();
    gen->add_option("--branching", gen_args.branching,
                    "Probability of each extra non-tree transition")
        ->capture_default_str();
    gen->add_option("-o,--out", gen_args.out, "Output model JSON path")->required();

    RunArgs run_args;
    divgen_search_config_init(&run_args.cfg);
    CLI::App* run = app.add_subcommand("run", "Run the search on one or more models");
    run->add_option("--model", run_args.models, "Model JSON file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--mode", run_args.modes, "Search mode (repeatable)")
        ->check(CLI::IsMember({"baseline", "div"}))
        ->capture_default_str();
    run->add_option("--reps", run_args.reps, "Repetitions per (model, mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--generations", run_args.cfg.g_max, "Generations per run")
        ->capture_default_str();
    run->add_option("--seed", run_args.seed, "Base seed; each repetition derives its own")
        ->capture_default_str();
    run->add_option("--workers", run_args.workers, "Threads for fitness evaluation")
        ->capture_default_str();
    run->add_option("--pop", run_args.cfg.size_pop,
                    "Population size (offspring count follows unless --off is given)")
        ->capture_default_str();
    CLI::Option* off_opt =
        run->add_option("--off", run_args.cfg.size_off, "Offspring per generation")
            ->capture_default_str();
    run->add_option("--suite-size", run_args.cfg.suite_size, "Test cases per suite")
        ->capture_default_str();
    run->add_option("--min-len", run_args.cfg.min_seq_len, "Minimum events per test case")
        ->capture_default_str();
    run->add_option("--max-len", run_args.cfg.max_seq_len, "Maximum events per test case")
        ->capture_default_str();
    run->add_option("--size-init", run_args.cfg.size_init,
                    "Initial random pool before distance-based selection (div mode)")
        ->capture_default_str();
    run->add_option("--div-limit", run_args.cfg.div_limit, "Diversity threshold fraction")
        ->capture_default_str();
    run->add_option("--n-div", run_args.cfg.n_div, "Distance-selected slots per generation")
        ->capture_default_str();
    run->add_flag("--quiet", run_args.quiet, "Suppress per-generation progress lines");
    run->add_option("-o,--out", run_args.out, "Output directory for run artifacts")->required();

    std::string cmp_a, cmp_b, cmp_out;
    CLI::App* cmp = app.add_subcommand("compare", "Compare two run-artifact directories");
    cmp->add_option("dir_a", cmp_a, "Side A artifact directory")->required();
    cmp->add_option("dir_b", cmp_b, "Side B artifact directory")->required();
    cmp->add_option("-o,--out", cmp_out, "Comparison CSV path (stdout when omitted)");

    std::string land_in, land_out;
    CLI::App* land =
        app.add_subcommand("landscape", "Export per-generation landscape metric CSVs");
    land->add_option("runs_dir", land_in, "Directory holding run_*.json artifacts")->required();
    land->add_option("-o,--out", land_out, "Output directory for CSVs")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate_model(gen_args);
        if (run->parsed()) {
            run_args.off_given = off_opt->count() > 0;
            return cmd_run(run_args);
        }
        if (cmp->parsed()) return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (land->parsed()) return cmd_landscape(land_in, land_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
