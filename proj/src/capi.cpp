#include "divgen.h"

#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "divgen/app_model.hpp"
#include "divgen/engine.hpp"
#include "divgen/errors.hpp"
#include "divgen/run_record.hpp"
#include "divgen/stats.hpp"

struct divgen_model {
    divgen::AppModel model;
};

struct divgen_run_record {
    divgen::RunRecord record;
};

namespace {

thread_local std::string g_last_error;

divgen_status fail(divgen_status status, const char* what) {
    g_last_error = what ? what : "";
    return status;
}

template <typename Fn>
divgen_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DIVGEN_OK;
    } catch (const divgen::ParseError& e) {
        return fail(DIVGEN_ERR_PARSE, e.what());
    } catch (const divgen::IoError& e) {
        return fail(DIVGEN_ERR_IO, e.what());
    } catch (const divgen::ConfigError& e) {
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(DIVGEN_ERR_INTERNAL, e.what());
    }
}

divgen::SearchConfig to_cpp(const divgen_search_config& c) {
    divgen::SearchConfig cfg;
    cfg.crossover_prob = c.crossover_prob;
    cfg.mutation_prob = c.mutation_prob;
    cfg.inner_prob = c.inner_prob;
    cfg.size_pop = c.size_pop;
    cfg.size_off = c.size_off;
    cfg.suite_size = c.suite_size;
    cfg.min_seq_len = c.min_seq_len;
    cfg.max_seq_len = c.max_seq_len;
    cfg.g_max = c.g_max;
    cfg.size_init = c.size_init;
    cfg.div_limit = c.div_limit;
    cfg.n_div = c.n_div;
    cfg.mode = c.mode == DIVGEN_MODE_DIV ? divgen::Mode::div : divgen::Mode::baseline;
    cfg.seed = c.seed;
    cfg.connectedness_k = c.connectedness_k;
    cfg.length_objective_mean = c.length_objective_mean != 0;
    return cfg;
}

divgen_search_config to_c(const divgen::SearchConfig& cfg) {
    divgen_search_config c;
    c.crossover_prob = cfg.crossover_prob;
    c.mutation_prob = cfg.mutation_prob;
    c.inner_prob = cfg.inner_prob;
    c.size_pop = cfg.size_pop;
    c.size_off = cfg.size_off;
    c.suite_size = cfg.suite_size;
    c.min_seq_len = cfg.min_seq_len;
    c.max_seq_len = cfg.max_seq_len;
    c.g_max = cfg.g_max;
    c.size_init = cfg.size_init;
    c.div_limit = cfg.div_limit;
    c.n_div = cfg.n_div;
    c.mode = cfg.mode == divgen::Mode::div ? DIVGEN_MODE_DIV : DIVGEN_MODE_BASELINE;
    c.seed = cfg.seed;
    c.connectedness_k = cfg.connectedness_k;
    c.length_objective_mean = cfg.length_objective_mean ? 1 : 0;
    return c;
}

}  // namespace

extern "C" {

const char* divgen_last_error(void) { return g_last_error.c_str(); }

divgen_status divgen_model_generate(uint64_t seed, int32_t n_states, int32_t alphabet_size,
                                    int32_t total_blocks, int32_t n_crash_rules,
                                    double branching, divgen_model** out) {
    if (!out) return fail(DIVGEN_ERR_INVALID_ARGUMENT, "out must not be null");
    return guarded([&] {
        divgen::ModelGenParams params;
        params.n_states = n_states;
        params.alphabet_size = alphabet_size;
        params.total_blocks = total_blocks;
        params.n_crash_rules = n_crash_rules;
        params.branching = branching;
        *out = new divgen_model{divgen::generate_model(seed, params)};
    });
}

divgen_status divgen_model_load(const char* path, divgen_model** out) {
    if (!path || !out) return fail(DIVGEN_ERR_INVALID_ARGUMENT, "path and out must not be null");
    return guarded([&] { *out = new divgen_model{divgen::load_model(path)}; });
}

divgen_status divgen_model_save(const divgen_model* model, const char* path) {
    if (!model || !path)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "model and path must not be null");
    return guarded([&] { divgen::save_model(model->model, path); });
}

void divgen_model_free(divgen_model* model) { delete model; }

int32_t divgen_model_n_states(const divgen_model* model) {
    return model ? static_cast<int32_t>(model->model.states.size()) : 0;
}

int32_t divgen_model_alphabet_size(const divgen_model* model) {
    return model ? model->model.alphabet_size : 0;
}

int32_t divgen_model_total_blocks(const divgen_model* model) {
    return model ? model->model.total_blocks : 0;
}

int32_t divgen_model_n_crash_rules(const divgen_model* model) {
    return model ? static_cast<int32_t>(model->model.crash_rules.size()) : 0;
}

int32_t divgen_model_n_transitions(const divgen_model* model) {
    return model ? static_cast<int32_t>(model->model.transitions.size()) : 0;
}

void divgen_search_config_init(divgen_search_config* cfg) {
    if (!cfg) return;
    *cfg = to_c(divgen::SearchConfig{});
}

divgen_status divgen_run(const divgen_model* model, const divgen_search_config* cfg,
                         int32_t workers, divgen_progress_fn progress, void* user,
                         divgen_run_record** out) {
    if (!model || !cfg || !out)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "model, cfg and out must not be null");
    return guarded([&] {
        divgen::SearchConfig c = to_cpp(*cfg);
        divgen::ProgressFn fn;
        if (progress) {
            fn = [&](const divgen::LandscapeSnapshot& snap) {
                progress(snap.generation, c.g_max, snap.hv, user);
            };
        }
        *out = new divgen_run_record{divgen::run(c, model->model, workers, fn)};
    });
}

divgen_status divgen_record_save_json(const divgen_run_record* record, const char* path) {
    if (!record || !path)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "record and path must not be null");
    return guarded([&] { divgen::save_run_record(record->record, path); });
}

divgen_status divgen_record_load_json(const char* path, divgen_run_record** out) {
    if (!path || !out) return fail(DIVGEN_ERR_INVALID_ARGUMENT, "path and out must not be null");
    return guarded([&] { *out = new divgen_run_record{divgen::load_run_record(path)}; });
}

divgen_status divgen_record_save_snapshots_csv(const divgen_run_record* record,
                                               const char* path) {
    if (!record || !path)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "record and path must not be null");
    return guarded([&] { divgen::save_snapshots_csv(record->record.snapshots, path); });
}

void divgen_record_free(divgen_run_record* record) { delete record; }

int32_t divgen_record_generations(const divgen_run_record* record) {
    return record ? static_cast<int32_t>(record->record.snapshots.size()) : 0;
}

double divgen_record_duration_seconds(const divgen_run_record* record) {
    return record ? record->record.duration_seconds : 0.0;
}

divgen_status divgen_record_config(const divgen_run_record* record, divgen_search_config* out) {
    if (!record || !out)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "record and out must not be null");
    *out = to_c(record->record.config);
    g_last_error.clear();
    return DIVGEN_OK;
}

divgen_status divgen_record_snapshot_metrics(const divgen_run_record* record,
                                             int32_t generation, double out[11]) {
    if (!record || !out)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "record and out must not be null");
    if (generation < 0 || generation >= static_cast<int32_t>(record->record.snapshots.size()))
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "generation out of range");
    const divgen::LandscapeSnapshot& s = record->record.snapshots[generation];
    out[0] = s.ppos;
    out[1] = s.hv;
    out[2] = static_cast<double>(s.maxdiam);
    out[3] = s.avgdiam;
    out[4] = static_cast<double>(s.mindiam);
    out[5] = s.reldiam;
    out[6] = s.pconnec;
    out[7] = s.nconnec;
    out[8] = static_cast<double>(s.kconnec);
    out[9] = s.lconnec;
    out[10] = s.hvconnec;
    g_last_error.clear();
    return DIVGEN_OK;
}

divgen_status divgen_record_progress(const divgen_run_record* record, int32_t generation,
                                     double* cum_coverage, int64_t* cum_unique_crashes,
                                     double* mean_min_crash_length) {
    if (!record) return fail(DIVGEN_ERR_INVALID_ARGUMENT, "record must not be null");
    if (generation < 0 || generation >= static_cast<int32_t>(record->record.progress.size()))
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "generation out of range");
    const divgen::ProgressRow& row = record->record.progress[generation];
    if (cum_coverage) *cum_coverage = row.cum_coverage;
    if (cum_unique_crashes) *cum_unique_crashes = row.cum_unique_crashes;
    if (mean_min_crash_length)
        *mean_min_crash_length = row.mean_min_crash_length ? *row.mean_min_crash_length : -1.0;
    g_last_error.clear();
    return DIVGEN_OK;
}

uint64_t divgen_derive_run_seed(uint64_t base_seed, const char* model_id, int32_t mode,
                                int32_t rep) {
    return divgen::derive_run_seed(base_seed, model_id ? model_id : "",
                                   mode == DIVGEN_MODE_DIV ? divgen::Mode::div
                                                           : divgen::Mode::baseline,
                                   rep);
}

divgen_status divgen_compare(const double* a, size_t n_a, const double* b, size_t n_b,
                             int32_t larger_is_better, divgen_comparison* out) {
    if (!a || !b || !out)
        return fail(DIVGEN_ERR_INVALID_ARGUMENT, "a, b and out must not be null");
    return guarded([&] {
        std::vector<double> va(a, a + n_a);
        std::vector<double> vb(b, b + n_b);
        divgen::ComparisonRow row = divgen::compare(va, vb, larger_is_better != 0);
        out->mean_a = row.a.mean;
        out->median_a = row.a.median;
        out->sd_a = row.a.sd ? *row.a.sd : std::nan("");
        out->mean_b = row.b.mean;
        out->median_b = row.b.median;
        out->sd_b = row.b.sd ? *row.b.sd : std::nan("");
        out->u = row.u;
        out->p_value = row.p_value;
        out->a12 = row.a12;
        switch (row.effect_class) {
            case divgen::EffectClass::negligible: out->effect_class = DIVGEN_EFFECT_NEGLIGIBLE; break;
            case divgen::EffectClass::small: out->effect_class = DIVGEN_EFFECT_SMALL; break;
            case divgen::EffectClass::medium: out->effect_class = DIVGEN_EFFECT_MEDIUM; break;
            case divgen::EffectClass::large: out->effect_class = DIVGEN_EFFECT_LARGE; break;
        }
        out->significant = row.significant ? 1 : 0;
        switch (row.direction) {
            case divgen::Direction::worse: out->direction = DIVGEN_DIRECTION_WORSE; break;
            case divgen::Direction::equal: out->direction = DIVGEN_DIRECTION_EQUAL; break;
            case divgen::Direction::better: out->direction = DIVGEN_DIRECTION_BETTER; break;
        }
    });
}

divgen_status divgen_overhead_percent(double median_base, double median_div, double* out) {
    if (!out) return fail(DIVGEN_ERR_INVALID_ARGUMENT, "out must not be null");
    return guarded([&] { *out = divgen::overhead_percent(median_base, median_div); });
}

int32_t divgen_adjusted_generations(int32_t g_max, double overhead_percent) {
    if (overhead_percent < 0.0) overhead_percent = 0.0;
    return divgen::adjusted_generations(g_max, overhead_percent);
}

}  // extern "C"
