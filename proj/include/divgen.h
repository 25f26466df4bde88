/* C API for the divgen search engine. All functions returning divgen_status
 * set a thread-local message retrievable via divgen_last_error() on failure.
 * Handles are owned by the caller and released with the matching _free(). */
#ifndef DIVGEN_H
#define DIVGEN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum divgen_status {
    DIVGEN_OK = 0,
    DIVGEN_ERR_INVALID_ARGUMENT = 1,
    DIVGEN_ERR_IO = 2,
    DIVGEN_ERR_PARSE = 3,
    DIVGEN_ERR_INTERNAL = 4
} divgen_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* divgen_last_error(void);

/* ---- app models -------------------------------------------------------- */

typedef struct divgen_model divgen_model;

divgen_status divgen_model_generate(uint64_t seed, int32_t n_states, int32_t alphabet_size,
                                    int32_t total_blocks, int32_t n_crash_rules,
                                    double branching, divgen_model** out);
divgen_status divgen_model_load(const char* path, divgen_model** out);
divgen_status divgen_model_save(const divgen_model* model, const char* path);
void divgen_model_free(divgen_model* model);

int32_t divgen_model_n_states(const divgen_model* model);
int32_t divgen_model_alphabet_size(const divgen_model* model);
int32_t divgen_model_total_blocks(const divgen_model* model);
int32_t divgen_model_n_crash_rules(const divgen_model* model);
int32_t divgen_model_n_transitions(const divgen_model* model);

/* ---- search ------------------------------------------------------------ */

#define DIVGEN_MODE_BASELINE 0
#define DIVGEN_MODE_DIV 1

typedef struct divgen_search_config {
    double crossover_prob;
    double mutation_prob;
    double inner_prob;
    int32_t size_pop;
    int32_t size_off;
    int32_t suite_size;
    int32_t min_seq_len;
    int32_t max_seq_len;
    int32_t g_max;
    int32_t size_init;
    double div_limit;
    int32_t n_div;
    int32_t mode; /* DIVGEN_MODE_* */
    uint64_t seed;
    int64_t connectedness_k;
    int32_t length_objective_mean; /* 0: sum of case lengths, 1: mean */
} divgen_search_config;

/* Standard defaults (crossover 0.7, mutation 0.3, q=0.3, pop 50, m=5,
 * lengths [20,500], 40 generations, size_init 100, div_limit 0.5,
 * n_div 15, k=300). */
void divgen_search_config_init(divgen_search_config* cfg);

typedef struct divgen_run_record divgen_run_record;

/* Called after each generation's snapshot (generation, g_max, archive hv). */
typedef void (*divgen_progress_fn)(int32_t generation, int32_t g_max, double hv, void* user);

divgen_status divgen_run(const divgen_model* model, const divgen_search_config* cfg,
                         int32_t workers, divgen_progress_fn progress, void* user,
                         divgen_run_record** out);

divgen_status divgen_record_save_json(const divgen_run_record* record, const char* path);
divgen_status divgen_record_load_json(const char* path, divgen_run_record** out);
divgen_status divgen_record_save_snapshots_csv(const divgen_run_record* record, const char* path);
void divgen_record_free(divgen_run_record* record);

/* Snapshot count (g_max + 1). */
int32_t divgen_record_generations(const divgen_run_record* record);
double divgen_record_duration_seconds(const divgen_run_record* record);
divgen_status divgen_record_config(const divgen_run_record* record, divgen_search_config* out);

/* The 11 landscape metrics of one generation, ordered as the CSV columns
 * after "generation": ppos, hv, maxdiam, avgdiam, mindiam, reldiam, pconnec,
 * nconnec, kconnec, lconnec, hvconnec. */
divgen_status divgen_record_snapshot_metrics(const divgen_run_record* record,
                                             int32_t generation, double out[11]);

/* Cumulative progress at one generation. mean_min_crash_length is -1 when the
 * run had found no crash by then. */
divgen_status divgen_record_progress(const divgen_run_record* record, int32_t generation,
                                     double* cum_coverage, int64_t* cum_unique_crashes,
                                     double* mean_min_crash_length);

/* Repetition seed used by the experiment driver, derived from the base seed,
 * the model id (file stem), the mode, and the repetition index. */
uint64_t divgen_derive_run_seed(uint64_t base_seed, const char* model_id, int32_t mode,
                                int32_t rep);

/* ---- statistics -------------------------------------------------------- */

#define DIVGEN_EFFECT_NEGLIGIBLE 0
#define DIVGEN_EFFECT_SMALL 1
#define DIVGEN_EFFECT_MEDIUM 2
#define DIVGEN_EFFECT_LARGE 3

#define DIVGEN_DIRECTION_WORSE (-1)
#define DIVGEN_DIRECTION_EQUAL 0
#define DIVGEN_DIRECTION_BETTER 1

typedef struct divgen_comparison {
    double mean_a, median_a, sd_a; /* sd is NaN for single-element samples */
    double mean_b, median_b, sd_b;
    double u;
    double p_value;
    double a12;
    int32_t effect_class; /* DIVGEN_EFFECT_* */
    int32_t significant;  /* p < 0.05 */
    int32_t direction;    /* side a relative to side b, DIVGEN_DIRECTION_* */
} divgen_comparison;

divgen_status divgen_compare(const double* a, size_t n_a, const double* b, size_t n_b,
                             int32_t larger_is_better, divgen_comparison* out);

divgen_status divgen_overhead_percent(double median_base, double median_div, double* out);
int32_t divgen_adjusted_generations(int32_t g_max, double overhead_percent);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DIVGEN_H */
