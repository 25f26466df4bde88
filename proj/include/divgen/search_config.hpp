#pragma once

#include <cstdint>

namespace divgen {

enum class Mode { baseline, div };

struct SearchConfig {
    double crossover_prob = 0.7;
    double mutation_prob = 0.3;
    double inner_prob = 0.3;  // q: gates the inner mutation steps
    int size_pop = 50;
    int size_off = 50;
    int suite_size = 5;  // m: test cases per suite
    int min_seq_len = 20;
    int max_seq_len = 500;
    int g_max = 40;
    int size_init = 100;      // diverse-init candidate pool (div mode)
    double div_limit = 0.5;   // adaptive control fires when div_pop <= div_limit * div_init
    int n_div = 15;           // most-distant members added by hybrid selection
    Mode mode = Mode::baseline;
    uint64_t seed = 0;
    int64_t connectedness_k = 300;
    bool length_objective_mean = false;  // false: suite length objective is the sum of case lengths

    int64_t max_suite_distance() const {
        return static_cast<int64_t>(suite_size) * max_seq_len;
    }

    double max_total_length() const {
        return length_objective_mean ? static_cast<double>(max_seq_len)
                                     : static_cast<double>(suite_size) * max_seq_len;
    }

    bool operator==(const SearchConfig&) const = default;
};

// Throws ConfigError on violated invariants.
void validate(const SearchConfig& cfg);

}  // namespace divgen
