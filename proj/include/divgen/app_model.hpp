#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/moea.hpp"

namespace divgen {

struct Transition {
    int to = 0;
    std::vector<int> blocks;  // block ids covered when the transition fires

    bool operator==(const Transition&) const = default;
};

// Deterministic finite-state app-under-test. Unknown (state, event) pairs
// self-loop and cover nothing; crash rules abort the current case only.
struct AppModel {
    int alphabet_size = 1;
    int initial_state = 0;
    std::vector<int> states;
    std::map<std::pair<int, int>, Transition> transitions;  // (state, event) -> transition
    std::map<std::pair<int, int>, int> crash_rules;         // (state, event) -> signature
    int total_blocks = 1;

    bool operator==(const AppModel&) const = default;
};

struct PerCaseCrash {
    int case_index = 0;
    int signature = 0;
    int event_index = 0;  // position within the case at which the crash fired
};

struct EvaluationResult {
    FitnessTriple fitness;
    std::vector<int> crash_signatures;  // distinct, ascending
    std::vector<int> covered_blocks;    // distinct, ascending
    std::vector<PerCaseCrash> per_case_crash;
};

// Throws ParseError naming the offending field when the model violates its
// invariants.
void validate(const AppModel& model);

// Each case runs independently from the initial state; a crash rule hit records
// its signature and ends that case. Coverage is the union over cases. Throws
// std::invalid_argument on out-of-alphabet events.
EvaluationResult evaluate(const TestSuite& suite, const AppModel& model,
                          bool length_objective_mean = false);

// Flattened transition tables for the engine's inner loop.
class CompiledApp {
public:
    explicit CompiledApp(const AppModel& model);

    EvaluationResult evaluate(const TestSuite& suite, bool length_objective_mean) const;

    int alphabet_size() const { return alphabet_size_; }
    int total_blocks() const { return total_blocks_; }

private:
    int alphabet_size_;
    int total_blocks_;
    int initial_dense_;
    int n_states_;
    std::vector<int> next_state_;      // state * alphabet + event -> dense state
    std::vector<int> crash_signature_; // -1 when no rule
    std::vector<int> block_begin_;     // slot -> [begin, end) into block_ids_
    std::vector<int> block_ids_;
};

struct ModelGenParams {
    int n_states = 30;
    int alphabet_size = 12;
    int total_blocks = 200;
    int n_crash_rules = 8;
    double branching = 0.35;  // fill probability for non-tree (state, event) slots
};

// Deterministic per seed; every state is reachable from the initial state by
// construction. Throws ConfigError on infeasible params.
AppModel generate_model(uint64_t seed, const ModelGenParams& params);

// JSON round trip; load throws ParseError naming the offending field.
std::string model_to_json(const AppModel& model);
AppModel model_from_json(const std::string& text);
void save_model(const AppModel& model, const std::string& path);
AppModel load_model(const std::string& path);

}  // namespace divgen
