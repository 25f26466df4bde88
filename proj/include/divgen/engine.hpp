#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "divgen/app_model.hpp"
#include "divgen/run_record.hpp"
#include "divgen/search_config.hpp"

namespace divgen {

// Greedy farthest-point selection: seed with the maximum-distance pair
// (ties: lexicographically smallest index pair), then repeatedly add the
// candidate with the largest minimum distance to the selected set (ties:
// lowest index). k == 1 returns the candidate at index 0.
// Throws std::invalid_argument when k is out of [1, |candidates|].
std::vector<int> select_most_distant_indices(const std::vector<std::vector<int64_t>>& dist,
                                             int k);
std::vector<TestSuite> select_most_distant(const std::vector<TestSuite>& candidates, int k);

// Average population diameter: the mean pairwise suite distance.
// Throws std::invalid_argument for fewer than two members.
double calculate_diversity(const std::vector<TestSuite>& population);

// Keeps the first occurrence of each distance-0 equivalence class.
std::vector<TestSuite> remove_duplicates(const std::vector<TestSuite>& pool);

using ProgressFn = std::function<void(const LandscapeSnapshot&)>;

// One full search run. Baseline mode is plain NSGA-II (random init, variation,
// crowded truncation); div mode adds diverse initialization, adaptive
// diversity control, duplicate elimination, and hybrid selection. Evaluation
// may fan out across workers; results are identical for any worker count.
RunRecord run(const SearchConfig& cfg, const AppModel& model, int workers = 1,
              const ProgressFn& on_generation = nullptr);

// Per-repetition seed used by the experiment driver.
uint64_t derive_run_seed(uint64_t base_seed, const std::string& model_id, Mode mode, int rep);

}  // namespace divgen
