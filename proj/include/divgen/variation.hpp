#pragma once

#include <utility>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/rng.hpp"
#include "divgen/search_config.hpp"

namespace divgen {

// Per case index, an independent 0.5 coin decides whether the children receive
// the parents' cases swapped. One coin is drawn per index, in index order.
std::pair<TestSuite, TestSuite> uniform_suite_crossover(const TestSuite& t1,
                                                        const TestSuite& t2,
                                                        RandomSource& rng);

// Three ordered steps: (1) unconditional shuffle of the case order; (2) per
// adjacent case pair, with probability q a single-point crossover with one cut
// drawn uniformly in [1, min(len_a, len_b) - 1] and the tails exchanged (the
// exchange is rejected if a resulting length leaves [min_seq_len, max_seq_len],
// and skipped outright when min(len_a, len_b) < 2); (3) per case, with
// probability q a shuffle of its event order.
TestSuite suite_mutation(const TestSuite& t, double q, const SearchConfig& cfg,
                         RandomSource& rng);

// size_off offspring from shuffled adjacent parent pairs: each pair is crossed
// with probability crossover_prob, then each child mutated with probability
// mutation_prob. Parents are reshuffled and reused until size_off is reached.
std::vector<TestSuite> whole_test_suite_variation(const std::vector<TestSuite>& population,
                                                  const SearchConfig& cfg,
                                                  RandomSource& rng);

}  // namespace divgen
