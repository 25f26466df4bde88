#pragma once

#include <cstdint>
#include <vector>

#include "divgen/rng.hpp"
#include "divgen/search_config.hpp"

namespace divgen {

using Event = int;
using TestCase = std::vector<Event>;  // ordered event ids

struct TestSuite {
    std::vector<TestCase> cases;  // ordered, size m under the active config

    bool operator==(const TestSuite&) const = default;
};

// Genotypic distance: per case index, |length difference| plus the number of
// mismatching positions in the common prefix. Cases are compared strictly by
// index, without alignment. Throws std::invalid_argument on unequal suite sizes.
int64_t distance(const TestSuite& t1, const TestSuite& t2);

// distance == 0, i.e. exact structural equality.
bool is_duplicate(const TestSuite& t1, const TestSuite& t2);

// m cases with lengths uniform in [min_seq_len, max_seq_len] and event ids
// uniform in [0, alphabet_size). Throws ConfigError on a degenerate config.
TestSuite random_suite(RandomSource& rng, const SearchConfig& cfg, int alphabet_size);

}  // namespace divgen
