#include "divgen/genotype.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "divgen/errors.hpp"

namespace divgen {

int64_t distance(const TestSuite& t1, const TestSuite& t2) {
    if (t1.cases.size() != t2.cases.size())
        throw std::invalid_argument("distance: suites have different sizes");
    int64_t d = 0;
    for (size_t i = 0; i < t1.cases.size(); ++i) {
        const TestCase& a = t1.cases[i];
        const TestCase& b = t2.cases[i];
        size_t common = std::min(a.size(), b.size());
        d += std::llabs(static_cast<long long>(a.size()) - static_cast<long long>(b.size()));
        for (size_t j = 0; j < common; ++j)
            d += a[j] != b[j];
    }
    return d;
}

bool is_duplicate(const TestSuite& t1, const TestSuite& t2) {
    return distance(t1, t2) == 0;
}

TestSuite random_suite(RandomSource& rng, const SearchConfig& cfg, int alphabet_size) {
    if (cfg.min_seq_len > cfg.max_seq_len)
        throw ConfigError("random_suite: min_seq_len exceeds max_seq_len");
    if (alphabet_size < 1)
        throw ConfigError("random_suite: alphabet_size must be >= 1");
    TestSuite t;
    t.cases.resize(cfg.suite_size);
    for (TestCase& c : t.cases) {
        int len = rng.uniform_int(cfg.min_seq_len, cfg.max_seq_len);
        c.resize(len);
        for (Event& e : c)
            e = static_cast<Event>(rng.uniform_index(static_cast<size_t>(alphabet_size)));
    }
    return t;
}

}  // namespace divgen
