#include "divgen/variation.hpp"

#include <numeric>
#include <stdexcept>

namespace divgen {

std::pair<TestSuite, TestSuite> uniform_suite_crossover(const TestSuite& t1,
                                                        const TestSuite& t2,
                                                        RandomSource& rng) {
    if (t1.cases.size() != t2.cases.size())
        throw std::invalid_argument("uniform_suite_crossover: suites have different sizes");
    TestSuite c1 = t1;
    TestSuite c2 = t2;
    for (size_t i = 0; i < t1.cases.size(); ++i) {
        if (rng.coin(0.5)) {
            c1.cases[i] = t2.cases[i];
            c2.cases[i] = t1.cases[i];
        }
    }
    return {std::move(c1), std::move(c2)};
}

namespace {

// Exchanges the tails of two cases at one cut; rejected when a resulting
// length would leave the configured bounds.
void single_point_case_crossover(TestCase& a, TestCase& b, const SearchConfig& cfg,
                                 RandomSource& rng) {
    size_t min_len = std::min(a.size(), b.size());
    if (min_len < 2) return;  // no cut position in [1, min_len - 1]
    int cut = rng.uniform_int(1, static_cast<int>(min_len) - 1);
    size_t new_a = static_cast<size_t>(cut) + (b.size() - cut);
    size_t new_b = static_cast<size_t>(cut) + (a.size() - cut);
    auto in_bounds = [&](size_t n) {
        return n >= static_cast<size_t>(cfg.min_seq_len) &&
               n <= static_cast<size_t>(cfg.max_seq_len);
    };
    if (!in_bounds(new_a) || !in_bounds(new_b)) return;
    TestCase ta(a.begin(), a.begin() + cut);
    ta.insert(ta.end(), b.begin() + cut, b.end());
    TestCase tb(b.begin(), b.begin() + cut);
    tb.insert(tb.end(), a.begin() + cut, a.end());
    a = std::move(ta);
    b = std::move(tb);
}

}  // namespace

TestSuite suite_mutation(const TestSuite& t, double q, const SearchConfig& cfg,
                         RandomSource& rng) {
    TestSuite out = t;
    rng.shuffle(out.cases);
    for (size_t i = 0; i + 1 < out.cases.size(); ++i) {
        if (rng.coin(q))
            single_point_case_crossover(out.cases[i], out.cases[i + 1], cfg, rng);
    }
    for (TestCase& c : out.cases) {
        if (rng.coin(q)) rng.shuffle(c);
    }
    return out;
}

std::vector<TestSuite> whole_test_suite_variation(const std::vector<TestSuite>& population,
                                                  const SearchConfig& cfg,
                                                  RandomSource& rng) {
    if (population.size() < 2)
        throw std::invalid_argument("whole_test_suite_variation: need at least two parents");
    std::vector<TestSuite> offspring;
    offspring.reserve(cfg.size_off);
    std::vector<int> order(population.size());
    while (offspring.size() < static_cast<size_t>(cfg.size_off)) {
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (size_t i = 0; i + 1 < order.size() &&
                           offspring.size() < static_cast<size_t>(cfg.size_off);
             i += 2) {
            const TestSuite& p1 = population[order[i]];
            const TestSuite& p2 = population[order[i + 1]];
            std::pair<TestSuite, TestSuite> children =
                rng.coin(cfg.crossover_prob) ? uniform_suite_crossover(p1, p2, rng)
                                             : std::pair<TestSuite, TestSuite>{p1, p2};
            for (TestSuite* child : {&children.first, &children.second}) {
                if (offspring.size() >= static_cast<size_t>(cfg.size_off)) break;
                if (rng.coin(cfg.mutation_prob))
                    *child = suite_mutation(*child, cfg.inner_prob, cfg, rng);
                offspring.push_back(std::move(*child));
            }
        }
    }
    return offspring;
}

}  // namespace divgen
