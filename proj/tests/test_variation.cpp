#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/variation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using divgen::SearchConfig;
using divgen::TestSuite;

namespace {

std::multiset<std::vector<int>> case_multiset(const TestSuite& t) {
    return {t.cases.begin(), t.cases.end()};
}

std::multiset<int> event_multiset(const TestSuite& t) {
    std::multiset<int> events;
    for (const auto& c : t.cases) events.insert(c.begin(), c.end());
    return events;
}

}  // namespace

TEST_CASE("uniform crossover swaps exactly the indices whose coin lands true") {
    TestSuite t1{{{1, 1}, {2, 2}}};  // cases A, B
    TestSuite t2{{{3, 3}, {4, 4}}};  // cases C, D
    oracles::ScriptedRng rng;
    rng.coins = {true, false};
    auto [c1, c2] = divgen::uniform_suite_crossover(t1, t2, rng);
    CHECK(c1 == TestSuite{{{3, 3}, {2, 2}}});  // <C, B>
    CHECK(c2 == TestSuite{{{1, 1}, {4, 4}}});  // <A, D>
    CHECK(rng.exhausted());
}

TEST_CASE("uniform crossover preserves the case pair at every index") {
    divgen::SplitMix64 rng(404);
    SearchConfig cfg;
    cfg.suite_size = 5;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 12;
    for (int trial = 0; trial < 100; ++trial) {
        TestSuite t1 = divgen::random_suite(rng, cfg, 6);
        TestSuite t2 = divgen::random_suite(rng, cfg, 6);
        auto [c1, c2] = divgen::uniform_suite_crossover(t1, t2, rng);
        REQUIRE(c1.cases.size() == t1.cases.size());
        for (size_t i = 0; i < t1.cases.size(); ++i) {
            bool kept = c1.cases[i] == t1.cases[i] && c2.cases[i] == t2.cases[i];
            bool swapped = c1.cases[i] == t2.cases[i] && c2.cases[i] == t1.cases[i];
            CHECK((kept || swapped));
        }
    }
}

TEST_CASE("mutation reproduces the worked single-point crossover example") {
    // Order shuffle scripted to the identity; the q-coin for the one adjacent
    // pair fires with cut 2; both per-case shuffle coins stay cold.
    TestSuite t{{{1, 2, 3, 4}, {5, 6, 7, 8}}};
    SearchConfig cfg;
    cfg.min_seq_len = 1;
    cfg.max_seq_len = 8;
    oracles::ScriptedRng rng;
    rng.indices = {1};              // case-order shuffle keeps [0, 1]
    rng.coins = {true, false, false};
    rng.ints = {2};                 // cut point
    TestSuite out = divgen::suite_mutation(t, 1.0, cfg, rng);
    CHECK(out == TestSuite{{{1, 2, 7, 8}, {5, 6, 3, 4}}});
    CHECK(rng.exhausted());
}

TEST_CASE("single-point crossover is skipped when a case is too short to cut") {
    TestSuite t{{{7}, {8}}};
    SearchConfig cfg;
    cfg.min_seq_len = 1;
    cfg.max_seq_len = 4;
    oracles::ScriptedRng rng;
    rng.indices = {1};               // identity order shuffle
    rng.coins = {true, false, false};  // pair coin fires but no cut is drawn
    TestSuite out = divgen::suite_mutation(t, 1.0, cfg, rng);
    CHECK(out == t);
    CHECK(rng.exhausted());
}

TEST_CASE("mutation preserves the event multiset and the case count") {
    divgen::SplitMix64 rng(808);
    SearchConfig cfg;
    cfg.suite_size = 5;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 15;
    for (int trial = 0; trial < 200; ++trial) {
        TestSuite t = divgen::random_suite(rng, cfg, 9);
        TestSuite out = divgen::suite_mutation(t, 0.8, cfg, rng);
        REQUIRE(out.cases.size() == t.cases.size());
        CHECK(event_multiset(out) == event_multiset(t));
        for (const auto& c : out.cases) {
            CHECK(c.size() >= 2);
            CHECK(c.size() <= 15);
        }
    }
}

TEST_CASE("q = 0 mutation only reorders whole cases") {
    divgen::SplitMix64 rng(111);
    SearchConfig cfg;
    cfg.suite_size = 4;
    cfg.min_seq_len = 3;
    cfg.max_seq_len = 8;
    for (int trial = 0; trial < 50; ++trial) {
        TestSuite t = divgen::random_suite(rng, cfg, 5);
        TestSuite out = divgen::suite_mutation(t, 0.0, cfg, rng);
        CHECK(case_multiset(out) == case_multiset(t));
    }
}

TEST_CASE("variation produces exactly size_off offspring with legal shapes") {
    divgen::SplitMix64 rng(99);
    SearchConfig cfg;
    cfg.suite_size = 3;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 10;
    cfg.size_off = 17;
    std::vector<TestSuite> pop;
    for (int i = 0; i < 6; ++i) pop.push_back(divgen::random_suite(rng, cfg, 7));
    std::vector<TestSuite> off = divgen::whole_test_suite_variation(pop, cfg, rng);
    REQUIRE(off.size() == 17);
    for (const TestSuite& t : off) {
        REQUIRE(t.cases.size() == 3);
        for (const auto& c : t.cases) {
            CHECK(c.size() >= 2);
            CHECK(c.size() <= 10);
            for (int e : c) {
                CHECK(e >= 0);
                CHECK(e < 7);
            }
        }
    }
}

TEST_CASE("variation with both operators disabled copies parents") {
    divgen::SplitMix64 rng(55);
    SearchConfig cfg;
    cfg.suite_size = 2;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 6;
    cfg.size_off = 8;
    cfg.crossover_prob = 0.0;
    cfg.mutation_prob = 0.0;
    std::vector<TestSuite> pop;
    for (int i = 0; i < 8; ++i) pop.push_back(divgen::random_suite(rng, cfg, 4));
    std::vector<TestSuite> off = divgen::whole_test_suite_variation(pop, cfg, rng);
    REQUIRE(off.size() == 8);
    std::multiset<std::vector<std::vector<int>>> parents, children;
    for (const TestSuite& t : pop) parents.insert(t.cases);
    for (const TestSuite& t : off) children.insert(t.cases);
    CHECK(parents == children);
}

TEST_CASE("variation is deterministic per seed") {
    SearchConfig cfg;
    cfg.suite_size = 3;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 9;
    cfg.size_off = 10;
    divgen::SplitMix64 init(3);
    std::vector<TestSuite> pop;
    for (int i = 0; i < 5; ++i) pop.push_back(divgen::random_suite(init, cfg, 6));
    divgen::SplitMix64 a(17), b(17);
    CHECK(divgen::whole_test_suite_variation(pop, cfg, a) ==
          divgen::whole_test_suite_variation(pop, cfg, b));
}

TEST_CASE("variation rejects populations below two parents") {
    divgen::SplitMix64 rng(1);
    SearchConfig cfg;
    std::vector<TestSuite> pop{divgen::random_suite(rng, cfg, 3)};
    CHECK_THROWS_AS(divgen::whole_test_suite_variation(pop, cfg, rng),
                    std::invalid_argument);
}
