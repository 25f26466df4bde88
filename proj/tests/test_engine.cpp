#include <algorithm>
#include <stdexcept>
#include <vector>

#include "divgen/engine.hpp"
#include "divgen/errors.hpp"
#include "divgen/run_record.hpp"
#include "doctest.h"
#include "json.hpp"

using divgen::AppModel;
using divgen::Mode;
using divgen::RunRecord;
using divgen::SearchConfig;
using divgen::TestSuite;

namespace {

AppModel small_model() {
    divgen::ModelGenParams params;
    params.n_states = 10;
    params.alphabet_size = 5;
    params.total_blocks = 30;
    params.n_crash_rules = 4;
    return divgen::generate_model(7, params);
}

SearchConfig small_cfg(Mode mode) {
    SearchConfig cfg;
    cfg.size_pop = 8;
    cfg.size_off = 8;
    cfg.suite_size = 2;
    cfg.min_seq_len = 2;
    cfg.max_seq_len = 12;
    cfg.g_max = 5;
    cfg.size_init = 16;
    cfg.n_div = 3;
    cfg.connectedness_k = 8;
    cfg.seed = 5;
    cfg.mode = mode;
    return cfg;
}

nlohmann::json record_without_duration(const RunRecord& rec) {
    nlohmann::json j = nlohmann::json::parse(divgen::run_record_to_json(rec));
    j.erase("duration_seconds");
    return j;
}

TestSuite flat_suite(int len, int symbol) {
    return TestSuite{{std::vector<int>(len, symbol)}};
}

}  // namespace

TEST_CASE("select_most_distant follows the greedy hand trace") {
    std::vector<std::vector<int64_t>> dist{
        {0, 10, 2, 6},
        {10, 0, 9, 5},
        {2, 9, 0, 8},
        {6, 5, 8, 0},
    };
    CHECK(divgen::select_most_distant_indices(dist, 3) == std::vector<int>{0, 1, 3});
    CHECK(divgen::select_most_distant_indices(dist, 4) == std::vector<int>{0, 1, 3, 2});
    CHECK(divgen::select_most_distant_indices(dist, 1) == std::vector<int>{0});
}

TEST_CASE("select_most_distant breaks ties towards low indices") {
    std::vector<std::vector<int64_t>> zeros(4, std::vector<int64_t>(4, 0));
    CHECK(divgen::select_most_distant_indices(zeros, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("select_most_distant rejects out-of-range k") {
    std::vector<std::vector<int64_t>> dist{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(divgen::select_most_distant_indices(dist, 0), std::invalid_argument);
    CHECK_THROWS_AS(divgen::select_most_distant_indices(dist, 3), std::invalid_argument);
}

TEST_CASE("select_most_distant returns the suites themselves") {
    TestSuite a = flat_suite(10, 0);
    TestSuite b = flat_suite(10, 1);
    TestSuite c = a;
    c.cases[0][0] = 2;  // close to a, far from b
    auto picked = divgen::select_most_distant({c, a, b}, 2);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == c);
    CHECK(picked[1] == b);
}

TEST_CASE("calculate_diversity is the mean pairwise distance") {
    TestSuite a = flat_suite(4, 0);
    TestSuite b{{{1, 1, 0, 0}}};
    TestSuite c{{{1, 1, 2, 2}}};  // d(a,b)=2, d(a,c)=4, d(b,c)=2
    CHECK(divgen::calculate_diversity({a, b, c}) == doctest::Approx((2 + 4 + 2) / 3.0));
    CHECK_THROWS_AS(divgen::calculate_diversity({a}), std::invalid_argument);
}

TEST_CASE("remove_duplicates keeps first occurrences in order") {
    TestSuite x = flat_suite(3, 0);
    TestSuite y = flat_suite(3, 1);
    TestSuite z = flat_suite(3, 2);
    auto out = divgen::remove_duplicates({x, y, x, z, y});
    REQUIRE(out.size() == 3);
    CHECK(out[0] == x);
    CHECK(out[1] == y);
    CHECK(out[2] == z);
}

TEST_CASE("derive_run_seed separates every coordinate") {
    uint64_t base = divgen::derive_run_seed(1, "app", Mode::baseline, 0);
    CHECK(base == divgen::derive_run_seed(1, "app", Mode::baseline, 0));
    CHECK(base != divgen::derive_run_seed(2, "app", Mode::baseline, 0));
    CHECK(base != divgen::derive_run_seed(1, "app2", Mode::baseline, 0));
    CHECK(base != divgen::derive_run_seed(1, "app", Mode::div, 0));
    CHECK(base != divgen::derive_run_seed(1, "app", Mode::baseline, 1));
}

TEST_CASE("a baseline run produces a structurally sound record") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::baseline);
    RunRecord rec = divgen::run(cfg, model);

    REQUIRE(rec.snapshots.size() == static_cast<size_t>(cfg.g_max) + 1);
    REQUIRE(rec.progress.size() == rec.snapshots.size());
    CHECK(rec.final_population.size() == static_cast<size_t>(cfg.size_pop));
    CHECK(rec.config == cfg);
    CHECK(rec.seed == cfg.seed);
    CHECK(rec.duration_seconds > 0.0);

    for (int g = 0; g <= cfg.g_max; ++g) {
        CHECK(rec.snapshots[g].generation == g);
        CHECK(rec.progress[g].generation == g);
        CHECK_FALSE(rec.snapshots[g].fresh_injection);
        CHECK_FALSE(rec.snapshots[g].dedup_shortfall);
        if (g > 0) {
            CHECK(rec.progress[g].cum_coverage >= rec.progress[g - 1].cum_coverage);
            CHECK(rec.progress[g].cum_unique_crashes >= rec.progress[g - 1].cum_unique_crashes);
            CHECK(rec.snapshots[g].hv >= rec.snapshots[g - 1].hv);
        }
    }

    for (size_t i = 0; i < rec.archive.size(); ++i)
        for (size_t j = 0; j < rec.archive.size(); ++j)
            if (i != j)
                CHECK_FALSE(divgen::dominates(rec.archive[i].fitness, rec.archive[j].fitness));

    int last_sig = -1;
    for (const auto& entry : rec.crash_log) {
        CHECK(entry.signature > last_sig);
        last_sig = entry.signature;
        CHECK(entry.first_generation >= 0);
        CHECK(entry.first_generation <= cfg.g_max);
        CHECK(entry.min_case_length >= cfg.min_seq_len);
        CHECK(entry.min_case_length <= cfg.max_seq_len);
    }
    CHECK(rec.progress.back().cum_unique_crashes == static_cast<int>(rec.crash_log.size()));
}

TEST_CASE("the last snapshot is recomputable from the final population") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::baseline);
    RunRecord rec = divgen::run(cfg, model);

    std::vector<TestSuite> pop;
    std::vector<divgen::FitnessTriple> fits;
    for (const auto& m : rec.final_population) {
        pop.push_back(m.suite);
        fits.push_back(m.fitness);
    }
    divgen::Diameters d = divgen::diameters(pop);
    const divgen::LandscapeSnapshot& last = rec.snapshots.back();
    CHECK(last.maxdiam == d.maxdiam);
    CHECK(last.avgdiam == doctest::Approx(d.avgdiam));
    CHECK(last.mindiam == d.mindiam);
    CHECK(last.reldiam == doctest::Approx(d.avgdiam / cfg.max_suite_distance()));
    auto fronts = divgen::fast_non_dominated_sort(fits);
    CHECK(last.ppos ==
          doctest::Approx(static_cast<double>(fronts[0].size()) / pop.size()));
}

TEST_CASE("identical runs differ only in wall-clock duration") {
    AppModel model = small_model();
    for (Mode mode : {Mode::baseline, Mode::div}) {
        SearchConfig cfg = small_cfg(mode);
        RunRecord a = divgen::run(cfg, model);
        RunRecord b = divgen::run(cfg, model);
        CHECK(record_without_duration(a) == record_without_duration(b));
    }
}

TEST_CASE("worker count never changes results") {
    AppModel model = small_model();
    for (Mode mode : {Mode::baseline, Mode::div}) {
        SearchConfig cfg = small_cfg(mode);
        RunRecord serial = divgen::run(cfg, model, 1);
        RunRecord threaded = divgen::run(cfg, model, 4);
        CHECK(record_without_duration(serial) == record_without_duration(threaded));
    }
}

TEST_CASE("g_max of zero still emits the initial snapshot") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::div);
    cfg.g_max = 0;
    RunRecord rec = divgen::run(cfg, model);
    CHECK(rec.snapshots.size() == 1);
    CHECK(rec.progress.size() == 1);
    CHECK(rec.final_population.size() == static_cast<size_t>(cfg.size_pop));
}

TEST_CASE("the progress callback sees every snapshot in order") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::baseline);
    std::vector<divgen::LandscapeSnapshot> seen;
    RunRecord rec = divgen::run(cfg, model, 1,
                                [&](const divgen::LandscapeSnapshot& s) { seen.push_back(s); });
    REQUIRE(seen.size() == rec.snapshots.size());
    for (size_t g = 0; g < seen.size(); ++g) CHECK(seen[g] == rec.snapshots[g]);
}

TEST_CASE("div-mode selection reports the previous generation's diversity") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::div);
    cfg.g_max = 6;
    RunRecord rec = divgen::run(cfg, model);
    for (size_t g = 1; g < rec.snapshots.size(); ++g)
        CHECK(rec.snapshots[g].div_pop == doctest::Approx(rec.snapshots[g - 1].avgdiam));
    CHECK(rec.snapshots[0].div_pop == doctest::Approx(rec.snapshots[0].avgdiam));
}

TEST_CASE("div mode deduplicates the surviving population") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::div);
    cfg.g_max = 8;
    RunRecord rec = divgen::run(cfg, model);
    if (!rec.snapshots.back().dedup_shortfall && !rec.snapshots.back().fresh_injection) {
        for (size_t i = 0; i < rec.final_population.size(); ++i)
            for (size_t j = i + 1; j < rec.final_population.size(); ++j)
                CHECK_FALSE(divgen::is_duplicate(rec.final_population[i].suite,
                                                 rec.final_population[j].suite));
    }
}

TEST_CASE("a full diversity threshold forces fresh offspring immediately") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::div);
    cfg.div_limit = 1.0;  // div_pop <= div_init always holds at generation 1
    cfg.g_max = 1;
    RunRecord rec = divgen::run(cfg, model);
    CHECK(rec.snapshots[1].fresh_injection);
}

TEST_CASE("a zero diversity threshold never fires on a diverse population") {
    AppModel model = small_model();
    SearchConfig cfg = small_cfg(Mode::div);
    cfg.div_limit = 0.0;
    RunRecord rec = divgen::run(cfg, model);
    for (const auto& snap : rec.snapshots) {
        CHECK_FALSE(snap.fresh_injection);
        CHECK(snap.avgdiam > 0.0);
    }
}

TEST_CASE("invalid configs and models are config errors") {
    AppModel model = small_model();
    SearchConfig bad_pop = small_cfg(Mode::baseline);
    bad_pop.size_pop = 1;
    CHECK_THROWS_AS(divgen::run(bad_pop, model), divgen::ConfigError);

    SearchConfig bad_init = small_cfg(Mode::div);
    bad_init.size_init = bad_init.size_pop - 1;
    CHECK_THROWS_AS(divgen::run(bad_init, model), divgen::ConfigError);

    SearchConfig bad_ndiv = small_cfg(Mode::div);
    bad_ndiv.n_div = bad_ndiv.size_pop + 1;
    CHECK_THROWS_AS(divgen::run(bad_ndiv, model), divgen::ConfigError);

    AppModel broken = model;
    broken.initial_state = 99;
    CHECK_THROWS_AS(divgen::run(small_cfg(Mode::baseline), broken), divgen::ConfigError);
}
