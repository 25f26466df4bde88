#include "divgen/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "divgen/errors.hpp"
#include "divgen/landscape.hpp"
#include "divgen/log.hpp"
#include "divgen/moea.hpp"
#include "divgen/rng.hpp"
#include "divgen/variation.hpp"

namespace divgen {

void validate(const SearchConfig& cfg) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(cfg.crossover_prob) || !prob(cfg.mutation_prob) || !prob(cfg.inner_prob))
        throw ConfigError("config: probabilities must lie in [0, 1]");
    if (cfg.size_pop < 2) throw ConfigError("config: size_pop must be >= 2");
    if (cfg.size_off < 1) throw ConfigError("config: size_off must be >= 1");
    if (cfg.suite_size < 1) throw ConfigError("config: suite_size must be >= 1");
    if (cfg.min_seq_len < 1 || cfg.min_seq_len > cfg.max_seq_len)
        throw ConfigError("config: sequence length bounds must satisfy 1 <= min <= max");
    if (cfg.g_max < 0) throw ConfigError("config: g_max must be >= 0");
    if (cfg.size_init < cfg.size_pop)
        throw ConfigError("config: size_init must be >= size_pop");
    if (cfg.div_limit < 0.0 || cfg.div_limit > 1.0)
        throw ConfigError("config: div_limit must lie in [0, 1]");
    if (cfg.n_div < 0 || cfg.n_div > cfg.size_pop)
        throw ConfigError("config: n_div must lie in [0, size_pop]");
    if (cfg.connectedness_k < 0)
        throw ConfigError("config: connectedness_k must be >= 0");
}

std::vector<int> select_most_distant_indices(const std::vector<std::vector<int64_t>>& dist,
                                             int k) {
    int n = static_cast<int>(dist.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("select_most_distant: k out of [1, |candidates|]");
    if (k == 1) return {0};
    int seed_a = 0, seed_b = 1;
    int64_t best_pair = std::numeric_limits<int64_t>::min();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dist[i][j] > best_pair) {
                best_pair = dist[i][j];
                seed_a = i;
                seed_b = j;
            }
        }
    }
    std::vector<int> selected = {seed_a, seed_b};
    std::vector<uint8_t> in_set(n, 0);
    in_set[seed_a] = in_set[seed_b] = 1;
    std::vector<int64_t> min_dist(n, std::numeric_limits<int64_t>::max());
    for (int i = 0; i < n; ++i)
        min_dist[i] = std::min(dist[i][seed_a], dist[i][seed_b]);
    while (static_cast<int>(selected.size()) < k) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (in_set[i]) continue;
            if (best == -1 || min_dist[i] > min_dist[best]) best = i;
        }
        selected.push_back(best);
        in_set[best] = 1;
        for (int i = 0; i < n; ++i)
            min_dist[i] = std::min(min_dist[i], dist[i][best]);
    }
    return selected;
}

std::vector<TestSuite> select_most_distant(const std::vector<TestSuite>& candidates, int k) {
    std::vector<int> idx = select_most_distant_indices(distance_matrix(candidates), k);
    std::vector<TestSuite> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(candidates[i]);
    return out;
}

double calculate_diversity(const std::vector<TestSuite>& population) {
    return diameters(population).avgdiam;
}

namespace {

std::vector<int> first_occurrence_indices(const std::vector<TestSuite>& pool) {
    std::vector<int> keep;
    for (size_t i = 0; i < pool.size(); ++i) {
        bool seen = false;
        for (int j : keep) {
            if (is_duplicate(pool[j], pool[i])) {
                seen = true;
                break;
            }
        }
        if (!seen) keep.push_back(static_cast<int>(i));
    }
    return keep;
}

}  // namespace

std::vector<TestSuite> remove_duplicates(const std::vector<TestSuite>& pool) {
    std::vector<TestSuite> out;
    for (int i : first_occurrence_indices(pool)) out.push_back(pool[i]);
    return out;
}

uint64_t derive_run_seed(uint64_t base_seed, const std::string& model_id, Mode mode, int rep) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the model id
    for (unsigned char c : model_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return derive_seed({base_seed, kStreamRunSeed, h, mode == Mode::div ? 1u : 0u,
                        static_cast<uint64_t>(rep)});
}

namespace {

std::vector<EvaluationResult> evaluate_all(const CompiledApp& app,
                                           const std::vector<TestSuite>& suites,
                                           bool length_mean, int workers) {
    std::vector<EvaluationResult> out(suites.size());
    int n = static_cast<int>(suites.size());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) out[i] = app.evaluate(suites[i], length_mean);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                out[i] = app.evaluate(suites[i], length_mean);
        });
    }
    for (std::thread& t : threads) t.join();
    return out;
}

// Elitist archive of all non-dominated solutions ever evaluated. Equal-fitness
// duplicates (distance 0) are kept once.
class ParetoArchive {
public:
    void insert(const TestSuite& suite, const FitnessTriple& fitness) {
        for (const EvaluatedSuite& m : members_)
            if (dominates(m.fitness, fitness)) return;
        for (const EvaluatedSuite& m : members_)
            if (m.fitness == fitness && is_duplicate(m.suite, suite)) return;
        std::erase_if(members_,
                      [&](const EvaluatedSuite& m) { return dominates(fitness, m.fitness); });
        members_.push_back({suite, fitness});
    }

    const std::vector<EvaluatedSuite>& members() const { return members_; }

    std::vector<FitnessTriple> fitnesses() const {
        std::vector<FitnessTriple> out;
        out.reserve(members_.size());
        for (const EvaluatedSuite& m : members_) out.push_back(m.fitness);
        return out;
    }

private:
    std::vector<EvaluatedSuite> members_;
};

// Run-level cumulative coverage, crash log, and progress rows.
class RunAccumulator {
public:
    explicit RunAccumulator(int total_blocks)
        : covered_(total_blocks, 0), total_blocks_(total_blocks) {}

    void merge(int generation, const TestSuite& suite, const EvaluationResult& eval) {
        for (int b : eval.covered_blocks) {
            if (!covered_[b]) {
                covered_[b] = 1;
                ++covered_count_;
            }
        }
        for (const PerCaseCrash& pc : eval.per_case_crash) {
            int len = static_cast<int>(suite.cases[pc.case_index].size());
            auto it = crash_log_.find(pc.signature);
            if (it == crash_log_.end())
                crash_log_.emplace(pc.signature, CrashLogEntry{pc.signature, generation, len});
            else
                it->second.min_case_length = std::min(it->second.min_case_length, len);
        }
    }

    ProgressRow progress_row(int generation) const {
        ProgressRow row;
        row.generation = generation;
        row.cum_coverage = static_cast<double>(covered_count_) / total_blocks_;
        row.cum_unique_crashes = static_cast<int>(crash_log_.size());
        if (!crash_log_.empty()) {
            double sum = 0.0;
            for (const auto& [sig, entry] : crash_log_) sum += entry.min_case_length;
            row.mean_min_crash_length = sum / static_cast<double>(crash_log_.size());
        }
        return row;
    }

    std::vector<CrashLogEntry> log() const {
        std::vector<CrashLogEntry> out;
        out.reserve(crash_log_.size());
        for (const auto& [sig, entry] : crash_log_) out.push_back(entry);
        return out;
    }

private:
    std::vector<uint8_t> covered_;
    int covered_count_ = 0;
    int total_blocks_;
    std::map<int, CrashLogEntry> crash_log_;
};

LandscapeSnapshot make_snapshot(int generation, const std::vector<TestSuite>& population,
                                const std::vector<FitnessTriple>& fitnesses,
                                const ParetoArchive& archive, const SearchConfig& cfg) {
    LandscapeSnapshot snap;
    snap.generation = generation;
    std::vector<std::vector<int>> fronts = fast_non_dominated_sort(fitnesses);
    const std::vector<int>& front0 = fronts.front();
    snap.ppos = static_cast<double>(front0.size()) / static_cast<double>(population.size());
    FitnessTriple ref = nadir_reference(cfg.max_total_length());
    snap.hv = hypervolume(archive.fitnesses(), ref);
    Diameters d = diameters(population);
    snap.maxdiam = d.maxdiam;
    snap.avgdiam = d.avgdiam;
    snap.mindiam = d.mindiam;
    snap.reldiam = reldiam(d.avgdiam, cfg.max_suite_distance());
    std::vector<TestSuite> front_suites;
    std::vector<FitnessTriple> front_fits;
    front_suites.reserve(front0.size());
    front_fits.reserve(front0.size());
    for (int i : front0) {
        front_suites.push_back(population[i]);
        front_fits.push_back(fitnesses[i]);
    }
    Connectedness c = connectedness_metrics(front_suites, front_fits, cfg.connectedness_k, ref);
    snap.pconnec = c.pconnec;
    snap.nconnec = c.nconnec;
    snap.nconnec_with_singletons = c.nconnec_with_singletons;
    snap.kconnec = c.kconnec;
    snap.lconnec = c.lconnec;
    snap.hvconnec = c.hvconnec;
    return snap;
}

}  // namespace

RunRecord run(const SearchConfig& cfg, const AppModel& model, int workers,
              const ProgressFn& on_generation) {
    validate(cfg);
    try {
        validate(model);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("run: invalid model: ") + e.what());
    }
    if (workers < 1) workers = 1;
    auto start = std::chrono::steady_clock::now();
    CompiledApp app(model);
    ParetoArchive archive;
    RunAccumulator acc(model.total_blocks);
    RunRecord rec;
    rec.config = cfg;
    rec.seed = cfg.seed;

    std::vector<TestSuite> pop;
    {
        SplitMix64 init_rng(derive_seed({cfg.seed, kStreamInit}));
        if (cfg.mode == Mode::div) {
            std::vector<TestSuite> candidates;
            candidates.reserve(cfg.size_init);
            for (int i = 0; i < cfg.size_init; ++i)
                candidates.push_back(random_suite(init_rng, cfg, app.alphabet_size()));
            pop = select_most_distant(candidates, cfg.size_pop);
        } else {
            pop.reserve(cfg.size_pop);
            for (int i = 0; i < cfg.size_pop; ++i)
                pop.push_back(random_suite(init_rng, cfg, app.alphabet_size()));
        }
    }
    std::vector<FitnessTriple> fits(pop.size());
    {
        std::vector<EvaluationResult> evals =
            evaluate_all(app, pop, cfg.length_objective_mean, workers);
        for (size_t i = 0; i < pop.size(); ++i) {
            fits[i] = evals[i].fitness;
            archive.insert(pop[i], fits[i]);
            acc.merge(0, pop[i], evals[i]);
        }
    }
    LandscapeSnapshot snap0 = make_snapshot(0, pop, fits, archive, cfg);
    snap0.div_pop = snap0.avgdiam;
    rec.snapshots.push_back(snap0);
    rec.progress.push_back(acc.progress_row(0));
    if (on_generation) on_generation(rec.snapshots.back());
    const double div_init = snap0.avgdiam;
    double prev_avgdiam = snap0.avgdiam;

    for (int g = 1; g <= cfg.g_max; ++g) {
        double div_pop = prev_avgdiam;  // diversity of the incoming population
        bool fresh_injection = false;
        bool dedup_shortfall = false;
        std::vector<TestSuite> offspring;
        if (cfg.mode == Mode::div && div_pop <= cfg.div_limit * div_init) {
            fresh_injection = true;
            SplitMix64 rng(derive_seed({cfg.seed, kStreamFreshOffspring,
                                        static_cast<uint64_t>(g)}));
            offspring.reserve(cfg.size_off);
            for (int i = 0; i < cfg.size_off; ++i)
                offspring.push_back(random_suite(rng, cfg, app.alphabet_size()));
            log_debug("generation %d: diversity %.2f <= %.2f, injecting fresh offspring", g,
                      div_pop, cfg.div_limit * div_init);
        } else {
            SplitMix64 rng(derive_seed({cfg.seed, kStreamVariation, static_cast<uint64_t>(g)}));
            offspring = whole_test_suite_variation(pop, cfg, rng);
        }
        std::vector<EvaluationResult> evals =
            evaluate_all(app, offspring, cfg.length_objective_mean, workers);
        std::vector<TestSuite> pool = pop;
        std::vector<FitnessTriple> pool_fits = fits;
        pool.reserve(pool.size() + offspring.size());
        pool_fits.reserve(pool.size() + offspring.size());
        for (size_t i = 0; i < offspring.size(); ++i) {
            archive.insert(offspring[i], evals[i].fitness);
            acc.merge(g, offspring[i], evals[i]);
            pool.push_back(std::move(offspring[i]));
            pool_fits.push_back(evals[i].fitness);
        }

        std::vector<int> chosen;  // indices into pool
        if (fresh_injection) {
            chosen = select_most_distant_indices(distance_matrix(pool), cfg.size_pop);
        } else if (cfg.mode == Mode::baseline) {
            std::vector<int> order = crowded_sort(assign_fronts(pool_fits));
            chosen.assign(order.begin(), order.begin() + cfg.size_pop);
        } else {
            // Hybrid selection: crowded-best of the deduplicated pool plus its
            // n_div most distant members, topped up in crowded order.
            std::vector<int> dedup = first_occurrence_indices(pool);
            std::vector<FitnessTriple> dedup_fits;
            dedup_fits.reserve(dedup.size());
            for (int i : dedup) dedup_fits.push_back(pool_fits[i]);
            std::vector<int> order = crowded_sort(assign_fronts(dedup_fits));
            std::vector<uint8_t> taken(dedup.size(), 0);
            int best_count =
                std::min(cfg.size_pop - cfg.n_div, static_cast<int>(dedup.size()));
            for (int r = 0; r < best_count; ++r) {
                chosen.push_back(dedup[order[r]]);
                taken[order[r]] = 1;
            }
            int n_div_eff = std::min(cfg.n_div, static_cast<int>(dedup.size()));
            if (n_div_eff >= 1) {
                std::vector<TestSuite> dedup_suites;
                dedup_suites.reserve(dedup.size());
                for (int i : dedup) dedup_suites.push_back(pool[i]);
                for (int r : select_most_distant_indices(distance_matrix(dedup_suites),
                                                         n_div_eff)) {
                    if (!taken[r] && static_cast<int>(chosen.size()) < cfg.size_pop) {
                        chosen.push_back(dedup[r]);
                        taken[r] = 1;
                    }
                }
            }
            for (size_t r = 0;
                 r < order.size() && static_cast<int>(chosen.size()) < cfg.size_pop; ++r) {
                if (!taken[order[r]]) {
                    chosen.push_back(dedup[order[r]]);
                    taken[order[r]] = 1;
                }
            }
            if (static_cast<int>(chosen.size()) < cfg.size_pop) {
                // Deduplicated pool exhausted: re-admit duplicates by crowded
                // order over the full pool.
                dedup_shortfall = true;
                std::vector<uint8_t> used(pool.size(), 0);
                for (int i : chosen) used[i] = 1;
                for (int i : crowded_sort(assign_fronts(pool_fits))) {
                    if (static_cast<int>(chosen.size()) >= cfg.size_pop) break;
                    if (!used[i]) {
                        chosen.push_back(i);
                        used[i] = 1;
                    }
                }
            }
        }
        std::vector<TestSuite> next_pop;
        std::vector<FitnessTriple> next_fits;
        next_pop.reserve(chosen.size());
        next_fits.reserve(chosen.size());
        for (int i : chosen) {
            next_pop.push_back(std::move(pool[i]));
            next_fits.push_back(pool_fits[i]);
        }
        pop = std::move(next_pop);
        fits = std::move(next_fits);

        LandscapeSnapshot snap = make_snapshot(g, pop, fits, archive, cfg);
        snap.div_pop = div_pop;
        snap.fresh_injection = fresh_injection;
        snap.dedup_shortfall = dedup_shortfall;
        prev_avgdiam = snap.avgdiam;
        rec.snapshots.push_back(snap);
        rec.progress.push_back(acc.progress_row(g));
        if (on_generation) on_generation(rec.snapshots.back());
    }

    rec.final_population.reserve(pop.size());
    for (size_t i = 0; i < pop.size(); ++i)
        rec.final_population.push_back({pop[i], fits[i]});
    rec.archive = archive.members();
    rec.crash_log = acc.log();
    rec.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace divgen
