// Independent reference implementations used to cross-check the library. Each
// oracle deliberately takes a different route than the production code.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/moea.hpp"
#include "divgen/rng.hpp"

namespace oracles {

// Positionwise formulation of the suite distance: position i of a case pair
// contributes 1 when exactly one case covers it or the events differ.
inline int64_t suite_distance(const divgen::TestSuite& a, const divgen::TestSuite& b) {
    if (a.cases.size() != b.cases.size())
        throw std::invalid_argument("oracle: suite sizes differ");
    int64_t total = 0;
    for (size_t c = 0; c < a.cases.size(); ++c) {
        const auto& x = a.cases[c];
        const auto& y = b.cases[c];
        size_t longest = std::max(x.size(), y.size());
        for (size_t i = 0; i < longest; ++i) {
            if (i >= x.size() || i >= y.size() || x[i] != y[i]) ++total;
        }
    }
    return total;
}

// O(N^3) non-dominated sorting by repeated peeling of the non-dominated set.
inline std::vector<std::vector<int>> non_dominated_peeling(
    const std::vector<divgen::FitnessTriple>& fits) {
    std::vector<int> remaining(fits.size());
    for (size_t i = 0; i < fits.size(); ++i) remaining[i] = static_cast<int>(i);
    std::vector<std::vector<int>> fronts;
    while (!remaining.empty()) {
        std::vector<int> front, rest;
        for (int i : remaining) {
            bool dominated = false;
            for (int j : remaining) {
                if (i != j && divgen::dominates(fits[j], fits[i])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        remaining = std::move(rest);
    }
    return fronts;
}

// Monte Carlo hypervolume in raw objective space: fraction of uniform samples
// from the bounding box (between the reference and the front's ideal corner)
// that some front member dominates weakly.
inline double hypervolume_mc(const std::vector<divgen::FitnessTriple>& front,
                             const divgen::FitnessTriple& ref, int samples, uint64_t seed) {
    if (front.empty()) return 0.0;
    double max_crashes = ref.crashes;
    double max_coverage = ref.coverage;
    double min_length = ref.length;
    for (const auto& f : front) {
        max_crashes = std::max(max_crashes, static_cast<double>(f.crashes));
        max_coverage = std::max(max_coverage, f.coverage);
        min_length = std::min(min_length, f.length);
    }
    double volume = (max_crashes - ref.crashes) * (max_coverage - ref.coverage) *
                    (ref.length - min_length);
    if (volume <= 0.0) return 0.0;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
        double xc = ref.crashes + u01(gen) * (max_crashes - ref.crashes);
        double xv = ref.coverage + u01(gen) * (max_coverage - ref.coverage);
        double xl = min_length + u01(gen) * (ref.length - min_length);
        for (const auto& f : front) {
            if (f.crashes >= xc && f.coverage >= xv && f.length <= xl) {
                ++hits;
                break;
            }
        }
    }
    return volume * hits / samples;
}

// Smallest integer threshold k for which the strict-< k graph is connected,
// found by sweeping candidate thresholds and running a BFS each time.
inline int64_t kconnec_sweep(const std::vector<std::vector<int64_t>>& dist) {
    size_t n = dist.size();
    if (n <= 1) return 1;
    std::vector<int64_t> candidates;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) candidates.push_back(dist[i][j] + 1);
    std::sort(candidates.begin(), candidates.end());
    for (int64_t k : candidates) {
        std::vector<bool> seen(n, false);
        std::deque<size_t> queue{0};
        seen[0] = true;
        size_t reached = 1;
        while (!queue.empty()) {
            size_t v = queue.front();
            queue.pop_front();
            for (size_t w = 0; w < n; ++w) {
                if (!seen[w] && dist[v][w] < k) {
                    seen[w] = true;
                    ++reached;
                    queue.push_back(w);
                }
            }
        }
        if (reached == n) return k;
    }
    return candidates.back();
}

// Exact two-sided permutation p for the U of sample a, by enumerating every
// way of assigning the pooled values to side a (tie-aware via pair counting).
inline double mwu_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    size_t n1 = a.size(), n = pooled.size();
    auto u_of = [&](const std::vector<bool>& mask) {
        double u = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (!mask[i]) continue;
            for (size_t j = 0; j < n; ++j) {
                if (mask[j]) continue;
                if (pooled[i] > pooled[j])
                    u += 1.0;
                else if (pooled[i] == pooled[j])
                    u += 0.5;
            }
        }
        return u;
    };
    std::vector<bool> observed(n, false);
    for (size_t i = 0; i < n1; ++i) observed[i] = true;
    double u_obs = u_of(observed);
    double nn = static_cast<double>(n1) * static_cast<double>(n - n1);
    double lo = std::min(u_obs, nn - u_obs);
    double hi = std::max(u_obs, nn - u_obs);
    std::vector<bool> mask(n, false);
    std::fill(mask.end() - static_cast<long>(n1), mask.end(), true);
    long total = 0, tail = 0;
    do {
        double u = u_of(mask);
        ++total;
        if (u <= lo + 1e-9 || u >= hi - 1e-9) ++tail;
    } while (std::next_permutation(mask.begin(), mask.end()));
    return std::min(1.0, static_cast<double>(tail) / static_cast<double>(total));
}

// Rank-based A12: (R1/n1 - (n1+1)/2) / n2 on midranks, mirrored when smaller
// values win.
inline double a12_by_ranks(std::vector<double> a, std::vector<double> b,
                           bool larger_is_better) {
    if (!larger_is_better) {
        for (double& v : a) v = -v;
        for (double& v : b) v = -v;
    }
    std::vector<std::pair<double, int>> pooled;
    for (double v : a) pooled.push_back({v, 0});
    for (double v : b) pooled.push_back({v, 1});
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    double r1 = 0.0;
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
        double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (size_t t = i; t < j; ++t)
            if (pooled[t].second == 0) r1 += midrank;
        i = j;
    }
    double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
    return (r1 / n1 - (n1 + 1.0) / 2.0) / n2;
}

// Replays scripted draws; any unscripted draw fails the test loudly.
class ScriptedRng final : public divgen::RandomSource {
public:
    std::deque<uint64_t> u64s;
    std::deque<double> reals;
    std::deque<bool> coins;
    std::deque<size_t> indices;
    std::deque<int> ints;

    uint64_t next_u64() override { return pop(u64s, "next_u64"); }
    double uniform01() override { return pop(reals, "uniform01"); }
    bool coin(double) override { return pop(coins, "coin"); }
    size_t uniform_index(size_t) override { return pop(indices, "uniform_index"); }
    int uniform_int(int, int) override { return pop(ints, "uniform_int"); }

    bool exhausted() const {
        return u64s.empty() && reals.empty() && coins.empty() && indices.empty() && ints.empty();
    }

private:
    template <typename T>
    static T pop(std::deque<T>& q, const char* what) {
        if (q.empty()) throw std::logic_error(std::string("ScriptedRng: no scripted ") + what);
        T v = q.front();
        q.pop_front();
        return v;
    }
};

}  // namespace oracles
