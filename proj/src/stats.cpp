#include "divgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "divgen/errors.hpp"
#include "divgen/log.hpp"

namespace divgen {

namespace {

constexpr size_t kExactLimit = 20;  // pooled size cap for the permutation distribution

// Midrank sum of sample a within the pooled ordering.
double rank_sum(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<std::pair<double, int>> pooled;  // value, side (0: a, 1: b)
    pooled.reserve(a.size() + b.size());
    for (double v : a) pooled.emplace_back(v, 0);
    for (double v : b) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    double r1 = 0.0;
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first) ++j;
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (size_t t = i; t < j; ++t)
            if (pooled[t].second == 0) r1 += midrank;
        i = j;
    }
    return r1;
}

bool has_ties(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

double normal_p(double u, size_t n1, size_t n2, const std::vector<double>& a,
                const std::vector<double>& b) {
    double nn = static_cast<double>(n1) * static_cast<double>(n2);
    double n = static_cast<double>(n1 + n2);
    std::vector<double> pooled;
    pooled.reserve(n1 + n2);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0.0;
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    double variance = nn / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) return 1.0;  // all pooled values identical
    double z = (std::fabs(u - nn / 2.0) - 0.5) / std::sqrt(variance);  // continuity correction
    if (z < 0.0) z = 0.0;
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

// Counts of rank subsets per U value for tie-free pooled ranks 1..n.
double exact_p(double u, size_t n1, size_t n2) {
    size_t n = n1 + n2;
    size_t max_sum = n1 * n;  // loose cap on the rank sum
    // ways[k][s]: subsets of size k of the ranks seen so far with rank sum s.
    std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (size_t r = 1; r <= n; ++r) {
        for (size_t k = std::min(r, n1); k >= 1; --k) {
            for (size_t s = max_sum; s >= r; --s) {
                if (ways[k - 1][s - r] != 0.0) ways[k][s] += ways[k - 1][s - r];
            }
        }
    }
    double min_sum = static_cast<double>(n1) * (n1 + 1) / 2.0;
    double total = 0.0;
    std::vector<double> u_counts(n1 * n2 + 1, 0.0);
    for (size_t s = 0; s <= max_sum; ++s) {
        if (ways[n1][s] == 0.0) continue;
        double uu = static_cast<double>(s) - min_sum;
        u_counts[static_cast<size_t>(uu)] += ways[n1][s];
        total += ways[n1][s];
    }
    double lo = std::min(u, static_cast<double>(n1 * n2) - u);
    double hi = std::max(u, static_cast<double>(n1 * n2) - u);
    double mass = 0.0;
    for (size_t uu = 0; uu <= n1 * n2; ++uu) {
        double val = static_cast<double>(uu);
        if (val <= lo + 1e-9 || val >= hi - 1e-9) mass += u_counts[uu];
    }
    return std::min(1.0, mass / total);
}

}  // namespace

MwuResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                         PMethod method) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("mann_whitney_u: samples must be non-empty");
    size_t n1 = a.size(), n2 = b.size();
    double u = rank_sum(a, b) - static_cast<double>(n1) * (n1 + 1) / 2.0;
    std::vector<double> pooled;
    pooled.reserve(n1 + n2);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    bool tied = has_ties(pooled);
    if (method == PMethod::automatic)
        method = (!tied && n1 + n2 <= kExactLimit) ? PMethod::exact_perm : PMethod::normal_approx;
    if (method == PMethod::exact_perm) {
        if (tied)
            throw std::invalid_argument("mann_whitney_u: exact method requires tie-free samples");
        if (n1 + n2 > kExactLimit)
            throw std::invalid_argument("mann_whitney_u: exact method limited to 20 pooled values");
        return {u, exact_p(u, n1, n2)};
    }
    return {u, normal_p(u, n1, n2, a, b)};
}

double vargha_delaney_a12(const std::vector<double>& a, const std::vector<double>& b,
                          bool larger_is_better) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("vargha_delaney_a12: samples must be non-empty");
    double wins = 0.0;
    for (double x : a) {
        for (double y : b) {
            if (x == y)
                wins += 0.5;
            else if ((x > y) == larger_is_better)
                wins += 1.0;
        }
    }
    return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double overhead_percent(double median_base, double median_div) {
    if (median_base <= 0.0)
        throw ConfigError("overhead_percent: baseline median must be positive");
    return 100.0 * (median_div - median_base) / median_base;
}

int adjusted_generations(int g_max, double overhead_percent) {
    if (overhead_percent >= 100.0) {
        log_warn("adjusted_generations: overhead %.2f%% consumes the whole budget",
                 overhead_percent);
        return 0;
    }
    if (overhead_percent < 0.0)
        throw ConfigError("adjusted_generations: overhead must be non-negative");
    return static_cast<int>(std::floor(g_max * (1.0 - overhead_percent / 100.0) + 0.5));
}

std::optional<double> min_crash_sequence_length(const RunRecord& record) {
    if (record.crash_log.empty()) return std::nullopt;
    double sum = 0.0;
    for (const CrashLogEntry& e : record.crash_log) sum += e.min_case_length;
    return sum / static_cast<double>(record.crash_log.size());
}

DescriptiveStats describe(const std::vector<double>& values) {
    if (values.empty())
        throw std::invalid_argument("describe: empty sample");
    DescriptiveStats out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    out.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return out;
}

const char* effect_class_name(EffectClass e) {
    switch (e) {
        case EffectClass::negligible: return "negligible";
        case EffectClass::small: return "small";
        case EffectClass::medium: return "medium";
        case EffectClass::large: return "large";
    }
    return "negligible";
}

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::worse: return "worse";
        case Direction::equal: return "equal";
        case Direction::better: return "better";
    }
    return "equal";
}

ComparisonRow compare(const std::vector<double>& a, const std::vector<double>& b,
                      bool larger_is_better) {
    ComparisonRow row;
    row.a = describe(a);
    row.b = describe(b);
    MwuResult mwu = mann_whitney_u(a, b);
    row.u = mwu.u;
    row.p_value = mwu.p;
    row.a12 = vargha_delaney_a12(a, b, larger_is_better);
    double scaled = std::max(row.a12, 1.0 - row.a12);
    row.effect_class = scaled > 0.71   ? EffectClass::large
                       : scaled > 0.64 ? EffectClass::medium
                       : scaled > 0.56 ? EffectClass::small
                                       : EffectClass::negligible;
    row.significant = row.p_value < 0.05;
    row.direction = row.a12 > 0.5   ? Direction::better
                    : row.a12 < 0.5 ? Direction::worse
                                    : Direction::equal;
    return row;
}

}  // namespace divgen
