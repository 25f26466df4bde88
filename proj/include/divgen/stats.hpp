#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divgen/run_record.hpp"

namespace divgen {

struct MwuResult {
    double u = 0.0;  // U statistic for sample a
    double p = 1.0;  // two-sided
};

enum class PMethod {
    automatic,     // exact for <= 20 pooled values without ties, else normal
    exact_perm,    // full permutation distribution (small, tie-free samples)
    normal_approx  // normal approximation with tie and continuity correction
};

// Rank-sum U with midranks. Throws std::invalid_argument on empty samples, or
// when exact_perm is requested for tied or oversized samples.
MwuResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                         PMethod method = PMethod::automatic);

// (#pairs where a beats b + 0.5 * #ties) / (|a| * |b|), "beats" oriented by
// larger_is_better. Throws std::invalid_argument on empty samples.
double vargha_delaney_a12(const std::vector<double>& a, const std::vector<double>& b,
                          bool larger_is_better);

// 100 * (median_div - median_base) / median_base. Throws ConfigError when
// median_base <= 0.
double overhead_percent(double median_base, double median_div);

// round(g_max * (1 - overhead/100)), half-up. Overhead >= 100 returns 0 with a
// warning.
int adjusted_generations(int g_max, double overhead_percent);

// Mean over unique crash signatures of the minimal revealing case length;
// absent when the run found no crash.
std::optional<double> min_crash_sequence_length(const RunRecord& record);

struct DescriptiveStats {
    double mean = 0.0;
    double median = 0.0;
    std::optional<double> sd;  // absent for single-element samples
};

DescriptiveStats describe(const std::vector<double>& values);

enum class EffectClass { negligible, small, medium, large };
enum class Direction { worse, equal, better };

const char* effect_class_name(EffectClass e);
const char* direction_name(Direction d);

struct ComparisonRow {
    DescriptiveStats a;
    DescriptiveStats b;
    double u = 0.0;
    double p_value = 1.0;
    double a12 = 0.5;
    EffectClass effect_class = EffectClass::negligible;
    bool significant = false;    // p < 0.05
    Direction direction = Direction::equal;  // side a relative to side b
};

// Effect class thresholds apply to max(a12, 1 - a12): > 0.56 small, > 0.64
// medium, > 0.71 large. Direction follows a12 against 0.5.
ComparisonRow compare(const std::vector<double>& a, const std::vector<double>& b,
                      bool larger_is_better);

}  // namespace divgen
