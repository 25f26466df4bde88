#pragma once

#include <vector>

namespace divgen {

// Objectives: crashes and coverage maximized, length minimized.
struct FitnessTriple {
    int crashes = 0;
    double coverage = 0.0;
    double length = 0.0;  // total events in the suite (mean per case behind a config switch)

    bool operator==(const FitnessTriple&) const = default;
};

bool dominates(const FitnessTriple& a, const FitnessTriple& b);

// Fronts F0, F1, ... as index lists; F0 is the non-dominated set and each Fi is
// non-dominated once F0..Fi-1 are removed. Indices ascend within a front.
// Throws std::invalid_argument on empty input.
std::vector<std::vector<int>> fast_non_dominated_sort(const std::vector<FitnessTriple>& fitnesses);

// NSGA-II crowding over one front: boundary individuals get +infinity, interior
// ones accumulate (next - prev) / (max - min) per objective; constant objectives
// contribute nothing. Fronts of size <= 2 are all-boundary.
std::vector<double> crowding_distance(const std::vector<FitnessTriple>& front);

struct FrontAssignment {
    int rank = 0;
    double crowding = 0.0;
};

// Permutation of [0, n) ordered by ascending rank, then descending crowding,
// then ascending original index.
std::vector<int> crowded_sort(const std::vector<FrontAssignment>& assignments);

// Ranks and crowding for a whole population in one pass.
std::vector<FrontAssignment> assign_fronts(const std::vector<FitnessTriple>& fitnesses);

// Exact measure of the union of boxes spanned between each point and the
// reference, in the transformed all-maximize space (crashes - ref.crashes,
// coverage - ref.coverage, ref.length - length). Points worse than the
// reference on any axis are dropped with a warning. Empty front: 0.
double hypervolume(const std::vector<FitnessTriple>& front, const FitnessTriple& reference);

// The nadir reference (0 crashes, 0 coverage, max_total_length).
FitnessTriple nadir_reference(double max_total_length);

}  // namespace divgen
