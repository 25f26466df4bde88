#pragma once

#include <cstdint>
#include <vector>

#include "divgen/genotype.hpp"
#include "divgen/moea.hpp"

namespace divgen {

struct LandscapeSnapshot {
    int generation = 0;
    double ppos = 0.0;       // |front 0| / |population|
    double hv = 0.0;         // hypervolume of the elitist archive
    int64_t maxdiam = 0;     // population diameter metrics
    double avgdiam = 0.0;
    int64_t mindiam = 0;
    double reldiam = 0.0;    // avgdiam / max possible distance
    double pconnec = 0.0;    // front members in clusters of size >= 2, fraction
    int nconnec = 0;         // clusters of size >= 2
    int64_t kconnec = 0;     // smallest threshold making the front one cluster
    int lconnec = 0;         // largest cluster size
    double hvconnec = 0.0;   // hv share of the largest cluster
    double div_pop = 0.0;    // diversity-check value of this generation (avgdiam of the incoming population)
    bool dedup_shortfall = false;   // duplicates re-admitted because the deduplicated pool was too small
    bool fresh_injection = false;   // adaptive control replaced variation with fresh random offspring
    int nconnec_with_singletons = 0;

    bool operator==(const LandscapeSnapshot&) const = default;
};

struct Diameters {
    int64_t maxdiam = 0;
    double avgdiam = 0.0;
    int64_t mindiam = 0;
};

// Symmetric pairwise distance matrix.
std::vector<std::vector<int64_t>> distance_matrix(const std::vector<TestSuite>& suites);

// Max, average (over ordered pairs i != j), and min pairwise distance.
// Throws std::invalid_argument for fewer than two members.
Diameters diameters(const std::vector<std::vector<int64_t>>& dist);
Diameters diameters(const std::vector<TestSuite>& population);

// avgdiam in proportion to the largest possible distance d_max.
double reldiam(double avgdiam, int64_t d_max);

// Connected components of the graph with edges between members at distance
// strictly below k; components sorted by size descending, ties by smallest
// member index.
std::vector<std::vector<int>> build_clusters(const std::vector<std::vector<int64_t>>& dist,
                                             int64_t k);
std::vector<std::vector<int>> build_clusters(const std::vector<TestSuite>& front, int64_t k);

struct Connectedness {
    double pconnec = 0.0;
    int nconnec = 0;
    int nconnec_with_singletons = 0;
    int64_t kconnec = 0;
    int lconnec = 0;
    double hvconnec = 0.0;
};

// All connectedness metrics over front 0. kconnec is the minimum spanning
// tree's bottleneck weight + 1 (strict < edges), 1 for a singleton front.
// Throws std::invalid_argument on an empty front.
Connectedness connectedness_metrics(const std::vector<TestSuite>& front,
                                    const std::vector<FitnessTriple>& front_fitnesses,
                                    int64_t k, const FitnessTriple& hv_reference);

}  // namespace divgen
