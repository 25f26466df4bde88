#include "divgen/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "divgen/log.hpp"

namespace divgen {

bool dominates(const FitnessTriple& a, const FitnessTriple& b) {
    bool no_worse = a.crashes >= b.crashes && a.coverage >= b.coverage && a.length <= b.length;
    bool strictly_better = a.crashes > b.crashes || a.coverage > b.coverage || a.length < b.length;
    return no_worse && strictly_better;
}

std::vector<std::vector<int>> fast_non_dominated_sort(const std::vector<FitnessTriple>& fitnesses) {
    if (fitnesses.empty())
        throw std::invalid_argument("fast_non_dominated_sort: empty input");
    int n = static_cast<int>(fitnesses.size());
    std::vector<std::vector<int>> dominated_by(n);
    std::vector<int> dom_count(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dominates(fitnesses[i], fitnesses[j])) {
                dominated_by[i].push_back(j);
                ++dom_count[j];
            } else if (dominates(fitnesses[j], fitnesses[i])) {
                dominated_by[j].push_back(i);
                ++dom_count[i];
            }
        }
    }
    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (dom_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[i]) {
                if (--dom_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<FitnessTriple>& front) {
    if (front.empty())
        throw std::invalid_argument("crowding_distance: empty front");
    size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) return std::vector<double>(n, inf);
    std::vector<double> crowd(n, 0.0);
    auto objective = [&](size_t i, int obj) {
        switch (obj) {
            case 0: return static_cast<double>(front[i].crashes);
            case 1: return front[i].coverage;
            default: return front[i].length;
        }
    };
    std::vector<size_t> idx(n);
    for (int obj = 0; obj < 3; ++obj) {
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            double va = objective(a, obj), vb = objective(b, obj);
            return va != vb ? va < vb : a < b;
        });
        double lo = objective(idx.front(), obj);
        double hi = objective(idx.back(), obj);
        if (hi == lo) continue;  // constant objective contributes nothing
        crowd[idx.front()] = inf;
        crowd[idx.back()] = inf;
        for (size_t r = 1; r + 1 < n; ++r) {
            if (std::isinf(crowd[idx[r]])) continue;
            crowd[idx[r]] += (objective(idx[r + 1], obj) - objective(idx[r - 1], obj)) / (hi - lo);
        }
    }
    return crowd;
}

std::vector<int> crowded_sort(const std::vector<FrontAssignment>& assignments) {
    std::vector<int> order(assignments.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (assignments[a].rank != assignments[b].rank)
            return assignments[a].rank < assignments[b].rank;
        if (assignments[a].crowding != assignments[b].crowding)
            return assignments[a].crowding > assignments[b].crowding;
        return a < b;
    });
    return order;
}

std::vector<FrontAssignment> assign_fronts(const std::vector<FitnessTriple>& fitnesses) {
    std::vector<FrontAssignment> out(fitnesses.size());
    std::vector<std::vector<int>> fronts = fast_non_dominated_sort(fitnesses);
    for (size_t rank = 0; rank < fronts.size(); ++rank) {
        std::vector<FitnessTriple> members;
        members.reserve(fronts[rank].size());
        for (int i : fronts[rank]) members.push_back(fitnesses[i]);
        std::vector<double> crowd = crowding_distance(members);
        for (size_t j = 0; j < fronts[rank].size(); ++j) {
            out[fronts[rank][j]].rank = static_cast<int>(rank);
            out[fronts[rank][j]].crowding = crowd[j];
        }
    }
    return out;
}

namespace {

struct Point3 {
    double u, v, w;
};

// Union area of the rectangles [0,u] x [0,v].
double staircase_area(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second > b.second;
    });
    double area = 0.0;
    double vmax = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        double next_u = i + 1 < pts.size() ? pts[i + 1].first : 0.0;
        vmax = std::max(vmax, pts[i].second);
        area += (pts[i].first - next_u) * vmax;
    }
    return area;
}

}  // namespace

double hypervolume(const std::vector<FitnessTriple>& front, const FitnessTriple& reference) {
    std::vector<Point3> pts;
    pts.reserve(front.size());
    for (const FitnessTriple& f : front) {
        double u = static_cast<double>(f.crashes - reference.crashes);
        double v = f.coverage - reference.coverage;
        double w = reference.length - f.length;
        if (u < 0.0 || v < 0.0 || w < 0.0) {
            log_warn("hypervolume: dropping point worse than the reference "
                     "(crashes=%d coverage=%g length=%g)",
                     f.crashes, f.coverage, f.length);
            continue;
        }
        pts.push_back({u, v, w});
    }
    if (pts.empty()) return 0.0;
    // Sweep slabs of decreasing w; each slab's cross-section is the staircase
    // union of every point at or above it.
    std::sort(pts.begin(), pts.end(), [](const Point3& a, const Point3& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.u != b.u) return a.u > b.u;
        return a.v > b.v;
    });
    std::vector<std::pair<double, double>> active;
    double volume = 0.0;
    size_t i = 0;
    while (i < pts.size()) {
        double w = pts[i].w;
        while (i < pts.size() && pts[i].w == w) {
            active.emplace_back(pts[i].u, pts[i].v);
            ++i;
        }
        double next_w = i < pts.size() ? pts[i].w : 0.0;
        volume += staircase_area(active) * (w - next_w);
    }
    return volume;
}

FitnessTriple nadir_reference(double max_total_length) {
    return FitnessTriple{0, 0.0, max_total_length};
}

}  // namespace divgen
