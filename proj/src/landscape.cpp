#include "divgen/landscape.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "divgen/errors.hpp"

namespace divgen {

std::vector<std::vector<int64_t>> distance_matrix(const std::vector<TestSuite>& suites) {
    size_t n = suites.size();
    std::vector<std::vector<int64_t>> dist(n, std::vector<int64_t>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            int64_t d = distance(suites[i], suites[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    return dist;
}

Diameters diameters(const std::vector<std::vector<int64_t>>& dist) {
    size_t n = dist.size();
    if (n < 2) throw std::invalid_argument("diameters: need at least two members");
    int64_t maxd = 0;
    int64_t mind = std::numeric_limits<int64_t>::max();
    int64_t sum = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            maxd = std::max(maxd, dist[i][j]);
            mind = std::min(mind, dist[i][j]);
            sum += dist[i][j];
        }
    }
    // The mean is over ordered pairs; the unordered sum is half of that,
    // so scale by 2 / (n * (n - 1)).
    double avg = 2.0 * static_cast<double>(sum) / (static_cast<double>(n) * (n - 1));
    return {maxd, avg, mind};
}

Diameters diameters(const std::vector<TestSuite>& population) {
    return diameters(distance_matrix(population));
}

double reldiam(double avgdiam, int64_t d_max) {
    if (d_max <= 0) throw ConfigError("reldiam: d_max must be positive");
    return avgdiam / static_cast<double>(d_max);
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> components_below(const std::vector<std::vector<int64_t>>& dist,
                                               int64_t k) {
    size_t n = dist.size();
    UnionFind uf(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (dist[i][j] < k) uf.unite(static_cast<int>(i), static_cast<int>(j));
    std::vector<std::vector<int>> by_root(n);
    for (size_t i = 0; i < n; ++i) by_root[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> components;
    for (std::vector<int>& c : by_root)
        if (!c.empty()) components.push_back(std::move(c));
    std::sort(components.begin(), components.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
              });
    return components;
}

// Largest edge on a minimum spanning tree of the complete distance graph
// (Prim). That weight is the connectivity bottleneck of the front.
int64_t mst_bottleneck(const std::vector<std::vector<int64_t>>& dist) {
    size_t n = dist.size();
    std::vector<int64_t> best(n, std::numeric_limits<int64_t>::max());
    std::vector<uint8_t> in_tree(n, 0);
    best[0] = 0;
    int64_t bottleneck = 0;
    for (size_t added = 0; added < n; ++added) {
        size_t u = n;
        for (size_t i = 0; i < n; ++i)
            if (!in_tree[i] && (u == n || best[i] < best[u])) u = i;
        in_tree[u] = 1;
        bottleneck = std::max(bottleneck, best[u]);
        for (size_t v = 0; v < n; ++v)
            if (!in_tree[v]) best[v] = std::min(best[v], dist[u][v]);
    }
    return bottleneck;
}

}  // namespace

std::vector<std::vector<int>> build_clusters(const std::vector<std::vector<int64_t>>& dist,
                                             int64_t k) {
    if (dist.empty()) return {};
    return components_below(dist, k);
}

std::vector<std::vector<int>> build_clusters(const std::vector<TestSuite>& front, int64_t k) {
    return build_clusters(distance_matrix(front), k);
}

Connectedness connectedness_metrics(const std::vector<TestSuite>& front,
                                    const std::vector<FitnessTriple>& front_fitnesses,
                                    int64_t k, const FitnessTriple& hv_reference) {
    if (front.empty())
        throw std::invalid_argument("connectedness_metrics: empty front");
    if (front.size() != front_fitnesses.size())
        throw std::invalid_argument("connectedness_metrics: fitness count mismatch");
    Connectedness out;
    std::vector<std::vector<int64_t>> dist = distance_matrix(front);
    std::vector<std::vector<int>> components = components_below(dist, k);
    size_t clustered = 0;
    for (const std::vector<int>& c : components) {
        if (c.size() >= 2) {
            ++out.nconnec;
            clustered += c.size();
        }
    }
    out.nconnec_with_singletons = static_cast<int>(components.size());
    out.pconnec = static_cast<double>(clustered) / static_cast<double>(front.size());
    out.lconnec = static_cast<int>(components.front().size());
    out.kconnec = front.size() == 1 ? 1 : mst_bottleneck(dist) + 1;
    double hv_front = hypervolume(front_fitnesses, hv_reference);
    if (hv_front == 0.0) {
        out.hvconnec = 1.0;
    } else {
        std::vector<FitnessTriple> largest;
        largest.reserve(components.front().size());
        for (int i : components.front()) largest.push_back(front_fitnesses[i]);
        out.hvconnec = hypervolume(largest, hv_reference) / hv_front;
    }
    return out;
}

}  // namespace divgen
