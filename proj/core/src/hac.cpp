#include "kdtw/hac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kdtw/io.hpp"

namespace kdtw {

Linkage parse_linkage(const std::string& name) {
    if (name == "single") return Linkage::single;
    if (name == "complete") return Linkage::complete;
    throw std::invalid_argument("unknown linkage '" + name + "'");
}

std::string to_string(Linkage linkage) { return linkage == Linkage::single ? "single" : "complete"; }

Dendrogram agglomerate(const DistanceMatrix& dist, Linkage linkage) {
    const std::size_t n = dist.rows();
    if (n == 0 || dist.cols() != n) throw std::invalid_argument("agglomerate: expected a nonempty square matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist(i, i) != 0.0) throw std::invalid_argument("agglomerate: nonzero diagonal");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist(i, j) != dist(j, i)) throw std::invalid_argument("agglomerate: matrix is not symmetric");
        }
    }

    std::vector<double> work(dist.entries().begin(), dist.entries().end());
    std::vector<bool> active(n, true);
    std::vector<std::size_t> cluster_id(n);
    std::vector<std::size_t> cluster_size(n, 1);
    std::iota(cluster_id.begin(), cluster_id.end(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> children;

    Dendrogram tree;
    tree.leaves = n;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (active[b] && work[a * n + b] < best) {
                    best = work[a * n + b];
                    best_a = a;
                    best_b = b;
                }
            }
        }
        // Lance-Williams: min for single, max for complete linkage.
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == best_a || c == best_b) continue;
            const double da = work[best_a * n + c];
            const double db = work[best_b * n + c];
            const double merged = linkage == Linkage::single ? std::min(da, db) : std::max(da, db);
            work[best_a * n + c] = merged;
            work[c * n + best_a] = merged;
        }
        active[best_b] = false;
        const std::size_t id_a = std::min(cluster_id[best_a], cluster_id[best_b]);
        const std::size_t id_b = std::max(cluster_id[best_a], cluster_id[best_b]);
        cluster_size[best_a] += cluster_size[best_b];
        tree.merges.push_back({step, id_a, id_b, best, cluster_size[best_a]});
        children.emplace_back(id_a, id_b);
        cluster_id[best_a] = n + step;
    }

    // Depth-first walk from the root, smaller child id first.
    if (n == 1) {
        tree.leaf_order = {0};
    } else {
        std::vector<std::size_t> stack{2 * n - 2};
        while (!stack.empty()) {
            const std::size_t id = stack.back();
            stack.pop_back();
            if (id < n) {
                tree.leaf_order.push_back(id);
            } else {
                const auto& [left, right] = children[id - n];
                stack.push_back(right);
                stack.push_back(left);
            }
        }
    }
    return tree;
}

std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t num_clusters) {
    const std::size_t n = dendrogram.leaves;
    if (num_clusters == 0 || num_clusters > n) throw std::invalid_argument("cut: num_clusters must lie in [1, n]");
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    const std::size_t applied = n - num_clusters;
    for (std::size_t s = 0; s < applied; ++s) {
        parent[dendrogram.merges[s].cluster_a] = n + s;
        parent[dendrogram.merges[s].cluster_b] = n + s;
    }
    const auto root = [&parent](std::size_t x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    std::map<std::size_t, std::size_t> relabel;
    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [it, inserted] = relabel.try_emplace(root(i), relabel.size());
        assignment[i] = it->second;
    }
    return assignment;
}

double purity(std::span<const std::size_t> assignment, std::span<const int> labels) {
    if (assignment.size() != labels.size() || assignment.empty()) {
        throw std::invalid_argument("purity: assignment and labels must be nonempty and of equal length");
    }
    std::map<std::size_t, std::map<int, std::size_t>> counts;
    for (std::size_t i = 0; i < assignment.size(); ++i) ++counts[assignment[i]][labels[i]];
    std::size_t majority_total = 0;
    for (const auto& [cluster, per_label] : counts) {
        std::size_t best = 0;
        for (const auto& [label, count] : per_label) best = std::max(best, count);
        majority_total += best;
    }
    return static_cast<double>(majority_total) / static_cast<double>(assignment.size());
}

DistanceMatrix leaf_ordered(const DistanceMatrix& dist, std::span<const std::size_t> leaf_order) {
    const std::size_t n = leaf_order.size();
    std::vector<double> out(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) out[a * n + b] = dist(leaf_order[a], leaf_order[b]);
    }
    return DistanceMatrix(n, n, std::move(out));
}

std::string dendrogram_to_json(const Dendrogram& dendrogram) {
    std::ostringstream out;
    out << "{\"merges\":[";
    for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
        const auto& m = dendrogram.merges[s];
        out << (s ? "," : "") << '[' << m.step << ',' << m.cluster_a << ',' << m.cluster_b << ','
            << format_double(m.distance) << ',' << m.size << ']';
    }
    out << "],\"leaf_order\":[";
    for (std::size_t i = 0; i < dendrogram.leaf_order.size(); ++i) {
        out << (i ? "," : "") << dendrogram.leaf_order[i];
    }
    out << "]}\n";
    return out.str();
}

}  // namespace kdtw
