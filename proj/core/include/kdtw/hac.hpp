#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

enum class Linkage { single, complete };

[[nodiscard]] Linkage parse_linkage(const std::string& name);
[[nodiscard]] std::string to_string(Linkage linkage);

/// One agglomeration step. Leaves are clusters 0..n-1; the cluster formed in
/// step s gets id n + s.
struct Merge {
    std::size_t step = 0;
    std::size_t cluster_a = 0;  ///< smaller id
    std::size_t cluster_b = 0;
    double distance = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
    std::vector<std::size_t> leaf_order;
};

/// Agglomerative clustering of a symmetric dissimilarity matrix with zero
/// diagonal. Ties go to the pair of active clusters with the smallest slot
/// indices, where a merged cluster occupies the smaller slot of its parts.
[[nodiscard]] Dendrogram agglomerate(const DistanceMatrix& dist, Linkage linkage);

/// Flat clustering obtained by stopping `num_clusters` merges before the end.
/// Cluster labels are numbered by first appearance in item order.
[[nodiscard]] std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t num_clusters);

/// Fraction of items whose cluster majority label matches their own.
[[nodiscard]] double purity(std::span<const std::size_t> assignment, std::span<const int> labels);

/// Rows and columns permuted into dendrogram leaf order.
[[nodiscard]] DistanceMatrix leaf_ordered(const DistanceMatrix& dist, std::span<const std::size_t> leaf_order);

/// {"merges":[[step,a,b,dist,size],...],"leaf_order":[...]} with 17-digit floats.
[[nodiscard]] std::string dendrogram_to_json(const Dendrogram& dendrogram);

}  // namespace kdtw
