#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "lcu/graph.hpp"

namespace lcu {

/// Build the symmetrized (union) k-NN graph of a point set under Euclidean
/// distance: {i,j} is an edge iff j is among the k nearest of i or vice
/// versa. Distances are compared squared; exact ties break toward the lower
/// index. Brute force O(n^2 D); fine at the scales this library targets.
/// The result is not necessarily connected - run validate_graph after.
inline Graph build_knn_graph(const Dataset& data, int k) {
    const std::size_t n = data.num_points;
    if (k < 1) throw std::invalid_argument("build_knn_graph: k must be >= 1");
    if (n < static_cast<std::size_t>(k) + 1)
        throw std::invalid_argument("build_knn_graph: need at least k+1 points");

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(n * static_cast<std::size_t>(k));
    std::vector<std::pair<double, VertexId>> cand(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double* pi = data.row(i);
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double* pj = data.row(j);
            double d2 = 0.0;
            for (std::size_t d = 0; d < data.dim; ++d) {
                double diff = pi[d] - pj[d];
                d2 += diff * diff;
            }
            cand[m++] = {d2, static_cast<VertexId>(j)};
        }
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int t = 0; t < k; ++t)
            edges.emplace_back(static_cast<VertexId>(i), cand[t].second);
    }
    return make_graph(static_cast<VertexId>(n), std::move(edges), data.labels);
}

}  // namespace lcu
