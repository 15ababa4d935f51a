#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lcu {

using VertexId = std::int32_t;
using ClassId = std::int32_t;  // 0 = unlabeled, classes are 1..C
using EdgeId = std::int64_t;   // index into the directed CSR arrays

/// Simple undirected graph in CSR form with per-vertex labels.
/// Neighbor lists are sorted; every undirected edge {i,j} appears as the two
/// directed slots (i,j) and (j,i), cross-linked through `reverse_edge`.
struct Graph {
    VertexId num_vertices = 0;
    ClassId num_classes = 0;
    std::vector<EdgeId> offsets;        // size V+1
    std::vector<VertexId> neighbors;    // size 2E, sorted within each row
    std::vector<EdgeId> reverse_edge;   // size 2E, slot of (j,i) for slot (i,j)
    std::vector<ClassId> labels;        // size V, 0 = unlabeled

    VertexId degree(VertexId i) const {
        return static_cast<VertexId>(offsets[i + 1] - offsets[i]);
    }
    std::int64_t num_edges() const {
        return static_cast<std::int64_t>(neighbors.size()) / 2;
    }
    std::int64_t num_directed_edges() const {
        return static_cast<std::int64_t>(neighbors.size());
    }

    /// Directed slot of edge (i,j), or -1 when i and j are not adjacent.
    EdgeId edge_index(VertexId i, VertexId j) const {
        auto first = neighbors.begin() + offsets[i];
        auto last = neighbors.begin() + offsets[i + 1];
        auto it = std::lower_bound(first, last, j);
        if (it == last || *it != j) return -1;
        return static_cast<EdgeId>(it - neighbors.begin());
    }

    VertexId edge_source(EdgeId e) const {
        auto it = std::upper_bound(offsets.begin(), offsets.end(), e);
        return static_cast<VertexId>(it - offsets.begin() - 1);
    }

    bool is_labeled(VertexId i) const { return labels[i] != 0; }

    /// One entry per undirected edge: (i, j, slot_ij, slot_ji) with i < j.
    struct UndirectedEdge {
        VertexId i, j;
        EdgeId forward, backward;
    };
    std::vector<UndirectedEdge> undirected_edges() const {
        std::vector<UndirectedEdge> out;
        out.reserve(static_cast<std::size_t>(num_edges()));
        for (VertexId i = 0; i < num_vertices; ++i) {
            for (EdgeId e = offsets[i]; e < offsets[i + 1]; ++e) {
                VertexId j = neighbors[e];
                if (i < j) out.push_back({i, j, e, reverse_edge[e]});
            }
        }
        return out;
    }
};

/// Dense feature matrix with optional labels (0 = unlabeled).
struct Dataset {
    std::size_t num_points = 0;
    std::size_t dim = 0;
    std::vector<double> points;    // row-major num_points x dim
    std::vector<ClassId> labels;   // size num_points

    const double* row(std::size_t i) const { return points.data() + i * dim; }
};

/// Build a Graph from an undirected edge set. Self-loops are rejected;
/// duplicate and mirrored pairs collapse to a single edge.
inline Graph make_graph(VertexId num_vertices,
                        std::vector<std::pair<VertexId, VertexId>> edges,
                        std::vector<ClassId> labels = {},
                        ClassId num_classes = 0) {
    if (num_vertices < 0) throw std::invalid_argument("make_graph: negative vertex count");
    for (auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
            throw std::invalid_argument("make_graph: edge endpoint out of range");
        if (a == b) throw std::invalid_argument("make_graph: self-loop rejected");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.num_vertices = num_vertices;
    if (labels.empty()) labels.assign(static_cast<std::size_t>(num_vertices), 0);
    if (static_cast<VertexId>(labels.size()) != num_vertices)
        throw std::invalid_argument("make_graph: label vector size mismatch");
    for (ClassId c : labels)
        if (c < 0) throw std::invalid_argument("make_graph: negative label");
    g.labels = std::move(labels);
    g.num_classes = num_classes > 0
                        ? num_classes
                        : (g.labels.empty() ? 0 : *std::max_element(g.labels.begin(), g.labels.end()));

    std::vector<EdgeId> deg(static_cast<std::size_t>(num_vertices) + 1, 0);
    for (const auto& [a, b] : edges) {
        ++deg[a + 1];
        ++deg[b + 1];
    }
    g.offsets.assign(deg.begin(), deg.end());
    std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());
    g.neighbors.resize(static_cast<std::size_t>(g.offsets.back()));
    std::vector<EdgeId> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& [a, b] : edges) {
        g.neighbors[cursor[a]++] = b;  // edges sorted, so rows come out sorted
        g.neighbors[cursor[b]++] = a;
    }
    g.reverse_edge.resize(g.neighbors.size());
    for (VertexId i = 0; i < num_vertices; ++i)
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e)
            g.reverse_edge[e] = g.edge_index(g.neighbors[e], i);
    return g;
}

/// Replace the labels of a graph, keeping its adjacency.
inline Graph with_labels(Graph g, std::vector<ClassId> labels, ClassId num_classes = 0) {
    if (labels.size() != static_cast<std::size_t>(g.num_vertices))
        throw std::invalid_argument("with_labels: label vector size mismatch");
    ClassId max_label = 0;
    for (ClassId c : labels) {
        if (c < 0) throw std::invalid_argument("with_labels: negative label");
        max_label = std::max(max_label, c);
    }
    g.labels = std::move(labels);
    g.num_classes = num_classes > 0 ? num_classes : max_label;
    return g;
}

/// Number of connected components (0 for the empty graph).
inline int count_components(const Graph& g) {
    if (g.num_vertices == 0) return 0;
    std::vector<char> seen(static_cast<std::size_t>(g.num_vertices), 0);
    int components = 0;
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < g.num_vertices; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (EdgeId e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                VertexId w = g.neighbors[e];
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return components;
}

struct ValidationResult {
    bool ok = true;
    bool disconnected = false;  // callers map this to "increase k" advice
    std::string message;
};

/// Check every Graph invariant; reports the first violation found.
inline ValidationResult validate_graph(const Graph& g) {
    auto fail = [](std::string msg) { return ValidationResult{false, false, std::move(msg)}; };

    if (g.num_vertices <= 0) return fail("graph has no vertices");
    if (g.offsets.size() != static_cast<std::size_t>(g.num_vertices) + 1 ||
        g.labels.size() != static_cast<std::size_t>(g.num_vertices))
        return fail("inconsistent array sizes");
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            VertexId j = g.neighbors[e];
            if (j == i) return fail("self-loop at vertex " + std::to_string(i));
            if (e > g.offsets[i] && g.neighbors[e - 1] >= j)
                return fail("duplicate or unsorted neighbor list at vertex " + std::to_string(i));
            if (g.edge_index(j, i) < 0)
                return fail("asymmetric adjacency: (" + std::to_string(i) + "," +
                            std::to_string(j) + ") has no mirror");
        }
    }
    if (int comps = count_components(g); comps != 1) {
        ValidationResult r;
        r.ok = false;
        r.disconnected = true;
        r.message = "graph is disconnected (" + std::to_string(comps) +
                    " components); if it was built with k-NN, increase k";
        return r;
    }
    if (g.num_classes < 1) return fail("no labeled vertices: every class 1..C needs at least one");
    std::vector<std::int64_t> count(static_cast<std::size_t>(g.num_classes) + 1, 0);
    for (ClassId c : g.labels) {
        if (c < 0 || c > g.num_classes)
            return fail("label " + std::to_string(c) + " outside 0.." +
                        std::to_string(g.num_classes));
        ++count[c];
    }
    std::string missing;
    for (ClassId c = 1; c <= g.num_classes; ++c)
        if (count[c] == 0) missing += (missing.empty() ? "" : ", ") + std::to_string(c);
    if (!missing.empty()) return fail("classes without a labeled vertex: " + missing);
    return {};
}

/// Exact unweighted diameter by BFS from every vertex. Desk scale only.
inline int diameter(const Graph& g) {
    if (count_components(g) != 1) throw std::invalid_argument("diameter: graph is disconnected");
    int diam = 0;
    std::vector<int> dist(static_cast<std::size_t>(g.num_vertices));
    std::vector<VertexId> frontier, next;
    for (VertexId s = 0; s < g.num_vertices; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        frontier.assign(1, s);
        int depth = 0;
        while (!frontier.empty()) {
            next.clear();
            ++depth;
            for (VertexId v : frontier) {
                for (EdgeId e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                    VertexId w = g.neighbors[e];
                    if (dist[w] < 0) {
                        dist[w] = depth;
                        next.push_back(w);
                    }
                }
            }
            frontier.swap(next);
        }
        diam = std::max(diam, depth - 1);
    }
    return diam;
}

}  // namespace lcu
