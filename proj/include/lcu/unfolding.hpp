#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lcu/graph.hpp"

namespace lcu {

/// Partition of the edges by dominating class. edge_class[k] is the class of
/// edges[k], 0 meaning unassigned (tied or never visited).
struct Unfolding {
    ClassId num_classes = 0;
    std::vector<Graph::UndirectedEdge> edges;
    std::vector<ClassId> edge_class;
    std::vector<std::int64_t> slot_to_edge;  // directed slot -> index into edges

    /// Edges of class c as (i,j) pairs with i < j; c = 0 gives the unassigned set.
    std::vector<std::pair<VertexId, VertexId>> edge_set(ClassId c) const {
        std::vector<std::pair<VertexId, VertexId>> out;
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (edge_class[k] == c) out.emplace_back(edges[k].i, edges[k].j);
        return out;
    }

    /// Edge counts indexed by class, slot 0 being the unassigned count.
    std::vector<std::int64_t> class_sizes() const {
        std::vector<std::int64_t> out(static_cast<std::size_t>(num_classes) + 1, 0);
        for (ClassId c : edge_class) ++out[c];
        return out;
    }
};

/// Dominating class per undirected edge (in Graph::undirected_edges order):
/// the class whose pooled cumulative domination strictly exceeds every
/// rival's. Differences within 1e-12 relative count as ties, and ties or
/// all-zero values give 0.
template <class T>
inline std::vector<ClassId> edge_assignment(const Graph& g,
                                            const std::vector<std::vector<T>>& cumulative) {
    const int C = static_cast<int>(cumulative.size());
    if (C == 0) throw std::invalid_argument("edge_assignment: no classes");
    std::vector<ClassId> out;
    out.reserve(static_cast<std::size_t>(g.num_edges()));
    std::vector<double> value(static_cast<std::size_t>(C));
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            if (g.neighbors[e] < i) continue;
            EdgeId r = g.reverse_edge[e];
            double best = 0.0;
            for (int c = 0; c < C; ++c) {
                value[c] = static_cast<double>(cumulative[c][e]) +
                           static_cast<double>(cumulative[c][r]);
                best = std::max(best, value[c]);
            }
            ClassId assigned = 0;
            if (best > 0.0) {
                const double tol = 1e-12 * best;
                int within = 0;
                for (int c = 0; c < C; ++c) {
                    if (value[c] >= best - tol) {
                        ++within;
                        if (within == 1) assigned = static_cast<ClassId>(c + 1);
                    }
                }
                if (within > 1) assigned = 0;
            }
            out.push_back(assigned);
        }
    }
    return out;
}

/// Group the edges by dominating class (argmax of pooled cumulative
/// domination; ties and untouched edges stay unassigned).
template <class T>
inline Unfolding unfold(const Graph& g, const std::vector<std::vector<T>>& cumulative) {
    Unfolding u;
    u.num_classes = static_cast<ClassId>(cumulative.size());
    u.edges = g.undirected_edges();
    u.edge_class = edge_assignment(g, cumulative);
    u.slot_to_edge.assign(static_cast<std::size_t>(g.num_directed_edges()), -1);
    for (std::size_t k = 0; k < u.edges.size(); ++k) {
        u.slot_to_edge[u.edges[k].forward] = static_cast<std::int64_t>(k);
        u.slot_to_edge[u.edges[k].backward] = static_cast<std::int64_t>(k);
    }
    return u;
}

template <class State>
    requires requires(const State& s) { s.cumulative; }
inline Unfolding unfold(const Graph& g, const State& s) {
    return unfold(g, s.cumulative);
}

namespace detail {

// Expands the closed ball around `center` one BFS level at a time, counting
// unfolding edges with at least one endpoint inside. Shared scratch keeps
// classify linear-ish; callers reset stamps via the epoch counter.
struct BallCounter {
    std::vector<int> vertex_epoch, edge_epoch;
    std::vector<VertexId> frontier, next;
    int epoch = 0;

    void reset(const Graph& g) {
        vertex_epoch.assign(static_cast<std::size_t>(g.num_vertices), -1);
        edge_epoch.assign(static_cast<std::size_t>(g.num_edges()), -1);
        epoch = 0;
    }

    // Count per-class edges of ball(center, depth), expanding depth until a
    // nonzero score appears or the ball stops growing. Returns depth used.
    int scores(const Graph& g, const Unfolding& u, VertexId center,
               std::vector<std::int64_t>& out, int max_depth) {
        ++epoch;
        out.assign(static_cast<std::size_t>(u.num_classes), 0);
        std::int64_t ball_size = 1;
        vertex_epoch[center] = epoch;
        frontier.assign(1, center);
        auto absorb = [&](VertexId v) {
            for (EdgeId e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                auto k = static_cast<std::size_t>(u.slot_to_edge[e]);
                if (edge_epoch[k] == epoch) continue;
                edge_epoch[k] = epoch;
                if (ClassId c = u.edge_class[k]; c > 0) ++out[c - 1];
            }
        };
        absorb(center);
        int depth = 0;
        for (;;) {
            ++depth;
            next.clear();
            for (VertexId v : frontier)
                for (EdgeId e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                    VertexId w = g.neighbors[e];
                    if (vertex_epoch[w] == epoch) continue;
                    vertex_epoch[w] = epoch;
                    next.push_back(w);
                    absorb(w);
                    ++ball_size;
                }
            frontier.swap(next);
            bool nonzero = false;
            for (auto sc : out) nonzero |= sc > 0;
            if (nonzero || frontier.empty() || ball_size >= g.num_vertices || depth >= max_depth)
                return depth;
        }
    }
};

}  // namespace detail

/// Per-vertex classification result. predicted is the vertex label for
/// labeled vertices; for unlabeled ones it is the argmax class of `scores`
/// at bfs_depth_used (lowest class index on ties), or 0 when no unfolding
/// edge is reachable at all.
struct Prediction {
    std::vector<ClassId> predicted;
    std::vector<std::vector<std::int64_t>> scores;  // [vertex][class-1]
    std::vector<int> bfs_depth_used;
};

/// Classify every vertex from an unfolding. Labeled vertices keep their
/// label; unlabeled ones count the unfolding edges around the depth-1 ball,
/// growing the ball only while all counts are zero.
inline Prediction classify(const Graph& g, const Unfolding& u) {
    Prediction p;
    const auto V = static_cast<std::size_t>(g.num_vertices);
    p.predicted.assign(V, 0);
    p.scores.assign(V, {});
    p.bfs_depth_used.assign(V, 0);

    detail::BallCounter ball;
    ball.reset(g);
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        if (g.labels[i] != 0) {
            ball.scores(g, u, i, p.scores[i], 1);
            p.predicted[i] = g.labels[i];
            p.bfs_depth_used[i] = 1;
            continue;
        }
        int depth = ball.scores(g, u, i, p.scores[i], g.num_vertices);
        p.bfs_depth_used[i] = depth;
        ClassId best = 0;
        std::int64_t best_score = 0;
        for (ClassId c = 1; c <= u.num_classes; ++c)
            if (p.scores[i][c - 1] > best_score) {
                best_score = p.scores[i][c - 1];
                best = c;
            }
        p.predicted[i] = best;  // stays 0 when every score is zero
    }
    return p;
}

/// Raw depth-1 score vector of a single vertex; two or more nonzero entries
/// mark it as overlapping between unfoldings.
inline std::vector<std::int64_t> overlap_profile(const Graph& g, const Unfolding& u, VertexId i) {
    if (i < 0 || i >= g.num_vertices) throw std::invalid_argument("overlap_profile: bad vertex");
    detail::BallCounter ball;
    ball.reset(g);
    std::vector<std::int64_t> out;
    ball.scores(g, u, i, out, 1);
    return out;
}

/// Depth-1 profiles for every vertex at once.
inline std::vector<std::vector<std::int64_t>> overlap_profiles(const Graph& g,
                                                               const Unfolding& u) {
    detail::BallCounter ball;
    ball.reset(g);
    std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(g.num_vertices));
    for (VertexId i = 0; i < g.num_vertices; ++i) ball.scores(g, u, i, out[i], 1);
    return out;
}

}  // namespace lcu
