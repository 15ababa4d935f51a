#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcu/graph.hpp"
#include "lcu/parallel.hpp"
#include "lcu/unfolding.hpp"

namespace lcu {

enum class InitScheme { degree_all_classes, degree_sources_only, custom };

// Per-iteration class order. Synchronous computes every class against the
// frozen time-t flows, which makes results independent of class numbering;
// sequential lets class c see the already-updated flows of classes < c.
enum class UpdateOrder { synchronous, sequential };

struct SystemParams {
    double lambda = 1.0;
    std::int64_t tau = 1000;
    InitScheme init = InitScheme::degree_all_classes;
    std::vector<std::vector<double>> custom_init;  // [class-1][vertex], init == custom
    UpdateOrder order = UpdateOrder::synchronous;
    int stable_stop = 0;  // stop once the unfolding is unchanged this many steps; 0 = off
};

/// Deterministic system state: per class, the vertex population n^c, the
/// directed per-edge flow of the last step N^c, and the cumulative flow D^c.
/// Flow vectors are indexed by the graph's directed CSR slots.
struct SystemState {
    std::int64_t t = 0;
    ClassId num_classes = 0;
    std::vector<std::vector<double>> populations;  // [c-1][vertex]
    std::vector<std::vector<double>> flows;        // [c-1][slot]
    std::vector<std::vector<double>> cumulative;   // [c-1][slot]
    std::vector<double> initial_totals;            // [c-1]

    // Fixed per run: class sources and their degree-proportional generation
    // shares rho. Derived from the graph at init time.
    std::vector<std::vector<VertexId>> sources;
    std::vector<std::vector<double>> source_rho;

    // Double buffers and per-step scratch, reused across steps.
    std::vector<std::vector<double>> next_populations;
    std::vector<std::vector<double>> next_flows;
    std::vector<double> pooled_scratch;
};

inline SystemState init_state(const Graph& g, const SystemParams& params) {
    if (auto v = validate_graph(g); !v.ok)
        throw std::invalid_argument("init_state: " + v.message);
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw std::invalid_argument("init_state: lambda outside [0,1]");
    if (params.tau < 0) throw std::invalid_argument("init_state: negative tau");

    const auto V = static_cast<std::size_t>(g.num_vertices);
    const auto slots = static_cast<std::size_t>(g.num_directed_edges());
    const int C = g.num_classes;

    SystemState s;
    s.num_classes = C;
    s.populations.assign(C, std::vector<double>(V, 0.0));
    s.flows.assign(C, std::vector<double>(slots, 0.0));
    s.cumulative.assign(C, std::vector<double>(slots, 0.0));
    s.next_populations = s.populations;
    s.next_flows = s.flows;
    s.initial_totals.assign(C, 0.0);
    s.sources.resize(C);
    s.source_rho.resize(C);

    for (VertexId i = 0; i < g.num_vertices; ++i)
        if (g.labels[i] != 0) s.sources[g.labels[i] - 1].push_back(i);
    for (int c = 0; c < C; ++c) {
        double deg_sum = 0.0;
        for (VertexId i : s.sources[c]) deg_sum += g.degree(i);
        s.source_rho[c].reserve(s.sources[c].size());
        for (VertexId i : s.sources[c]) s.source_rho[c].push_back(g.degree(i) / deg_sum);
    }

    switch (params.init) {
        case InitScheme::degree_all_classes:
            for (int c = 0; c < C; ++c)
                for (VertexId i = 0; i < g.num_vertices; ++i)
                    s.populations[c][i] = static_cast<double>(g.degree(i));
            break;
        case InitScheme::degree_sources_only:
            for (int c = 0; c < C; ++c)
                for (VertexId i : s.sources[c])
                    s.populations[c][i] = static_cast<double>(g.degree(i));
            break;
        case InitScheme::custom:
            if (params.custom_init.size() != static_cast<std::size_t>(C))
                throw std::invalid_argument("init_state: custom init needs one vector per class");
            for (int c = 0; c < C; ++c) {
                if (params.custom_init[c].size() != V)
                    throw std::invalid_argument("init_state: custom init vector size mismatch");
                for (double x : params.custom_init[c])
                    if (!(x >= 0.0))
                        throw std::invalid_argument("init_state: custom init must be nonnegative");
                s.populations[c] = params.custom_init[c];
            }
            break;
    }
    for (int c = 0; c < C; ++c) {
        double total = 0.0;
        for (double x : s.populations[c]) total += x;
        if (total <= 0.0)
            throw std::invalid_argument("init_state: class " + std::to_string(c + 1) +
                                        " starts with zero population");
        s.initial_totals[c] = total;
    }
    return s;
}

/// Current relative subordination of class c on edge {i,j}: the surviving
/// flow fraction on the edge, both directions pooled, that belongs to rivals.
/// With no flow at all it falls back to 1 - 1/C; the zero test is exact.
inline double subordination(const Graph& g, const SystemState& s, ClassId c, VertexId i,
                            VertexId j) {
    if (c < 1 || c > s.num_classes) throw std::invalid_argument("subordination: class out of range");
    EdgeId e = g.edge_index(i, j);
    if (e < 0) throw std::invalid_argument("subordination: {i,j} is not an edge");
    EdgeId r = g.reverse_edge[e];
    double total = 0.0;
    for (int q = 0; q < s.num_classes; ++q) total += s.flows[q][e] + s.flows[q][r];
    if (total > 0.0) return 1.0 - (s.flows[c - 1][e] + s.flows[c - 1][r]) / total;
    return 1.0 - 1.0 / static_cast<double>(s.num_classes);
}

/// Walk-and-survive transition matrix P^c over the directed edge slots.
/// Entry (i,j) is 0 into rival-labeled vertices, otherwise
/// (1/deg i) * (1 - lambda * subordination).
inline std::vector<double> transition_matrix(const Graph& g, const SystemState& s, ClassId c,
                                             double lambda) {
    if (c < 1 || c > s.num_classes)
        throw std::invalid_argument("transition_matrix: class out of range");
    const double fallback = 1.0 - 1.0 / static_cast<double>(s.num_classes);
    std::vector<double> p(static_cast<std::size_t>(g.num_directed_edges()), 0.0);
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        const double inv_deg = 1.0 / static_cast<double>(g.degree(i));
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            VertexId j = g.neighbors[e];
            if (g.labels[j] != 0 && g.labels[j] != c) continue;
            EdgeId r = g.reverse_edge[e];
            double total = 0.0;
            for (int q = 0; q < s.num_classes; ++q) total += s.flows[q][e] + s.flows[q][r];
            double sigma = total > 0.0
                               ? 1.0 - (s.flows[c - 1][e] + s.flows[c - 1][r]) / total
                               : fallback;
            p[e] = inv_deg * (1.0 - lambda * sigma);
        }
    }
    return p;
}

/// Generation vector g^c: sources share the population deficit of class c
/// (relative to its initial total) proportionally to their degree.
inline std::vector<double> generation_vector(const Graph& g, const SystemState& s, ClassId c) {
    if (c < 1 || c > s.num_classes)
        throw std::invalid_argument("generation_vector: class out of range");
    std::vector<double> out(static_cast<std::size_t>(g.num_vertices), 0.0);
    double total = 0.0;
    for (double x : s.populations[c - 1]) total += x;
    double deficit = s.initial_totals[c - 1] - total;
    if (deficit <= 0.0) return out;
    const auto& src = s.sources[c - 1];
    const auto& rho = s.source_rho[c - 1];
    for (std::size_t k = 0; k < src.size(); ++k) out[src[k]] = rho[k] * deficit;
    return out;
}

namespace detail {

// Advance one class against the per-edge pooled flow snapshot s_edge.
// Writes next_flows/next_populations; does not touch the current buffers.
inline void advance_class(const Graph& g, SystemState& s, int c, double lambda,
                          const std::vector<double>& edge_flow_total) {
    const double fallback = 1.0 - 1.0 / static_cast<double>(s.num_classes);
    const auto& pop = s.populations[c];
    const auto& flow = s.flows[c];
    auto& npop = s.next_populations[c];
    auto& nflow = s.next_flows[c];
    std::fill(npop.begin(), npop.end(), 0.0);
    std::fill(nflow.begin(), nflow.end(), 0.0);

    double total_t = 0.0;
    for (double x : pop) total_t += x;

    const ClassId cls = static_cast<ClassId>(c + 1);
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        const double ni = pop[i];
        if (ni == 0.0) continue;
        const double inv_deg = 1.0 / static_cast<double>(g.degree(i));
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            const VertexId j = g.neighbors[e];
            const ClassId lj = g.labels[j];
            if (lj != 0 && lj != cls) continue;  // rival sink
            const double pooled = edge_flow_total[e];
            const double sigma =
                pooled > 0.0 ? 1.0 - (flow[e] + flow[g.reverse_edge[e]]) / pooled : fallback;
            const double f = ni * inv_deg * (1.0 - lambda * sigma);
            nflow[e] = f;
            npop[j] += f;
        }
    }

    const double deficit = s.initial_totals[c] - total_t;
    if (deficit > 0.0) {
        const auto& src = s.sources[c];
        const auto& rho = s.source_rho[c];
        for (std::size_t k = 0; k < src.size(); ++k) npop[src[k]] += rho[k] * deficit;
    }

    auto& cum = s.cumulative[c];
    for (std::size_t e = 0; e < nflow.size(); ++e) cum[e] += nflow[e];
}

// Pool flows of all classes over both directions of every slot.
inline void pool_edge_flows(const Graph& g, const SystemState& s, std::vector<double>& out) {
    const std::size_t slots = s.flows.empty() ? 0 : s.flows[0].size();
    out.assign(slots, 0.0);
    for (int c = 0; c < s.num_classes; ++c) {
        const auto& f = s.flows[c];
        for (std::size_t e = 0; e < slots; ++e) out[e] += f[e];
    }
    for (std::size_t e = 0; e < slots; ++e) {
        EdgeId r = g.reverse_edge[e];
        if (static_cast<std::size_t>(r) > e) {
            double sum = out[e] + out[r];
            out[e] = sum;
            out[r] = sum;
        }
    }
}

}  // namespace detail

/// One evolution step. Synchronous order updates every class against the
/// frozen time-t flows (optionally in parallel, capped by LCU_THREADS);
/// sequential order follows the class loop literally, each class seeing the
/// flows left by its predecessors.
inline void step(const Graph& g, SystemState& s, const SystemParams& params) {
    std::vector<double>& pooled = s.pooled_scratch;
    if (params.order == UpdateOrder::synchronous) {
        detail::pool_edge_flows(g, s, pooled);
        const std::vector<double>& snapshot = pooled;
        for_each_index(s.num_classes, thread_limit(),
                       [&](int c) { detail::advance_class(g, s, c, params.lambda, snapshot); });
        for (int c = 0; c < s.num_classes; ++c) {
            s.populations[c].swap(s.next_populations[c]);
            s.flows[c].swap(s.next_flows[c]);
        }
    } else {
        for (int c = 0; c < s.num_classes; ++c) {
            detail::pool_edge_flows(g, s, pooled);
            detail::advance_class(g, s, c, params.lambda, pooled);
            s.populations[c].swap(s.next_populations[c]);
            s.flows[c].swap(s.next_flows[c]);
        }
    }
    ++s.t;
}

/// Run tau steps from the initial state. Bit-identical outputs for identical
/// inputs, regardless of the thread cap. The observer, when set, is called
/// after every step.
inline SystemState run(const Graph& g, const SystemParams& params,
                       const std::function<void(const SystemState&)>& observer = {}) {
    SystemState s = init_state(g, params);
    std::vector<ClassId> last_assignment;
    int stable_streak = 0;
    for (std::int64_t it = 0; it < params.tau; ++it) {
        step(g, s, params);
        if (observer) observer(s);
        if (params.stable_stop > 0) {
            std::vector<ClassId> assignment = edge_assignment(g, s.cumulative);
            if (!last_assignment.empty() && assignment == last_assignment) {
                if (++stable_streak >= params.stable_stop) break;
            } else {
                stable_streak = 0;
            }
            last_assignment = std::move(assignment);
        }
    }
    return s;
}

}  // namespace lcu
