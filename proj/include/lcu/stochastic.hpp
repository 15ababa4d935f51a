#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lcu/graph.hpp"
#include "lcu/rng.hpp"

namespace lcu {

/// Integer-particle system state. counts/flows/cumulative mirror the
/// deterministic populations/flows/cumulative; absorbed_last and
/// generated_last record the per-vertex bookkeeping of the latest step.
struct ParticleEnsemble {
    std::int64_t t = 0;
    ClassId num_classes = 0;
    std::vector<std::vector<std::int64_t>> counts;      // [c-1][vertex]
    std::vector<std::vector<std::int64_t>> flows;       // [c-1][slot]
    std::vector<std::vector<std::int64_t>> cumulative;  // [c-1][slot]
    std::vector<std::int64_t> initial_totals;           // [c-1]
    std::vector<std::vector<std::int64_t>> absorbed_last;
    std::vector<std::vector<std::int64_t>> generated_last;

    // Fixed per run: sources per class and their degrees (the generation
    // weights; the share of source k is degree_k / sum of source degrees).
    std::vector<std::vector<VertexId>> sources;
    std::vector<std::vector<double>> source_weight;
};

/// Distribute total_per_class particles of every class over the vertices
/// proportionally to degree, by largest-remainder rounding (leftover units
/// go to the largest fractional parts, lower index first on ties).
inline ParticleEnsemble init_particles(const Graph& g, std::int64_t total_per_class) {
    if (auto v = validate_graph(g); !v.ok)
        throw std::invalid_argument("init_particles: " + v.message);
    if (total_per_class < 1)
        throw std::invalid_argument("init_particles: total_per_class must be >= 1");

    const auto V = static_cast<std::size_t>(g.num_vertices);
    const auto slots = static_cast<std::size_t>(g.num_directed_edges());
    const int C = g.num_classes;
    const double deg_sum = static_cast<double>(g.num_directed_edges());

    std::vector<std::int64_t> share(V);
    std::vector<std::pair<double, VertexId>> rem(V);
    std::int64_t assigned = 0;
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        double quota = static_cast<double>(total_per_class) * g.degree(i) / deg_sum;
        share[i] = static_cast<std::int64_t>(std::floor(quota));
        rem[i] = {quota - std::floor(quota), i};
        assigned += share[i];
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::int64_t k = 0; k < total_per_class - assigned; ++k) ++share[rem[k].second];

    ParticleEnsemble e;
    e.num_classes = C;
    e.counts.assign(C, std::vector<std::int64_t>(share.begin(), share.end()));
    e.flows.assign(C, std::vector<std::int64_t>(slots, 0));
    e.cumulative.assign(C, std::vector<std::int64_t>(slots, 0));
    e.absorbed_last.assign(C, std::vector<std::int64_t>(V, 0));
    e.generated_last.assign(C, std::vector<std::int64_t>(V, 0));
    e.initial_totals.assign(C, total_per_class);
    e.sources.resize(C);
    e.source_weight.resize(C);
    for (VertexId i = 0; i < g.num_vertices; ++i)
        if (g.labels[i] != 0) {
            e.sources[g.labels[i] - 1].push_back(i);
            e.source_weight[g.labels[i] - 1].push_back(static_cast<double>(g.degree(i)));
        }
    return e;
}

/// One stochastic step: every active particle picks a uniform neighbor, is
/// absorbed on rival-labeled targets or with probability lambda times the
/// edge subordination (from the time-t flow snapshot), survivors arrive;
/// then sources replenish the class deficit measured at time t, the draw
/// coupled over sources so the top-up never overshoots the initial total.
/// The walk is simulated per (vertex, class) with multinomial neighbor
/// splits plus binomial survival thinning, which is distribution-identical
/// to per-particle simulation at O(|E| C) cost per step.
inline void stoch_step(const Graph& g, ParticleEnsemble& e, double lambda, SplitMix64& rng) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("stoch_step: lambda outside [0,1]");
    const int C = e.num_classes;
    const double fallback = 1.0 - 1.0 / static_cast<double>(C);
    const auto slots = static_cast<std::size_t>(g.num_directed_edges());

    // Pooled both-direction flows of all classes, frozen at time t.
    std::vector<std::int64_t> pooled(slots, 0);
    for (int c = 0; c < C; ++c)
        for (std::size_t s = 0; s < slots; ++s) pooled[s] += e.flows[c][s];
    for (std::size_t s = 0; s < slots; ++s) {
        EdgeId r = g.reverse_edge[s];
        if (static_cast<std::size_t>(r) > s) {
            std::int64_t sum = pooled[s] + pooled[r];
            pooled[s] = sum;
            pooled[r] = sum;
        }
    }

    std::vector<std::vector<std::int64_t>> new_flows(
        C, std::vector<std::int64_t>(slots, 0));
    std::vector<std::vector<std::int64_t>> new_counts(
        C, std::vector<std::int64_t>(static_cast<std::size_t>(g.num_vertices), 0));

    for (int c = 0; c < C; ++c) {
        const ClassId cls = static_cast<ClassId>(c + 1);
        const auto& cnt = e.counts[c];
        const auto& flow = e.flows[c];
        auto& absorbed = e.absorbed_last[c];
        auto& generated = e.generated_last[c];
        std::fill(absorbed.begin(), absorbed.end(), 0);
        std::fill(generated.begin(), generated.end(), 0);

        std::int64_t total_t = 0;
        for (std::int64_t x : cnt) total_t += x;

        for (VertexId i = 0; i < g.num_vertices; ++i) {
            std::int64_t remaining = cnt[i];
            if (remaining == 0) continue;
            const EdgeId row_begin = g.offsets[i];
            const EdgeId row_end = g.offsets[i + 1];
            for (EdgeId s = row_begin; s < row_end && remaining > 0; ++s) {
                std::int64_t moved =
                    (s + 1 == row_end)
                        ? remaining
                        : binomial(rng, remaining, 1.0 / static_cast<double>(row_end - s));
                remaining -= moved;
                if (moved == 0) continue;
                const VertexId j = g.neighbors[s];
                const ClassId lj = g.labels[j];
                if (lj != 0 && lj != cls) {
                    absorbed[i] += moved;  // sink: absorbed with probability 1
                    continue;
                }
                const std::int64_t pool = pooled[s];
                const double xi =
                    pool > 0 ? 1.0 - static_cast<double>(flow[s] + flow[g.reverse_edge[s]]) /
                                         static_cast<double>(pool)
                             : fallback;
                const std::int64_t survivors = binomial(rng, moved, 1.0 - lambda * xi);
                absorbed[i] += moved - survivors;
                if (survivors > 0) {
                    new_flows[c][s] = survivors;
                    new_counts[c][j] += survivors;
                }
            }
        }

        // Generation from the time-t deficit; multinomial over the sources so
        // each source's marginal is Binomial(deficit, rho) and the total
        // top-up equals the deficit exactly.
        const std::int64_t deficit = e.initial_totals[c] - total_t;
        if (deficit > 0) {
            auto draws = multinomial(rng, deficit, e.source_weight[c]);
            for (std::size_t k = 0; k < draws.size(); ++k)
                if (draws[k] > 0) {
                    new_counts[c][e.sources[c][k]] += draws[k];
                    generated[e.sources[c][k]] = draws[k];
                }
        }

        auto& cum = e.cumulative[c];
        for (std::size_t s = 0; s < slots; ++s) cum[s] += new_flows[c][s];
    }

    e.counts.swap(new_counts);
    e.flows.swap(new_flows);
    ++e.t;
}

/// Simulate tau steps from degree-proportional initial particles; the whole
/// trajectory is reproducible from (graph, total, lambda, tau, seed).
inline ParticleEnsemble stoch_run(const Graph& g, std::int64_t total_per_class, double lambda,
                                  std::int64_t tau, std::uint64_t seed) {
    if (tau < 0) throw std::invalid_argument("stoch_run: negative tau");
    ParticleEnsemble e = init_particles(g, total_per_class);
    SplitMix64 rng(seed);
    for (std::int64_t it = 0; it < tau; ++it) stoch_step(g, e, lambda, rng);
    return e;
}

}  // namespace lcu
