#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcu/deterministic.hpp"
#include "lcu/generators.hpp"
#include "lcu/graph.hpp"
#include "lcu/knn.hpp"
#include "lcu/stochastic.hpp"
#include "lcu/unfolding.hpp"

namespace lcu {

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("pearson: size mismatch or empty input");
    const double n = static_cast<double>(a.size());
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw std::invalid_argument("pearson: undefined correlation (zero variance)");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Spearman rank correlation with average ranks on ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < idx.size()) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    return pearson(ranks(x), ranks(y));
}

/// Pooled per-undirected-edge values D[i][j] + D[j][i], all classes
/// concatenated, in a fixed (class, edge) order.
template <class T>
inline std::vector<double> pooled_edge_values(const Graph& g,
                                              const std::vector<std::vector<T>>& cumulative) {
    std::vector<double> out;
    out.reserve(cumulative.size() * static_cast<std::size_t>(g.num_edges()));
    for (const auto& cum : cumulative) {
        for (VertexId i = 0; i < g.num_vertices; ++i)
            for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e)
                if (i < g.neighbors[e])
                    out.push_back(static_cast<double>(cum[e]) +
                                  static_cast<double>(cum[g.reverse_edge[e]]));
    }
    return out;
}

/// Pearson correlation between two cumulative domination matrices over the
/// same graph: exactly 1 when one is a positive multiple of the other.
template <class A, class B>
inline double domination_correlation(const Graph& g, const std::vector<std::vector<A>>& d_first,
                                     const std::vector<std::vector<B>>& d_second) {
    if (d_first.size() != d_second.size())
        throw std::invalid_argument("domination_correlation: class count mismatch");
    return pearson(pooled_edge_values(g, d_first), pooled_edge_values(g, d_second));
}

/// Largest deviation of any edge's subordination sum from C - 1.
inline double max_sigma_sum_deviation(const Graph& g, const SystemState& s) {
    const int C = s.num_classes;
    const double expected = static_cast<double>(C - 1);
    double worst = 0.0;
    for (VertexId i = 0; i < g.num_vertices; ++i) {
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            if (g.neighbors[e] < i) continue;
            EdgeId r = g.reverse_edge[e];
            double total = 0.0;
            for (int c = 0; c < C; ++c) total += s.flows[c][e] + s.flows[c][r];
            double sum = 0.0;
            if (total > 0.0)
                for (int c = 0; c < C; ++c) sum += 1.0 - (s.flows[c][e] + s.flows[c][r]) / total;
            else
                sum = static_cast<double>(C) * (1.0 - 1.0 / static_cast<double>(C));
            worst = std::max(worst, std::abs(sum - expected));
        }
    }
    return worst;
}

namespace detail {

inline nlohmann::json wallclock_entry(std::chrono::steady_clock::time_point start) {
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {{"total_seconds", seconds}};
}

// Half-half two-class label vector.
inline std::vector<ClassId> two_class_labels(VertexId n) {
    std::vector<ClassId> y(static_cast<std::size_t>(n));
    for (VertexId i = 0; i < n; ++i) y[i] = i < n / 2 ? 1 : 2;
    return y;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stochastic vs deterministic proportionality (the correlation-vs-particles
// experiment). For each network, lambda and particle scale, the stochastic
// cumulative domination is averaged over several seeds and correlated with
// the deterministic one.
// ---------------------------------------------------------------------------

struct EquivalenceConfig {
    int num_networks = 10;
    std::vector<double> lambdas = {0.0, 0.5, 1.0};
    std::vector<int> scales = {1, 4, 16, 64};  // particles = scale * sum of degrees
    int seeds_per_point = 10;
    std::int64_t tau = 200;
    VertexId vertices = 200;
    int m = 3;
    double p = 0.05;
    std::uint64_t master_seed = 1;
};

inline nlohmann::json equivalence_experiment(const EquivalenceConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 seeder(cfg.master_seed);
    std::vector<std::uint64_t> net_seeds(static_cast<std::size_t>(cfg.num_networks));
    for (auto& s : net_seeds) s = seeder.next();

    nlohmann::json report;
    report["experiment"] = "equivalence";
    report["schema_version"] = 1;
    report["config"] = {{"num_networks", cfg.num_networks}, {"lambdas", cfg.lambdas},
                        {"scales", cfg.scales},             {"seeds_per_point", cfg.seeds_per_point},
                        {"tau", cfg.tau},                   {"vertices", cfg.vertices},
                        {"m", cfg.m},                       {"p", cfg.p},
                        {"master_seed", cfg.master_seed}};
    report["network_seeds"] = net_seeds;

    std::vector<Graph> nets;
    nets.reserve(net_seeds.size());
    auto y = detail::two_class_labels(cfg.vertices);
    for (auto s : net_seeds) nets.push_back(gen_class_network(y, cfg.m, cfg.p, s));

    nlohmann::json conditions = nlohmann::json::array();
    for (double lambda : cfg.lambdas) {
        std::vector<SystemState> det;
        det.reserve(nets.size());
        SystemParams params;
        params.lambda = lambda;
        params.tau = cfg.tau;
        for (const auto& g : nets) det.push_back(run(g, params));

        for (int scale : cfg.scales) {
            std::vector<double> corrs;
            nlohmann::json run_seeds = nlohmann::json::array();
            for (std::size_t n = 0; n < nets.size(); ++n) {
                const Graph& g = nets[n];
                const auto total = static_cast<std::int64_t>(scale) * g.num_directed_edges();
                std::vector<std::vector<double>> avg(
                    g.num_classes,
                    std::vector<double>(static_cast<std::size_t>(g.num_directed_edges()), 0.0));
                std::vector<std::uint64_t> seeds;
                for (int r = 0; r < cfg.seeds_per_point; ++r) {
                    std::uint64_t s = seeder.next();
                    seeds.push_back(s);
                    ParticleEnsemble ens = stoch_run(g, total, lambda, cfg.tau, s);
                    for (int c = 0; c < g.num_classes; ++c)
                        for (std::size_t k = 0; k < avg[c].size(); ++k)
                            avg[c][k] += static_cast<double>(ens.cumulative[c][k]);
                }
                for (auto& v : avg)
                    for (auto& x : v) x /= cfg.seeds_per_point;
                corrs.push_back(domination_correlation(g, det[n].cumulative, avg));
                run_seeds.push_back(seeds);
            }
            double mean = std::accumulate(corrs.begin(), corrs.end(), 0.0) /
                          static_cast<double>(corrs.size());
            double var = 0.0;
            for (double c : corrs) var += (c - mean) * (c - mean);
            double sd = corrs.size() > 1 ? std::sqrt(var / static_cast<double>(corrs.size() - 1)) : 0.0;
            conditions.push_back({{"lambda", lambda},
                                  {"scale", scale},
                                  {"correlations", corrs},
                                  {"mean_correlation", mean},
                                  {"sd_correlation", sd},
                                  {"samples", corrs.size()},
                                  {"run_seeds", run_seeds}});
        }
    }
    report["conditions"] = conditions;
    report["wallclock"] = detail::wallclock_entry(t0);
    return report;
}

// ---------------------------------------------------------------------------
// Per-iteration runtime scaling: one sweep over |E| at fixed |V| and one
// over |V| at fixed |E|, each point timed per step over runs x iterations.
// ---------------------------------------------------------------------------

struct TimingConfig {
    VertexId fixed_vertices = 2000;
    std::vector<std::int64_t> edge_counts = {20000, 40000, 80000, 160000, 320000};
    std::int64_t fixed_edges = 40000;
    std::vector<VertexId> vertex_counts = {2500, 5000, 10000, 20000, 40000};
    int iterations = 30;
    int runs = 10;
    double lambda = 1.0;
    double labeled_fraction = 0.05;
    std::uint64_t master_seed = 2;
    bool compare_lambda_zero = true;  // extra point timing lambda = 0
};

namespace detail {

inline Graph timing_graph(VertexId vertices, std::int64_t edges, double labeled_fraction,
                          std::uint64_t seed) {
    Graph g = gen_random_connected(vertices, edges, seed);
    SplitMix64 rng(seed ^ 0x5DEECE66DULL);
    std::vector<ClassId> full(static_cast<std::size_t>(vertices));
    for (auto& c : full) c = static_cast<ClassId>(1 + rng.below(2));
    auto masked = mask_labels(full, labeled_fraction, rng.next());
    g.labels = std::move(masked);
    g.num_classes = 2;
    return g;
}

// Forces serial stepping for the duration of a timing measurement, so a
// caller-exported LCU_THREADS cannot skew the samples.
struct SerialGuard {
    std::string saved;
    bool had = false;
    SerialGuard() {
        if (const char* v = std::getenv("LCU_THREADS")) {
            saved = v;
            had = true;
        }
        ::setenv("LCU_THREADS", "0", 1);
    }
    ~SerialGuard() {
        if (had)
            ::setenv("LCU_THREADS", saved.c_str(), 1);
        else
            ::unsetenv("LCU_THREADS");
    }
};

struct StepTiming {
    double mean = 0.0;
    double sd = 0.0;
    double median = 0.0;  // robust to scheduler stalls
};

// Per-step seconds over runs x iterations (first step of every run is
// warm-up and not counted). Measured serially.
inline StepTiming time_steps(const Graph& g, double lambda, int iterations, int runs) {
    SerialGuard serial;
    SystemParams params;
    params.lambda = lambda;
    params.tau = 0;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(iterations) * runs);
    for (int r = 0; r < runs; ++r) {
        SystemState s = init_state(g, params);
        step(g, s, params);  // warm-up
        for (int it = 0; it < iterations; ++it) {
            auto a = std::chrono::steady_clock::now();
            step(g, s, params);
            auto b = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double>(b - a).count());
        }
    }
    StepTiming t;
    t.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
             static_cast<double>(samples.size());
    double var = 0.0;
    for (double x : samples) var += (x - t.mean) * (x - t.mean);
    t.sd = std::sqrt(var / static_cast<double>(samples.size() - 1));
    std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
    t.median = samples[samples.size() / 2];
    return t;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (double v : x) lx.push_back(std::log(v));
    for (double v : y) ly.push_back(std::log(v));
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    return sxy / sxx;
}

}  // namespace detail

inline nlohmann::json timing_scan(const TimingConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 seeder(cfg.master_seed);
    nlohmann::json report;
    report["experiment"] = "timing";
    report["schema_version"] = 1;
    report["config"] = {{"fixed_vertices", cfg.fixed_vertices},
                        {"edge_counts", cfg.edge_counts},
                        {"fixed_edges", cfg.fixed_edges},
                        {"vertex_counts", cfg.vertex_counts},
                        {"iterations", cfg.iterations},
                        {"runs", cfg.runs},
                        {"lambda", cfg.lambda},
                        {"labeled_fraction", cfg.labeled_fraction},
                        {"master_seed", cfg.master_seed}};

    auto sweep = [&](const std::vector<double>& sizes, auto make_graph_fn) {
        nlohmann::json points = nlohmann::json::array();
        std::vector<double> means;
        for (double size : sizes) {
            Graph g = make_graph_fn(size, seeder.next());
            auto t = detail::time_steps(g, cfg.lambda, cfg.iterations, cfg.runs);
            means.push_back(t.mean);
            points.push_back({{"size", size},
                              {"mean_seconds", t.mean},
                              {"sd_seconds", t.sd},
                              {"median_seconds", t.median},
                              {"samples", cfg.iterations * cfg.runs}});
        }
        return std::make_pair(points, detail::loglog_slope(sizes, means));
    };

    std::vector<double> esizes(cfg.edge_counts.begin(), cfg.edge_counts.end());
    auto [epoints, eslope] = sweep(esizes, [&](double e, std::uint64_t s) {
        return detail::timing_graph(cfg.fixed_vertices, static_cast<std::int64_t>(e),
                                    cfg.labeled_fraction, s);
    });
    report["edge_sweep"] = {{"fixed_vertices", cfg.fixed_vertices},
                            {"points", epoints},
                            {"loglog_slope", eslope}};

    std::vector<double> vsizes(cfg.vertex_counts.begin(), cfg.vertex_counts.end());
    auto [vpoints, vslope] = sweep(vsizes, [&](double v, std::uint64_t s) {
        return detail::timing_graph(static_cast<VertexId>(v), cfg.fixed_edges,
                                    cfg.labeled_fraction, s);
    });
    report["vertex_sweep"] = {{"fixed_edges", cfg.fixed_edges},
                              {"points", vpoints},
                              {"loglog_slope", vslope}};

    if (cfg.compare_lambda_zero) {
        Graph g = detail::timing_graph(cfg.fixed_vertices, cfg.fixed_edges, cfg.labeled_fraction,
                                       seeder.next());
        auto t1 = detail::time_steps(g, cfg.lambda, cfg.iterations, cfg.runs);
        auto t0 = detail::time_steps(g, 0.0, cfg.iterations, cfg.runs);
        report["lambda_comparison"] = {{"lambda", cfg.lambda},
                                       {"mean_seconds", t1.mean},
                                       {"sd_seconds", t1.sd},
                                       {"lambda_zero_mean_seconds", t0.mean},
                                       {"lambda_zero_sd_seconds", t0.sd},
                                       {"ratio", t1.mean / t0.mean},
                                       {"median_ratio", t1.median / t0.median},
                                       {"samples", cfg.iterations * cfg.runs}};
    }
    report["wallclock"] = detail::wallclock_entry(t0);
    return report;
}

// ---------------------------------------------------------------------------
// Scale-invariance sweep: trajectories started from kappa-scaled populations
// must be the kappa-multiple of the base trajectory at every step, with
// identical unfoldings; subordination sums are checked on every iteration.
// ---------------------------------------------------------------------------

struct ScaleConfig {
    int num_graphs = 50;  // alternating k-NN built and G(y,m,p) networks
    std::vector<double> kappas = {0.5, 2.0, 10.0};
    std::vector<double> lambdas = {0.0, 0.5, 1.0};
    std::int64_t tau = 50;
    VertexId min_vertices = 100;
    VertexId max_vertices = 200;
    int m = 3;
    double p = 0.05;
    double labeled_fraction = 0.05;
    std::uint64_t master_seed = 3;
};

inline nlohmann::json scale_experiment(const ScaleConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 seeder(cfg.master_seed);

    double max_rel_dev = 0.0;
    double max_sigma_dev = 0.0;
    bool unfoldings_identical = true;
    int knn_graphs = 0, assortative_graphs = 0;
    std::vector<double> condition_dev(cfg.lambdas.size() * cfg.kappas.size(), 0.0);
    nlohmann::json graph_log = nlohmann::json::array();

    auto rel_dev = [](double a, double b) {
        double scale = std::max(std::abs(a), std::abs(b));
        if (scale < 1e-290) return 0.0;
        return std::abs(a - b) / scale;
    };

    for (int gi = 0; gi < cfg.num_graphs; ++gi) {
        const VertexId n = cfg.min_vertices +
                           static_cast<VertexId>(seeder.next() %
                                                 static_cast<std::uint64_t>(
                                                     cfg.max_vertices - cfg.min_vertices + 1));
        Graph g;
        std::string kind;
        std::uint64_t gseed = seeder.next();
        if (gi % 2 == 0) {
            kind = "knn";
            for (;;) {  // rare disconnected draws are replaced
                Dataset d = gen_two_gaussians(static_cast<std::size_t>(n), 4.0, 1.0, gseed);
                d.labels = mask_labels(d.labels, cfg.labeled_fraction, gseed ^ 0xABCDULL);
                int k = 0;
                Graph cand;
                for (k = 1; k <= 20; ++k) {
                    cand = build_knn_graph(d, k);
                    cand.num_classes = 2;
                    if (validate_graph(cand).ok) break;
                }
                if (k <= 20) {
                    g = std::move(cand);
                    break;
                }
                gseed = seeder.next();
            }
            ++knn_graphs;
        } else {
            kind = "assortative";
            auto y = detail::two_class_labels(n);
            g = gen_class_network(y, cfg.m, cfg.p, gseed);
            g = with_labels(std::move(g), mask_labels(y, cfg.labeled_fraction, gseed ^ 0xABCDULL), 2);
            ++assortative_graphs;
        }
        graph_log.push_back({{"kind", kind}, {"vertices", g.num_vertices},
                             {"edges", g.num_edges()}, {"seed", gseed}});

        for (std::size_t li = 0; li < cfg.lambdas.size(); ++li) {
            const double lambda = cfg.lambdas[li];
            SystemParams params;
            params.lambda = lambda;
            params.tau = cfg.tau;

            // Base trajectory, recorded per step.
            std::vector<SystemState> trail;
            trail.reserve(static_cast<std::size_t>(cfg.tau));
            SystemState base = run(g, params, [&](const SystemState& s) {
                max_sigma_dev = std::max(max_sigma_dev, max_sigma_sum_deviation(g, s));
                trail.push_back(s);
            });
            Unfolding base_unfold = unfold(g, base);

            for (std::size_t ki = 0; ki < cfg.kappas.size(); ++ki) {
                const double kappa = cfg.kappas[ki];
                double& cond = condition_dev[li * cfg.kappas.size() + ki];
                SystemParams scaled = params;
                scaled.init = InitScheme::custom;
                scaled.custom_init.assign(
                    g.num_classes,
                    std::vector<double>(static_cast<std::size_t>(g.num_vertices), 0.0));
                for (int c = 0; c < g.num_classes; ++c)
                    for (VertexId i = 0; i < g.num_vertices; ++i)
                        scaled.custom_init[c][i] = kappa * static_cast<double>(g.degree(i));

                std::size_t at = 0;
                SystemState final_state = run(g, scaled, [&](const SystemState& s) {
                    max_sigma_dev = std::max(max_sigma_dev, max_sigma_sum_deviation(g, s));
                    const SystemState& ref = trail[at++];
                    for (int c = 0; c < g.num_classes; ++c) {
                        for (std::size_t i = 0; i < s.populations[c].size(); ++i)
                            cond = std::max(
                                cond, rel_dev(s.populations[c][i], kappa * ref.populations[c][i]));
                        for (std::size_t e = 0; e < s.flows[c].size(); ++e) {
                            cond = std::max(cond,
                                            rel_dev(s.flows[c][e], kappa * ref.flows[c][e]));
                            cond = std::max(
                                cond, rel_dev(s.cumulative[c][e], kappa * ref.cumulative[c][e]));
                        }
                    }
                });
                if (unfold(g, final_state).edge_class != base_unfold.edge_class)
                    unfoldings_identical = false;
            }
        }
    }

    nlohmann::json report;
    report["experiment"] = "scale_invariance";
    report["schema_version"] = 1;
    report["config"] = {{"num_graphs", cfg.num_graphs}, {"kappas", cfg.kappas},
                        {"lambdas", cfg.lambdas},       {"tau", cfg.tau},
                        {"min_vertices", cfg.min_vertices},
                        {"max_vertices", cfg.max_vertices},
                        {"m", cfg.m},
                        {"p", cfg.p},
                        {"labeled_fraction", cfg.labeled_fraction},
                        {"master_seed", cfg.master_seed}};
    for (double d : condition_dev) max_rel_dev = std::max(max_rel_dev, d);
    nlohmann::json per_condition = nlohmann::json::array();
    for (std::size_t li = 0; li < cfg.lambdas.size(); ++li)
        for (std::size_t ki = 0; ki < cfg.kappas.size(); ++ki)
            per_condition.push_back(
                {{"lambda", cfg.lambdas[li]},
                 {"kappa", cfg.kappas[ki]},
                 {"max_relative_deviation", condition_dev[li * cfg.kappas.size() + ki]},
                 {"samples", cfg.num_graphs}});
    report["graphs"] = graph_log;
    report["results"] = {{"max_relative_deviation", max_rel_dev},
                         {"unfoldings_identical", unfoldings_identical},
                         {"max_sigma_sum_deviation", max_sigma_dev},
                         {"knn_graphs", knn_graphs},
                         {"assortative_graphs", assortative_graphs},
                         {"per_condition", per_condition},
                         {"samples", cfg.num_graphs * static_cast<int>(cfg.lambdas.size()) *
                                         static_cast<int>(cfg.kappas.size())}};
    report["wallclock"] = detail::wallclock_entry(t0);
    return report;
}

// ---------------------------------------------------------------------------
// Desk-scale classification benchmark on assortative two-class networks.
// ---------------------------------------------------------------------------

struct ClassifyBenchConfig {
    int num_networks = 10;
    VertexId vertices = 200;
    int m = 3;
    double p = 0.05;
    double labeled_fraction = 0.05;
    double lambda = 1.0;
    std::int64_t tau = 500;
    std::uint64_t master_seed = 4;
};

inline nlohmann::json classification_experiment(const ClassifyBenchConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SplitMix64 seeder(cfg.master_seed);
    auto y = detail::two_class_labels(cfg.vertices);

    std::vector<double> errors;
    nlohmann::json per_network = nlohmann::json::array();
    for (int n = 0; n < cfg.num_networks; ++n) {
        std::uint64_t gseed = seeder.next();
        Graph g = gen_class_network(y, cfg.m, cfg.p, gseed);
        g = with_labels(std::move(g), mask_labels(y, cfg.labeled_fraction, seeder.next()), 2);

        SystemParams params;
        params.lambda = cfg.lambda;
        params.tau = cfg.tau;
        SystemState s = run(g, params);
        Prediction pred = classify(g, unfold(g, s));

        std::int64_t wrong = 0, total = 0;
        for (VertexId i = 0; i < g.num_vertices; ++i) {
            if (g.labels[i] != 0) continue;
            ++total;
            if (pred.predicted[i] != y[i]) ++wrong;
        }
        double err = static_cast<double>(wrong) / static_cast<double>(total);
        errors.push_back(err);
        per_network.push_back({{"seed", gseed}, {"error", err}, {"test_vertices", total}});
    }
    double mean = std::accumulate(errors.begin(), errors.end(), 0.0) /
                  static_cast<double>(errors.size());

    nlohmann::json report;
    report["experiment"] = "classification";
    report["schema_version"] = 1;
    report["config"] = {{"num_networks", cfg.num_networks}, {"vertices", cfg.vertices},
                        {"m", cfg.m},                       {"p", cfg.p},
                        {"labeled_fraction", cfg.labeled_fraction},
                        {"lambda", cfg.lambda},
                        {"tau", cfg.tau},
                        {"master_seed", cfg.master_seed}};
    report["per_network"] = per_network;
    report["results"] = {{"mean_error", mean}, {"samples", errors.size()}};
    report["wallclock"] = detail::wallclock_entry(t0);
    return report;
}

}  // namespace lcu
