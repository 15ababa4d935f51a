#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lcu/deterministic.hpp"
#include "lcu/generators.hpp"
#include "lcu/graph.hpp"
#include "oracles.hpp"

using namespace lcu;

namespace {

// The worked 3-vertex path: v0 -- v1 -- v2, labels (1, 0, 2).
Graph path3() { return make_graph(3, {{0, 1}, {1, 2}}, {1, 0, 2}); }

SystemParams sources_params(double lambda, std::int64_t tau) {
    SystemParams p;
    p.lambda = lambda;
    p.tau = tau;
    p.init = InitScheme::degree_sources_only;
    return p;
}

double total_population(const SystemState& s, int c) {
    double t = 0.0;
    for (double x : s.populations[c]) t += x;
    return t;
}

}  // namespace

TEST_CASE("init_state schemes", "[deterministic]") {
    Graph g = path3();

    SystemParams all;
    SystemState s = init_state(g, all);
    for (int c = 0; c < 2; ++c) {
        REQUIRE(s.populations[c] == std::vector<double>{1.0, 2.0, 1.0});
        REQUIRE(s.initial_totals[c] == 4.0);
        for (double f : s.flows[c]) REQUIRE(f == 0.0);
        for (double d : s.cumulative[c]) REQUIRE(d == 0.0);
    }
    REQUIRE(s.t == 0);

    SystemState src = init_state(g, sources_params(1.0, 1));
    REQUIRE(src.populations[0] == std::vector<double>{1.0, 0.0, 0.0});
    REQUIRE(src.populations[1] == std::vector<double>{0.0, 0.0, 1.0});

    SystemParams bad;
    bad.lambda = 1.5;
    REQUIRE_THROWS_AS(init_state(g, bad), std::invalid_argument);

    SystemParams custom;
    custom.init = InitScheme::custom;
    custom.custom_init = {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};  // class 2 total zero
    REQUIRE_THROWS_AS(init_state(g, custom), std::invalid_argument);
}

TEST_CASE("subordination before any flow", "[deterministic]") {
    Graph g = path3();
    SystemState s = init_state(g, SystemParams{});
    REQUIRE(subordination(g, s, 1, 0, 1) == 0.5);  // S = 0, C = 2
    REQUIRE(subordination(g, s, 1, 1, 0) == 0.5);
    REQUIRE_THROWS_AS(subordination(g, s, 1, 0, 2), std::invalid_argument);

    Graph one = make_graph(3, {{0, 1}, {1, 2}}, {1, 0, 0});
    SystemState s1 = init_state(one, SystemParams{});
    REQUIRE(subordination(one, s1, 1, 0, 1) == 0.0);  // single class collapses to 0
    SystemParams p1;
    p1.tau = 3;
    SystemState s1r = run(one, p1);
    REQUIRE(subordination(one, s1r, 1, 0, 1) == 0.0);
}

TEST_CASE("path example: one and two steps with lambda = 1", "[deterministic]") {
    Graph g = path3();
    SystemParams params = sources_params(1.0, 1);
    SystemState s = init_state(g, params);
    step(g, s, params);

    const EdgeId e01 = g.edge_index(0, 1), e10 = g.edge_index(1, 0);
    const EdgeId e12 = g.edge_index(1, 2), e21 = g.edge_index(2, 1);

    REQUIRE(s.populations[0][0] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.populations[0][1] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(s.populations[0][2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.flows[0][e01] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(s.flows[0][e10] == 0.0);
    REQUIRE(s.flows[0][e12] == 0.0);
    REQUIRE(s.cumulative[0][e01] == Catch::Approx(0.5).margin(1e-12));
    // Class 2 mirrors it on the other edge.
    REQUIRE(s.flows[1][e21] == Catch::Approx(0.5).margin(1e-12));

    // Subordination after the first step.
    REQUIRE(subordination(g, s, 1, 0, 1) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(subordination(g, s, 1, 1, 2) == Catch::Approx(1.0).margin(1e-12));

    step(g, s, params);
    REQUIRE(s.populations[0][0] == Catch::Approx(0.75).margin(1e-12));
    REQUIRE(s.populations[0][1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.populations[0][2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(s.flows[0][e10] == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(s.flows[0][e01] == 0.0);
    REQUIRE(s.cumulative[0][e01] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(s.cumulative[0][e10] == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("transition matrix entries and row sums", "[deterministic]") {
    Graph g = path3();
    SystemState s = init_state(g, sources_params(1.0, 1));

    auto p1 = transition_matrix(g, s, 1, 1.0);
    REQUIRE(p1[g.edge_index(0, 1)] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(p1[g.edge_index(1, 2)] == 0.0);  // rival sink
    // Edges into a vertex labeled c keep a positive entry for class c.
    auto p2 = transition_matrix(g, s, 2, 1.0);
    REQUIRE(p2[g.edge_index(1, 2)] > 0.0);

    // Lambda 0: plain random walk rows; no rival neighbors means row sum 1.
    Graph one = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {1, 0, 0, 0});
    SystemState s0 = init_state(one, SystemParams{});
    auto p0 = transition_matrix(one, s0, 1, 0.0);
    for (VertexId i = 0; i < one.num_vertices; ++i) {
        double row = 0.0;
        for (EdgeId e = one.offsets[i]; e < one.offsets[i + 1]; ++e) row += p0[e];
        REQUIRE(row == 1.0);
    }

    // Entries and row sums stay inside [0,1] in general.
    std::vector<ClassId> y(40);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 20 ? 1 : 2;
    Graph rnd = gen_class_network(y, 3, 0.3, 21);
    SystemParams rp;
    rp.tau = 5;
    SystemState srnd = run(rnd, rp);
    for (ClassId c = 1; c <= 2; ++c) {
        auto p = transition_matrix(rnd, srnd, c, 0.8);
        for (VertexId i = 0; i < rnd.num_vertices; ++i) {
            double row = 0.0;
            for (EdgeId e = rnd.offsets[i]; e < rnd.offsets[i + 1]; ++e) {
                REQUIRE(p[e] >= 0.0);
                REQUIRE(p[e] <= 1.0);
                row += p[e];
            }
            REQUIRE(row <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("generation vector shares the deficit by source degree", "[deterministic]") {
    Graph g = path3();
    SystemParams params = sources_params(1.0, 1);
    SystemState s = init_state(g, params);

    auto zero = generation_vector(g, s, 1);  // no deficit yet
    REQUIRE(zero == std::vector<double>{0.0, 0.0, 0.0});

    step(g, s, params);  // class-1 population is now 0.5, deficit 0.5
    auto gen = generation_vector(g, s, 1);
    REQUIRE(gen[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(gen[1] == 0.0);
    REQUIRE(gen[2] == 0.0);

    // Two sources with degrees 2 and 3 split a unit deficit 0.4 / 0.6.
    Graph two = make_graph(5, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {1, 4}}, {1, 1, 0, 0, 0});
    SystemParams sp;
    sp.init = InitScheme::degree_sources_only;
    SystemState st = init_state(two, sp);
    st.populations[0] = {2.0, 2.0, 0.0, 0.0, 0.0};  // total 4 of 5
    auto share = generation_vector(two, st, 1);
    REQUIRE(share[0] == Catch::Approx(0.4).margin(1e-12));
    REQUIRE(share[1] == Catch::Approx(0.6).margin(1e-12));
}

TEST_CASE("run with tau 0 returns the initial state, and is bit deterministic", "[deterministic]") {
    Graph g = path3();
    SystemParams params = sources_params(1.0, 0);
    SystemState s = run(g, params);
    REQUIRE(s.t == 0);
    REQUIRE(s.populations[0] == std::vector<double>{1.0, 0.0, 0.0});

    params.tau = 17;
    SystemState a = run(g, params);
    SystemState b = run(g, params);
    REQUIRE(a.populations == b.populations);
    REQUIRE(a.flows == b.flows);
    REQUIRE(a.cumulative == b.cumulative);
}

TEST_CASE("lambda 0 single class preserves the population total", "[deterministic]") {
    Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}}, {1, 0, 0, 0, 0});
    SystemParams params;
    params.lambda = 0.0;
    params.tau = 40;
    double total0 = 0.0;
    for (VertexId i = 0; i < g.num_vertices; ++i) total0 += g.degree(i);
    SystemState s = run(g, params, [&](const SystemState& st) {
        REQUIRE(total_population(st, 0) == Catch::Approx(total0).margin(1e-9));
    });
    REQUIRE(s.t == 40);
}

TEST_CASE("population never exceeds the initial total", "[deterministic]") {
    std::vector<ClassId> y(50);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 25 ? 1 : 2;
    Graph g = gen_class_network(y, 3, 0.2, 77);
    for (double lambda : {0.0, 0.5, 1.0}) {
        SystemParams params;
        params.lambda = lambda;
        params.tau = 30;
        run(g, params, [&](const SystemState& st) {
            for (int c = 0; c < 2; ++c)
                REQUIRE(total_population(st, c) <=
                        st.initial_totals[c] * (1.0 + 1e-12));
        });
    }
}

TEST_CASE("rival-labeled vertices hold no population and receive no flow", "[deterministic]") {
    std::vector<ClassId> y(30);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 15 ? 1 : 2;
    Graph g = gen_class_network(y, 3, 0.3, 13);
    SystemParams params;
    params.lambda = 0.7;
    params.tau = 10;
    run(g, params, [&](const SystemState& st) {
        for (int c = 0; c < 2; ++c)
            for (VertexId j = 0; j < g.num_vertices; ++j) {
                if (g.labels[j] == 0 || g.labels[j] == c + 1) continue;
                REQUIRE(st.populations[c][j] == 0.0);
                for (EdgeId e = g.offsets[j]; e < g.offsets[j + 1]; ++e)
                    REQUIRE(st.flows[c][g.reverse_edge[e]] == 0.0);
            }
    });
}

TEST_CASE("cumulative domination is the running sum of flows", "[deterministic]") {
    std::vector<ClassId> y(40);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 20 ? 1 : 2;
    Graph g = gen_class_network(y, 3, 0.25, 55);
    SystemParams params;
    params.lambda = 1.0;
    params.tau = 20;
    std::vector<std::vector<double>> running(
        2, std::vector<double>(static_cast<std::size_t>(g.num_directed_edges()), 0.0));
    run(g, params, [&](const SystemState& st) {
        for (int c = 0; c < 2; ++c)
            for (std::size_t e = 0; e < running[c].size(); ++e) {
                running[c][e] += st.flows[c][e];
                REQUIRE(st.cumulative[c][e] ==
                        Catch::Approx(running[c][e]).margin(1e-12).epsilon(1e-12));
            }
    });
}

TEST_CASE("scaling the initial population scales the whole trajectory", "[deterministic]") {
    std::vector<ClassId> y(40);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 20 ? 1 : 2;
    Graph g = gen_class_network(y, 3, 0.2, 31);
    SystemParams base;
    base.lambda = 0.7;
    base.tau = 12;
    SystemState ref = run(g, base);

    for (double kappa : {0.5, 2.0, 10.0}) {
        SystemParams scaled = base;
        scaled.init = InitScheme::custom;
        scaled.custom_init.assign(2, std::vector<double>(40, 0.0));
        for (int c = 0; c < 2; ++c)
            for (VertexId i = 0; i < g.num_vertices; ++i)
                scaled.custom_init[c][i] = kappa * g.degree(i);
        SystemState s = run(g, scaled);
        for (int c = 0; c < 2; ++c) {
            for (std::size_t i = 0; i < s.populations[c].size(); ++i) {
                if (kappa == 0.5 || kappa == 2.0)  // power-of-two scaling is exact
                    REQUIRE(s.populations[c][i] == kappa * ref.populations[c][i]);
                else
                    REQUIRE(s.populations[c][i] ==
                            Catch::Approx(kappa * ref.populations[c][i]).epsilon(1e-9));
            }
            for (std::size_t e = 0; e < s.cumulative[c].size(); ++e) {
                if (kappa == 0.5 || kappa == 2.0)
                    REQUIRE(s.cumulative[c][e] == kappa * ref.cumulative[c][e]);
                else
                    REQUIRE(s.cumulative[c][e] ==
                            Catch::Approx(kappa * ref.cumulative[c][e]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("class relabeling permutes the state", "[deterministic]") {
    std::vector<ClassId> y(45);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<ClassId>(i % 3 + 1);
    Graph g = gen_class_network(y, 3, 0.3, 91);
    SystemParams params;
    params.lambda = 0.8;
    params.tau = 8;
    SystemState a = run(g, params);

    // Swap classes 1 and 3 in the labels; the state must swap with them.
    std::vector<ClassId> swapped = y;
    for (auto& c : swapped) c = c == 1 ? 3 : (c == 3 ? 1 : c);
    SystemState b = run(with_labels(g, swapped), params);
    REQUIRE(a.populations[0] == b.populations[2]);
    REQUIRE(a.populations[2] == b.populations[0]);
    REQUIRE(a.populations[1] == b.populations[1]);
    REQUIRE(a.cumulative[0] == b.cumulative[2]);
}

TEST_CASE("sequential order exists and differs from synchronous", "[deterministic]") {
    std::vector<ClassId> y(30);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 15 ? 1 : 2;
    Graph g = gen_class_network(y, 3, 0.3, 3);
    SystemParams sync;
    sync.lambda = 1.0;
    sync.tau = 5;
    SystemParams seq = sync;
    seq.order = UpdateOrder::sequential;
    SystemState a = run(g, sync);
    SystemState b = run(g, seq);
    REQUIRE(a.cumulative != b.cumulative);  // class 2 sees class 1's fresh flows
}

TEST_CASE("sequential order matches its dense oracle", "[deterministic][oracle]") {
    std::vector<ClassId> y(12);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 6 ? 1 : 2;
    Graph g = gen_class_network(y, 2, 0.4, 47);
    SystemParams params;
    params.lambda = 0.85;
    params.tau = 0;
    params.order = UpdateOrder::sequential;
    SystemState s = init_state(g, params);
    oracle::DenseState d = oracle::dense_init(g, false);
    for (int t = 0; t < 4; ++t) {
        step(g, s, params);
        oracle::dense_step_sequential(g, d, params.lambda);
        for (int c = 0; c < 2; ++c)
            for (VertexId i = 0; i < g.num_vertices; ++i) {
                REQUIRE(s.populations[c][i] ==
                        Catch::Approx(d.n[c][i]).margin(1e-12).epsilon(1e-12));
                for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e)
                    REQUIRE(s.flows[c][e] == Catch::Approx(d.N[c][i][g.neighbors[e]])
                                                 .margin(1e-12)
                                                 .epsilon(1e-12));
            }
    }
}

TEST_CASE("one step matches the dense oracle on small random graphs", "[deterministic][oracle]") {
    SplitMix64 seeds(12345);
    int tested = 0;
    while (tested < 60) {
        std::uint64_t seed = seeds.next();
        SplitMix64 rng(seed);
        const auto n = static_cast<VertexId>(3 + rng.below(4));  // 3..6 vertices
        const int C = tested % 3 == 2 && n >= 3 ? 3 : 2;
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (VertexId i = 0; i < n; ++i)
            for (VertexId j = i + 1; j < n; ++j)
                if (rng.uniform() < 0.55) edges.emplace_back(i, j);
        std::vector<ClassId> labels(static_cast<std::size_t>(n), 0);
        for (ClassId c = 1; c <= C; ++c) labels[c - 1] = c;
        for (VertexId i = C; i < n; ++i)
            labels[i] = static_cast<ClassId>(rng.below(static_cast<std::uint64_t>(C) + 1));
        Graph g = make_graph(n, edges, labels);
        if (!validate_graph(g).ok) continue;
        ++tested;

        const double lambda = rng.uniform();
        for (bool sources_only : {false, true}) {
            SystemParams params;
            params.lambda = lambda;
            params.tau = 3;
            params.init = sources_only ? InitScheme::degree_sources_only
                                       : InitScheme::degree_all_classes;
            SystemState s = init_state(g, params);
            oracle::DenseState d = oracle::dense_init(g, sources_only);
            for (int t = 0; t < 3; ++t) {
                step(g, s, params);
                oracle::dense_step(g, d, lambda);
                for (int c = 0; c < g.num_classes; ++c) {
                    for (VertexId i = 0; i < n; ++i)
                        REQUIRE(s.populations[c][i] ==
                                Catch::Approx(d.n[c][i]).margin(1e-12).epsilon(1e-12));
                    for (VertexId i = 0; i < n; ++i)
                        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
                            REQUIRE(s.flows[c][e] ==
                                    Catch::Approx(d.N[c][i][g.neighbors[e]])
                                        .margin(1e-12)
                                        .epsilon(1e-12));
                            REQUIRE(s.cumulative[c][e] ==
                                    Catch::Approx(d.D[c][i][g.neighbors[e]])
                                        .margin(1e-12)
                                        .epsilon(1e-12));
                        }
                }
            }
        }
    }
}
