#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "lcu/generators.hpp"
#include "lcu/graph.hpp"
#include "lcu/knn.hpp"
#include "lcu/rng.hpp"

using namespace lcu;

namespace {

Graph path3(std::vector<ClassId> labels = {1, 0, 2}) {
    return make_graph(3, {{0, 1}, {1, 2}}, std::move(labels));
}

}  // namespace

TEST_CASE("make_graph builds a symmetric CSR and collapses duplicates", "[graph]") {
    Graph g = make_graph(4, {{1, 0}, {0, 1}, {2, 3}, {3, 2}, {1, 2}});
    REQUIRE(g.num_edges() == 3);
    REQUIRE(g.degree(1) == 2);
    REQUIRE(g.edge_index(0, 1) >= 0);
    REQUIRE(g.edge_index(1, 0) >= 0);
    REQUIRE(g.edge_index(0, 3) == -1);
    for (VertexId i = 0; i < g.num_vertices; ++i)
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            REQUIRE(g.neighbors[g.reverse_edge[e]] == i);
            REQUIRE(g.reverse_edge[g.reverse_edge[e]] == e);
        }
    REQUIRE_THROWS_AS(make_graph(2, {{0, 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_graph(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("validate_graph accepts the labeled path", "[graph]") {
    REQUIRE(validate_graph(path3()).ok);
}

TEST_CASE("validate_graph reports disconnection first", "[graph]") {
    Graph g = make_graph(4, {{0, 1}, {2, 3}}, {1, 0, 2, 0});
    auto v = validate_graph(g);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.disconnected);
    REQUIRE(v.message.find("disconnected") != std::string::npos);
}

TEST_CASE("validate_graph requires a labeled vertex per class", "[graph]") {
    auto none = validate_graph(path3({0, 0, 0}));
    REQUIRE_FALSE(none.ok);
    REQUIRE(none.message.find("labeled") != std::string::npos);

    auto gap = validate_graph(path3({1, 0, 3}));  // class 2 missing
    REQUIRE_FALSE(gap.ok);
    REQUIRE(gap.message.find("2") != std::string::npos);
}

TEST_CASE("diameter of standard graphs", "[graph]") {
    REQUIRE(diameter(path3()) == 2);

    std::vector<std::pair<VertexId, VertexId>> k5;
    for (VertexId i = 0; i < 5; ++i)
        for (VertexId j = i + 1; j < 5; ++j) k5.emplace_back(i, j);
    REQUIRE(diameter(make_graph(5, k5)) == 1);

    Graph cycle6 = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    REQUIRE(diameter(cycle6) == 3);

    REQUIRE_THROWS(diameter(make_graph(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("knn graph of collinear points with k=1", "[knn]") {
    Dataset d;
    d.num_points = 3;
    d.dim = 1;
    d.points = {0.0, 1.0, 2.0};
    d.labels = {0, 0, 0};
    Graph g = build_knn_graph(d, 1);
    REQUIRE(g.num_edges() == 2);
    REQUIRE(g.edge_index(0, 1) >= 0);
    REQUIRE(g.edge_index(1, 2) >= 0);
}

TEST_CASE("knn with k = n-1 is the complete graph", "[knn]") {
    SplitMix64 rng(3);
    Dataset d;
    d.num_points = 8;
    d.dim = 2;
    for (int i = 0; i < 16; ++i) d.points.push_back(rng.uniform());
    d.labels.assign(8, 0);
    Graph g = build_knn_graph(d, 7);
    REQUIRE(g.num_edges() == 8 * 7 / 2);
}

TEST_CASE("knn of well separated clusters disconnects and says so", "[knn]") {
    Dataset d;
    d.num_points = 10;
    d.dim = 2;
    SplitMix64 rng(17);
    for (int i = 0; i < 10; ++i) {
        double cx = i < 5 ? 0.0 : 100.0;
        d.points.push_back(cx + 0.1 * rng.uniform());
        d.points.push_back(0.1 * rng.uniform());
    }
    d.labels.assign(10, 0);
    Graph g = build_knn_graph(d, 2);
    auto v = validate_graph(g);
    REQUIRE_FALSE(v.ok);
    REQUIRE(v.disconnected);
    REQUIRE(v.message.find("increase k") != std::string::npos);
}

TEST_CASE("knn rejects bad k", "[knn]") {
    Dataset d;
    d.num_points = 3;
    d.dim = 1;
    d.points = {0.0, 1.0, 2.0};
    d.labels = {0, 0, 0};
    REQUIRE_THROWS_AS(build_knn_graph(d, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_knn_graph(d, 3), std::invalid_argument);
}

TEST_CASE("knn adjacency is exactly symmetric on random data", "[knn]") {
    SplitMix64 rng(8);
    Dataset d;
    d.num_points = 60;
    d.dim = 3;
    for (int i = 0; i < 180; ++i) d.points.push_back(rng.normal());
    d.labels.assign(60, 0);
    Graph g = build_knn_graph(d, 4);
    for (VertexId i = 0; i < g.num_vertices; ++i)
        for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e)
            REQUIRE(g.edge_index(g.neighbors[e], i) >= 0);
}

TEST_CASE("gen_class_network is reproducible and respects p", "[generators]") {
    std::vector<ClassId> y(60);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = i < 30 ? 1 : 2;

    Graph a = gen_class_network(y, 3, 0.05, 99);
    Graph b = gen_class_network(y, 3, 0.05, 99);
    REQUIRE(a.neighbors == b.neighbors);
    REQUIRE(a.offsets == b.offsets);
    REQUIRE(count_components(a) == 1);

    // Strong assortativity at p = 0.05.
    std::int64_t cross = 0;
    for (const auto& e : a.undirected_edges()) cross += y[e.i] != y[e.j];
    REQUIRE(static_cast<double>(cross) / static_cast<double>(a.num_edges()) < 0.2);

    // p = 1: nothing but cross-class edges.
    Graph c = gen_class_network(y, 2, 1.0, 5);
    for (const auto& e : c.undirected_edges()) REQUIRE(y[e.i] != y[e.j]);

    REQUIRE_THROWS_AS(gen_class_network(y, 3, 0.0, 1), std::runtime_error);
}

TEST_CASE("gen_class_network single class has mean degree near 2m", "[generators]") {
    std::vector<ClassId> y(200, 1);
    Graph g = gen_class_network(y, 3, 0.5, 11);
    double mean_degree = 2.0 * static_cast<double>(g.num_edges()) / g.num_vertices;
    REQUIRE(mean_degree <= 2.0 * 3);
    REQUIRE(mean_degree > 1.6 * 3);  // only a few collapsed duplicates
}

TEST_CASE("torus knot curve points", "[generators]") {
    auto p0 = torus_knot_point(0.0);
    REQUIRE(p0[0] == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(p0[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(p0[2] == Catch::Approx(0.0).margin(1e-12));

    const double pi = 3.14159265358979323846;
    auto p1 = torus_knot_point(pi / 4.0);
    REQUIRE(p1[0] == Catch::Approx(-std::sqrt(2.0) / 2.0).margin(1e-12));
    REQUIRE(p1[1] == Catch::Approx(std::sqrt(2.0) / 2.0).margin(1e-12));
    REQUIRE(p1[2] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("gen_torus_knot without noise lies exactly on the curve", "[generators]") {
    Dataset d = gen_torus_knot(500, 4, 0.0, 31);
    REQUIRE(d.num_points == 500);
    REQUIRE(d.dim == 3);
    std::set<ClassId> classes(d.labels.begin(), d.labels.end());
    REQUIRE(classes == std::set<ClassId>{1, 2, 3, 4});

    const double two_pi = 6.283185307179586477;
    for (std::size_t i = 0; i < d.num_points; ++i) {
        const double* p = d.row(i);
        double base = std::atan2(p[1], p[0]) / 3.0;
        bool on_curve = false;
        for (int k = 0; k < 3 && !on_curve; ++k) {
            double theta = base + k * two_pi / 3.0;
            if (theta < 0) theta += two_pi;
            auto q = torus_knot_point(theta);
            on_curve = std::abs(p[0] - q[0]) < 1e-12 && std::abs(p[1] - q[1]) < 1e-12 &&
                       std::abs(p[2] - q[2]) < 1e-12;
        }
        REQUIRE(on_curve);
    }
}

TEST_CASE("gen_torus_knot with noise keeps setup of the parameter study", "[generators]") {
    Dataset d = gen_torus_knot(500, 4, 0.25, 7);
    REQUIRE(d.num_points == 500);
    std::set<ClassId> classes(d.labels.begin(), d.labels.end());
    REQUIRE(classes.size() == 4);
    REQUIRE_THROWS_AS(gen_torus_knot(3, 4, 0.1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(gen_torus_knot(100, 11, 0.1, 1), std::invalid_argument);
}

TEST_CASE("gen_random_connected hits the requested size", "[generators]") {
    Graph g = gen_random_connected(200, 1500, 4);
    REQUIRE(g.num_vertices == 200);
    REQUIRE(g.num_edges() == 1500);
    REQUIRE(count_components(g) == 1);
    Graph h = gen_random_connected(200, 1500, 4);
    REQUIRE(g.neighbors == h.neighbors);
}

TEST_CASE("mask_labels keeps a stratified fraction", "[generators]") {
    std::vector<ClassId> full(100);
    for (std::size_t i = 0; i < 100; ++i) full[i] = i < 50 ? 1 : 2;
    auto masked = mask_labels(full, 0.1, 9);
    std::int64_t kept1 = 0, kept2 = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        if (masked[i] != 0) REQUIRE(masked[i] == full[i]);
        kept1 += masked[i] == 1;
        kept2 += masked[i] == 2;
    }
    REQUIRE(kept1 == 5);
    REQUIRE(kept2 == 5);

    auto tiny = mask_labels(full, 0.001, 9);  // at least one per class survives
    REQUIRE(std::count(tiny.begin(), tiny.end(), 1) == 1);
    REQUIRE(std::count(tiny.begin(), tiny.end(), 2) == 1);
}
