#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lcu/graph.hpp"
#include "lcu/rng.hpp"

namespace lcu {

/// Point of the knotted torus curve at angle theta:
/// (r cos 3t, r sin 3t, -sin 4t) with r(t) = 2 + cos 4t.
inline std::array<double, 3> torus_knot_point(double theta) {
    const double r = 2.0 + std::cos(4.0 * theta);
    return {r * std::cos(3.0 * theta), r * std::sin(3.0 * theta), -std::sin(4.0 * theta)};
}

/// Assortative random network G(y, m, p): every vertex draws m targets with
/// replacement, weighted by class affinity (1-p same class, p otherwise)
/// times (degree + 1) preferential attachment; duplicate picks collapse.
/// Regenerates until connected, up to `retry_budget` attempts.
inline Graph gen_class_network(const std::vector<ClassId>& y, int m, double p,
                               std::uint64_t seed, int retry_budget = 100) {
    const auto n = static_cast<VertexId>(y.size());
    if (n < 2) throw std::invalid_argument("gen_class_network: need at least 2 vertices");
    if (m < 1) throw std::invalid_argument("gen_class_network: m must be >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_class_network: p outside [0,1]");
    ClassId num_classes = 0;
    for (ClassId c : y) {
        if (c < 1) throw std::invalid_argument("gen_class_network: labels must be >= 1");
        num_classes = std::max(num_classes, c);
    }
    std::vector<std::int64_t> class_count(static_cast<std::size_t>(num_classes) + 1, 0);
    for (ClassId c : y) ++class_count[c];
    for (ClassId c = 1; c <= num_classes; ++c)
        if (class_count[c] == 0)
            throw std::invalid_argument("gen_class_network: class " + std::to_string(c) +
                                        " has no vertices");
    if (p == 0.0 && num_classes > 1)
        throw std::runtime_error(
            "gen_class_network: generation failed, p=0 with multiple classes can never connect");

    SplitMix64 rng(seed);
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        std::vector<std::pair<VertexId, VertexId>> edges;
        edges.reserve(static_cast<std::size_t>(n) * m);
        std::vector<int> deg(static_cast<std::size_t>(n), 0);
        std::unordered_set<std::int64_t> seen;
        for (VertexId i = 0; i < n; ++i) {
            for (int t = 0; t < m; ++t) {
                double total = 0.0;
                for (VertexId j = 0; j < n; ++j) {
                    double w = (j == i) ? 0.0 : ((y[i] == y[j]) ? 1.0 - p : p);
                    weight[j] = w * static_cast<double>(deg[j] + 1);
                    total += weight[j];
                }
                if (total <= 0.0)
                    throw std::runtime_error("gen_class_network: generation failed, no eligible target");
                double u = rng.uniform() * total;
                VertexId pick = n - 1;
                for (VertexId j = 0; j < n; ++j) {
                    u -= weight[j];
                    if (u < 0.0) {
                        pick = j;
                        break;
                    }
                }
                auto a = std::min(i, pick), b = std::max(i, pick);
                std::int64_t key = static_cast<std::int64_t>(a) * n + b;
                if (seen.insert(key).second) {
                    edges.emplace_back(a, b);
                    ++deg[a];
                    ++deg[b];
                }
            }
        }
        Graph g = make_graph(n, std::move(edges), y, num_classes);
        if (count_components(g) == 1) return g;
    }
    throw std::runtime_error("gen_class_network: generation failed, retry budget exhausted");
}

/// Points on the knotted torus curve (r cos 3t, r sin 3t, -sin 4t) with
/// r(t) = 2 + cos 4t, t uniform on [0, 2pi), i.i.d. N(0, sigma) noise per
/// coordinate. Classes are contiguous arcs: samples sorted by t are cut into
/// num_classes circular runs of near-equal count starting at a random
/// sample, so every class is nonempty.
inline Dataset gen_torus_knot(std::size_t n, int num_classes, double sigma,
                              std::uint64_t seed) {
    if (num_classes < 2 || num_classes > 10)
        throw std::invalid_argument("gen_torus_knot: num_classes must be in 2..10");
    if (n < static_cast<std::size_t>(num_classes))
        throw std::invalid_argument("gen_torus_knot: need at least one sample per class");
    if (sigma < 0.0) throw std::invalid_argument("gen_torus_knot: sigma must be >= 0");

    SplitMix64 rng(seed);
    constexpr double two_pi = 6.283185307179586477;
    std::vector<double> theta(n);
    for (auto& t : theta) t = rng.uniform() * two_pi;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });

    Dataset d;
    d.num_points = n;
    d.dim = 3;
    d.points.resize(n * 3);
    d.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = torus_knot_point(theta[i]);
        for (int k = 0; k < 3; ++k)
            d.points[i * 3 + k] = p[k] + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
    }

    std::size_t start = static_cast<std::size_t>(rng.below(n));
    std::size_t base = n / static_cast<std::size_t>(num_classes);
    std::size_t extra = n % static_cast<std::size_t>(num_classes);
    std::size_t pos = 0;
    for (int c = 1; c <= num_classes; ++c) {
        std::size_t len = base + (static_cast<std::size_t>(c) <= extra ? 1 : 0);
        for (std::size_t k = 0; k < len; ++k, ++pos)
            d.labels[order[(start + pos) % n]] = c;
    }
    return d;
}

/// Two isotropic Gaussian blobs on the first axis, labeled 1 and 2.
inline Dataset gen_two_gaussians(std::size_t n, double separation, double sigma,
                                 std::uint64_t seed, std::size_t dim = 2) {
    if (n < 2) throw std::invalid_argument("gen_two_gaussians: need at least 2 points");
    if (dim < 1) throw std::invalid_argument("gen_two_gaussians: dim must be >= 1");
    SplitMix64 rng(seed);
    Dataset d;
    d.num_points = n;
    d.dim = dim;
    d.points.resize(n * dim);
    d.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool second = i >= n / 2;
        d.labels[i] = second ? 2 : 1;
        double mean = second ? separation / 2.0 : -separation / 2.0;
        for (std::size_t k = 0; k < dim; ++k)
            d.points[i * dim + k] = (k == 0 ? mean : 0.0) + sigma * rng.normal();
    }
    return d;
}

/// Uniform random connected graph: random recursive tree plus extra distinct
/// random edges until num_edges is reached. No labels are assigned.
inline Graph gen_random_connected(VertexId num_vertices, std::int64_t num_edges,
                                  std::uint64_t seed) {
    if (num_vertices < 2) throw std::invalid_argument("gen_random_connected: need >= 2 vertices");
    const double max_edges = 0.5 * static_cast<double>(num_vertices) *
                             static_cast<double>(num_vertices - 1);
    if (num_edges < num_vertices - 1 || static_cast<double>(num_edges) > max_edges)
        throw std::invalid_argument("gen_random_connected: edge count out of range");

    SplitMix64 rng(seed);
    std::vector<VertexId> perm(static_cast<std::size_t>(num_vertices));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(i + 1))]);

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(static_cast<std::size_t>(num_edges));
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(num_edges) * 2);
    auto add = [&](VertexId a, VertexId b) {
        if (a > b) std::swap(a, b);
        std::int64_t key = static_cast<std::int64_t>(a) * num_vertices + b;
        if (!seen.insert(key).second) return false;
        edges.emplace_back(a, b);
        return true;
    };
    for (VertexId i = 1; i < num_vertices; ++i)
        add(perm[i], perm[rng.below(static_cast<std::uint64_t>(i))]);
    while (static_cast<std::int64_t>(edges.size()) < num_edges) {
        auto a = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(num_vertices)));
        auto b = static_cast<VertexId>(rng.below(static_cast<std::uint64_t>(num_vertices)));
        if (a != b) add(a, b);
    }
    return make_graph(num_vertices, std::move(edges));
}

/// Keep a stratified random fraction of the labels (at least one per class),
/// zeroing the rest. Input labels must be fully labeled ground truth.
inline std::vector<ClassId> mask_labels(const std::vector<ClassId>& full, double fraction,
                                        std::uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw std::invalid_argument("mask_labels: fraction outside (0,1]");
    ClassId num_classes = 0;
    for (ClassId c : full) {
        if (c < 1) throw std::invalid_argument("mask_labels: input must be fully labeled");
        num_classes = std::max(num_classes, c);
    }
    SplitMix64 rng(seed);
    std::vector<ClassId> out(full.size(), 0);
    std::vector<std::size_t> members;
    for (ClassId c = 1; c <= num_classes; ++c) {
        members.clear();
        for (std::size_t i = 0; i < full.size(); ++i)
            if (full[i] == c) members.push_back(i);
        if (members.empty()) continue;
        auto keep = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(members.size())));
        keep = std::max<std::size_t>(1, std::min(keep, members.size()));
        for (std::size_t i = members.size() - 1; i > 0; --i)
            std::swap(members[i], members[static_cast<std::size_t>(rng.below(i + 1))]);
        for (std::size_t i = 0; i < keep; ++i) out[members[i]] = c;
    }
    return out;
}

}  // namespace lcu
