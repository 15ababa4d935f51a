#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lcu/deterministic.hpp"
#include "lcu/graph.hpp"
#include "lcu/unfolding.hpp"

namespace lcu {

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);  // exact double round-trip
    return buf;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps \n exact
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

inline std::runtime_error parse_error(const std::string& path, std::size_t line,
                                      const std::string& what) {
    return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// Split a CSV line; no quoting, cells trimmed of surrounding spaces.
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? comma : comma - start);
        std::size_t b = cell.find_first_not_of(" \t\r");
        std::size_t e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

}  // namespace detail

/// Read a whitespace-separated "i j" edge list (0-based, '#' comments).
/// Mirrored and duplicate pairs collapse; self-loops are rejected. Vertex
/// count is 1 + the largest index seen.
inline Graph read_edge_list(const std::string& path) {
    auto in = detail::open_in(path);
    std::vector<std::pair<VertexId, VertexId>> edges;
    VertexId max_vertex = -1;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::int64_t a, b;
        if (!(ss >> a)) {
            std::string rest;
            if (ss.clear(), ss >> rest)
                throw detail::parse_error(path, lineno, "expected 'i j' pair");
            continue;  // blank or comment-only line
        }
        if (!(ss >> b)) throw detail::parse_error(path, lineno, "expected 'i j' pair");
        std::string extra;
        if (ss >> extra) throw detail::parse_error(path, lineno, "trailing garbage '" + extra + "'");
        if (a < 0 || b < 0) throw detail::parse_error(path, lineno, "negative vertex id");
        if (a > 1000000000 || b > 1000000000)
            throw detail::parse_error(path, lineno, "vertex id too large");
        if (a == b) throw detail::parse_error(path, lineno, "self-loop rejected");
        edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
        max_vertex = std::max({max_vertex, static_cast<VertexId>(a), static_cast<VertexId>(b)});
    }
    if (edges.empty()) throw std::runtime_error(path + ": no edges");
    return make_graph(max_vertex + 1, std::move(edges));
}

/// Write each undirected edge once as "i j" with i < j, sorted.
inline void write_edge_pairs(std::vector<std::pair<VertexId, VertexId>> pairs,
                             const std::string& path) {
    for (auto& [a, b] : pairs)
        if (a > b) std::swap(a, b);
    std::sort(pairs.begin(), pairs.end());
    auto out = detail::open_out(path);
    for (const auto& [a, b] : pairs) out << a << ' ' << b << '\n';
}

inline void write_edge_list(const Graph& g, const std::string& path) {
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (const auto& e : g.undirected_edges()) pairs.emplace_back(e.i, e.j);
    write_edge_pairs(std::move(pairs), path);
}

/// Read a "vertex,label" CSV (label 0 = unlabeled; vertices not listed stay
/// unlabeled). With expected_classes > 0, labels above it are rejected.
inline std::vector<ClassId> read_labels(const std::string& path, VertexId num_vertices,
                                        ClassId expected_classes = 0) {
    auto in = detail::open_in(path);
    std::vector<ClassId> labels(static_cast<std::size_t>(num_vertices), 0);
    std::vector<char> seen(static_cast<std::size_t>(num_vertices), 0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = detail::split_csv(line);
        std::int64_t v, c;
        if (cells.size() != 2 || !detail::parse_int64(cells[0], v) ||
            !detail::parse_int64(cells[1], c))
            throw detail::parse_error(path, lineno, "expected 'vertex,label'");
        if (v < 0 || v >= num_vertices)
            throw detail::parse_error(path, lineno, "vertex " + std::to_string(v) + " out of range");
        if (c < 0) throw detail::parse_error(path, lineno, "negative label");
        if (expected_classes > 0 && c > expected_classes)
            throw detail::parse_error(path, lineno,
                                      "label " + std::to_string(c) + " exceeds class count " +
                                          std::to_string(expected_classes));
        if (seen[v]) throw detail::parse_error(path, lineno, "duplicate vertex " + std::to_string(v));
        seen[v] = 1;
        labels[v] = static_cast<ClassId>(c);
    }
    return labels;
}

/// Read a CSV of D doubles per row; with label_column the trailing column is
/// an integer class id instead.
inline Dataset read_points(const std::string& path, bool label_column = false) {
    auto in = detail::open_in(path);
    Dataset d;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = detail::split_csv(line);
        std::size_t dim = cells.size() - (label_column ? 1 : 0);
        if (dim < 1) throw detail::parse_error(path, lineno, "no feature columns");
        if (d.num_points == 0) d.dim = dim;
        if (dim != d.dim)
            throw detail::parse_error(path, lineno,
                                      "expected " + std::to_string(d.dim) + " feature columns, got " +
                                          std::to_string(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            double x;
            if (!detail::parse_double(cells[k], x))
                throw detail::parse_error(path, lineno, "bad number '" + cells[k] + "'");
            d.points.push_back(x);
        }
        if (label_column) {
            std::int64_t c;
            if (!detail::parse_int64(cells.back(), c) || c < 0)
                throw detail::parse_error(path, lineno, "bad label '" + cells.back() + "'");
            d.labels.push_back(static_cast<ClassId>(c));
        } else {
            d.labels.push_back(0);
        }
        ++d.num_points;
    }
    if (d.num_points == 0) throw std::runtime_error(path + ": no points");
    return d;
}

/// Write predictions as CSV with one row per vertex:
/// vertex,predicted,score_1..score_C,bfs_depth.
inline void write_predictions(const Prediction& p, const std::string& path) {
    auto out = detail::open_out(path);
    std::size_t C = p.scores.empty() ? 0 : p.scores[0].size();
    out << "vertex,predicted";
    for (std::size_t c = 1; c <= C; ++c) out << ",score_" << c;
    out << ",bfs_depth\n";
    for (std::size_t i = 0; i < p.predicted.size(); ++i) {
        out << i << ',' << p.predicted[i];
        for (std::size_t c = 0; c < C; ++c) out << ',' << p.scores[i][c];
        out << ',' << p.bfs_depth_used[i] << '\n';
    }
}

inline Prediction read_predictions(const std::string& path) {
    auto in = detail::open_in(path);
    Prediction p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (lineno == 1 && line.rfind("vertex,", 0) == 0) continue;
        auto cells = detail::split_csv(line);
        if (cells.size() < 3) throw detail::parse_error(path, lineno, "short row");
        std::int64_t v, cls, depth;
        if (!detail::parse_int64(cells[0], v) || !detail::parse_int64(cells[1], cls) ||
            !detail::parse_int64(cells.back(), depth))
            throw detail::parse_error(path, lineno, "bad row");
        if (v != static_cast<std::int64_t>(p.predicted.size()))
            throw detail::parse_error(path, lineno, "rows must be consecutive vertices");
        p.predicted.push_back(static_cast<ClassId>(cls));
        p.scores.emplace_back();
        for (std::size_t k = 2; k + 1 < cells.size(); ++k) {
            std::int64_t s;
            if (!detail::parse_int64(cells[k], s))
                throw detail::parse_error(path, lineno, "bad score '" + cells[k] + "'");
            p.scores.back().push_back(s);
        }
        p.bfs_depth_used.push_back(static_cast<int>(depth));
    }
    return p;
}

/// Dump nonzero cumulative domination as "c i j value" triplets (class
/// 1-based, vertices 0-based), sorted by (c,i,j), 17 significant digits.
template <class T>
inline void dump_domination(const Graph& g, const std::vector<std::vector<T>>& cumulative,
                            const std::string& path) {
    auto out = detail::open_out(path);
    for (std::size_t c = 0; c < cumulative.size(); ++c) {
        for (VertexId i = 0; i < g.num_vertices; ++i) {
            for (EdgeId e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
                double v = static_cast<double>(cumulative[c][e]);
                if (v != 0.0)
                    out << (c + 1) << ' ' << i << ' ' << g.neighbors[e] << ' '
                        << detail::fmt_double(v) << '\n';
            }
        }
    }
}

inline void dump_domination(const Graph& g, const SystemState& s, const std::string& path) {
    dump_domination(g, s.cumulative, path);
}

/// Read a domination dump back into per-class, per-slot values.
inline std::vector<std::vector<double>> read_domination(const std::string& path, const Graph& g,
                                                        ClassId num_classes) {
    auto in = detail::open_in(path);
    std::vector<std::vector<double>> cum(
        num_classes, std::vector<double>(static_cast<std::size_t>(g.num_directed_edges()), 0.0));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        std::int64_t c, i, j;
        double v;
        if (!(ss >> c >> i >> j >> v))
            throw detail::parse_error(path, lineno, "expected 'c i j value'");
        std::string extra;
        if (ss >> extra) throw detail::parse_error(path, lineno, "trailing garbage");
        if (c < 1 || c > num_classes) throw detail::parse_error(path, lineno, "class out of range");
        if (i < 0 || i >= g.num_vertices || j < 0 || j >= g.num_vertices)
            throw detail::parse_error(path, lineno, "vertex out of range");
        EdgeId e = g.edge_index(static_cast<VertexId>(i), static_cast<VertexId>(j));
        if (e < 0) throw detail::parse_error(path, lineno, "not an edge of the graph");
        cum[c - 1][e] = v;
    }
    return cum;
}

/// Reports are nlohmann JSON documents; keys are kept sorted by the library,
/// so write -> read -> write is byte-identical.
inline void write_report(const nlohmann::json& report, const std::string& path) {
    auto out = detail::open_out(path);
    out << report.dump(2) << '\n';
}

inline nlohmann::json read_report(const std::string& path) {
    auto in = detail::open_in(path);
    return nlohmann::json::parse(in);
}

}  // namespace lcu
