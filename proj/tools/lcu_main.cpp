// Command-line frontend for the labeled component unfolding library:
// deterministic classification, stochastic simulation, and the verification
// experiment suites.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lcu/analysis.hpp"
#include "lcu/deterministic.hpp"
#include "lcu/generators.hpp"
#include "lcu/graph.hpp"
#include "lcu/io.hpp"
#include "lcu/knn.hpp"
#include "lcu/stochastic.hpp"
#include "lcu/unfolding.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitDisconnected = 2;

struct InputOptions {
    std::string edges_path;
    std::string points_path;
    std::string labels_path;
    bool label_column = false;
    int k = 0;
    bool auto_k = false;
};

struct RunOptions {
    double lambda = 1.0;
    std::int64_t tau = 1000;
    std::string init = "degree";
    std::string init_file;
    std::string order = "synchronous";
    int stable_stop = 0;
    std::uint64_t seed = 0;
    std::string out_dir;
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    auto* edges = cmd->add_option("--edges", in.edges_path, "edge list file (\"i j\" per line)");
    auto* points = cmd->add_option("--points", in.points_path, "points CSV (D columns per row)");
    cmd->add_option("--labels", in.labels_path, "labels CSV \"vertex,label\" (0 = unlabeled)");
    cmd->add_flag("--label-column", in.label_column, "points CSV carries a trailing label column");
    auto* k = cmd->add_option("--k", in.k, "k for k-NN graph construction")->check(CLI::PositiveNumber);
    auto* autok = cmd->add_flag("--auto-k", in.auto_k,
                                "smallest k in 1..20 that yields a connected graph");
    edges->excludes(points);
    k->excludes(autok);
}

void add_run_flags(CLI::App* cmd, RunOptions& run) {
    cmd->add_option("--lambda", run.lambda, "competition level in [0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--tau", run.tau, "iteration limit")->capture_default_str();
    cmd->add_option("--init", run.init, "initial population scheme")
        ->check(CLI::IsMember({"degree", "sources", "file"}))
        ->capture_default_str();
    cmd->add_option("--init-file", run.init_file, "custom init CSV \"class,vertex,value\"");
    cmd->add_option("--order", run.order, "per-iteration class update order")
        ->check(CLI::IsMember({"synchronous", "sequential"}))
        ->capture_default_str();
    cmd->add_option("--stable-stop", run.stable_stop,
                    "stop early after this many iterations with an unchanged unfolding (0 = off)")
        ->capture_default_str();
    cmd->add_option("--seed", run.seed, "master seed")->capture_default_str();
    cmd->add_option("--out", run.out_dir, "output directory")->required();
}

std::vector<std::vector<double>> read_custom_init(const std::string& path, const lcu::Graph& g) {
    auto in = lcu::detail::open_in(path);
    std::vector<std::vector<double>> init(
        g.num_classes, std::vector<double>(static_cast<std::size_t>(g.num_vertices), 0.0));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = lcu::detail::split_csv(line);
        std::int64_t c, v;
        double x;
        if (cells.size() != 3 || !lcu::detail::parse_int64(cells[0], c) ||
            !lcu::detail::parse_int64(cells[1], v) || !lcu::detail::parse_double(cells[2], x))
            throw lcu::detail::parse_error(path, lineno, "expected 'class,vertex,value'");
        if (c < 1 || c > g.num_classes) throw lcu::detail::parse_error(path, lineno, "bad class");
        if (v < 0 || v >= g.num_vertices) throw lcu::detail::parse_error(path, lineno, "bad vertex");
        init[c - 1][v] = x;
    }
    return init;
}

// Build + validate the input graph; throws GraphError carrying the exit code.
struct GraphError {
    int code;
    std::string message;
};

lcu::Graph load_graph(const InputOptions& in, int& resolved_k) {
    resolved_k = 0;
    if (!in.edges_path.empty()) {
        lcu::Graph g = lcu::read_edge_list(in.edges_path);
        if (in.labels_path.empty()) throw GraphError{kExitInvalid, "--labels is required with --edges"};
        g = lcu::with_labels(std::move(g), lcu::read_labels(in.labels_path, g.num_vertices));
        return g;
    }
    if (in.points_path.empty())
        throw GraphError{kExitInvalid, "either --edges or --points is required"};
    lcu::Dataset d = lcu::read_points(in.points_path, in.label_column);
    if (!in.labels_path.empty())
        d.labels = lcu::read_labels(in.labels_path, static_cast<lcu::VertexId>(d.num_points));
    if (in.auto_k) {
        for (int k = 1; k <= 20; ++k) {
            lcu::Graph g = lcu::build_knn_graph(d, k);
            if (lcu::count_components(g) == 1) {
                resolved_k = k;
                return g;
            }
        }
        throw GraphError{kExitDisconnected,
                         "no k in 1..20 yields a connected k-NN graph; the data may be separable"};
    }
    if (in.k < 1) throw GraphError{kExitInvalid, "--k or --auto-k is required with --points"};
    resolved_k = in.k;
    return lcu::build_knn_graph(d, in.k);
}

void check_valid(const lcu::Graph& g) {
    auto v = lcu::validate_graph(g);
    if (!v.ok) throw GraphError{v.disconnected ? kExitDisconnected : kExitInvalid, v.message};
}

lcu::SystemParams make_params(const RunOptions& run, const lcu::Graph& g) {
    lcu::SystemParams params;
    params.lambda = run.lambda;
    params.tau = run.tau;
    params.order = run.order == "sequential" ? lcu::UpdateOrder::sequential
                                             : lcu::UpdateOrder::synchronous;
    params.stable_stop = run.stable_stop;
    if (run.init == "degree") {
        params.init = lcu::InitScheme::degree_all_classes;
    } else if (run.init == "sources") {
        params.init = lcu::InitScheme::degree_sources_only;
    } else {
        if (run.init_file.empty()) throw GraphError{kExitInvalid, "--init file needs --init-file"};
        params.init = lcu::InitScheme::custom;
        params.custom_init = read_custom_init(run.init_file, g);
    }
    return params;
}

void warn_tau_vs_diameter(const lcu::Graph& g, std::int64_t tau) {
    if (g.num_vertices > 4000) {
        std::cerr << "note: diameter check skipped (graph too large)\n";
        return;
    }
    int diam = lcu::diameter(g);
    if (tau < diam)
        std::cerr << "warning: tau = " << tau << " is below the graph diameter " << diam
                  << "; every edge needs a chance to be visited\n";
}

nlohmann::json config_echo(const InputOptions& in, const RunOptions& run, int resolved_k) {
    return {{"edges", in.edges_path},   {"points", in.points_path},
            {"labels", in.labels_path}, {"label_column", in.label_column},
            {"k", resolved_k},          {"auto_k", in.auto_k},
            {"lambda", run.lambda},     {"tau", run.tau},
            {"init", run.init},         {"init_file", run.init_file},
            {"order", run.order},       {"stable_stop", run.stable_stop},
            {"seed", run.seed}};
}

void write_unfolding_files(const lcu::Unfolding& u, const std::filesystem::path& dir) {
    for (lcu::ClassId c = 1; c <= u.num_classes; ++c)
        lcu::write_edge_pairs(u.edge_set(c),
                              (dir / ("unfolding_class_" + std::to_string(c) + ".edges")).string());
    lcu::write_edge_pairs(u.edge_set(0), (dir / "unfolding_unassigned.edges").string());
}

nlohmann::json predictions_to_json(const lcu::Graph& g, const lcu::Unfolding& u,
                                   const lcu::Prediction& pred) {
    std::vector<int> overlapping;
    auto profiles = lcu::overlap_profiles(g, u);
    for (lcu::VertexId i = 0; i < g.num_vertices; ++i) {
        int nonzero = 0;
        for (auto s : profiles[i]) nonzero += s > 0;
        if (nonzero >= 2) overlapping.push_back(i);
    }
    return {{"predicted", pred.predicted},
            {"bfs_depth_used", pred.bfs_depth_used},
            {"overlapping_vertices", overlapping}};
}

int cmd_classify(const InputOptions& in, const RunOptions& run) {
    int resolved_k = 0;
    lcu::Graph g = load_graph(in, resolved_k);
    check_valid(g);
    warn_tau_vs_diameter(g, run.tau);
    lcu::SystemParams params = make_params(run, g);

    std::vector<std::vector<double>> totals_by_iteration(g.num_classes);
    auto t0 = std::chrono::steady_clock::now();
    lcu::SystemState state = lcu::run(g, params, [&](const lcu::SystemState& s) {
        for (int c = 0; c < g.num_classes; ++c) {
            double total = 0.0;
            for (double x : s.populations[c]) total += x;
            totals_by_iteration[c].push_back(total);
        }
    });
    double run_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    lcu::Unfolding u = lcu::unfold(g, state);
    lcu::Prediction pred = lcu::classify(g, u);

    std::filesystem::path dir(run.out_dir);
    std::filesystem::create_directories(dir);
    lcu::write_predictions(pred, (dir / "predictions.csv").string());
    lcu::dump_domination(g, state, (dir / "domination.txt").string());
    write_unfolding_files(u, dir);

    nlohmann::json report;
    report["schema_version"] = 1;
    report["command"] = "classify";
    report["params"] = config_echo(in, run, resolved_k);
    report["graph"] = {{"vertices", g.num_vertices},
                       {"edges", g.num_edges()},
                       {"classes", g.num_classes}};
    nlohmann::json per_class = nlohmann::json::array();
    auto sizes = u.class_sizes();
    for (int c = 0; c < g.num_classes; ++c)
        per_class.push_back({{"class", c + 1},
                             {"population_totals_by_iteration", totals_by_iteration[c]},
                             {"unfolding_size", sizes[c + 1]}});
    report["per_class"] = per_class;
    report["unassigned_edges"] = sizes[0];
    report["iterations_run"] = state.t;
    report["predictions"] = predictions_to_json(g, u, pred);
    lcu::write_report(report, (dir / "report.json").string());

    std::cerr << "classify: " << state.t << " iterations in " << run_seconds << "s\n";
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
    return kExitOk;
}

int cmd_simulate(const InputOptions& in, const RunOptions& run, std::int64_t particles,
                 int num_runs, bool compare) {
    if (particles < 1) throw GraphError{kExitInvalid, "--particles must be >= 1"};
    if (num_runs < 1) throw GraphError{kExitInvalid, "--runs must be >= 1"};
    int resolved_k = 0;
    lcu::Graph g = load_graph(in, resolved_k);
    check_valid(g);

    lcu::SplitMix64 seeder(run.seed);
    std::vector<std::uint64_t> run_seeds(static_cast<std::size_t>(num_runs));
    for (auto& s : run_seeds) s = seeder.next();

    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> avg(
        g.num_classes, std::vector<double>(static_cast<std::size_t>(g.num_directed_edges()), 0.0));
    for (auto s : run_seeds) {
        lcu::ParticleEnsemble ens = lcu::stoch_run(g, particles, run.lambda, run.tau, s);
        for (int c = 0; c < g.num_classes; ++c)
            for (std::size_t k = 0; k < avg[c].size(); ++k)
                avg[c][k] += static_cast<double>(ens.cumulative[c][k]);
    }
    for (auto& v : avg)
        for (auto& x : v) x /= num_runs;
    double sim_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    lcu::Unfolding u = lcu::unfold(g, avg);
    lcu::Prediction pred = lcu::classify(g, u);

    std::filesystem::path dir(run.out_dir);
    std::filesystem::create_directories(dir);
    lcu::write_predictions(pred, (dir / "predictions.csv").string());
    lcu::dump_domination(g, avg, (dir / "domination.txt").string());
    write_unfolding_files(u, dir);

    nlohmann::json report;
    report["schema_version"] = 1;
    report["command"] = "simulate";
    report["params"] = config_echo(in, run, resolved_k);
    report["params"]["particles"] = particles;
    report["params"]["runs"] = num_runs;
    report["run_seeds"] = run_seeds;
    report["graph"] = {{"vertices", g.num_vertices},
                       {"edges", g.num_edges()},
                       {"classes", g.num_classes}};
    auto sizes = u.class_sizes();
    report["unfolding_sizes"] = sizes;
    report["predictions"] = predictions_to_json(g, u, pred);

    if (compare) {
        lcu::SystemParams params = make_params(run, g);
        lcu::SystemState det = lcu::run(g, params);
        double corr = lcu::domination_correlation(g, det.cumulative, avg);
        report["correlation_vs_deterministic"] = corr;
        std::cout << "correlation " << corr << "\n";
    }
    lcu::write_report(report, (dir / "report.json").string());
    std::cerr << "simulate: " << num_runs << " runs in " << sim_seconds << "s\n";
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
    return kExitOk;
}

void write_xy_csv(const nlohmann::json& points, const std::string& xkey, const std::string& ykey,
                  const std::string& skey, const std::string& path) {
    auto out = lcu::detail::open_out(path);
    out << "x,y,sigma\n";
    for (const auto& p : points)
        out << lcu::detail::fmt_double(p[xkey].get<double>()) << ','
            << lcu::detail::fmt_double(p[ykey].get<double>()) << ','
            << lcu::detail::fmt_double(p[skey].get<double>()) << '\n';
}

std::string lambda_tag(double lambda) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", lambda);
    std::string s(buf);
    for (auto& ch : s)
        if (ch == '.') ch = '_';
    return s;
}

int cmd_experiment(const std::string& suite, std::uint64_t seed, const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    nlohmann::json report;

    if (suite == "equivalence") {
        lcu::EquivalenceConfig cfg;
        cfg.master_seed = seed ? seed : cfg.master_seed;
        report = lcu::equivalence_experiment(cfg);
        // One curve per lambda: correlation vs particle scale.
        for (double lambda : cfg.lambdas) {
            nlohmann::json points = nlohmann::json::array();
            for (const auto& cond : report["conditions"])
                if (cond["lambda"].get<double>() == lambda)
                    points.push_back({{"x", cond["scale"].get<double>()},
                                      {"y", cond["mean_correlation"].get<double>()},
                                      {"s", cond["sd_correlation"].get<double>()}});
            write_xy_csv(points, "x", "y", "s",
                         (dir / ("corr_lambda_" + lambda_tag(lambda) + ".csv")).string());
        }
    } else if (suite == "timing") {
        lcu::TimingConfig cfg;
        cfg.master_seed = seed ? seed : cfg.master_seed;
        report = lcu::timing_scan(cfg);
        for (auto [key, name] : {std::pair{"edge_sweep", "time_vs_edges.csv"},
                                 std::pair{"vertex_sweep", "time_vs_vertices.csv"}}) {
            nlohmann::json points = nlohmann::json::array();
            for (const auto& p : report[key]["points"])
                points.push_back({{"x", p["size"].get<double>()},
                                  {"y", p["mean_seconds"].get<double>()},
                                  {"s", p["sd_seconds"].get<double>()}});
            write_xy_csv(points, "x", "y", "s", (dir / name).string());
        }
        std::cout << "loglog slope vs edges " << report["edge_sweep"]["loglog_slope"].get<double>()
                  << ", vs vertices " << report["vertex_sweep"]["loglog_slope"].get<double>()
                  << "\n";
    } else if (suite == "scale") {
        lcu::ScaleConfig cfg;
        cfg.master_seed = seed ? seed : cfg.master_seed;
        report = lcu::scale_experiment(cfg);
        nlohmann::json points = nlohmann::json::array();
        for (const auto& cond : report["results"]["per_condition"])
            points.push_back({{"x", cond["kappa"].get<double>()},
                              {"y", cond["max_relative_deviation"].get<double>()},
                              {"s", 0.0}});
        write_xy_csv(points, "x", "y", "s", (dir / "scale_deviation.csv").string());
        std::cout << "max relative deviation "
                  << report["results"]["max_relative_deviation"].get<double>() << "\n";
    } else {
        std::cerr << "unknown experiment suite '" << suite << "'\n";
        return kExitInvalid;
    }
    lcu::write_report(report, (dir / "report.json").string());
    std::cout << "wrote " << (dir / "report.json").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Labeled component unfolding: particle-competition semi-supervised learning"};
    app.require_subcommand(1);

    InputOptions cls_in, sim_in;
    RunOptions cls_run, sim_run;
    std::int64_t particles = 100000;
    int num_runs = 1;
    bool compare = false;
    bool stochastic = true;

    auto* classify = app.add_subcommand("classify", "deterministic unfolding + classification");
    add_input_flags(classify, cls_in);
    add_run_flags(classify, cls_run);

    auto* simulate = app.add_subcommand("simulate", "stochastic particle simulation");
    add_input_flags(simulate, sim_in);
    add_run_flags(simulate, sim_run);
    simulate->add_flag("--stochastic", stochastic, "run the particle form (default; kept for symmetry)");
    simulate->add_option("--particles", particles, "initial particles per class")
        ->capture_default_str();
    simulate->add_option("--runs", num_runs, "independent seeded runs to average")
        ->capture_default_str();
    simulate->add_flag("--compare", compare, "also run the deterministic system and report correlation");

    std::string suite;
    std::uint64_t exp_seed = 0;
    std::string exp_out;
    auto* experiment = app.add_subcommand("experiment", "verification experiment suites");
    experiment->add_option("suite", suite, "equivalence | timing | scale")->required();
    experiment->add_option("--seed", exp_seed, "master seed (0 = suite default)")
        ->capture_default_str();
    experiment->add_option("--out", exp_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (classify->parsed()) return cmd_classify(cls_in, cls_run);
        if (simulate->parsed()) return cmd_simulate(sim_in, sim_run, particles, num_runs, compare);
        return cmd_experiment(suite, exp_seed, exp_out);
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
