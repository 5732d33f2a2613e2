// Command-line front-end: seeded, manifest-emitting wrappers around the
// library operations. Every output file gets a .manifest.json sidecar with
// the full parameter set and input/output digests; reruns on the same build
// are byte-identical.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphon/errors.hpp"
#include "graphon/graph_io.hpp"
#include "graphon/overlay.hpp"
#include "graphon/random_models.hpp"
#include "graphon/sampler.hpp"
#include "graphon/scaling.hpp"
#include "graphon/search.hpp"
#include "graphon/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitDivergence = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw graphon::InfeasibleError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw graphon::InfeasibleError("cannot open for writing: " + path);
    out << content;
}

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << h;
    return os.str();
}

struct Manifest {
    std::string command;
    json parameters = json::object();
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

void write_manifest(const Manifest& m, const std::string& primary_output) {
    json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["seed"] = m.seed;
    j["version"] = graphon::kVersion;
    json in = json::object(), out = json::object();
    for (const std::string& p : m.inputs) in[p] = fnv1a_digest(read_file(p));
    for (const std::string& p : m.outputs) out[p] = fnv1a_digest(read_file(p));
    j["inputs"] = in;
    j["outputs"] = out;
    write_file(primary_output + ".manifest.json", j.dump(2) + "\n");
}

json matrix_json(const graphon::Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json cut_result_json(const graphon::CutResult& r) {
    json j;
    j["value"] = r.value;
    j["exact"] = r.exact;
    json w;
    if (!r.permutation.empty()) {
        w["kind"] = "permutation";
        w["permutation"] = r.permutation;
        w["subset"] = r.subset;
    } else {
        w["kind"] = "subset";
        w["subset"] = r.subset;
    }
    j["witness"] = w;
    return j;
}

json plan_json(const graphon::ScalePlan& plan) {
    json j;
    j["source_n"] = plan.source_n;
    j["target_n"] = plan.target_n;
    j["k"] = plan.k;
    j["m"] = plan.m;
    j["bound"] = plan.bound;
    return j;
}

int count_edges(const graphon::WeightedGraph& g) {
    int edges = 0;
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
            if (g.beta(i, j) != 0.0) ++edges;
    return edges;
}

// --- subcommand payloads ---------------------------------------------------

struct GenArgs {
    std::string model;
    double p = 0.5, kappa = 0.4;
    int n = 8, m0 = 10, m = 10;
    std::string out;
};

void run_gen(const GenArgs& a, std::uint64_t seed) {
    graphon::GraphFile file;
    json params;
    params["model"] = a.model;
    params["n"] = a.n;
    if (a.model == "er") {
        file = graphon::to_weighted(graphon::er_graphon({a.p}, a.n));
        params["p"] = a.p;
    } else if (a.model == "ws") {
        file = graphon::to_weighted(graphon::ws_graphon({a.kappa, a.p}, a.n));
        params["kappa"] = a.kappa;
        params["p"] = a.p;
    } else {
        file = graphon::ba_sample({a.m0, a.m, a.n}, seed);
        params["m0"] = a.m0;
        params["m"] = a.m;
    }
    graphon::write_graph_file(a.out, file);
    write_manifest({"gen " + a.model, params, seed, {}, {a.out}}, a.out);
}

struct ScaleArgs {
    std::string in, out, plan_out, method = "fractional";
    int target_n = 0;
};

void run_scale(const ScaleArgs& a, std::uint64_t seed) {
    const graphon::WeightedGraph g = graphon::as_weighted(graphon::read_graph_file(a.in));
    graphon::WeightedGraph scaled;
    graphon::ScalePlan plan;
    if (a.method == "blowup") {
        if (a.target_n < g.size() || a.target_n % g.size() != 0)
            throw graphon::InfeasibleError(
                "blowup needs a multiple of the source size; use method=fractional");
        scaled = graphon::blowup_k(g, a.target_n / g.size());
        plan = graphon::make_scale_plan(g, a.target_n);
    } else if (a.method == "fractional") {
        std::tie(scaled, plan) = graphon::fractional_blowup(g, a.target_n);
    } else if (a.method == "interpolate") {
        if (a.target_n < g.size() || a.target_n % g.size() != 0)
            throw graphon::InfeasibleError("interpolation needs an integer factor k = N/n");
        scaled = graphon::interpolate_1d(g, a.target_n / g.size());
        plan = graphon::make_scale_plan(g, a.target_n);
    } else {
        throw graphon::ValidationError("unknown scale method: " + a.method);
    }
    graphon::write_graph_file(a.out, scaled);
    const std::string plan_path = a.plan_out.empty() ? a.out + ".plan.json" : a.plan_out;
    json pj = plan_json(plan);
    pj["method"] = a.method;
    if (a.method == "interpolate") pj.erase("bound");  // the blow-up bound does not apply
    write_file(plan_path, pj.dump(2) + "\n");
    json params;
    params["in"] = a.in;
    params["N"] = a.target_n;
    params["method"] = a.method;
    write_manifest({"scale", params, seed, {a.in}, {a.out, plan_path}}, a.out);
}

struct SampleArgs {
    std::string in, out, csv;
    int target_n = 0;  // 0 = keep size
    int trials = 1;
};

void run_sample(const SampleArgs& a, std::uint64_t seed) {
    const graphon::WeightedGraph g = graphon::as_weighted(graphon::read_graph_file(a.in));
    if (a.trials < 1) throw graphon::ValidationError("sample: trials must be >= 1");
    const int target = a.target_n == 0 ? g.size() : a.target_n;
    std::vector<std::string> outputs;
    std::ostringstream csv;
    csv << "trial,nodes,edges\n";
    graphon::WeightedGraph first;
    for (int t = 0; t < a.trials; ++t) {
        const std::uint64_t s = graphon::derive_seed(seed, static_cast<std::uint64_t>(t));
        graphon::WeightedGraph sample;
        if (target == g.size()) {
            sample = graphon::sample_simple(g, s);
        } else {
            sample = graphon::scale_and_sample(g, target, s).first;
        }
        if (t == 0) first = sample;
        csv << t << ',' << sample.size() << ',' << count_edges(sample) << '\n';
    }
    if (!first.symmetric) {
        graphon::write_graph_file(a.out, graphon::as_dag(first));
    } else {
        graphon::write_graph_file(a.out, first);
    }
    outputs.push_back(a.out);
    if (a.trials > 1 || !a.csv.empty()) {
        const std::string csv_path = a.csv.empty() ? a.out + ".trials.csv" : a.csv;
        write_file(csv_path, csv.str());
        outputs.push_back(csv_path);
    }
    json params;
    params["in"] = a.in;
    params["N"] = target;
    params["trials"] = a.trials;
    write_manifest({"sample", params, seed, {a.in}, outputs}, a.out);
}

struct DistanceArgs {
    std::string a, b, mode = "dbox-exact", out;
    int restarts = 50;
    int iters = 40;
};

void run_distance(const DistanceArgs& args, std::uint64_t seed) {
    const graphon::WeightedGraph ga = graphon::as_weighted(graphon::read_graph_file(args.a));
    const graphon::WeightedGraph gb = graphon::as_weighted(graphon::read_graph_file(args.b));
    const graphon::CutConfig cfg;
    json j;
    if (args.mode == "dbox-exact") {
        j = cut_result_json(graphon::cut_distance_exact(ga, gb, cfg));
    } else if (args.mode == "dbox-heur") {
        j = cut_result_json(graphon::cut_distance_local_search(ga, gb, args.restarts, seed, cfg));
    } else if (args.mode == "deltahat-exact") {
        j = cut_result_json(
            graphon::isomorphism_distance(ga, gb, graphon::IsoMode::exact, cfg, seed));
    } else if (args.mode == "deltahat-heur") {
        j = cut_result_json(
            graphon::isomorphism_distance(ga, gb, graphon::IsoMode::heuristic, cfg, seed));
    } else if (args.mode == "overlay-opt") {
        graphon::OverlayOptimizeOptions opt;
        opt.iterations = args.iters;
        opt.seed = seed;
        const graphon::OverlayOptimizeResult r = graphon::optimize_overlay(ga, gb, opt, cfg);
        j = cut_result_json(r.cut);
        j["witness"]["kind"] = "overlay";
        j["witness"]["overlay"] = matrix_json(r.overlay.entries);
        j["support"] = r.support;
    } else {
        throw graphon::ValidationError("unknown distance mode: " + args.mode);
    }
    std::cout << j.dump(2) << std::endl;
    if (!args.out.empty()) {
        write_file(args.out, j.dump(2) + "\n");
        json params;
        params["a"] = args.a;
        params["b"] = args.b;
        params["mode"] = args.mode;
        params["restarts"] = args.restarts;
        params["iters"] = args.iters;
        write_manifest({"distance", params, seed, {args.a, args.b}, {args.out}}, args.out);
    }
}

struct ConcentrationArgs {
    std::string in, out, csv;
    int trials = 200;
    int restarts = 50;
};

void run_concentration(const ConcentrationArgs& a, std::uint64_t seed, int threads) {
    const graphon::WeightedGraph g = graphon::as_weighted(graphon::read_graph_file(a.in));
    const graphon::SampleReport report =
        graphon::concentration_experiment(g, a.trials, seed, {}, a.restarts, threads);
    write_file(a.out, graphon::report_to_json(report) + "\n");
    std::vector<std::string> outputs{a.out};
    const std::string csv_path = a.csv.empty() ? a.out + ".csv" : a.csv;
    write_file(csv_path, graphon::report_to_csv(report));
    outputs.push_back(csv_path);
    json params;
    params["in"] = a.in;
    params["trials"] = a.trials;
    params["restarts"] = a.restarts;
    write_manifest({"concentration", params, seed, {a.in}, outputs}, a.out);
    std::cout << "violations " << report.violations << " / " << report.trials
              << " (threshold " << report.threshold << ")" << std::endl;
}

struct SearchArgs {
    std::string task_file, out_prefix;
    int epochs_override = 0;
};

graphon::ToyTaskSpec task_spec_from_json(const json& j) {
    graphon::ToyTaskSpec spec;
    spec.n_nodes = j.value("n_nodes", spec.n_nodes);
    spec.input_dim = j.value("input_dim", spec.input_dim);
    spec.classes = j.value("classes", spec.classes);
    spec.train_count = j.value("train", spec.train_count);
    spec.val_count = j.value("val", spec.val_count);
    spec.noise = j.value("noise", spec.noise);
    spec.seed = j.value("seed", spec.seed);
    return spec;
}

graphon::SearchConfig search_config_from_json(const json& j) {
    graphon::SearchConfig cfg;
    cfg.K = j.value("K", cfg.K);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.batch = j.value("batch", cfg.batch);
    cfg.lr = j.value("lr", cfg.lr);
    cfg.momentum = j.value("momentum", cfg.momentum);
    cfg.width = j.value("width", cfg.width);
    cfg.sum_aggregate = j.value("aggregate", std::string("concat")) == "sum";
    if (j.contains("gumbel")) {
        const json& gj = j["gumbel"];
        cfg.gumbel.tau0 = gj.value("tau0", cfg.gumbel.tau0);
        cfg.gumbel.tau_min = gj.value("tau_min", cfg.gumbel.tau_min);
        cfg.gumbel.anneal_rate = gj.value("anneal_rate", cfg.gumbel.anneal_rate);
    }
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

void run_search(const SearchArgs& a, std::uint64_t seed) {
    json doc;
    try {
        doc = json::parse(read_file(a.task_file));
    } catch (const json::parse_error& e) {
        throw graphon::ValidationError(std::string("task file is not valid JSON: ") + e.what());
    }
    graphon::ToyTaskSpec spec = task_spec_from_json(doc.value("task", json::object()));
    graphon::SearchConfig cfg = search_config_from_json(doc.value("search", json::object()));
    if (!doc.contains("search") || !doc["search"].contains("seed")) cfg.seed = seed;
    if (a.epochs_override > 0) cfg.epochs = a.epochs_override;

    const graphon::ToyTask task = graphon::make_planted_task(spec);
    const graphon::SearchResult result = graphon::train_search(task, task.start, cfg);

    const std::string trace_path = a.out_prefix + ".trace.json";
    const std::string graphon_path = a.out_prefix + ".graphon.json";
    const std::string dag_path = a.out_prefix + ".dag.json";
    const std::string csv_path = a.out_prefix + ".epochs.csv";

    json tj;
    tj["epochs_recorded"] = result.trace.epochs_recorded;
    json mats = json::array();
    for (const graphon::Matrix& m : result.trace.matrices) mats.push_back(matrix_json(m));
    tj["matrices"] = mats;
    tj["average"] = matrix_json(result.trace.average.values);
    tj["final_dag"] = matrix_json(result.final_dag.adj);
    tj["final_val_accuracy"] = result.final_val_accuracy;
    tj["planted"] = matrix_json(task.planted.adj);
    tj["start"] = matrix_json(task.start.adj);
    tj["recovery"] = graphon::planted_recovery(result.final_dag, task.planted);
    write_file(trace_path, tj.dump(2) + "\n");

    graphon::write_graph_file(graphon_path, graphon::to_weighted(result.trace.average));
    graphon::write_graph_file(dag_path, result.final_dag);

    std::ostringstream csv;
    csv << "epoch,loss,val_accuracy,tau\n";
    csv.precision(17);
    for (const graphon::EpochStats& s : result.trace.history)
        csv << s.epoch << ',' << s.loss << ',' << s.val_accuracy << ',' << s.tau << '\n';
    write_file(csv_path, csv.str());

    json params;
    params["task"] = a.task_file;
    params["epochs"] = cfg.epochs;
    write_manifest({"search", params, cfg.seed, {a.task_file},
                    {trace_path, graphon_path, dag_path, csv_path}},
                   a.out_prefix);
    std::cout << "recovery " << tj["recovery"].get<double>() << ", final val accuracy "
              << result.final_val_accuracy << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graphon toolkit: step-function graphons, cut distances, blow-up scaling, "
                 "sampling, and stage-graph search"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 1;
    app.add_option("--seed", seed, "master seed; all randomness derives from it");
    app.add_option("--threads", threads, "worker bound for parallel trials")
        ->check(CLI::PositiveNumber);

    GenArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a model graphon or graph");
    cmd_gen->require_subcommand(1);
    CLI::App* gen_er = cmd_gen->add_subcommand("er", "constant graphon");
    gen_er->add_option("--p", gen.p, "edge probability")->required();
    gen_er->add_option("--n", gen.n, "resolution")->required();
    gen_er->add_option("--out", gen.out, "output graph file")->required();
    CLI::App* gen_ws = cmd_gen->add_subcommand("ws", "ring-band graphon");
    gen_ws->add_option("--kappa", gen.kappa, "neighborhood fraction k/n")->required();
    gen_ws->add_option("--p", gen.p, "replacement probability")->required();
    gen_ws->add_option("--n", gen.n, "resolution")->required();
    gen_ws->add_option("--out", gen.out, "output graph file")->required();
    CLI::App* gen_ba = cmd_gen->add_subcommand("ba", "preferential-attachment DAG sample");
    gen_ba->add_option("--m0", gen.m0, "seed graph size")->required();
    gen_ba->add_option("--m", gen.m, "edges per new node")->required();
    gen_ba->add_option("--n", gen.n, "final node count")->required();
    gen_ba->add_option("--out", gen.out, "output graph file")->required();

    ScaleArgs scale;
    CLI::App* cmd_scale = app.add_subcommand("scale", "scale a graph to N nodes");
    cmd_scale->add_option("--in", scale.in, "input graph file")->required();
    cmd_scale->add_option("--N", scale.target_n, "target node count")->required();
    cmd_scale->add_option("--method", scale.method, "blowup|fractional|interpolate");
    cmd_scale->add_option("--out", scale.out, "output graph file")->required();
    cmd_scale->add_option("--plan", scale.plan_out, "plan output (default <out>.plan.json)");

    SampleArgs sample;
    CLI::App* cmd_sample = app.add_subcommand("sample", "draw 0/1 graphs from a graphon");
    cmd_sample->add_option("--in", sample.in, "input graph file")->required();
    cmd_sample->add_option("--out", sample.out, "output graph file (first trial)")->required();
    cmd_sample->add_option("--N", sample.target_n, "scale to N nodes before sampling");
    cmd_sample->add_option("--trials", sample.trials, "number of samples");
    cmd_sample->add_option("--csv", sample.csv, "per-trial edge-count CSV");

    DistanceArgs dist;
    CLI::App* cmd_dist = app.add_subcommand("distance", "cut-metric family between two graphs");
    cmd_dist->add_option("--a", dist.a, "first graph file")->required();
    cmd_dist->add_option("--b", dist.b, "second graph file")->required();
    cmd_dist->add_option("--mode", dist.mode,
                         "dbox-exact|dbox-heur|deltahat-exact|deltahat-heur|overlay-opt");
    cmd_dist->add_option("--restarts", dist.restarts, "local-search restarts");
    cmd_dist->add_option("--iters", dist.iters, "overlay optimizer iterations");
    cmd_dist->add_option("--out", dist.out, "write the result JSON here too");

    ConcentrationArgs conc;
    CLI::App* cmd_conc = app.add_subcommand("concentration", "sampling concentration report");
    cmd_conc->add_option("--in", conc.in, "input graph file")->required();
    cmd_conc->add_option("--trials", conc.trials, "number of samples");
    cmd_conc->add_option("--out", conc.out, "report JSON output")->required();
    cmd_conc->add_option("--csv", conc.csv, "report CSV output (default <out>.csv)");
    cmd_conc->add_option("--restarts", conc.restarts, "restarts when n is past the exact limit");

    SearchArgs search;
    CLI::App* cmd_search = app.add_subcommand("search", "stage-graph subset search on a toy task");
    cmd_search->add_option("--task", search.task_file, "task + config JSON")->required();
    cmd_search->add_option("--out-prefix", search.out_prefix, "output file prefix")->required();
    cmd_search->add_option("--epochs", search.epochs_override, "override epoch count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_gen->parsed()) {
            gen.model = gen_er->parsed() ? "er" : gen_ws->parsed() ? "ws" : "ba";
            run_gen(gen, seed);
        } else if (cmd_scale->parsed()) {
            run_scale(scale, seed);
        } else if (cmd_sample->parsed()) {
            run_sample(sample, seed);
        } else if (cmd_dist->parsed()) {
            run_distance(dist, seed);
        } else if (cmd_conc->parsed()) {
            run_concentration(conc, seed, threads);
        } else if (cmd_search->parsed()) {
            run_search(search, seed);
        }
    } catch (const graphon::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << std::endl;
        return kExitValidation;
    } catch (const graphon::InfeasibleError& e) {
        std::cerr << "infeasible request: " << e.what() << std::endl;
        return kExitInfeasible;
    } catch (const graphon::DivergenceError& e) {
        std::cerr << "numerical divergence: " << e.what() << std::endl;
        return kExitDivergence;
    }
    return 0;
}
