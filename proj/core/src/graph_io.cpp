#include "graphon/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, int n) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ValidationError("matrix must have n rows");
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ValidationError("matrix row length != n");
        for (int jcol = 0; jcol < n; ++jcol) m(i, jcol) = row.at(jcol).get<double>();
    }
    return m;
}

json header(const char* kind, int n) {
    json j;
    j["version"] = 1;
    j["kind"] = kind;
    j["n"] = n;
    return j;
}

}  // namespace

std::string to_json_string(const WeightedGraph& g) {
    json j = header("weighted", g.size());
    j["alpha"] = g.alpha;
    j["beta"] = matrix_to_json(g.beta);
    j["symmetric"] = g.symmetric;
    return j.dump(2);
}

std::string to_json_string(const DagGraph& d) {
    json j = header("dag", d.size());
    j["adj"] = matrix_to_json(d.adj);
    return j.dump(2);
}

std::string to_json_string(const Digraphon& d) {
    json j = header("digraphon", d.resolution());
    j["W00"] = matrix_to_json(d.w00);
    j["W01"] = matrix_to_json(d.w01);
    j["W10"] = matrix_to_json(d.w10);
    j["W11"] = matrix_to_json(d.w11);
    j["w"] = d.self_loop;
    return j.dump(2);
}

std::string to_json_string(const GraphFile& f) {
    return std::visit([](const auto& g) { return to_json_string(g); }, f);
}

GraphFile graph_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("graph file is not valid JSON: ") + e.what());
    }
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw ValidationError("graph file missing integer \"version\"");
    if (j["version"].get<int>() != 1)
        throw ValidationError("unknown graph file version " + j["version"].dump());
    const std::string kind = j.value("kind", "");
    const int n = j.value("n", 0);
    if (n <= 0) throw ValidationError("graph file missing positive \"n\"");

    if (kind == "weighted") {
        WeightedGraph g;
        g.alpha = j.at("alpha").get<std::vector<double>>();
        if (static_cast<int>(g.alpha.size()) != n)
            throw ValidationError("alpha length != n");
        g.beta = matrix_from_json(j.at("beta"), n);
        g.symmetric = j.value("symmetric", g.beta.is_symmetric());
        require_valid(g);
        return g;
    }
    if (kind == "dag") {
        DagGraph d{matrix_from_json(j.at("adj"), n)};
        require_valid(d);
        return d;
    }
    if (kind == "digraphon") {
        Digraphon d;
        d.w00 = matrix_from_json(j.at("W00"), n);
        d.w01 = matrix_from_json(j.at("W01"), n);
        d.w10 = matrix_from_json(j.at("W10"), n);
        d.w11 = matrix_from_json(j.at("W11"), n);
        d.self_loop = j.at("w").get<std::vector<double>>();
        require_valid(d);
        return d;
    }
    throw ValidationError("unknown graph kind \"" + kind + "\"");
}

void write_graph_file(const std::string& path, const GraphFile& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InfeasibleError("cannot open for writing: " + path);
    out << to_json_string(f) << '\n';
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InfeasibleError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_json_string(buf.str());
}

WeightedGraph read_weighted(const std::string& path) {
    GraphFile f = read_graph_file(path);
    if (const auto* g = std::get_if<WeightedGraph>(&f)) return *g;
    throw ValidationError("expected a weighted graph file: " + path);
}

DagGraph read_dag(const std::string& path) {
    GraphFile f = read_graph_file(path);
    if (const auto* d = std::get_if<DagGraph>(&f)) return *d;
    throw ValidationError("expected a dag graph file: " + path);
}

WeightedGraph as_weighted(const GraphFile& f) {
    if (const auto* g = std::get_if<WeightedGraph>(&f)) return *g;
    if (const auto* d = std::get_if<DagGraph>(&f)) return dag_to_weighted(*d);
    throw ValidationError("digraphon cannot be viewed as a weighted graph");
}

}  // namespace graphon
