#include "pathdep/model_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "pathdep/error.hpp"

namespace pathdep {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view tok, std::size_t line) {
    double v = 0;
    if (tok.size() > 1 && tok[0] == '+') tok.remove_prefix(1);
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end) parse_error(line, "'" + std::string(tok) + "' is not a number");
    return v;
}

struct EdgeLine {
    std::string parent, child;
    double coefficient;
    std::size_t line;
};

}  // namespace

Model parse_model(std::string_view text) {
    std::vector<std::string> names;
    std::map<std::string, std::size_t, std::less<>> declared;  // name -> line
    std::vector<EdgeLine> edges;
    std::vector<std::pair<std::string, double>> vars;
    std::map<std::string, std::size_t, std::less<>> var_line;
    std::vector<std::pair<std::string, std::size_t>> var_refs;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tok = tokenize(line);
        if (tok.empty()) continue;

        if (tok[0] == "node") {
            if (tok.size() != 2) parse_error(line_no, "expected 'node <name>'");
            const std::string name(tok[1]);
            if (!is_valid_vertex_name(name)) parse_error(line_no, "invalid vertex name '" + name + "'");
            if (auto it = declared.find(name); it != declared.end()) {
                fail(ErrorCode::DuplicateVertex, "line " + std::to_string(line_no) + ": vertex '" + name +
                                                     "' already declared on line " + std::to_string(it->second));
            }
            declared.emplace(name, line_no);
            names.push_back(name);
        } else if (tok[0] == "edge") {
            if (tok.size() != 5 || tok[2] != "->") parse_error(line_no, "expected 'edge <parent> -> <child> <coeff>'");
            edges.push_back({std::string(tok[1]), std::string(tok[3]), parse_number(tok[4], line_no), line_no});
        } else if (tok[0] == "var") {
            if (tok.size() != 3) parse_error(line_no, "expected 'var <name> <tau2>'");
            const std::string name(tok[1]);
            if (var_line.contains(name)) parse_error(line_no, "second var line for '" + name + "'");
            var_line.emplace(name, line_no);
            vars.emplace_back(name, parse_number(tok[2], line_no));
            var_refs.emplace_back(name, line_no);
        } else {
            parse_error(line_no, "unknown directive '" + std::string(tok[0]) + "'");
        }
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const EdgeLine& e : edges) {
        for (const std::string* n : {&e.parent, &e.child}) {
            if (!declared.contains(*n)) parse_error(e.line, "edge uses undeclared vertex '" + *n + "'");
        }
        if (!seen_edges.emplace(e.parent, e.child).second) {
            parse_error(e.line, "edge " + e.parent + " -> " + e.child + " declared twice");
        }
    }
    for (const auto& [name, line] : var_refs) {
        if (!declared.contains(name)) parse_error(line, "var for undeclared vertex '" + name + "'");
    }
    for (const std::string& n : names) {
        if (!var_line.contains(n)) {
            parse_error(declared.find(n)->second, "vertex '" + n + "' has no var line");
        }
    }

    std::vector<std::pair<std::string, std::string>> edge_names;
    for (const EdgeLine& e : edges) edge_names.emplace_back(e.parent, e.child);
    Dag dag = Dag::build(names, edge_names);
    GaussianParams params;
    for (const EdgeLine& e : edges) params.set_coefficient(dag.at(e.parent), dag.at(e.child), e.coefficient);
    for (const auto& [name, tau] : vars) params.set_noise_variance(dag.at(name), tau);
    params.validate(dag);
    return Model{std::move(dag), std::move(params)};
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::ParseError, "cannot read model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string serialize_model(const Dag& dag, const GaussianParams& params) {
    std::string out;
    for (Vertex v : dag.vertices()) out += "node " + dag.name(v) + "\n";
    for (const Edge& e : dag.edges()) {
        out += "edge " + dag.name(e.parent) + " -> " + dag.name(e.child) + " " +
               format_double(params.coefficient_at(e.parent, e.child)) + "\n";
    }
    for (Vertex v : dag.vertices()) out += "var " + dag.name(v) + " " + format_double(params.noise_variance_at(v)) + "\n";
    return out;
}

}  // namespace pathdep
