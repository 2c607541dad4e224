#pragma once

#include <grovetree/tree.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace grovetree {

/// {"n": int, "edges": [[u, v], ...]}
inline nlohmann::json tree_to_json(const Tree& tree) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : tree.edges()) edges.push_back({e.u, e.v});
    return {{"n", tree.size()}, {"edges", std::move(edges)}};
}

inline Tree tree_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw InvalidArgument("tree JSON needs fields \"n\" and \"edges\"");
    if (!j.at("n").is_number_unsigned() && !(j.at("n").is_number_integer() && j.at("n").get<long long>() >= 0))
        throw InvalidArgument("tree JSON field \"n\" must be a nonnegative integer");
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& pair : j.at("edges")) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
            throw InvalidArgument("each edge must be a [u, v] pair of integers");
        const auto u = pair[0].get<long long>();
        const auto v = pair[1].get<long long>();
        if (u < 0 || v < 0) throw InvalidArgument("negative vertex id");
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
    return Tree::from_edges(n, std::move(edges));
}

/// Plain-text edge list: a "# n=<count>" header then one "u v" pair per line.
inline std::string tree_to_edge_list(const Tree& tree) {
    std::ostringstream out;
    out << "# n=" << tree.size() << '\n';
    for (const auto& e : tree.edges()) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

/// Parses an edge list. Lines starting with '#' are comments, except that a
/// "# n=<count>" comment fixes the vertex count; without it n = max id + 1.
inline Tree tree_from_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    long long declared_n = -1;
    long long max_id = -1;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            const auto key = line.find("n=", first);
            if (key != std::string::npos) {
                std::istringstream value(line.substr(key + 2));
                if (!(value >> declared_n) || declared_n < 1)
                    throw InvalidArgument("bad vertex-count header on line " + std::to_string(line_no));
            }
            continue;
        }
        std::istringstream fields(line);
        long long u = -1;
        long long v = -1;
        std::string extra;
        if (!(fields >> u >> v) || (fields >> extra && extra[0] != '#') || u < 0 || v < 0)
            throw InvalidArgument("malformed edge on line " + std::to_string(line_no));
        max_id = std::max({max_id, u, v});
        edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    }
    const long long n = declared_n > 0 ? declared_n : max_id + 1 > 0 ? max_id + 1 : 1;
    return Tree::from_edges(static_cast<std::size_t>(n), std::move(edges));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Loads a tree from a .json file or from an edge list (any other extension).
inline Tree load_tree(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        try {
            return tree_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("invalid tree JSON in " + path + ": " + e.what());
        }
    }
    return tree_from_edge_list(text);
}

}  // namespace grovetree
