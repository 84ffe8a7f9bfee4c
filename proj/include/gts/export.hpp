#ifndef GTS_EXPORT_HPP
#define GTS_EXPORT_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gts/json_io.hpp"
#include "gts/store.hpp"

namespace gts {

/// Structured history export: the element-wise id listing, the trace steps
/// feeding the grape, and the graph table. Byte-stable for identical stores.
inline Json history_json(const GraphStore& store, const std::string& grape_name) {
    Grape grape = store.grape(grape_name);
    Json elements = Json::array();
    std::set<GraphId> mentioned;
    for (const auto& ids : store.history(grape_name)) {
        Json row = Json::array();
        for (GraphId id : ids) {
            row.push_back(id);
            mentioned.insert(id);
        }
        elements.push_back(std::move(row));
    }
    Json traces = Json::array();
    for (const DerivationStep& s : store.traces(grape_name))
        traces.push_back(Json{{"rule", s.rule_name},
                              {"input", s.input_graph_id},
                              {"output", s.output_graph_id},
                              {"match", morphism_to_json(s.match)}});
    Json graphs = Json::object();
    for (GraphId id : mentioned) graphs[std::to_string(id)] = graph_to_json(store.graph(id));
    return Json{{"grape", grape_name},
                {"elements", std::move(elements)},
                {"traces", std::move(traces)},
                {"graphs", std::move(graphs)}};
}

/// Graph-of-graphs rendering: one cluster row per grape element, one node
/// per graph id in the row, one edge per derivation step labeled with its
/// rule. Step edges attach to the latest row at or before the consuming row.
inline std::string history_dot(const GraphStore& store, const std::string& grape_name) {
    auto rows = store.history(grape_name);
    auto steps = store.traces(grape_name);

    // first row each id appears in, and all rows per id
    std::map<GraphId, std::size_t> first_row;
    std::map<GraphId, std::vector<std::size_t>> rows_of;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (GraphId id : rows[i]) {
            if (!first_row.count(id)) first_row[id] = i;
            rows_of[id].push_back(i);
        }

    std::ostringstream out;
    out << "digraph history {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box];\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << "  subgraph cluster_" << i << " {\n";
        out << "    label=\"element " << i << "\";\n";
        for (GraphId id : rows[i]) {
            const Graph g = store.graph(id);
            out << "    \"r" << i << "_g" << id << "\" [label=\"g" << id << "\\n"
                << g.node_count() << "n/" << g.edge_count() << "e\"];\n";
        }
        out << "  }\n";
    }
    for (const DerivationStep& s : steps) {
        auto out_it = first_row.find(s.output_graph_id);
        auto in_it = rows_of.find(s.input_graph_id);
        if (out_it == first_row.end() || in_it == rows_of.end()) continue;
        // latest occurrence of the input strictly before the output's row,
        // falling back to the output's own row for same-row provenance
        std::size_t target = out_it->second;
        std::size_t chosen = target;
        bool found = false;
        for (std::size_t row : in_it->second) {
            if (row < target) {
                chosen = row;
                found = true;
            }
        }
        if (!found) {
            for (std::size_t row : in_it->second)
                if (row <= target) {
                    chosen = row;
                    found = true;
                }
        }
        if (!found) continue;
        out << "  \"r" << chosen << "_g" << s.input_graph_id << "\" -> \"r" << out_it->second
            << "_g" << s.output_graph_id << "\" [label=\"" << s.rule_name << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace gts

#endif // GTS_EXPORT_HPP
