#ifndef GTS_STORE_HPP
#define GTS_STORE_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gts/errors.hpp"
#include "gts/grape.hpp"
#include "gts/graph.hpp"
#include "gts/json_io.hpp"
#include "gts/morphism.hpp"
#include "gts/order.hpp"
#include "gts/rule.hpp"

namespace gts {

/// Interning graph store with a certificate index, an append-only derivation
/// log and named grape snapshots. Single writer, concurrent readers.
/// Interning never deduplicates isomorphic graphs — only bit-identical
/// values; the distinct operator decides isomorphism questions.
class GraphStore {
public:
    GraphStore() = default;
    GraphStore(GraphStore&&) = default;
    GraphStore& operator=(GraphStore&&) = default;

    /// Stores the graph and indexes its certificate. Idempotent for
    /// bit-identical values; ids are never reused, even after gc.
    GraphId intern(const Graph& g) {
        std::unique_lock lock(*mu_);
        if (GraphId existing = lookup_value_locked(g)) return existing;
        GraphId id = next_id_++;
        graphs_.emplace(id, g);
        cert_index_[g.certificate()].insert(id);
        value_index_[g.value_hash()[0]].push_back(id);
        return id;
    }

    bool contains(GraphId id) const {
        std::shared_lock lock(*mu_);
        return graphs_.count(id) > 0;
    }

    Graph graph(GraphId id) const {
        std::shared_lock lock(*mu_);
        auto it = graphs_.find(id);
        if (it == graphs_.end()) throw StoreError("unknown graph id: " + std::to_string(id));
        return it->second;
    }

    /// Id under which a bit-identical value is already stored, if any.
    std::optional<GraphId> find_value(const Graph& g) const {
        std::shared_lock lock(*mu_);
        GraphId id = lookup_value_locked(g);
        if (id == 0) return std::nullopt;
        return id;
    }

    std::size_t size() const {
        std::shared_lock lock(*mu_);
        return graphs_.size();
    }

    /// Smallest (under `order`) graph in `scope` isomorphic to g, if any.
    /// Certificate buckets prefilter; exact checks confirm. Candidates are
    /// visited in order, so the first confirmed hit is the smallest and the
    /// expensive exact check usually runs once.
    std::optional<GraphId> find_isomorphic(const Graph& g, const std::set<GraphId>& scope,
                                           const GraphOrder& order) const {
        std::shared_lock lock(*mu_);
        auto bucket = cert_index_.find(g.certificate());
        if (bucket == cert_index_.end()) return std::nullopt;
        std::vector<GraphId> candidates;
        for (GraphId id : bucket->second)
            if (scope.count(id)) candidates.push_back(id);
        std::sort(candidates.begin(), candidates.end(), [&](GraphId a, GraphId b) {
            GraphRef ra{&graphs_.at(a), a};
            GraphRef rb{&graphs_.at(b), b};
            return order.less(ra, rb);
        });
        for (GraphId id : candidates)
            if (isomorphic(graphs_.at(id), g)) return id;
        return std::nullopt;
    }

    /// Appends the step unless an identical one is already logged, so
    /// re-evaluation never duplicates trace entries.
    void log_step(DerivationStep step) {
        std::unique_lock lock(*mu_);
        std::string key = step_key(step);
        if (!step_keys_.insert(std::move(key)).second) return;
        steps_.push_back(std::move(step));
    }

    std::vector<DerivationStep> steps() const {
        std::shared_lock lock(*mu_);
        return steps_;
    }

    void save_grape(const std::string& name, Grape grape) {
        std::unique_lock lock(*mu_);
        for (const GrapeElement& el : grape.elements)
            for (const ConstrainedGraph& cg : el)
                if (!graphs_.count(cg.graph))
                    throw StoreError("grape " + name + " references unknown graph id " +
                                     std::to_string(cg.graph));
        grapes_[name] = std::move(grape);
    }

    bool has_grape(const std::string& name) const {
        std::shared_lock lock(*mu_);
        return grapes_.count(name) > 0;
    }

    Grape grape(const std::string& name) const {
        std::shared_lock lock(*mu_);
        auto it = grapes_.find(name);
        if (it == grapes_.end()) throw UnknownGrapeError(name);
        return it->second;
    }

    std::vector<std::string> grape_names() const {
        std::shared_lock lock(*mu_);
        std::vector<std::string> out;
        for (const auto& [name, g] : grapes_) out.push_back(name);
        return out;
    }

    /// Element-wise id listing of a named grape.
    std::vector<std::vector<GraphId>> history(const std::string& name) const {
        std::shared_lock lock(*mu_);
        auto it = grapes_.find(name);
        if (it == grapes_.end()) throw UnknownGrapeError(name);
        std::vector<std::vector<GraphId>> out;
        for (const GrapeElement& el : it->second.elements) {
            std::set<GraphId> ids;
            for (const ConstrainedGraph& cg : el) ids.insert(cg.graph);
            out.emplace_back(ids.begin(), ids.end());
        }
        return out;
    }

    /// Steps whose output occurs in the named grape, in derivation order.
    std::vector<DerivationStep> traces(const std::string& name) const {
        std::shared_lock lock(*mu_);
        auto it = grapes_.find(name);
        if (it == grapes_.end()) throw UnknownGrapeError(name);
        std::set<GraphId> ids;
        for (const GrapeElement& el : it->second.elements)
            for (const ConstrainedGraph& cg : el) ids.insert(cg.graph);
        std::vector<DerivationStep> out;
        for (const DerivationStep& s : steps_)
            if (ids.count(s.output_graph_id)) out.push_back(s);
        return out;
    }

    /// Removes every graph not reachable from the root grapes' elements or
    /// from the step-trace closure feeding them. Non-root grape snapshots
    /// are dropped (they could otherwise dangle). Returns the removal count.
    std::size_t gc(const std::set<std::string>& roots) {
        std::unique_lock lock(*mu_);
        for (const std::string& name : roots)
            if (!grapes_.count(name)) throw UnknownGrapeError(name);

        std::set<GraphId> keep;
        for (const std::string& name : roots)
            for (const GrapeElement& el : grapes_.at(name).elements)
                for (const ConstrainedGraph& cg : el) keep.insert(cg.graph);

        // trace closure: inputs of steps producing kept graphs are kept
        bool grew = true;
        while (grew) {
            grew = false;
            for (const DerivationStep& s : steps_) {
                if (keep.count(s.output_graph_id) && !keep.count(s.input_graph_id)) {
                    keep.insert(s.input_graph_id);
                    grew = true;
                }
            }
        }

        std::size_t removed = 0;
        for (auto it = graphs_.begin(); it != graphs_.end();) {
            if (keep.count(it->first)) {
                ++it;
                continue;
            }
            const Certificate& cert = it->second.certificate();
            auto bucket = cert_index_.find(cert);
            bucket->second.erase(it->first);
            if (bucket->second.empty()) cert_index_.erase(bucket);
            auto& slot = value_index_[it->second.value_hash()[0]];
            std::erase(slot, it->first);
            if (slot.empty()) value_index_.erase(it->second.value_hash()[0]);
            it = graphs_.erase(it);
            ++removed;
        }

        std::vector<DerivationStep> kept_steps;
        step_keys_.clear();
        for (DerivationStep& s : steps_) {
            if (!keep.count(s.output_graph_id) || !keep.count(s.input_graph_id)) continue;
            step_keys_.insert(step_key(s));
            kept_steps.push_back(std::move(s));
        }
        steps_ = std::move(kept_steps);

        for (auto it = grapes_.begin(); it != grapes_.end();)
            it = roots.count(it->first) ? std::next(it) : grapes_.erase(it);
        return removed;
    }

    /// Verifies the store invariants; writes one line per failure.
    bool audit(std::ostream* report = nullptr) const {
        std::shared_lock lock(*mu_);
        bool ok = true;
        auto fail = [&](const std::string& msg) {
            ok = false;
            if (report) *report << "audit: " << msg << '\n';
        };

        std::size_t indexed = 0;
        for (const auto& [cert, bucket] : cert_index_) {
            indexed += bucket.size();
            for (GraphId id : bucket) {
                auto it = graphs_.find(id);
                if (it == graphs_.end()) {
                    fail("certificate index references missing graph " + std::to_string(id));
                    continue;
                }
                if (it->second.certificate() != cert)
                    fail("graph " + std::to_string(id) + " filed under the wrong certificate");
            }
        }
        if (indexed != graphs_.size()) fail("certificate index does not cover the store exactly");

        for (const auto& [id, g] : graphs_) {
            for (const Edge& e : g.edges()) {
                if (!g.find_node(e.src) || !g.find_node(e.tgt))
                    fail("graph " + std::to_string(id) + " has a dangling edge " + e.id);
            }
            if (lookup_value_locked(g) != id)
                fail("value index does not resolve graph " + std::to_string(id) + " to itself");
            if (id >= next_id_) fail("graph id " + std::to_string(id) + " at or above next id");
        }

        for (const DerivationStep& s : steps_) {
            if (!graphs_.count(s.input_graph_id) || !graphs_.count(s.output_graph_id))
                fail("step for rule " + s.rule_name + " references a missing graph");
        }

        for (const auto& [name, grape] : grapes_) {
            if (grape.elements.empty()) fail("grape " + name + " has an empty element sequence");
            for (const GrapeElement& el : grape.elements)
                for (const ConstrainedGraph& cg : el)
                    if (!graphs_.count(cg.graph))
                        fail("grape " + name + " references missing graph " +
                             std::to_string(cg.graph));
        }
        return ok;
    }

    /// JSON-lines snapshot: header, graphs by id, steps in log order, grapes
    /// by name. Byte-stable for equal store contents; written to a temp file
    /// and renamed into place.
    void save_snapshot(const std::filesystem::path& path) const {
        std::shared_lock lock(*mu_);
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw StoreError("cannot write snapshot: " + tmp.string());
            out << Json{{"format", "gts-store"}, {"version", 1}, {"next_id", next_id_}}.dump()
                << '\n';
            for (const auto& [id, g] : graphs_)
                out << Json{{"type", "graph"}, {"id", id}, {"graph", graph_to_json(g)}}.dump()
                    << '\n';
            for (const DerivationStep& s : steps_)
                out << Json{{"type", "step"},
                            {"rule", s.rule_name},
                            {"input", s.input_graph_id},
                            {"output", s.output_graph_id},
                            {"match", morphism_to_json(s.match)}}
                           .dump()
                    << '\n';
            for (const auto& [name, grape] : grapes_)
                out << Json{{"type", "grape"}, {"name", name}, {"elements", grape_to_json(grape)}}
                           .dump()
                    << '\n';
            if (!out.good()) throw StoreError("short write on snapshot: " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    static GraphStore load_snapshot(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw StoreError("cannot read snapshot: " + path.string());
        GraphStore store;
        std::string line;
        if (!std::getline(in, line)) throw StoreError("empty snapshot: " + path.string());
        Json header = parse_line(line, path);
        if (header.value("format", "") != "gts-store" || header.value("version", 0) != 1)
            throw StoreError("unsupported snapshot header: " + path.string());
        store.next_id_ = header.at("next_id").get<GraphId>();

        std::vector<std::pair<std::string, Grape>> pending_grapes;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            Json j = parse_line(line, path);
            const std::string type = j.value("type", "");
            if (type == "graph") {
                GraphId id = j.at("id").get<GraphId>();
                Graph g = graph_from_json(j.at("graph"));
                if (id >= store.next_id_ || store.graphs_.count(id))
                    throw StoreError("snapshot graph id out of range: " + std::to_string(id));
                store.graphs_.emplace(id, g);
                store.cert_index_[g.certificate()].insert(id);
                store.value_index_[g.value_hash()[0]].push_back(id);
            } else if (type == "step") {
                DerivationStep s;
                s.rule_name = j.at("rule").get<std::string>();
                s.input_graph_id = j.at("input").get<GraphId>();
                s.output_graph_id = j.at("output").get<GraphId>();
                s.match = morphism_from_json(j.at("match"));
                store.step_keys_.insert(step_key(s));
                store.steps_.push_back(std::move(s));
            } else if (type == "grape") {
                pending_grapes.emplace_back(j.at("name").get<std::string>(),
                                            grape_from_json(j.at("elements")));
            } else {
                throw StoreError("unknown snapshot record type: " + type);
            }
        }
        for (auto& [name, grape] : pending_grapes) {
            for (const GrapeElement& el : grape.elements)
                for (const ConstrainedGraph& cg : el)
                    if (!store.graphs_.count(cg.graph))
                        throw StoreError("snapshot grape " + name + " references missing graph");
            store.grapes_.emplace(std::move(name), std::move(grape));
        }
        return store;
    }

private:
    static Json parse_line(const std::string& line, const std::filesystem::path& path) {
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) throw StoreError("corrupt snapshot line in " + path.string());
        return j;
    }

    static std::string step_key(const DerivationStep& s) {
        return s.rule_name + "\x1f" + std::to_string(s.input_graph_id) + "\x1f" +
               std::to_string(s.output_graph_id) + "\x1f" + detail::encode_match(s.match);
    }

    /// 0 when absent (0 is never a valid id).
    GraphId lookup_value_locked(const Graph& g) const {
        auto it = value_index_.find(g.value_hash()[0]);
        if (it == value_index_.end()) return 0;
        for (GraphId id : it->second)
            if (graphs_.at(id) == g) return id;
        return 0;
    }

    std::unique_ptr<std::shared_mutex> mu_ = std::make_unique<std::shared_mutex>();
    std::map<GraphId, Graph> graphs_;
    std::map<Certificate, std::set<GraphId>> cert_index_;
    std::unordered_map<std::uint64_t, std::vector<GraphId>> value_index_;
    std::vector<DerivationStep> steps_;
    std::unordered_set<std::string> step_keys_;
    std::map<std::string, Grape> grapes_;
    GraphId next_id_ = 1;
};

} // namespace gts

#endif // GTS_STORE_HPP
