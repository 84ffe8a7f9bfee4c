#ifndef GTS_CLI_HPP
#define GTS_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gts/dsl.hpp"
#include "gts/eval.hpp"
#include "gts/export.hpp"
#include "gts/store.hpp"

namespace gts::cli {

/// Exit code taxonomy. Every failure path maps to exactly one code.
enum ExitCode : int {
    kOk = 0,
    kError = 1,       // i/o, store corruption, failed audit, internal
    kParseError = 2,  // syntax or arity error in a .gts file or usage
    kResolveError = 3,// unknown rule/constraint/program/order/grape
    kDivergence = 4,  // loop/search iteration cap exceeded
    kEmptyResult = 5, // run finished with an empty final element (failed search)
};

struct RunConfig {
    std::string gts_path;
    std::string program;
    std::size_t max_iterations = 10000;
    std::string order = "nodes-asc";
    std::optional<std::string> store_path;
    std::optional<std::string> seed_grape;
    std::string format = "ids"; // ids | json | dot
};

namespace detail {

inline GraphStore open_store(const std::optional<std::string>& path) {
    if (path && std::filesystem::exists(*path)) return GraphStore::load_snapshot(*path);
    return GraphStore();
}

inline std::optional<std::string> store_path_or_env(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("GTS_STORE"); env && *env) return std::string(env);
    return std::nullopt;
}

} // namespace detail

inline int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const OrderRegistry& orders = default_order_registry();
        orders.get(config.order); // validate before any store writes
        GtsDocument doc = load_gts_file(config.gts_path, orders);
        if (!doc.has_program(config.program)) {
            err << "error: unknown program: " << config.program << '\n';
            return kResolveError;
        }
        GraphStore store = detail::open_store(config.store_path);
        EvalConfig eval_config;
        eval_config.max_iterations = config.max_iterations;
        eval_config.default_order = config.order;
        Evaluator evaluator(store, doc, orders, eval_config);

        Grape seed = config.seed_grape ? store.grape(*config.seed_grape) : evaluator.star();
        Grape result = evaluator.eval(doc.program(config.program), seed);
        store.save_grape(config.program, result);
        if (config.store_path) store.save_snapshot(*config.store_path);

        if (config.format == "ids") {
            const auto rows = store.history(config.program);
            for (GraphId id : rows.back()) out << id << '\n';
        } else if (config.format == "json") {
            Json last = Json::array();
            for (const ConstrainedGraph& cg : result.last()) {
                Json names = Json::array();
                for (const std::string& k : cg.constraints) names.push_back(k);
                last.push_back(Json{{"id", cg.graph},
                                    {"constraints", std::move(names)},
                                    {"graph", graph_to_json(store.graph(cg.graph))}});
            }
            out << Json{{"program", config.program},
                        {"length", result.length()},
                        {"last", std::move(last)}}
                       .dump(2)
                << '\n';
        } else if (config.format == "dot") {
            out << history_dot(store, config.program);
        } else {
            err << "error: unknown format: " << config.format << '\n';
            return kParseError;
        }

        if (result.last().empty()) {
            err << "search failed: final element is empty\n";
            return kEmptyResult;
        }
        return kOk;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const ResolveError& e) {
        err << "error: " << e.what() << '\n';
        return kResolveError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

inline int export_command(const std::optional<std::string>& store_path, const std::string& grape,
                          const std::string& format, std::ostream& out, std::ostream& err) {
    try {
        if (!store_path) {
            err << "error: no store given (use --store or GTS_STORE)\n";
            return kError;
        }
        GraphStore store = GraphStore::load_snapshot(*store_path);
        if (format == "dot") {
            out << history_dot(store, grape);
        } else if (format == "json") {
            out << history_json(store, grape).dump(2) << '\n';
        } else {
            err << "error: unknown format: " << format << '\n';
            return kParseError;
        }
        return kOk;
    } catch (const ResolveError& e) {
        err << "error: " << e.what() << '\n';
        return kResolveError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

inline int audit_command(const std::optional<std::string>& store_path, std::ostream& out,
                         std::ostream& err) {
    try {
        if (!store_path) {
            err << "error: no store given (use --store or GTS_STORE)\n";
            return kError;
        }
        GraphStore store = GraphStore::load_snapshot(*store_path);
        if (store.audit(&err)) {
            out << "audit ok: " << store.size() << " graphs, " << store.steps().size()
                << " steps, " << store.grape_names().size() << " grapes\n";
            return kOk;
        }
        return kError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

inline int gc_command(const std::optional<std::string>& store_path,
                      const std::vector<std::string>& roots, std::ostream& out,
                      std::ostream& err) {
    try {
        if (!store_path) {
            err << "error: no store given (use --store or GTS_STORE)\n";
            return kError;
        }
        GraphStore store = GraphStore::load_snapshot(*store_path);
        std::size_t removed = store.gc(std::set<std::string>(roots.begin(), roots.end()));
        store.save_snapshot(*store_path);
        out << "removed " << removed << " graphs; " << store.size() << " remain\n";
        return kOk;
    } catch (const ResolveError& e) {
        err << "error: " << e.what() << '\n';
        return kResolveError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"graph transformation programs over grape histories"};
    app.require_subcommand(1);

    RunConfig run_config;
    std::string store_flag;
    CLI::App* run = app.add_subcommand("run", "load a .gts file and evaluate a program");
    run->add_option("file", run_config.gts_path, "path to the .gts document")->required();
    run->add_option("--program", run_config.program, "program name to evaluate")->required();
    run->add_option("--max-iterations", run_config.max_iterations,
                    "iteration cap for loop and search")
        ->check(CLI::PositiveNumber);
    run->add_option("--order", run_config.order, "default graph order (distinct tie-breaks)");
    run->add_option("--store", store_flag, "store snapshot to load and update")
        ->envname("GTS_STORE");
    std::string seed_flag;
    run->add_option("--seed-grape", seed_flag, "start from this stored grape instead of the unit");
    run->add_option("--format", run_config.format, "report format: ids, json or dot")
        ->check(CLI::IsMember({"ids", "json", "dot"}));

    std::string export_grape, export_format = "dot", export_store;
    CLI::App* exp = app.add_subcommand("export", "export a stored grape's history");
    exp->add_option("grape", export_grape, "grape name")->required();
    exp->add_option("--format", export_format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));
    exp->add_option("--store", export_store, "store snapshot to read")->envname("GTS_STORE");

    std::string audit_store;
    CLI::App* audit = app.add_subcommand("audit", "verify store invariants");
    audit->add_option("--store", audit_store, "store snapshot to read")->envname("GTS_STORE");

    std::string gc_store;
    std::vector<std::string> gc_roots;
    CLI::App* gc = app.add_subcommand("gc", "remove graphs unreachable from the root grapes");
    gc->add_option("roots", gc_roots, "grape names to keep (none removes everything)");
    gc->add_option("--store", gc_store, "store snapshot to update")->envname("GTS_STORE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kParseError;
    }

    if (run->parsed()) {
        run_config.store_path = detail::store_path_or_env(store_flag);
        if (!seed_flag.empty()) run_config.seed_grape = seed_flag;
        return run_command(run_config, out, err);
    }
    if (exp->parsed())
        return export_command(detail::store_path_or_env(export_store), export_grape, export_format,
                              out, err);
    if (audit->parsed()) return audit_command(detail::store_path_or_env(audit_store), out, err);
    return gc_command(detail::store_path_or_env(gc_store), gc_roots, out, err);
}

inline int main(int argc, char** argv) { return main(argc, argv, std::cout, std::cerr); }

} // namespace gts::cli

#endif // GTS_CLI_HPP
