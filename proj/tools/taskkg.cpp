// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/api.hpp"
#include "taskkg/ingest.hpp"
#include "taskkg/kg_io.hpp"
#include "taskkg/match.hpp"
#include "taskkg/pipeline.hpp"
#include "taskkg/service.hpp"

#include <CLI11.hpp>
#include <csignal>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <pthread.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace taskkg;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kValidation = 3;
constexpr int kEnvironment = 4;

struct Exit {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Exit{kUsage, "cannot read " + path};
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Exit{kUsage, "cannot write " + path.string()};
}

KnowledgeGraph read_graph(const std::string& path) {
    if (!fs::exists(path))
        throw Exit{kUsage, "KG file not found: " + path};
    try {
        return load_graph(path);
    } catch (const GraphValidationError& e) {
        throw Exit{kValidation, e.what()};
    } catch (const std::exception& e) {
        throw Exit{kUsage, e.what()};
    }
}

std::optional<ApiDictionary> read_dictionary(const std::string& path) {
    if (path.empty())
        return std::nullopt;
    if (!fs::exists(path))
        throw Exit{kUsage, "API dictionary not found: " + path};
    std::vector<DictionaryDiagnostic> diags;
    auto dict = load_dictionary(path, &diags);
    for (const auto& d : diags)
        spdlog::warn("{}:{}: {}", path, d.line, d.message);
    return dict;
}

MatchConfig parse_config(const std::string& text, int top) {
    try {
        auto c = MatchConfig::parse(text);
        c.top_n = top;
        c.check();
        return c;
    } catch (const ConfigError& e) {
        throw Exit{kUsage, e.what()};
    }
}

struct BuildArgs {
    std::string corpus, dict, ingest_config, pattern_config, out, manifest, corpus_id;
};

int cmd_build(const BuildArgs& a) {
    if (!fs::is_directory(a.corpus))
        throw Exit{kUsage, "corpus directory not found: " + a.corpus};
    BuildOptions opt;
    try {
        if (!a.ingest_config.empty())
            opt.ingest = IngestConfig::load(a.ingest_config);
        if (!a.pattern_config.empty())
            opt.patterns = PatternConfig::load(a.pattern_config);
    } catch (const std::exception& e) {
        throw Exit{kUsage, e.what()};
    }
    auto dict = read_dictionary(a.dict);
    if (dict)
        opt.dictionary = &*dict;
    opt.corpus_id = a.corpus_id.empty() ? fs::path(a.corpus).lexically_normal().filename().string() : a.corpus_id;
    if (opt.corpus_id.empty())
        opt.corpus_id = fs::path(a.corpus).lexically_normal().parent_path().filename().string();
    opt.created = corpus_timestamp(a.corpus);

    auto docs = load_corpus(a.corpus, opt.ingest);
    spdlog::info("ingested {} pages from {}", docs.size(), a.corpus);
    auto graph = build_graph(docs, opt);
    auto report = validate(graph);
    if (!report.empty()) {
        for (const auto& v : report)
            std::cerr << "violation " << v.rule << ": " << v.detail << "\n";
        throw Exit{kValidation, fmt::format("{} validation violations", report.size())};
    }
    if (fs::path(a.out).has_parent_path())
        fs::create_directories(fs::path(a.out).parent_path());
    save_graph(graph, a.out);

    BuildManifest m;
    m.corpus_dir = a.corpus;
    m.api_dict_path = a.dict;
    m.ingest_config_path = a.ingest_config;
    m.pattern_config_path = a.pattern_config;
    m.output_path = a.out;
    m.counts = graph.recount();
    auto manifest = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
    write_file(manifest, m.to_json().dump(2) + "\n");
    std::cout << m.to_json()["counts"].dump(2) << "\n";
    spdlog::info("wrote {} and {}", a.out, manifest);
    return kOk;
}

std::vector<TutorialDocument> read_corpus(const std::string& dir, const std::string& ingest_config) {
    IngestConfig cfg;
    if (!ingest_config.empty())
        cfg = IngestConfig::load(ingest_config);
    return load_corpus(dir, cfg);
}

struct SearchArgs {
    std::string kg, code_file, config = "A-B-U", dict, corpus, ingest_config;
    std::vector<std::string> select;
    int top = 3;
    bool json_out = false;
};

int cmd_search(const SearchArgs& a) {
    if (a.code_file.empty() && a.select.empty())
        throw Exit{kUsage, "search needs --code FILE or --select API..."};
    auto config = parse_config(a.config, a.top);
    auto graph = read_graph(a.kg);
    auto dict = read_dictionary(a.dict);
    std::optional<std::vector<TutorialDocument>> docs;
    if (!a.corpus.empty()) {
        if (!fs::is_directory(a.corpus))
            throw Exit{kUsage, "corpus directory not found: " + a.corpus};
        docs = read_corpus(a.corpus, a.ingest_config);
    }
    Recommender rec(make_service_data(std::move(graph), std::move(dict), docs ? &*docs : nullptr));
    json request{{"config", config.code()}, {"top_n", config.top_n}};
    if (!a.select.empty())
        request["selection"] = a.select;
    else
        request["code"] = read_file(a.code_file);
    json response;
    try {
        response = rec.recommend(request);
    } catch (const RequestError& e) {
        throw Exit{kUsage, e.what()};
    }
    if (a.json_out) {
        std::cout << response.dump(2) << "\n";
        return kOk;
    }
    for (const auto& r : response["recommendations"]) {
        std::string matched;
        for (const auto& m : r["matched_apis"])
            matched += (matched.empty() ? "" : ",") + m.get<std::string>();
        std::string label = r["label"].is_null() ? "-" : r["label"].get<std::string>();
        std::cout << fmt::format("{}\t{:.4f}\t{}\t{}\t{}\n", r["rank"].get<int>(), r["score"].get<double>(), label,
                                 r["snippet_id"].get<std::string>(), matched);
    }
    return kOk;
}

struct EvalArgs {
    std::string kg, queries, config = "all", dict;
    int top = 3;
    bool json_out = false;
};

std::string rational_text(const Rational& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator())
                                : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int cmd_eval(const EvalArgs& a) {
    std::vector<MatchConfig> configs;
    if (a.config == "all") {
        configs = MatchConfig::all();
        for (auto& c : configs)
            c.top_n = a.top;
    } else {
        configs.push_back(parse_config(a.config, a.top));
    }
    auto graph = read_graph(a.kg);
    auto dict = read_dictionary(a.dict);
    const auto effective = dict ? std::move(*dict) : ApiDictionary::from_graph(graph);
    std::vector<LabeledQuery> queries;
    try {
        queries = load_queries(a.queries);
    } catch (const QueryRecordError& e) {
        throw Exit{kUsage, e.what()};
    } catch (const std::exception& e) {
        throw Exit{kUsage, e.what()};
    }
    json rows = json::array();
    if (!a.json_out)
        std::cout << fmt::format("{:<8}{:>8}{:>8}{:>8}{:>8}\n", "config", "Acc", "Pre", "Rec", "F1");
    for (const auto& c : configs) {
        Metrics m;
        try {
            m = evaluate(queries, graph, effective, c);
        } catch (const QueryRecordError& e) {
            throw Exit{kUsage, e.what()};
        }
        if (a.json_out) {
            rows.push_back(json{{"config", c.code()},
                                {"queries", m.queries},
                                {"accuracy", rational_text(m.accuracy)},
                                {"precision", rational_text(m.precision)},
                                {"recall", rational_text(m.recall)},
                                {"f1", rational_text(m.f1)}});
        } else {
            std::cout << fmt::format("{:<8}{:>8.4f}{:>8.4f}{:>8.4f}{:>8.4f}\n", c.code(), to_double(m.accuracy),
                                     to_double(m.precision), to_double(m.recall), to_double(m.f1));
        }
    }
    if (a.json_out)
        std::cout << rows.dump(2) << "\n";
    return kOk;
}

struct ServeArgs {
    std::string kg, corpus, dict, host = "127.0.0.1", ingest_config;
    int port = 8080;
};

int cmd_serve(const ServeArgs& a) {
    auto graph = read_graph(a.kg);
    auto dict = read_dictionary(a.dict);
    std::optional<std::vector<TutorialDocument>> docs;
    if (!a.corpus.empty() && fs::is_directory(a.corpus))
        docs = read_corpus(a.corpus, a.ingest_config);
    else
        spdlog::warn("corpus {} not available; excerpts are degraded", a.corpus.empty() ? "(none)" : a.corpus);
    Recommender rec(make_service_data(std::move(graph), std::move(dict), docs ? &*docs : nullptr));

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    HttpServer server(rec);
    int port = server.bind(a.host, a.port);
    if (port < 0)
        throw Exit{kEnvironment, fmt::format("cannot bind {}:{}", a.host, a.port)};
    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        spdlog::info("signal {}, stopping", sig);
        server.stop();
    });
    waiter.detach();
    spdlog::info("listening on http://{}:{}", a.host, port);
    std::cout << "listening on http://" << a.host << ":" << port << std::endl;
    server.listen();
    return kOk;
}

int cmd_stats(const std::string& kg) {
    auto graph = read_graph(kg);
    std::cout << counts_to_json(graph.recount()).dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_st("taskkg"));

    CLI::App app{"Task knowledge graph: build, search, evaluate, serve"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

    BuildArgs ba;
    auto* build = app.add_subcommand("build", "Build a KG from an HTML tutorial corpus");
    build->add_option("--corpus", ba.corpus, "Corpus directory")->required();
    build->add_option("--dict", ba.dict, "API dictionary (JSON lines)")->required();
    build->add_option("--ingest-config", ba.ingest_config, "Ingest config JSON");
    build->add_option("--pattern-config", ba.pattern_config, "Pattern config JSON");
    build->add_option("--out", ba.out, "Output KG file")->required();
    build->add_option("--manifest", ba.manifest, "Manifest path (default <out>.manifest.json)");
    build->add_option("--corpus-id", ba.corpus_id, "Corpus id (default: directory name)");

    SearchArgs sa;
    auto* search = app.add_subcommand("search", "Recommend actions for code or selected APIs");
    search->add_option("--kg", sa.kg, "KG file")->required();
    auto* code_opt = search->add_option("--code", sa.code_file, "File holding the query code");
    auto* sel_opt = search->add_option("--select", sa.select, "Selected API names (key API input)");
    code_opt->excludes(sel_opt);
    search->add_option("--config", sa.config, "Matching setting, e.g. A-B-U");
    search->add_option("--top", sa.top, "Number of results");
    search->add_option("--dict", sa.dict, "API dictionary (default: derived from the KG)");
    search->add_option("--corpus", sa.corpus, "Corpus directory for excerpts");
    search->add_option("--ingest-config", sa.ingest_config, "Ingest config JSON");
    search->add_flag("--json", sa.json_out, "Machine-readable output");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Top-k accuracy, precision, recall, F1 over labeled queries");
    eval->add_option("--kg", ea.kg, "KG file")->required();
    eval->add_option("--queries", ea.queries, "Query records (JSON lines)")->required();
    eval->add_option("--config", ea.config, "Matching setting or 'all'");
    eval->add_option("--top", ea.top, "k for top-k metrics");
    eval->add_option("--dict", ea.dict, "API dictionary (default: derived from the KG)");
    eval->add_flag("--json", ea.json_out, "Exact rational output");

    ServeArgs va;
    auto* serve = app.add_subcommand("serve", "Serve the recommendation API and UI");
    serve->add_option("--kg", va.kg, "KG file")->required();
    serve->add_option("--corpus", va.corpus, "Corpus directory for excerpts");
    serve->add_option("--port", va.port, "Port (0 picks a free one)");
    serve->add_option("--host", va.host, "Bind address");
    serve->add_option("--dict", va.dict, "API dictionary (default: derived from the KG)");
    serve->add_option("--ingest-config", va.ingest_config, "Ingest config JSON");

    std::string stats_kg;
    auto* stats = app.add_subcommand("stats", "Print KG counts");
    stats->add_option("--kg", stats_kg, "KG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (quiet)
        spdlog::set_level(spdlog::level::warn);

    try {
        if (*build)
            return cmd_build(ba);
        if (*search)
            return cmd_search(sa);
        if (*eval)
            return cmd_eval(ea);
        if (*serve)
            return cmd_serve(va);
        if (*stats)
            return cmd_stats(stats_kg);
    } catch (const Exit& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
