// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/pipeline.hpp"

#include "taskkg/page.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <nlohmann/json.hpp>

namespace taskkg {

KnowledgeGraph build_graph(const std::vector<TutorialDocument>& docs, const BuildOptions& options) {
    const PosTagger& tagger = options.tagger ? *options.tagger : default_tagger();
    std::unique_ptr<ActivityClassifier> owned_classifier;
    const ActivityClassifier* classifier = options.classifier;
    if (!classifier) {
        owned_classifier = make_classifier(options.patterns.classifier, options.patterns, tagger);
        classifier = owned_classifier.get();
    }
    JaccardDuplicateDetector jaccard(options.patterns);
    const DuplicateDetector& detector = options.detector ? *options.detector : jaccard;

    ExtractionContext ctx;
    ctx.ingest = &options.ingest;
    ctx.patterns = &options.patterns;
    ctx.tagger = &tagger;
    ctx.classifier = classifier;
    ctx.dictionary = options.dictionary;

    KnowledgeGraph g;
    g.meta.corpus_id = options.corpus_id;
    g.meta.created = options.created;
    for (const auto& doc : docs) {
        auto page = extract_page(doc, ctx);
        link_code(page);
        auto hierarchy = build_hierarchy(page);
        auto follow = build_precede_follow(page);
        auto siblings = build_descriptive_siblings(page);
        for (auto& pa : page.actions) {
            g.attributes.emplace(pa.action.id, std::move(pa.attributes));
            g.actions.push_back(std::move(pa.action));
        }
        for (auto& s : page.snippets)
            g.snippets.push_back(std::move(s));
        for (auto* rels : {&hierarchy, &follow, &siblings}) {
            for (auto& r : *rels)
                g.relations.push_back(std::move(r));
        }
    }
    dedupe_comment_actions(g, detector);
    g.meta.counts = g.recount();
    g.reindex();
    return g;
}

std::string corpus_timestamp(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    long long seconds = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
        seconds = std::atoll(env);
    } else if (fs::is_directory(dir)) {
        for (const auto& e : fs::recursive_directory_iterator(dir)) {
            if (!e.is_regular_file())
                continue;
            auto t = e.last_write_time();
            auto sys = std::chrono::file_clock::to_sys(t);
            seconds = std::max<long long>(
                seconds, std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count());
        }
    }
    std::time_t tt = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json counts_to_json(const GraphCounts& counts) {
    return nlohmann::json{{"actions", counts.actions}, {"relations", counts.relations}, {"snippets", counts.snippets}};
}

nlohmann::json BuildManifest::to_json() const {
    return nlohmann::json{
        {"corpus_dir", corpus_dir},
        {"api_dict_path", api_dict_path},
        {"ingest_config_path", ingest_config_path},
        {"pattern_config_path", pattern_config_path},
        {"output_path", output_path},
        {"counts", counts_to_json(counts)},
    };
}

BuildManifest BuildManifest::from_json(const nlohmann::json& j) {
    BuildManifest m;
    m.corpus_dir = j.value("corpus_dir", "");
    m.api_dict_path = j.value("api_dict_path", "");
    m.ingest_config_path = j.value("ingest_config_path", "");
    m.pattern_config_path = j.value("pattern_config_path", "");
    m.output_path = j.value("output_path", "");
    const auto& c = j.at("counts");
    m.counts.actions = c.at("actions").get<std::map<std::string, std::size_t>>();
    m.counts.relations = c.at("relations").get<std::map<std::string, std::size_t>>();
    m.counts.snippets = c.at("snippets").get<std::map<std::string, std::size_t>>();
    return m;
}

}  // namespace taskkg
