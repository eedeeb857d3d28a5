// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/api.hpp"
#include "taskkg/extract.hpp"
#include "taskkg/ingest.hpp"
#include "taskkg/model.hpp"
#include "taskkg/relations.hpp"

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace taskkg {

struct BuildOptions {
    IngestConfig ingest;
    PatternConfig patterns;
    const ApiDictionary* dictionary = nullptr;
    const PosTagger* tagger = nullptr;              // default_tagger() when null
    const ActivityClassifier* classifier = nullptr;  // patterns.classifier when null
    const DuplicateDetector* detector = nullptr;     // Jaccard over patterns when null
    std::string corpus_id;
    std::string created;
};

/// Ingested pages to a complete graph (reindexed, counts filled). The result
/// is not validated here.
KnowledgeGraph build_graph(const std::vector<TutorialDocument>& docs, const BuildOptions& options);

/// ISO-8601 UTC timestamp for a corpus: SOURCE_DATE_EPOCH when set, else the
/// newest file mtime under `dir` (epoch 0 for an empty corpus).
std::string corpus_timestamp(const std::filesystem::path& dir);

struct BuildManifest {
    std::string corpus_dir;
    std::string api_dict_path;
    std::string ingest_config_path;
    std::string pattern_config_path;
    std::string output_path;
    GraphCounts counts;

    nlohmann::json to_json() const;
    static BuildManifest from_json(const nlohmann::json& j);
};

nlohmann::json counts_to_json(const GraphCounts& counts);

}  // namespace taskkg
