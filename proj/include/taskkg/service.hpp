// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/api.hpp"
#include "taskkg/ingest.hpp"
#include "taskkg/match.hpp"
#include "taskkg/model.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace taskkg {

/// Unknown action or snippet id.
class NotFoundError : public std::runtime_error {
public:
    explicit NotFoundError(const std::string& id) : std::runtime_error("not found: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// Bad request; `token` names the offending field or value when there is one.
class RequestError : public std::runtime_error {
public:
    RequestError(const std::string& message, std::string token = {})
        : std::runtime_error(message), token_(std::move(token)) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

/// Display label: heading text for heading actions, else the verb phrase.
std::string action_label(const Action& a);

struct HierarchyNode {
    std::string action_id;
    std::string label;
    ActionSource source = ActionSource::text;
    bool expanded = false;
    std::optional<int> rank;
    std::vector<HierarchyNode> children;
};

struct HierarchyView {
    HierarchyNode root;
};

/// Tree under the top-level ancestor of the given actions. Nodes on a path from
/// the root to a recommended action (inclusive) are expanded, every other node
/// is collapsed; recommended nodes carry their best rank. All actions must
/// share one top-level ancestor.
HierarchyView assemble_hierarchy(const std::vector<std::pair<std::string, std::optional<int>>>& recommended,
                                 const KnowledgeGraph& graph);

/// Top-level (parentless) ancestor of an action.
std::string top_level_ancestor(const std::string& action_id, const KnowledgeGraph& graph);

nlohmann::json to_json(const HierarchyNode& node);
nlohmann::json to_json(const HierarchyView& view);

enum class SpanKind { action_phrase, goal, location, condition, api_bold, api_matched, recommended_snippet };

std::string_view to_string(SpanKind k);

struct ExcerptSpan {
    Span span;
    SpanKind kind = SpanKind::action_phrase;

    auto operator<=>(const ExcerptSpan&) const = default;
};

struct AnnotatedExcerpt {
    std::string text;
    std::vector<ExcerptSpan> spans;  // sorted by start, end, kind
    bool degraded = false;
    std::string page_uri;
    std::optional<std::string> anchor;
};

nlohmann::json to_json(const AnnotatedExcerpt& excerpt);

struct ExcerptRequest {
    std::string action_id;
    std::optional<std::string> snippet_id;  // recommended snippet
    std::vector<ApiRef> matched;            // query matches, at `granularity`
    Granularity granularity = Granularity::api;
};

/// Section excerpt around an action. `doc` null (page missing) yields a degraded
/// excerpt built from the stored sentences and snippet text.
AnnotatedExcerpt annotate_excerpt(const ExcerptRequest& request, const KnowledgeGraph& graph,
                                  const ApiDictionary& dict, const TutorialDocument* doc);

/// Immutable state behind the service.
struct ServiceData {
    KnowledgeGraph graph;
    ApiDictionary dictionary;
    std::map<std::string, TutorialDocument, std::less<>> documents;
    bool corpus_available = false;
    ApiIndex api_index;
    ApiIndex class_index;

    const TutorialDocument* document(std::string_view uri) const;
    const ApiIndex& index(Granularity g) const { return g == Granularity::api ? api_index : class_index; }
};

/// `dictionary` empty: derived from the graph. `corpus` null: degraded excerpts.
std::shared_ptr<const ServiceData> make_service_data(KnowledgeGraph graph, std::optional<ApiDictionary> dictionary,
                                                     const std::vector<TutorialDocument>* corpus);

/// Request handling as pure functions of (request, data). The data pointer is
/// swapped whole; each call works on one snapshot.
class Recommender {
public:
    explicit Recommender(std::shared_ptr<const ServiceData> data);

    std::shared_ptr<const ServiceData> data() const;
    void swap(std::shared_ptr<const ServiceData> data);

    /// {code?, selection?, config?, top_n?} -> {recommendations: [...]}. Throws
    /// RequestError or ConfigError.
    nlohmann::json recommend(const nlohmann::json& request) const;
    /// Throws NotFoundError.
    nlohmann::json action(const std::string& id) const;
    nlohmann::json hierarchy(const std::string& id) const;
    nlohmann::json stats() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const ServiceData> data_;
};

/// Placeholder page served at GET /.
std::string_view index_html();

/// HTTP front end over a Recommender.
class HttpServer {
public:
    explicit HttpServer(Recommender& recommender);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace taskkg
