// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taskkg {

enum class ActionSource { heading, text, comment };
enum class RelationKind { hierarchical, descriptive_sibling, precede_follow, duplicate };
enum class SnippetKind { full_block, comment_fragment };
enum class ApiKind { class_, method, field, constant };

std::string_view to_string(ActionSource s);
std::string_view to_string(RelationKind k);
std::string_view to_string(SnippetKind k);
std::string_view to_string(ApiKind k);

// Parsers return nullopt for unknown names.
std::optional<ActionSource> parse_action_source(std::string_view s);
std::optional<RelationKind> parse_relation_kind(std::string_view s);
std::optional<SnippetKind> parse_snippet_kind(std::string_view s);
std::optional<ApiKind> parse_api_kind(std::string_view s);

/// A resolved API element. For classes `declaring_class == fqn`.
struct ApiRef {
    std::string fqn;
    ApiKind kind = ApiKind::class_;
    std::string declaring_class;

    /// Last dotted segment of the fqn.
    std::string_view simple_name() const;

    auto operator<=>(const ApiRef&) const = default;
    bool operator==(const ApiRef&) const = default;
};

/// Builds a class ref (`declaring_class == fqn`).
ApiRef class_ref(std::string fqn);

/// A programming action. `clause` is the verb phrase the action was read from
/// (verb through end of clause); `phrase` is the verb-through-object prefix of it.
struct Action {
    std::string id;
    std::string verb;
    std::string object;
    std::string sentence;
    ActionSource source = ActionSource::text;
    std::string page_uri;
    std::optional<std::string> anchor;
    std::string clause;
    std::string phrase;

    bool operator==(const Action&) const = default;
};

struct ActionAttributes {
    std::vector<ApiRef> apis;
    std::optional<std::string> location;
    std::optional<std::string> condition;
    std::optional<std::string> goal;
    std::vector<std::string> code;

    bool operator==(const ActionAttributes&) const = default;
};

struct Relation {
    RelationKind kind = RelationKind::hierarchical;
    std::string src;
    std::string dst;

    auto operator<=>(const Relation&) const = default;
    bool operator==(const Relation&) const = default;
};

struct CodeSnippet {
    std::string id;
    std::string text;
    SnippetKind kind = SnippetKind::full_block;
    std::optional<std::string> parent_block;
    std::optional<std::string> language_hint;
    std::vector<ApiRef> apis;
    std::string page_uri;

    bool operator==(const CodeSnippet&) const = default;
};

/// Per-category counts, keyed by the enum's serialized name.
struct GraphCounts {
    std::map<std::string, std::size_t> actions;
    std::map<std::string, std::size_t> relations;
    std::map<std::string, std::size_t> snippets;

    bool operator==(const GraphCounts&) const = default;
};

/// Equality that treats absent keys as zero.
bool same_counts(const GraphCounts& a, const GraphCounts& b);

struct GraphMeta {
    std::string corpus_id;
    std::string created;
    GraphCounts counts;

    bool operator==(const GraphMeta&) const = default;
};

/// The task knowledge graph. Data members are plain values; lookups go through
/// indexes rebuilt by `reindex()`, which every producer calls once the graph is
/// complete. After that the graph is treated as immutable and may be shared
/// across threads.
class KnowledgeGraph {
public:
    GraphMeta meta;
    std::vector<Action> actions;
    std::map<std::string, ActionAttributes> attributes;
    std::vector<Relation> relations;
    std::vector<CodeSnippet> snippets;

    void reindex();

    const Action* find_action(std::string_view id) const;
    const CodeSnippet* find_snippet(std::string_view id) const;
    const ActionAttributes* find_attributes(std::string_view id) const;

    /// Hierarchical parent, if any.
    std::optional<std::string> parent_of(std::string_view id) const;
    /// Hierarchical children in graph order.
    const std::vector<std::string>& children_of(std::string_view id) const;
    /// Actions whose code attribute lists the snippet. For comment fragments the
    /// comment-sourced actions come first; otherwise graph order.
    const std::vector<std::string>& actions_for_snippet(std::string_view id) const;
    /// Position of the action in `actions` (document order), or npos.
    std::size_t action_position(std::string_view id) const;

    /// Counts recomputed from the action, relation and snippet sets.
    GraphCounts recount() const;

    /// Structural equality over the serialized fields.
    friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

private:
    std::unordered_map<std::string, std::size_t> action_pos_;
    std::unordered_map<std::string, std::size_t> snippet_pos_;
    std::unordered_map<std::string, std::string> parent_;
    std::unordered_map<std::string, std::vector<std::string>> children_;
    std::unordered_map<std::string, std::vector<std::string>> snippet_actions_;
};

struct Violation {
    std::string rule;
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Checks every model invariant; never mutates, never throws.
ValidationReport validate(const KnowledgeGraph& graph);

}  // namespace taskkg
