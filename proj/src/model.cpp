// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/model.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_set>

namespace taskkg {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s) {
    for (const auto& [value, name] : table) {
        if (name == s)
            return value;
    }
    return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
    for (const auto& [v, name] : table) {
        if (v == value)
            return name;
    }
    return "unknown";
}

constexpr std::array<std::pair<ActionSource, std::string_view>, 3> kSources{{
    {ActionSource::heading, "heading"},
    {ActionSource::text, "text"},
    {ActionSource::comment, "comment"},
}};

constexpr std::array<std::pair<RelationKind, std::string_view>, 4> kRelations{{
    {RelationKind::hierarchical, "hierarchical"},
    {RelationKind::descriptive_sibling, "descriptive_sibling"},
    {RelationKind::precede_follow, "precede_follow"},
    {RelationKind::duplicate, "duplicate"},
}};

constexpr std::array<std::pair<SnippetKind, std::string_view>, 2> kSnippets{{
    {SnippetKind::full_block, "full_block"},
    {SnippetKind::comment_fragment, "comment_fragment"},
}};

constexpr std::array<std::pair<ApiKind, std::string_view>, 4> kApiKinds{{
    {ApiKind::class_, "class"},
    {ApiKind::method, "method"},
    {ApiKind::field, "field"},
    {ApiKind::constant, "constant"},
}};

const std::vector<std::string> kNoIds;

}  // namespace

std::string_view to_string(ActionSource s) { return name_of(kSources, s); }
std::string_view to_string(RelationKind k) { return name_of(kRelations, k); }
std::string_view to_string(SnippetKind k) { return name_of(kSnippets, k); }
std::string_view to_string(ApiKind k) { return name_of(kApiKinds, k); }

std::optional<ActionSource> parse_action_source(std::string_view s) { return lookup(kSources, s); }
std::optional<RelationKind> parse_relation_kind(std::string_view s) { return lookup(kRelations, s); }
std::optional<SnippetKind> parse_snippet_kind(std::string_view s) { return lookup(kSnippets, s); }
std::optional<ApiKind> parse_api_kind(std::string_view s) { return lookup(kApiKinds, s); }

std::string_view ApiRef::simple_name() const {
    std::string_view v = fqn;
    auto dot = v.rfind('.');
    return dot == std::string_view::npos ? v : v.substr(dot + 1);
}

ApiRef class_ref(std::string fqn) {
    ApiRef ref;
    ref.declaring_class = fqn;
    ref.fqn = std::move(fqn);
    ref.kind = ApiKind::class_;
    return ref;
}

void KnowledgeGraph::reindex() {
    action_pos_.clear();
    snippet_pos_.clear();
    parent_.clear();
    children_.clear();
    snippet_actions_.clear();

    for (std::size_t i = 0; i < actions.size(); ++i)
        action_pos_.emplace(actions[i].id, i);
    for (std::size_t i = 0; i < snippets.size(); ++i)
        snippet_pos_.emplace(snippets[i].id, i);

    for (const auto& r : relations) {
        if (r.kind != RelationKind::hierarchical)
            continue;
        parent_.emplace(r.dst, r.src);
        children_[r.src].push_back(r.dst);
    }
    auto by_position = [this](const std::string& a, const std::string& b) {
        return action_position(a) < action_position(b);
    };
    for (auto& [_, kids] : children_)
        std::stable_sort(kids.begin(), kids.end(), by_position);

    for (const auto& action : actions) {
        auto it = attributes.find(action.id);
        if (it == attributes.end())
            continue;
        for (const auto& sid : it->second.code)
            snippet_actions_[sid].push_back(action.id);
    }
    for (auto& [sid, ids] : snippet_actions_) {
        const auto* snippet = find_snippet(sid);
        if (snippet == nullptr || snippet->kind != SnippetKind::comment_fragment)
            continue;
        std::stable_partition(ids.begin(), ids.end(), [this](const std::string& id) {
            const auto* a = find_action(id);
            return a != nullptr && a->source == ActionSource::comment;
        });
    }
}

const Action* KnowledgeGraph::find_action(std::string_view id) const {
    auto it = action_pos_.find(std::string(id));
    return it == action_pos_.end() ? nullptr : &actions[it->second];
}

const CodeSnippet* KnowledgeGraph::find_snippet(std::string_view id) const {
    auto it = snippet_pos_.find(std::string(id));
    return it == snippet_pos_.end() ? nullptr : &snippets[it->second];
}

const ActionAttributes* KnowledgeGraph::find_attributes(std::string_view id) const {
    auto it = attributes.find(std::string(id));
    return it == attributes.end() ? nullptr : &it->second;
}

std::optional<std::string> KnowledgeGraph::parent_of(std::string_view id) const {
    auto it = parent_.find(std::string(id));
    if (it == parent_.end())
        return std::nullopt;
    return it->second;
}

const std::vector<std::string>& KnowledgeGraph::children_of(std::string_view id) const {
    auto it = children_.find(std::string(id));
    return it == children_.end() ? kNoIds : it->second;
}

const std::vector<std::string>& KnowledgeGraph::actions_for_snippet(std::string_view id) const {
    auto it = snippet_actions_.find(std::string(id));
    return it == snippet_actions_.end() ? kNoIds : it->second;
}

std::size_t KnowledgeGraph::action_position(std::string_view id) const {
    auto it = action_pos_.find(std::string(id));
    return it == action_pos_.end() ? std::string::npos : it->second;
}

GraphCounts KnowledgeGraph::recount() const {
    GraphCounts counts;
    for (const auto& [s, name] : kSources)
        counts.actions[std::string(name)] = 0;
    for (const auto& [k, name] : kRelations)
        counts.relations[std::string(name)] = 0;
    for (const auto& [k, name] : kSnippets)
        counts.snippets[std::string(name)] = 0;
    for (const auto& a : actions)
        ++counts.actions[std::string(to_string(a.source))];
    for (const auto& r : relations)
        ++counts.relations[std::string(to_string(r.kind))];
    for (const auto& s : snippets)
        ++counts.snippets[std::string(to_string(s.kind))];
    return counts;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    return a.meta == b.meta && a.actions == b.actions && a.attributes == b.attributes &&
           a.relations == b.relations && a.snippets == b.snippets;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

std::string edge_label(const Relation& r) {
    return std::string(to_string(r.kind)) + " " + r.src + " -> " + r.dst;
}

void check_api_ref(const ApiRef& ref, const std::string& where, ValidationReport& out) {
    if (ref.fqn.empty()) {
        out.push_back({"api_ref.fqn", where + ": empty fqn"});
        return;
    }
    if (ref.kind == ApiKind::class_) {
        if (ref.declaring_class != ref.fqn)
            out.push_back({"api_ref.declaring_class", where + ": class " + ref.fqn + " must declare itself"});
    } else {
        const auto& owner = ref.declaring_class;
        bool prefix_ok = !owner.empty() && ref.fqn.size() > owner.size() + 1 &&
                         ref.fqn.compare(0, owner.size(), owner) == 0 && ref.fqn[owner.size()] == '.';
        if (!prefix_ok)
            out.push_back({"api_ref.declaring_class", where + ": " + ref.fqn + " is not owned by '" + owner + "'"});
    }
}

bool same_map(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
    auto get = [](const auto& m, const std::string& k) {
        auto it = m.find(k);
        return it == m.end() ? std::size_t{0} : it->second;
    };
    for (const auto& [k, v] : a) {
        if (get(b, k) != v)
            return false;
    }
    for (const auto& [k, v] : b) {
        if (get(a, k) != v)
            return false;
    }
    return true;
}

}  // namespace

bool same_counts(const GraphCounts& a, const GraphCounts& b) {
    return same_map(a.actions, b.actions) && same_map(a.relations, b.relations) && same_map(a.snippets, b.snippets);
}

ValidationReport validate(const KnowledgeGraph& graph) {
    ValidationReport out;

    std::unordered_map<std::string, const Action*> actions;
    for (const auto& a : graph.actions) {
        if (a.id.empty())
            out.push_back({"action.id", "action with empty id"});
        if (!actions.emplace(a.id, &a).second)
            out.push_back({"action.id", "duplicate action id " + a.id});
        if (a.verb.empty() && a.source != ActionSource::heading)
            out.push_back({"action.verb", a.id + ": empty verb on " + std::string(to_string(a.source)) + " action"});
    }

    std::unordered_map<std::string, const CodeSnippet*> snippets;
    for (const auto& s : graph.snippets) {
        if (!snippets.emplace(s.id, &s).second)
            out.push_back({"snippet.id", "duplicate snippet id " + s.id});
    }

    std::unordered_set<std::string> referenced;
    for (const auto& [id, attrs] : graph.attributes) {
        if (!actions.contains(id))
            out.push_back({"attributes.key", "attributes for unknown action " + id});
        std::set<ApiRef> seen;
        for (const auto& ref : attrs.apis) {
            check_api_ref(ref, "attributes[" + id + "]", out);
            if (!seen.insert(ref).second)
                out.push_back({"attributes.apis", id + ": duplicate api " + ref.fqn});
        }
        for (const auto& sid : attrs.code) {
            if (!snippets.contains(sid))
                out.push_back({"attributes.code", id + ": unresolved snippet " + sid});
            referenced.insert(sid);
        }
    }

    for (const auto& a : graph.actions) {
        if (a.source != ActionSource::comment)
            continue;
        auto it = graph.attributes.find(a.id);
        if (it == graph.attributes.end() || it->second.code.empty())
            out.push_back({"action.comment_code", a.id + ": comment action without linked snippet"});
    }

    for (const auto& s : graph.snippets) {
        for (const auto& ref : s.apis)
            check_api_ref(ref, "snippet[" + s.id + "]", out);
        if (!referenced.contains(s.id))
            out.push_back({"snippet.referenced", s.id + ": not referenced by any action"});
        if (s.kind == SnippetKind::full_block) {
            if (s.parent_block)
                out.push_back({"snippet.parent_block", s.id + ": full block with parent_block"});
            continue;
        }
        if (!s.parent_block) {
            out.push_back({"snippet.parent_block", s.id + ": comment fragment without parent_block"});
            continue;
        }
        auto parent = snippets.find(*s.parent_block);
        if (parent == snippets.end()) {
            out.push_back({"snippet.parent_block", s.id + ": unresolved parent_block " + *s.parent_block});
        } else if (parent->second->kind != SnippetKind::full_block) {
            out.push_back({"snippet.parent_block", s.id + ": parent is not a full block"});
        } else if (parent->second->text.find(s.text) == std::string::npos) {
            out.push_back({"snippet.fragment_text", s.id + ": text is not a substring of its parent block"});
        }
    }

    // Relations: resolution first, then structure over the hierarchical forest.
    std::unordered_map<std::string, std::string> parent;
    std::set<Relation> seen_edges;
    for (const auto& r : graph.relations) {
        if (!seen_edges.insert(r).second)
            out.push_back({"relation.unique", "repeated edge " + edge_label(r)});
        if (r.src == r.dst)
            out.push_back({"relation.self", "self edge " + edge_label(r)});
        if (!actions.contains(r.src) || !actions.contains(r.dst)) {
            out.push_back({"relation.resolve", "unresolved endpoint in " + edge_label(r)});
            continue;
        }
        if (r.kind == RelationKind::hierarchical) {
            auto [it, inserted] = parent.emplace(r.dst, r.src);
            if (!inserted && it->second != r.src)
                out.push_back({"relation.hierarchy_forest", r.dst + ": more than one parent"});
        }
    }

    // Cycle check: follow parent links from every node, bounded by node count.
    for (const auto& [child, _] : parent) {
        std::unordered_set<std::string> path{child};
        auto cur = parent.find(child);
        while (cur != parent.end()) {
            if (!path.insert(cur->second).second) {
                out.push_back({"relation.hierarchy_cycle", "hierarchy cycle through " + child});
                break;
            }
            cur = parent.find(cur->second);
        }
    }

    auto parent_of = [&parent](const std::string& id) -> std::optional<std::string> {
        auto it = parent.find(id);
        if (it == parent.end())
            return std::nullopt;
        return it->second;
    };

    for (const auto& r : graph.relations) {
        if (r.kind == RelationKind::hierarchical || !actions.contains(r.src) || !actions.contains(r.dst))
            continue;
        if (parent_of(r.src) != parent_of(r.dst)) {
            out.push_back({"relation.same_parent", edge_label(r) + ": endpoints have different parents"});
        }
        if (r.kind == RelationKind::duplicate) {
            if (actions.at(r.src)->source != ActionSource::comment ||
                actions.at(r.dst)->source == ActionSource::comment) {
                out.push_back({"relation.duplicate_sources", edge_label(r) + ": must pair a comment action with a heading/text action"});
            }
        }
    }

    if (!same_counts(graph.meta.counts, graph.recount()))
        out.push_back({"meta.counts", "meta counts differ from recomputed counts"});

    return out;
}

}  // namespace taskkg
