// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/relations.hpp"

#include "taskkg/extract.hpp"

#include <algorithm>
#include <map>

namespace taskkg {

std::vector<Relation> build_hierarchy(PageExtraction& page) {
    const auto& doc = *page.doc;
    auto section_parent = [&](int heading_node) -> int {
        if (heading_node >= 0)
            return static_cast<int>(page.heading_action.at(heading_node));
        return page.root ? static_cast<int>(*page.root) : -1;
    };

    for (auto& pa : page.actions) {
        if (pa.node < 0 || pa.action.source == ActionSource::comment)
            continue;
        pa.parent = section_parent(doc.nodes[static_cast<std::size_t>(pa.node)].parent);
    }
    for (auto& pa : page.actions) {
        if (pa.action.source != ActionSource::comment)
            continue;
        const auto& linked = page.block_links.at(pa.node);
        if (linked.empty())
            continue;
        const auto& first = page.actions[linked.front()];
        pa.parent = first.action.source == ActionSource::heading ? static_cast<int>(linked.front()) : first.parent;
    }

    std::vector<Relation> out;
    for (const auto& pa : page.actions) {
        if (pa.parent >= 0)
            out.push_back({RelationKind::hierarchical, page.actions[static_cast<std::size_t>(pa.parent)].action.id,
                           pa.action.id});
    }
    return out;
}

std::vector<Relation> build_precede_follow(const PageExtraction& page) {
    const auto& doc = *page.doc;
    // list id -> first action of each item, in item order
    std::map<int, std::vector<std::size_t>> lists;
    std::map<int, int> seen_node;
    for (std::size_t a = 0; a < page.actions.size(); ++a) {
        const auto& pa = page.actions[a];
        if (pa.node < 0 || pa.action.source != ActionSource::text)
            continue;
        const auto& node = doc.nodes[static_cast<std::size_t>(pa.node)];
        if (node.kind != NodeKind::list_item || !node.ordered)
            continue;
        if (seen_node.contains(pa.node))
            continue;
        seen_node[pa.node] = 1;
        lists[node.list_id].push_back(a);
    }
    std::vector<Relation> out;
    for (const auto& [id, items] : lists) {
        for (std::size_t i = 1; i < items.size(); ++i) {
            const auto& prev = page.actions[items[i - 1]];
            const auto& next = page.actions[items[i]];
            if (prev.parent == next.parent)
                out.push_back({RelationKind::precede_follow, prev.action.id, next.action.id});
        }
    }
    return out;
}

std::vector<Relation> build_descriptive_siblings(const PageExtraction& page) {
    std::vector<Relation> out;
    for (std::size_t a = 1; a < page.actions.size(); ++a) {
        const auto& prev = page.actions[a - 1];
        const auto& cur = page.actions[a];
        if (cur.action.source == ActionSource::heading || prev.action.source != cur.action.source)
            continue;
        if (prev.node != cur.node || prev.segment != cur.segment || prev.parent != cur.parent)
            continue;
        out.push_back({RelationKind::descriptive_sibling, prev.action.id, cur.action.id});
    }
    return out;
}

JaccardDuplicateDetector::JaccardDuplicateDetector(PatternConfig config) : config_(std::move(config)) {}

double JaccardDuplicateDetector::similarity(std::string_view a, std::string_view b) const {
    auto ta = content_terms(a, config_);
    auto tb = content_terms(b, config_);
    std::size_t inter = 0;
    for (const auto& t : ta)
        inter += tb.count(t);
    const std::size_t uni = ta.size() + tb.size() - inter;
    if (uni == 0)
        return to_lower(trim(a)) == to_lower(trim(b)) && !trim(a).empty() ? 1.0 : 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

bool JaccardDuplicateDetector::is_duplicate(std::string_view comment_sentence, std::string_view text_sentence) const {
    return similarity(comment_sentence, text_sentence) >= config_.duplicate_threshold;
}

bool default_duplicate_detector(std::string_view comment_sentence, std::string_view text_sentence) {
    static const JaccardDuplicateDetector detector;
    return detector.is_duplicate(comment_sentence, text_sentence);
}

void dedupe_comment_actions(KnowledgeGraph& graph, const DuplicateDetector& detector) {
    graph.reindex();
    auto label = [](const Action& a) -> const std::string& { return a.clause.empty() ? a.sentence : a.clause; };
    std::vector<Relation> added;
    std::vector<std::pair<std::string, std::string>> shares;  // (text action, snippet)
    for (const auto& c : graph.actions) {
        if (c.source != ActionSource::comment)
            continue;
        auto parent = graph.parent_of(c.id);
        if (!parent)
            continue;
        const Action* best = nullptr;
        double best_score = 0.0;
        for (const auto& sid : graph.children_of(*parent)) {
            const auto* t = graph.find_action(sid);
            if (t == nullptr || t->source == ActionSource::comment)
                continue;
            if (!detector.is_duplicate(label(c), label(*t)))
                continue;
            const double sim = detector.similarity(label(c), label(*t));
            if (best == nullptr || sim > best_score) {
                best = t;
                best_score = sim;
            }
        }
        if (best == nullptr)
            continue;
        added.push_back({RelationKind::duplicate, c.id, best->id});
        if (const auto* attrs = graph.find_attributes(c.id)) {
            for (const auto& snip : attrs->code) {
                const auto* s = graph.find_snippet(snip);
                if (s && s->kind == SnippetKind::comment_fragment)
                    shares.emplace_back(best->id, snip);
            }
        }
    }
    for (auto& r : added)
        graph.relations.push_back(std::move(r));
    for (const auto& [action, snip] : shares) {
        auto& code = graph.attributes[action].code;
        if (std::find(code.begin(), code.end(), snip) == code.end())
            code.push_back(snip);
    }
    graph.reindex();
}

}  // namespace taskkg
