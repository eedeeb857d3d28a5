// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/page.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace taskkg {

namespace {

class IdAllocator {
public:
    std::string take(std::string base) {
        auto& n = seen_[base];
        ++n;
        return n == 1 ? base : base + "-" + std::to_string(n);
    }

private:
    std::map<std::string, int> seen_;
};

std::optional<std::string> section_anchor(const TutorialDocument& doc, int node) {
    int parent = doc.nodes[static_cast<std::size_t>(node)].parent;
    if (parent < 0)
        return std::nullopt;
    return doc.nodes[static_cast<std::size_t>(parent)].anchor;
}

}  // namespace

PageExtraction extract_page(const TutorialDocument& doc, const ExtractionContext& ctx) {
    if (!ctx.ingest || !ctx.patterns || !ctx.tagger || !ctx.classifier)
        throw std::invalid_argument("extraction context is incomplete");
    const auto& patterns = *ctx.patterns;
    const auto& tagger = *ctx.tagger;

    PageExtraction page;
    page.doc = &doc;
    IdAllocator ids;

    auto excluded = [&](const DocNode& n) { return n.kind == NodeKind::code_block && n.is_xml && ctx.ingest->exclude_xml; };

    auto new_action = [&](const std::string& sentence, ActionSource source, const std::optional<std::string>& anchor,
                          const ActionPhrase& p, std::size_t clause_index) {
        PageAction pa;
        pa.action.verb = p.verb;
        pa.action.object = p.object;
        pa.action.sentence = sentence;
        pa.action.source = source;
        pa.action.page_uri = doc.page_uri;
        pa.action.anchor = anchor;
        pa.action.clause = p.clause;
        pa.action.phrase = p.phrase;
        const auto index = std::to_string(clause_index);
        pa.action.id = ids.take(content_id(
            "act", {doc.page_uri, anchor.value_or(""), sentence, to_string(source), index, p.verb, p.object}));
        return pa;
    };

    bool orphan = false;
    for (const auto& n : doc.nodes) {
        if (n.parent < 0 && n.kind != NodeKind::heading && !excluded(n))
            orphan = true;
    }
    if (orphan) {
        ActionPhrase root;
        root.object = doc.title;
        auto pa = new_action(doc.title, ActionSource::heading, std::nullopt, root, 0);
        page.root = page.actions.size();
        page.actions.push_back(std::move(pa));
    }

    int block_ordinal = 0;
    for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
        const auto& node = doc.nodes[i];
        const int ni = static_cast<int>(i);

        if (node.kind == NodeKind::heading) {
            SentenceRecord rec{node.text, ActionSource::heading, node.anchor, 0, 0};
            auto phrases = extract_action_phrase(rec, tagger, patterns);
            if (phrases.empty()) {
                ActionPhrase p;
                p.object = node.text;
                phrases.push_back(std::move(p));
            }
            auto pa = new_action(node.text, ActionSource::heading, node.anchor, phrases.front(), 0);
            pa.attributes = extract_attributes(rec, phrases, tagger, patterns, {});
            pa.node = ni;
            pa.sentence = 0;
            page.heading_action[ni] = page.actions.size();
            page.actions.push_back(std::move(pa));
            continue;
        }

        if (node.kind == NodeKind::paragraph || node.kind == NodeKind::list_item) {
            const auto anchor = section_anchor(doc, ni);
            auto sentences = split_sentences(node.text, ActionSource::text, anchor.value_or(""), node.inline_api_spans,
                                             patterns);
            page.sentence_count[ni] = static_cast<int>(sentences.size());
            std::string inline_context;
            for (const auto& s : node.inline_api_spans)
                inline_context += node.text.substr(s.start, s.size()) + "\n";
            for (const auto& rec : sentences) {
                if (ctx.classifier->classify(rec) != Activity::activity)
                    continue;
                auto phrases = extract_action_phrase(rec, tagger, patterns);
                if (phrases.empty())
                    continue;
                AttributeContext actx;
                actx.dictionary = ctx.dictionary;
                actx.recognition_context = inline_context;
                for (const auto& s : node.inline_api_spans) {
                    if (s.start >= rec.offset && s.end <= rec.offset + rec.text.size())
                        actx.inline_spans.push_back({s.start - rec.offset, s.end - rec.offset});
                }
                auto attrs = extract_attributes(rec, phrases, tagger, patterns, actx);
                for (std::size_t c = 0; c < phrases.size(); ++c) {
                    auto pa = new_action(rec.text, ActionSource::text, anchor, phrases[c], c);
                    pa.attributes = attrs;
                    pa.node = ni;
                    pa.sentence = rec.position;
                    pa.offset = rec.offset;
                    page.actions.push_back(std::move(pa));
                }
            }
            continue;
        }

        // code block
        const int ordinal = block_ordinal++;
        if (excluded(node))
            continue;
        const auto anchor = section_anchor(doc, ni);
        CodeSnippet block;
        block.text = node.text;
        block.kind = SnippetKind::full_block;
        block.language_hint = node.language_hint;
        block.page_uri = doc.page_uri;
        block.id = content_id("snip", {doc.page_uri, std::to_string(ordinal), "full_block",
                                       "0:" + std::to_string(node.text.size())});
        std::vector<ApiMention> mentions;
        if (ctx.dictionary) {
            mentions = recognize(node.text, *ctx.dictionary);
            for (const auto& m : mentions)
                block.apis.push_back(m.resolved);
        }
        page.block_snippet[ni] = page.snippets.size();
        page.snippets.push_back(block);

        for (std::size_t s = 0; s < node.comments.size(); ++s) {
            const auto& seg = node.comments[s];
            auto sentences = split_sentences(seg.text, ActionSource::text, anchor.value_or(""), {}, patterns);
            std::vector<PageAction> found;
            for (auto rec : sentences) {
                rec.source = ActionSource::comment;
                if (ctx.classifier->classify(rec) != Activity::activity)
                    continue;
                auto phrases = extract_action_phrase(rec, tagger, patterns);
                if (phrases.empty())
                    continue;
                auto attrs = extract_attributes(rec, phrases, tagger, patterns, {});
                for (std::size_t c = 0; c < phrases.size(); ++c) {
                    auto pa = new_action(rec.text, ActionSource::comment, anchor, phrases[c], c);
                    pa.attributes = attrs;
                    pa.node = ni;
                    pa.segment = static_cast<int>(s);
                    pa.sentence = rec.position;
                    pa.offset = rec.offset;
                    found.push_back(std::move(pa));
                }
            }
            if (found.empty())
                continue;
            const std::size_t begin = seg.comment_span.start;
            const std::size_t end = std::max(seg.code_span.end, seg.comment_span.end);
            CodeSnippet frag;
            frag.text = node.text.substr(begin, end - begin);
            frag.kind = SnippetKind::comment_fragment;
            frag.parent_block = block.id;
            frag.language_hint = node.language_hint;
            frag.page_uri = doc.page_uri;
            frag.id = content_id("snip", {doc.page_uri, std::to_string(ordinal), "comment_fragment",
                                          std::to_string(begin) + ":" + std::to_string(end)});
            for (const auto& m : mentions) {
                if (m.span.start >= begin && m.span.end <= end)
                    frag.apis.push_back(m.resolved);
            }
            const auto frag_index = page.snippets.size();
            page.snippets.push_back(std::move(frag));
            for (auto& pa : found) {
                pa.fragment = frag_index;
                page.actions.push_back(std::move(pa));
            }
        }
    }
    return page;
}

void link_code(PageExtraction& page) {
    const auto& doc = *page.doc;
    auto link = [&](std::size_t action, const std::string& snippet) {
        auto& code = page.actions[action].attributes.code;
        if (std::find(code.begin(), code.end(), snippet) == code.end())
            code.push_back(snippet);
    };

    for (const auto& [ni, snippet] : page.block_snippet) {
        const auto& node = doc.nodes[static_cast<std::size_t>(ni)];
        int k = ni - 1;
        while (k >= 0 && doc.nodes[static_cast<std::size_t>(k)].kind == NodeKind::code_block)
            --k;
        std::vector<std::size_t> linked;
        if (k >= 0) {
            const auto& prev = doc.nodes[static_cast<std::size_t>(k)];
            if ((prev.kind == NodeKind::paragraph || prev.kind == NodeKind::list_item) && prev.parent == node.parent) {
                std::map<int, std::vector<std::size_t>> by_sentence;
                for (std::size_t a = 0; a < page.actions.size(); ++a) {
                    if (page.actions[a].node == k)
                        by_sentence[page.actions[a].sentence].push_back(a);
                }
                for (int s = page.sentence_count[k] - 1; s >= 0; --s) {
                    auto it = by_sentence.find(s);
                    if (it == by_sentence.end())
                        break;
                    linked.insert(linked.begin(), it->second.begin(), it->second.end());
                }
            }
        }
        if (linked.empty()) {
            if (node.parent >= 0)
                linked.push_back(page.heading_action.at(node.parent));
            else if (page.root)
                linked.push_back(*page.root);
        }
        for (auto a : linked)
            link(a, page.snippets[snippet].id);
        page.block_links[ni] = std::move(linked);
    }

    for (std::size_t a = 0; a < page.actions.size(); ++a) {
        if (page.actions[a].fragment)
            link(a, page.snippets[*page.actions[a].fragment].id);
    }
}

}  // namespace taskkg
