// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/api.hpp"
#include "taskkg/extract.hpp"
#include "taskkg/ingest.hpp"
#include "taskkg/model.hpp"

#include <map>
#include <optional>
#include <vector>

namespace taskkg {

struct ExtractionContext {
    const IngestConfig* ingest = nullptr;
    const PatternConfig* patterns = nullptr;
    const PosTagger* tagger = nullptr;
    const ActivityClassifier* classifier = nullptr;
    const ApiDictionary* dictionary = nullptr;  // optional
};

struct PageAction {
    Action action;
    ActionAttributes attributes;
    int node = -1;       // document node; -1 for the synthesized page root
    int segment = -1;    // comment segment within a code block
    int sentence = -1;   // sentence ordinal within the node (or comment segment)
    std::size_t offset = 0;  // sentence offset in node text (segment text for comments)
    std::optional<std::size_t> fragment;  // comment fragment snippet, comment actions only
    int parent = -1;     // hierarchical parent (index into actions), set by build_hierarchy
};

/// Actions, snippets and relations of one page before graph assembly.
struct PageExtraction {
    const TutorialDocument* doc = nullptr;
    std::vector<PageAction> actions;  // document order; the page root, if any, first
    std::vector<CodeSnippet> snippets;
    std::map<int, std::size_t> block_snippet;                  // code node -> snippet
    std::map<int, std::size_t> heading_action;                 // heading node -> action
    std::map<int, int> sentence_count;                         // text node -> sentences
    std::map<int, std::vector<std::size_t>> block_links;       // code node -> linked actions
    std::optional<std::size_t> root;
    std::vector<Relation> relations;
};

/// Sentences, actions, attributes and snippets of one page. Code links and
/// relations are left to link_code and the relation builders.
PageExtraction extract_page(const TutorialDocument& doc, const ExtractionContext& ctx);

/// Links every snippet to actions: a full block to the run of actions from the
/// sentences right before it (same section), else to its section heading
/// action; a comment fragment to its own comment actions.
void link_code(PageExtraction& page);

}  // namespace taskkg
