// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/model.hpp"
#include "taskkg/nlp.hpp"
#include "taskkg/page.hpp"

#include <string_view>
#include <vector>

namespace taskkg {

/// Heading actions nest by level; text actions hang under their section
/// heading; comment actions become siblings of the action their block links
/// to (children of the heading when the block fell back to it). Fills
/// PageAction::parent and returns the edges (src = parent).
std::vector<Relation> build_hierarchy(PageExtraction& page);

/// Chains the first action of consecutive items of each ordered list.
std::vector<Relation> build_precede_follow(const PageExtraction& page);

/// Chains actions of one paragraph/list item (or one comment segment) in
/// mention order.
std::vector<Relation> build_descriptive_siblings(const PageExtraction& page);

class DuplicateDetector {
public:
    virtual ~DuplicateDetector() = default;
    virtual bool is_duplicate(std::string_view comment_sentence, std::string_view text_sentence) const = 0;
    /// Ranks several positive candidates; the highest wins, ties keep graph order.
    virtual double similarity(std::string_view a, std::string_view b) const { return is_duplicate(a, b) ? 1.0 : 0.0; }
};

/// Jaccard overlap of stemmed content words against a threshold.
class JaccardDuplicateDetector final : public DuplicateDetector {
public:
    explicit JaccardDuplicateDetector(PatternConfig config = {});
    bool is_duplicate(std::string_view comment_sentence, std::string_view text_sentence) const override;
    double similarity(std::string_view a, std::string_view b) const override;

private:
    PatternConfig config_;
};

bool default_duplicate_detector(std::string_view comment_sentence, std::string_view text_sentence);

/// For each comment action, the first heading/text sibling (document order)
/// the detector accepts gets a duplicate edge and the comment's fragment
/// snippets. Comparisons use the action clauses. Reindexes the graph.
void dedupe_comment_actions(KnowledgeGraph& graph, const DuplicateDetector& detector);

}  // namespace taskkg
