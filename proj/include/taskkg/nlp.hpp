// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/text.hpp"

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

enum class Pos { VERB, NOUN, ADJ, DET, PRON, ADP, MODAL, OTHER };

std::string_view to_string(Pos p);

enum class VerbForm { none, base, third_singular, past, gerund };

class PosTagger {
public:
    virtual ~PosTagger() = default;
    /// One label per token; punctuation tokens are OTHER.
    virtual std::vector<Pos> tag(const std::vector<Token>& tokens) const = 0;
    /// Lowercase base form when `word` can be read as a verb form.
    virtual std::optional<std::string> lemma(std::string_view word) const = 0;
    virtual VerbForm verb_form(std::string_view word) const = 0;
};

/// Closed-class word lists, a base-form verb lexicon with a suffix lemmatizer,
/// and a few context rules.
class LexiconTagger final : public PosTagger {
public:
    LexiconTagger();

    std::vector<Pos> tag(const std::vector<Token>& tokens) const override;
    std::optional<std::string> lemma(std::string_view word) const override;
    VerbForm verb_form(std::string_view word) const override;

    /// Closed-class or lexicon lookup, ignoring context.
    Pos word_class(std::string_view lower) const;

private:
    std::optional<std::string> lexicon_lemma(std::string_view lower) const;
};

/// Process-wide default tagger.
const LexiconTagger& default_tagger();

/// Keyword lists and thresholds used by extraction and duplicate detection.
struct PatternConfig {
    std::vector<std::string> location_keywords{"in", "inside", "within", "at"};
    std::vector<std::string> condition_keywords{"if", "when", "once", "unless", "before", "after"};
    std::vector<std::string> goal_keywords{"in order to", "so that"};
    /// `to <verb>` after the main clause counts as a goal.
    bool infinitive_goal = true;
    std::vector<std::string> modal_patterns{"can", "need to", "must", "should", "may", "have to"};
    std::vector<std::string> verb_stoplist{"learn", "see", "read", "find", "refer", "note"};
    std::vector<std::string> abbreviations{"e.g.", "i.e.", "etc.", "vs.", "cf.", "approx.", "a.k.a.", "mr.", "dr."};
    std::vector<std::string> stopwords{
        "a",       "an",    "the",  "this",  "that",  "these", "those", "to",      "in",   "on",  "at",
        "of",      "for",   "with", "by",    "from",  "into",  "is",    "are",     "be",   "it",  "its",
        "and",     "or",    "but",  "as",    "one",   "another", "whatever", "your", "you", "any",
        "can",     "must",  "should", "will", "so",   "then",  "here",  "there",   "which", "what", "how",
        "if",      "when",  "all",  "some",  "each",  "do",    "does",  "was",     "were", "has", "have",
    };
    std::string stemmer = "porter";
    double duplicate_threshold = 0.25;
    std::string classifier = "rule_default";

    static PatternConfig from_json(const nlohmann::json& j);
    static PatternConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

}  // namespace taskkg
