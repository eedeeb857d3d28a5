// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/api.hpp"
#include "taskkg/model.hpp"
#include "taskkg/nlp.hpp"
#include "taskkg/text.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

struct SentenceRecord {
    std::string text;
    ActionSource source = ActionSource::text;
    std::string parent_anchor;
    int position = 0;
    /// Byte offset of `text` in the block it came from.
    std::size_t offset = 0;
};

/// Splits block text on terminal punctuation outside `code_spans` and not
/// ending a listed abbreviation. Heading and comment text pass through whole.
std::vector<SentenceRecord> split_sentences(std::string_view text, ActionSource source, std::string parent_anchor,
                                            const std::vector<Span>& code_spans = {},
                                            const PatternConfig& config = {});

enum class Activity { activity, non_activity };

std::string_view to_string(Activity a);

class ActivityClassifier {
public:
    virtual ~ActivityClassifier() = default;
    virtual Activity classify(const SentenceRecord& sentence) const = 0;
};

/// Imperative or `you <modal> <verb>` sentences, with a non-actionable verb stoplist.
class RuleClassifier final : public ActivityClassifier {
public:
    RuleClassifier(const PatternConfig& config, const PosTagger& tagger);
    Activity classify(const SentenceRecord& sentence) const override;

private:
    const PatternConfig& config_;
    const PosTagger& tagger_;
};

using ClassifierFactory =
    std::function<std::unique_ptr<ActivityClassifier>(const PatternConfig&, const PosTagger&)>;

/// Registers a classifier under `name`, replacing any previous registration.
void register_classifier(const std::string& name, ClassifierFactory factory);
/// Throws std::invalid_argument for unknown names.
std::unique_ptr<ActivityClassifier> make_classifier(const std::string& name, const PatternConfig& config,
                                                    const PosTagger& tagger);
std::vector<std::string> classifier_names();

/// The shipped rule classifier with default patterns and tagger.
Activity classify_activity_default(const SentenceRecord& sentence);

struct ActionPhrase {
    std::string verb;    // lowercase lemma; empty for noun-phrase headings
    std::string object;  // leading determiners stripped
    std::string clause;  // verb through end of clause
    std::string phrase;  // verb through end of object
    Span verb_span;      // offsets within the sentence text
    Span phrase_span;
    std::size_t verb_token = 0;
};

/// Verb/object pairs, one per finite clause. Headings yield at most one pair; a
/// heading without a leading verb yields an empty verb with the heading text
/// as object.
std::vector<ActionPhrase> extract_action_phrase(const SentenceRecord& sentence, const PosTagger& tagger,
                                                const PatternConfig& config = {});

struct AttributeContext {
    const ApiDictionary* dictionary = nullptr;
    /// Inline API spans relative to the sentence text.
    std::vector<Span> inline_spans;
    /// Extra co-occurrence context for recognition (other inline code in the block).
    std::string recognition_context;
};

/// Location, condition, goal and APIs of a sentence, shared by its actions.
ActionAttributes extract_attributes(const SentenceRecord& sentence, const std::vector<ActionPhrase>& phrases,
                                    const PosTagger& tagger, const PatternConfig& config,
                                    const AttributeContext& context);

/// Porter-stemmed content words of `text` (lowercase, split on non-alphanumerics,
/// stopwords removed).
std::set<std::string> content_terms(std::string_view text, const PatternConfig& config);

}  // namespace taskkg
