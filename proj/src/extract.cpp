// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/extract.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <stdexcept>

namespace taskkg {

std::string_view to_string(Activity a) {
    return a == Activity::activity ? "activity" : "non_activity";
}

std::vector<SentenceRecord> split_sentences(std::string_view text, ActionSource source, std::string parent_anchor,
                                            const std::vector<Span>& code_spans, const PatternConfig& config) {
    std::vector<SentenceRecord> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        auto piece = text.substr(begin, end - begin);
        auto trimmed = trim(piece);
        if (trimmed.empty())
            return;
        SentenceRecord rec;
        rec.text = std::string(trimmed);
        rec.source = source;
        rec.parent_anchor = parent_anchor;
        rec.position = static_cast<int>(out.size());
        rec.offset = begin + static_cast<std::size_t>(trimmed.data() - piece.data());
        out.push_back(std::move(rec));
    };
    if (source != ActionSource::text) {
        emit(0, text.size());
        return out;
    }

    auto in_code = [&](std::size_t i) {
        return std::any_of(code_spans.begin(), code_spans.end(),
                           [&](const Span& s) { return s.start <= i && i < s.end; });
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?')
            continue;
        if (i + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[i + 1])))
            continue;
        if (in_code(i))
            continue;
        if (c == '.') {
            std::size_t w = i;
            while (w > start && !std::isspace(static_cast<unsigned char>(text[w - 1])))
                --w;
            while (w < i && !std::isalnum(static_cast<unsigned char>(text[w])))
                ++w;
            auto word = to_lower(text.substr(w, i + 1 - w));
            if (std::find(config.abbreviations.begin(), config.abbreviations.end(), word) != config.abbreviations.end())
                continue;
        }
        emit(start, i + 1);
        start = i + 1;
    }
    emit(start, text.size());
    return out;
}

namespace {

struct Analysis {
    std::vector<Token> toks;
    std::vector<Pos> tags;
    std::vector<std::string> lower;

    Analysis(std::string_view text, const PosTagger& tagger) : toks(tokenize_words(text)) {
        tags = tagger.tag(toks);
        lower.reserve(toks.size());
        for (const auto& t : toks)
            lower.push_back(to_lower(t.text));
    }

    bool is_word(std::size_t i) const { return i < toks.size() && toks[i].word; }
    bool is_punct(std::size_t i, char c) const { return i < toks.size() && !toks[i].word && toks[i].text[0] == c; }
};

const std::set<std::string, std::less<>> kDiscourse{
    "first", "then", "next", "finally", "now", "also", "just", "simply", "please", "optionally", "additionally",
    "lastly", "so", "and", "but", "or", "instead", "here", "second", "third",
};

const std::set<std::string, std::less<>> kAdjunctStarters{
    "if",   "when",  "once", "unless", "before", "after",  "while", "to",     "in",      "for",   "on",
    "with", "by",    "from", "at",     "inside", "within", "during", "because", "since", "although",
    "though", "as",  "whenever", "where", "after", "upon", "depending", "optionally",
};

const std::set<std::string, std::less<>> kSubordinators{
    "if",   "when",  "once",  "unless", "while",   "because", "since", "although", "though", "whereas",
    "which", "that", "where", "as",     "whether", "before",  "after", "whenever", "who",   "until",
};

const std::set<std::string, std::less<>> kAdverbs{"also", "just", "simply", "then", "now", "easily", "optionally",
                                                  "first", "still", "even", "additionally", "instead", "directly",
                                                  "always", "quickly", "safely"};

bool contains(const std::vector<std::string>& list, std::string_view w) {
    return std::find(list.begin(), list.end(), w) != list.end();
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty())
                out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

/// Index of the next word token at or after `i` (before `end`), or end.
std::size_t next_word(const Analysis& a, std::size_t i, std::size_t end) {
    while (i < end && !a.is_word(i))
        ++i;
    return i;
}

/// Verb token of the first `you <modal> [adverbs] <verb>` match in [from, to).
std::optional<std::size_t> find_modal(const Analysis& a, std::size_t from, std::size_t to,
                                      const PatternConfig& config) {
    for (std::size_t k = from; k < to; ++k) {
        if (!a.is_word(k) || a.lower[k] != "you")
            continue;
        for (const auto& pattern : config.modal_patterns) {
            auto words = split_words(pattern);
            std::size_t j = k + 1;
            bool ok = true;
            for (const auto& w : words) {
                if (j >= to || !a.is_word(j) || a.lower[j] != w) {
                    ok = false;
                    break;
                }
                ++j;
            }
            if (!ok)
                continue;
            while (j < to && a.is_word(j) && (kAdverbs.contains(a.lower[j]) || a.lower[j] == "not"))
                ++j;
            if (j < to && a.is_word(j) && a.tags[j] == Pos::VERB)
                return j;
        }
    }
    return std::nullopt;
}

/// First content token after leading discourse words and comma-delimited
/// adjuncts ("To dismiss the dialog, call ..."), or `to` when none.
std::size_t imperative_start(const Analysis& a, std::size_t from, std::size_t to) {
    std::size_t k = from;
    while (k < to) {
        if (!a.is_word(k) || kDiscourse.contains(a.lower[k]) ||
            (a.tags[k] == Pos::DET && !a.lower[k].empty() && std::isdigit(static_cast<unsigned char>(a.lower[k][0])))) {
            ++k;
            continue;
        }
        bool adjunct = kAdjunctStarters.contains(a.lower[k]) ||
                       (a.lower[k] == "for" && k + 1 < to && a.lower[k + 1] == "example");
        if (!adjunct)
            return k;
        std::size_t c = k;
        while (c < to && !a.is_punct(c, ','))
            ++c;
        if (c >= to)
            return to;
        k = c + 1;
    }
    return to;
}

bool allowed_form(VerbForm f, ActionSource source) {
    switch (f) {
    case VerbForm::base:
        return true;
    case VerbForm::gerund:
        return source == ActionSource::heading;
    case VerbForm::third_singular:
        return source == ActionSource::comment;
    default:
        return false;
    }
}

std::string verb_lemma(const Analysis& a, std::size_t i, const PosTagger& tagger) {
    return tagger.lemma(a.lower[i]).value_or(a.lower[i]);
}

/// Imperative verb token in [from, to), if the clause opens with one.
std::optional<std::size_t> imperative_verb(const Analysis& a, std::size_t from, std::size_t to, ActionSource source,
                                           const PosTagger& tagger) {
    auto k = imperative_start(a, from, to);
    if (k >= to || a.tags[k] != Pos::VERB)
        return std::nullopt;
    if (!allowed_form(tagger.verb_form(a.lower[k]), source))
        return std::nullopt;
    return k;
}

/// Clause token ranges. Boundaries: terminal punctuation, `;`, `:`, a comma
/// before a conjunction, a verb or a pronoun-modal pair, and a bare conjunction
/// before a verb.
std::vector<std::pair<std::size_t, std::size_t>> clauses(const Analysis& a) {
    static const std::set<std::string, std::less<>> kConj{"and", "but", "or", "then", "so"};
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = 0;
    const std::size_t n = a.toks.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = a.toks[i];
        if (!t.word) {
            char c = t.text[0];
            bool cut = c == '.' || c == '!' || c == '?' || c == ';' || c == ':';
            if (c == ',' && i + 1 < n && a.is_word(i + 1) &&
                (kConj.contains(a.lower[i + 1]) || a.tags[i + 1] == Pos::VERB ||
                 (a.tags[i + 1] == Pos::PRON && i + 2 < n && a.tags[i + 2] == Pos::MODAL)))
                cut = true;
            if (cut) {
                if (i > start)
                    out.emplace_back(start, i);
                start = i + 1;
            }
            continue;
        }
        if (i > start && (a.lower[i] == "and" || a.lower[i] == "or" || a.lower[i] == "then") && i + 1 < n &&
            a.is_word(i + 1) && a.tags[i + 1] == Pos::VERB) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    if (start < n)
        out.emplace_back(start, n);
    return out;
}

ActionPhrase make_phrase(const Analysis& a, std::string_view text, std::size_t v, std::size_t clause_end,
                         const PosTagger& tagger) {
    ActionPhrase p;
    p.verb = verb_lemma(a, v, tagger);
    p.verb_token = v;
    p.verb_span = a.toks[v].span;
    std::size_t j = v + 1;
    while (j < clause_end && a.is_word(j) &&
           (a.tags[j] == Pos::DET || a.tags[j] == Pos::ADJ || a.tags[j] == Pos::NOUN))
        ++j;
    std::size_t obj = v + 1;
    while (obj < j && a.tags[obj] == Pos::DET)
        ++obj;
    std::size_t phrase_end = a.toks[v].span.end;
    if (obj < j) {
        auto s = a.toks[obj].span.start;
        auto e = a.toks[j - 1].span.end;
        p.object = std::string(text.substr(s, e - s));
        phrase_end = e;
    }
    std::size_t last = clause_end;
    while (last > v + 1 && !a.is_word(last - 1))
        --last;
    auto clause_end_off = std::max(a.toks[last - 1].span.end, phrase_end);
    p.clause = std::string(text.substr(p.verb_span.start, clause_end_off - p.verb_span.start));
    p.phrase_span = {p.verb_span.start, phrase_end};
    p.phrase = std::string(text.substr(p.phrase_span.start, p.phrase_span.size()));
    return p;
}

}  // namespace

RuleClassifier::RuleClassifier(const PatternConfig& config, const PosTagger& tagger)
    : config_(config), tagger_(tagger) {}

Activity RuleClassifier::classify(const SentenceRecord& sentence) const {
    Analysis a(sentence.text, tagger_);
    const std::size_t n = a.toks.size();
    for (std::size_t from = 0; from < n;) {
        auto v = find_modal(a, from, n, config_);
        if (!v)
            break;
        if (!contains(config_.verb_stoplist, verb_lemma(a, *v, tagger_)))
            return Activity::activity;
        from = *v + 1;
    }
    if (auto v = imperative_verb(a, 0, n, sentence.source, tagger_)) {
        if (!contains(config_.verb_stoplist, verb_lemma(a, *v, tagger_)))
            return Activity::activity;
    }
    return Activity::non_activity;
}

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, ClassifierFactory>& registry() {
    static std::map<std::string, ClassifierFactory> r{
        {"rule_default",
         [](const PatternConfig& c, const PosTagger& t) { return std::make_unique<RuleClassifier>(c, t); }},
    };
    return r;
}

}  // namespace

void register_classifier(const std::string& name, ClassifierFactory factory) {
    std::lock_guard lock(registry_mutex());
    registry()[name] = std::move(factory);
}

std::unique_ptr<ActivityClassifier> make_classifier(const std::string& name, const PatternConfig& config,
                                                    const PosTagger& tagger) {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end())
        throw std::invalid_argument("unknown classifier '" + name + "'");
    return it->second(config, tagger);
}

std::vector<std::string> classifier_names() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> out;
    for (const auto& [name, f] : registry())
        out.push_back(name);
    return out;
}

Activity classify_activity_default(const SentenceRecord& sentence) {
    static const PatternConfig config;
    static const RuleClassifier classifier(config, default_tagger());
    return classifier.classify(sentence);
}

std::vector<ActionPhrase> extract_action_phrase(const SentenceRecord& sentence, const PosTagger& tagger,
                                                const PatternConfig& config) {
    std::vector<ActionPhrase> out;
    const std::string& text = sentence.text;
    Analysis a(text, tagger);
    const std::size_t n = a.toks.size();
    if (n == 0)
        return out;

    if (sentence.source == ActionSource::heading) {
        auto v = imperative_verb(a, 0, n, ActionSource::heading, tagger);
        if (v && !contains(config.verb_stoplist, verb_lemma(a, *v, tagger))) {
            out.push_back(make_phrase(a, text, *v, n, tagger));
        } else {
            ActionPhrase p;
            p.object = std::string(trim(text));
            out.push_back(std::move(p));
        }
        return out;
    }

    for (auto [b, e] : clauses(a)) {
        std::size_t k = next_word(a, b, e);
        while (k < e && kDiscourse.contains(a.lower[k]))
            k = next_word(a, k + 1, e);
        if (k >= e || kSubordinators.contains(a.lower[k]))
            continue;
        std::optional<std::size_t> v = find_modal(a, k, e, config);
        if (!v)
            v = imperative_verb(a, k, e, sentence.source, tagger);
        if (!v || contains(config.verb_stoplist, verb_lemma(a, *v, tagger)))
            continue;
        out.push_back(make_phrase(a, text, *v, e, tagger));
    }
    return out;
}

ActionAttributes extract_attributes(const SentenceRecord& sentence, const std::vector<ActionPhrase>& phrases,
                                    const PosTagger& tagger, const PatternConfig& config,
                                    const AttributeContext& context) {
    ActionAttributes attrs;
    const std::string& text = sentence.text;
    Analysis a(text, tagger);
    const std::size_t n = a.toks.size();
    auto is_stop_punct = [&](std::size_t i) {
        return !a.toks[i].word && (a.toks[i].text == "," || a.toks[i].text == ";" || a.toks[i].text == "." ||
                                   a.toks[i].text == "!" || a.toks[i].text == "?" || a.toks[i].text == ":");
    };
    auto rest_until_punct = [&](std::size_t from) -> std::optional<std::string> {
        std::size_t j = from;
        while (j < n && !is_stop_punct(j))
            ++j;
        if (j == from)
            return std::nullopt;
        auto s = a.toks[from].span.start;
        auto e = a.toks[j - 1].span.end;
        auto t = std::string(trim(std::string_view(text).substr(s, e - s)));
        if (t.empty())
            return std::nullopt;
        return t;
    };
    auto matches_words = [&](std::size_t k, const std::vector<std::string>& words) {
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (k + w >= n || !a.is_word(k + w) || a.lower[k + w] != words[w])
                return false;
        }
        return true;
    };

    // location
    for (std::size_t k = 0; k < n && !attrs.location; ++k) {
        if (!a.is_word(k) || !contains(config.location_keywords, a.lower[k]))
            continue;
        if (a.lower[k] == "in" && matches_words(k + 1, {"order", "to"}))
            continue;
        std::size_t j = k + 1;
        while (j < n && a.is_word(j) && (a.tags[j] == Pos::DET || a.tags[j] == Pos::ADJ || a.tags[j] == Pos::NOUN))
            ++j;
        std::size_t core = k + 1;
        while (core < j && a.tags[core] == Pos::DET)
            ++core;
        if (core >= j)
            continue;
        auto core_text = to_lower(std::string_view(text).substr(a.toks[core].span.start,
                                                                a.toks[j - 1].span.end - a.toks[core].span.start));
        bool is_object = std::any_of(phrases.begin(), phrases.end(),
                                     [&](const ActionPhrase& p) { return to_lower(p.object) == core_text; });
        if (is_object)
            continue;
        auto s = a.toks[k + 1].span.start;
        attrs.location = std::string(std::string_view(text).substr(s, a.toks[j - 1].span.end - s));
    }

    // condition
    for (std::size_t k = 0; k < n && !attrs.condition; ++k) {
        if (a.is_word(k) && contains(config.condition_keywords, a.lower[k]))
            attrs.condition = rest_until_punct(k + 1);
    }

    // goal: only after the main verb
    std::size_t main = phrases.empty() || phrases.front().verb.empty() ? 0 : n;
    if (!phrases.empty() && !phrases.front().verb.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (a.toks[i].span.start == phrases.front().verb_span.start) {
                main = i;
                break;
            }
        }
    }
    for (std::size_t k = main + 1; k < n && !attrs.goal; ++k) {
        if (!a.is_word(k))
            continue;
        for (const auto& kw : config.goal_keywords) {
            auto words = split_words(kw);
            if (matches_words(k, words)) {
                attrs.goal = rest_until_punct(k + words.size());
                break;
            }
        }
        if (attrs.goal)
            break;
        if (config.infinitive_goal && a.lower[k] == "to" && !(k >= 2 && a.lower[k - 2] == "in" && a.lower[k - 1] == "order") &&
            k + 1 < n && a.is_word(k + 1) && a.tags[k + 1] == Pos::VERB &&
            tagger.verb_form(a.lower[k + 1]) == VerbForm::base)
            attrs.goal = rest_until_punct(k + 1);
    }

    // apis
    if (context.dictionary != nullptr) {
        for (const auto& span : context.inline_spans) {
            if (span.end > text.size() || span.empty())
                continue;
            auto code = std::string_view(text).substr(span.start, span.size());
            for (const auto& ref : distinct_refs(recognize(code, *context.dictionary, context.recognition_context))) {
                if (std::find(attrs.apis.begin(), attrs.apis.end(), ref) == attrs.apis.end())
                    attrs.apis.push_back(ref);
            }
        }
    }
    return attrs;
}

std::set<std::string> content_terms(std::string_view text, const PatternConfig& config) {
    std::set<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            return;
        if (!contains(config.stopwords, cur))
            out.insert(config.stemmer == "porter" ? porter_stem(cur) : cur);
        cur.clear();
    };
    char prev = ' ';
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isupper(u) && std::islower(static_cast<unsigned char>(prev)))
            flush();  // camelCase boundary
        if (std::isalnum(u))
            cur.push_back(static_cast<char>(std::tolower(u)));
        else
            flush();
        prev = c;
    }
    flush();
    return out;
}

}  // namespace taskkg
