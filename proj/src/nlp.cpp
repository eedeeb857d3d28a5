// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/nlp.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace taskkg {

std::string_view to_string(Pos p) {
    switch (p) {
    case Pos::VERB:
        return "VERB";
    case Pos::NOUN:
        return "NOUN";
    case Pos::ADJ:
        return "ADJ";
    case Pos::DET:
        return "DET";
    case Pos::PRON:
        return "PRON";
    case Pos::ADP:
        return "ADP";
    case Pos::MODAL:
        return "MODAL";
    case Pos::OTHER:
        return "OTHER";
    }
    return "OTHER";
}

namespace {

using WordSet = std::set<std::string, std::less<>>;

const WordSet kDeterminers{
    "a",   "an",   "the",  "this", "that",  "these", "those", "each",  "every", "any",   "some",  "no",
    "all", "both", "either", "neither", "another", "my", "your", "his", "her", "its", "our", "their",
    "such", "one", "two",  "three", "four", "five",  "six",   "seven", "eight", "nine",  "ten",
};

const WordSet kPronouns{
    "i",    "you",      "he",       "she",       "it",      "we",      "they",   "me",    "him",  "us",
    "them", "itself",   "yourself", "something", "anything", "everything", "nothing", "whatever",
    "which", "who",     "whom",     "what",      "it's",    "you're",  "we'll",  "you'll",
};

const WordSet kPrepositions{
    "in",   "inside", "within", "at",     "on",      "of",     "for",    "with",  "by",     "from",
    "to",   "into",   "onto",   "over",   "under",   "about",  "through", "between", "during", "without",
    "via",  "per",    "as",     "like",   "after",   "before", "than",   "across", "along",  "around",
    "off",  "up",     "out",    "down",   "upon",    "toward", "towards", "behind", "beside", "until",
};

const WordSet kModals{"can", "could", "may", "might", "must", "should", "shall", "will", "would", "cannot", "can't"};

const WordSet kOther{
    "is",     "are",    "was",     "were",   "be",      "been",    "being",  "am",     "has",    "have",
    "had",    "do",     "does",    "did",    "don't",   "doesn't", "not",    "and",    "or",     "but",
    "nor",    "so",     "then",    "if",     "when",    "once",    "unless", "while",  "because", "since",
    "although", "though", "whether", "how",  "where",   "why",     "here",   "there",  "now",    "also",
    "just",   "only",   "simply",  "even",   "still",   "already", "always", "never",  "often",  "very",
    "too",    "please", "yes",     "here's", "there's", "that's",  "isn't",  "aren't", "e.g.",   "i.e.",
    "instead", "again", "later",   "first",  "next",    "finally", "then",   "lastly", "together", "etc",
};

const WordSet kAdjectives{
    "new",       "previous", "custom",    "current",  "main",      "other",     "different", "same",
    "simple",    "basic",    "specific",  "single",   "multiple",  "several",   "many",      "more",
    "most",      "much",     "few",       "entire",   "whole",     "full",      "empty",     "own",
    "default",   "additional", "available", "necessary", "optional", "appropriate", "particular", "various",
    "certain",   "common",   "final",     "second",   "last",      "small",     "large",     "long",
    "short",     "high",     "low",       "old",      "good",      "best",      "better",    "easy",
    "important", "possible", "ready",     "native",   "public",    "private",   "static",    "abstract",
    "global",    "local",    "remote",    "visible",  "invisible", "only",      "initial",   "separate",
    "external",  "internal", "original",  "entire",   "top",       "bottom",    "standard",  "modal",
};

const WordSet kVerbs{
    "access",    "acquire",   "activate",  "adapt",      "add",       "adjust",    "allocate",  "allow",
    "append",    "apply",     "assign",    "attach",     "avoid",     "begin",     "bind",      "build",
    "call",      "cancel",    "capture",   "change",     "check",     "choose",    "clear",     "click",
    "close",     "collect",   "combine",   "commit",     "compare",   "compile",   "complete",  "compute",
    "concatenate", "configure", "connect", "consider",   "construct", "convert",   "copy",      "create",
    "declare",   "decode",    "define",    "delete",     "deliver",   "deploy",    "describe",  "design",
    "destroy",   "detect",    "determine", "disable",    "dismiss",   "display",   "draw",      "edit",
    "enable",    "encode",    "ensure",    "enter",      "execute",   "exit",      "expand",    "extend",
    "extract",   "fetch",     "fill",      "filter",     "find",      "finish",    "follow",    "get",
    "give",      "go",        "grant",     "handle",     "hide",      "hold",      "implement", "import",
    "include",   "indicate",  "inflate",   "initialize", "insert",    "install",   "instantiate", "invoke",
    "keep",      "launch",    "learn",     "let",        "limit",     "listen",    "load",      "locate",
    "make",      "manage",    "modify",    "monitor",    "move",      "navigate",  "note",      "notify",
    "obtain",    "open",      "override",  "pass",       "pause",     "perform",   "persist",   "place",
    "play",      "populate",  "post",      "prepare",    "preserve",  "press",     "prevent",   "print",
    "process",   "provide",   "publish",   "push",       "put",       "query",     "read",      "receive",
    "refer",     "refresh",   "register",  "release",    "reload",    "remove",    "render",    "replace",
    "request",   "require",   "reset",     "resize",     "resolve",   "restart",   "restore",   "resume",
    "retain",    "retrieve",  "return",    "reuse",      "run",       "save",      "scan",      "schedule",
    "scroll",    "search",    "see",       "select",     "send",      "set",       "share",     "show",
    "specify",   "start",     "stop",      "store",      "submit",    "subscribe", "supply",    "support",
    "switch",    "sync",      "take",      "tap",        "test",      "throw",     "toggle",    "track",
    "transfer",  "trigger",   "try",       "turn",       "unbind",    "unregister", "update",  "upload",
    "use",       "validate",  "verify",    "wait",       "watch",     "write",     "zoom",      "modify",
    "want",      "appear",    "pick",      "attach",     "detach",    "enqueue",
};

const std::map<std::string, std::string, std::less<>> kIrregular{
    {"made", "make"},     {"got", "get"},       {"gotten", "get"},   {"built", "build"},   {"ran", "run"},
    {"wrote", "write"},   {"written", "write"}, {"found", "find"},   {"began", "begin"},   {"begun", "begin"},
    {"chose", "choose"},  {"chosen", "choose"}, {"gave", "give"},    {"given", "give"},    {"took", "take"},
    {"taken", "take"},    {"kept", "keep"},     {"held", "hold"},    {"sent", "send"},     {"shown", "show"},
    {"saw", "see"},       {"seen", "see"},      {"thrown", "throw"}, {"threw", "throw"},   {"drawn", "draw"},
    {"drew", "draw"},     {"bound", "bind"},    {"hidden", "hide"},  {"hid", "hide"},      {"went", "go"},
    {"gone", "go"},       {"goes", "go"},       {"does", "do"},
};

// Words after which a base-form verb reads as a verb.
const WordSet kVerbTriggers{"to", "and", "or", "then", "also", "just", "simply", "first", "please", "not",
                            "now", "next", "finally", "how", "here", "instead", "always", "never", "don't"};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_number(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

std::string guess_lemma(std::string_view w) {
    std::string s(w);
    if (ends_with(s, "ies") && s.size() > 4)
        return s.substr(0, s.size() - 3) + "y";
    for (std::string_view suf : {"ches", "shes", "sses", "xes", "zes"}) {
        if (ends_with(s, suf))
            return s.substr(0, s.size() - 2);
    }
    if (ends_with(s, "ing") && s.size() > 5)
        return s.substr(0, s.size() - 3);
    if (ends_with(s, "ied") && s.size() > 4)
        return s.substr(0, s.size() - 3) + "y";
    if (ends_with(s, "ed") && s.size() > 4)
        return s.substr(0, s.size() - 2);
    if (ends_with(s, "s") && !ends_with(s, "ss") && !ends_with(s, "us") && !ends_with(s, "is") && s.size() > 3)
        return s.substr(0, s.size() - 1);
    return s;
}

bool adjective_suffix(std::string_view w) {
    for (std::string_view suf : {"able", "ible", "ful", "ous", "ive", "less", "ic"}) {
        if (w.size() > suf.size() + 2 && ends_with(w, suf))
            return true;
    }
    return false;
}

}  // namespace

LexiconTagger::LexiconTagger() = default;

std::optional<std::string> LexiconTagger::lexicon_lemma(std::string_view w) const {
    if (kVerbs.contains(w))
        return std::string(w);
    if (auto it = kIrregular.find(w); it != kIrregular.end())
        return it->second;
    auto in = [](const std::string& s) -> std::optional<std::string> {
        if (kVerbs.contains(s))
            return s;
        return std::nullopt;
    };
    std::string s(w);
    if (ends_with(s, "ies") && s.size() > 4) {
        if (auto r = in(s.substr(0, s.size() - 3) + "y"))
            return r;
    }
    if (ends_with(s, "es")) {
        if (auto r = in(s.substr(0, s.size() - 2)))
            return r;
    }
    if (ends_with(s, "s") && !ends_with(s, "ss")) {
        if (auto r = in(s.substr(0, s.size() - 1)))
            return r;
    }
    if (ends_with(s, "ied") && s.size() > 4) {
        if (auto r = in(s.substr(0, s.size() - 3) + "y"))
            return r;
    }
    if (ends_with(s, "ed") && s.size() > 3) {
        auto stem = s.substr(0, s.size() - 2);
        if (auto r = in(stem))
            return r;
        if (auto r = in(s.substr(0, s.size() - 1)))
            return r;
        if (stem.size() > 2 && stem.back() == stem[stem.size() - 2]) {
            if (auto r = in(stem.substr(0, stem.size() - 1)))
                return r;
        }
    }
    if (ends_with(s, "ing") && s.size() > 4) {
        auto stem = s.substr(0, s.size() - 3);
        if (auto r = in(stem))
            return r;
        if (auto r = in(stem + "e"))
            return r;
        if (stem.size() > 2 && stem.back() == stem[stem.size() - 2] && !is_vowel(stem.back())) {
            if (auto r = in(stem.substr(0, stem.size() - 1)))
                return r;
        }
    }
    return std::nullopt;
}

std::optional<std::string> LexiconTagger::lemma(std::string_view word) const {
    auto w = to_lower(word);
    if (auto r = lexicon_lemma(w))
        return r;
    if (kDeterminers.contains(w) || kPronouns.contains(w) || kPrepositions.contains(w) || kModals.contains(w) ||
        kOther.contains(w) || is_number(w))
        return std::nullopt;
    return guess_lemma(w);
}

VerbForm LexiconTagger::verb_form(std::string_view word) const {
    auto w = to_lower(word);
    auto base = lemma(w);
    if (!base)
        return VerbForm::none;
    if (*base == w)
        return VerbForm::base;
    if (kIrregular.contains(w))
        return ends_with(w, "s") ? VerbForm::third_singular : VerbForm::past;
    if (ends_with(w, "ing"))
        return VerbForm::gerund;
    if (ends_with(w, "ed"))
        return VerbForm::past;
    if (ends_with(w, "s"))
        return VerbForm::third_singular;
    return VerbForm::base;
}

Pos LexiconTagger::word_class(std::string_view w) const {
    if (kModals.contains(w))
        return Pos::MODAL;
    if (kDeterminers.contains(w) || is_number(w))
        return Pos::DET;
    if (kPronouns.contains(w))
        return Pos::PRON;
    if (kPrepositions.contains(w))
        return Pos::ADP;
    if (kOther.contains(w))
        return Pos::OTHER;
    if (lexicon_lemma(w))
        return Pos::VERB;
    if (kAdjectives.contains(w) || adjective_suffix(w))
        return Pos::ADJ;
    if (ends_with(w, "ly") && w.size() > 4)
        return Pos::OTHER;
    return Pos::NOUN;
}

std::vector<Pos> LexiconTagger::tag(const std::vector<Token>& tokens) const {
    std::vector<Pos> tags(tokens.size(), Pos::OTHER);
    int prev_word = -1;           // index of previous word token
    int prev_prev_word = -1;
    bool boundary = true;         // previous token was clause punctuation or start
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (!tok.word) {
            const char c = tok.text[0];
            if (c == ',' || c == ';' || c == ':' || c == '(' || c == '.' || c == '!' || c == '?')
                boundary = true;
            continue;
        }
        const auto w = to_lower(tok.text);
        Pos p = word_class(w);
        const Pos prev = prev_word >= 0 ? tags[static_cast<std::size_t>(prev_word)] : Pos::OTHER;
        const std::string prev_lower = prev_word >= 0 ? to_lower(tokens[static_cast<std::size_t>(prev_word)].text) : "";
        const bool after_det = !boundary && (prev == Pos::DET || prev == Pos::ADJ);

        if (p == Pos::VERB) {
            const auto form = verb_form(w);
            if (form == VerbForm::base) {
                if (boundary || prev == Pos::MODAL || prev == Pos::PRON || kVerbTriggers.contains(prev_lower))
                    p = Pos::VERB;
                else if (after_det || prev == Pos::NOUN || (prev == Pos::ADP && prev_lower != "to"))
                    p = Pos::NOUN;
            } else if (form == VerbForm::third_singular) {
                // "a list of views", "request location updates"
                const bool compound = !boundary && prev == Pos::NOUN && prev_prev_word >= 0 &&
                                      tags[static_cast<std::size_t>(prev_prev_word)] == Pos::VERB;
                if (after_det || compound)
                    p = Pos::NOUN;
            } else if (form == VerbForm::past || form == VerbForm::gerund) {
                if (after_det)
                    p = Pos::ADJ;
            }
        } else if (p == Pos::NOUN && boundary && prev_word < 0) {
            // Unknown sentence-initial word before a determiner: imperative guess.
            std::size_t j = i + 1;
            if (j < tokens.size() && tokens[j].word) {
                auto next = to_lower(tokens[j].text);
                if (kDeterminers.contains(next))
                    p = Pos::VERB;
            }
        }
        tags[i] = p;
        prev_prev_word = boundary ? -1 : prev_word;
        prev_word = static_cast<int>(i);
        boundary = false;
    }
    return tags;
}

const LexiconTagger& default_tagger() {
    static const LexiconTagger tagger;
    return tagger;
}

PatternConfig PatternConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("pattern config must be a JSON object");
    PatternConfig c;
    auto list = [&](const char* key, std::vector<std::string>& dst) {
        if (auto it = j.find(key); it != j.end())
            dst = it->get<std::vector<std::string>>();
    };
    list("location_keywords", c.location_keywords);
    list("condition_keywords", c.condition_keywords);
    list("goal_keywords", c.goal_keywords);
    list("modal_patterns", c.modal_patterns);
    list("verb_stoplist", c.verb_stoplist);
    list("abbreviations", c.abbreviations);
    list("stopwords", c.stopwords);
    if (auto it = j.find("infinitive_goal"); it != j.end())
        c.infinitive_goal = it->get<bool>();
    if (auto it = j.find("stemmer"); it != j.end())
        c.stemmer = it->get<std::string>();
    if (auto it = j.find("duplicate_threshold"); it != j.end())
        c.duplicate_threshold = it->get<double>();
    if (auto it = j.find("classifier"); it != j.end())
        c.classifier = it->get<std::string>();
    if (c.stemmer != "porter" && c.stemmer != "none")
        throw std::invalid_argument("unknown stemmer '" + c.stemmer + "' (expected porter or none)");
    return c;
}

PatternConfig PatternConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open pattern config " + path.string());
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json PatternConfig::to_json() const {
    return nlohmann::json{
        {"location_keywords", location_keywords},
        {"condition_keywords", condition_keywords},
        {"goal_keywords", goal_keywords},
        {"infinitive_goal", infinitive_goal},
        {"modal_patterns", modal_patterns},
        {"verb_stoplist", verb_stoplist},
        {"abbreviations", abbreviations},
        {"stopwords", stopwords},
        {"stemmer", stemmer},
        {"duplicate_threshold", duplicate_threshold},
        {"classifier", classifier},
    };
}

}  // namespace taskkg
