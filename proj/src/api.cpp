// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/api.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <spdlog/spdlog.h>
#include <sstream>
#include <unordered_map>

namespace taskkg {

bool ApiDictionary::add(ApiRef ref, std::string simple_name) {
    if (by_fqn_.contains(ref.fqn))
        return false;
    if (simple_name.empty())
        simple_name = std::string(ref.simple_name());
    const auto idx = entries_.size();
    by_fqn_.emplace(ref.fqn, idx);
    by_simple_[simple_name].push_back(idx);
    by_class_[ref.declaring_class].push_back(idx);
    entries_.push_back(std::move(ref));
    return true;
}

const ApiRef* ApiDictionary::find(std::string_view fqn) const {
    auto it = by_fqn_.find(fqn);
    return it == by_fqn_.end() ? nullptr : &entries_[it->second];
}

std::vector<const ApiRef*> ApiDictionary::by_simple_name(std::string_view name) const {
    std::vector<const ApiRef*> out;
    if (auto it = by_simple_.find(name); it != by_simple_.end()) {
        for (auto idx : it->second)
            out.push_back(&entries_[idx]);
    }
    return out;
}

std::vector<const ApiRef*> ApiDictionary::by_declaring_class(std::string_view class_fqn) const {
    std::vector<const ApiRef*> out;
    if (auto it = by_class_.find(class_fqn); it != by_class_.end()) {
        for (auto idx : it->second)
            out.push_back(&entries_[idx]);
    }
    return out;
}

ApiDictionary ApiDictionary::from_graph(const KnowledgeGraph& graph) {
    std::set<ApiRef> refs;
    for (const auto& s : graph.snippets)
        refs.insert(s.apis.begin(), s.apis.end());
    for (const auto& [id, attrs] : graph.attributes)
        refs.insert(attrs.apis.begin(), attrs.apis.end());
    ApiDictionary dict;
    for (const auto& r : refs) {
        if (r.kind != ApiKind::class_ && !dict.find(r.declaring_class))
            dict.add(class_ref(r.declaring_class));
        dict.add(r);
    }
    return dict;
}

ApiDictionary build_dictionary(std::string_view records, std::vector<DictionaryDiagnostic>* diagnostics) {
    ApiDictionary dict;
    auto report = [&](std::size_t line, bool error, std::string msg) {
        if (error)
            spdlog::error("dictionary line {}: {}", line, msg);
        else
            spdlog::warn("dictionary line {}: {}", line, msg);
        if (diagnostics)
            diagnostics->push_back({line, error, std::move(msg)});
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < records.size()) {
        auto nl = records.find('\n', pos);
        auto line = records.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? records.size() : nl + 1;
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            report(line_no, true, std::string("malformed record: ") + e.what());
            continue;
        }
        if (!j.is_object() || !j.contains("fqn") || !j["fqn"].is_string() || !j.contains("kind") ||
            !j["kind"].is_string()) {
            report(line_no, true, "record needs string fields kind and fqn");
            continue;
        }
        ApiRef ref;
        ref.fqn = j["fqn"].get<std::string>();
        auto kind = parse_api_kind(j["kind"].get<std::string>());
        if (!kind) {
            report(line_no, true, "unknown kind '" + j["kind"].get<std::string>() + "'");
            continue;
        }
        ref.kind = *kind;
        if (ref.fqn.empty()) {
            report(line_no, true, "empty fqn");
            continue;
        }
        std::string owner;
        if (auto it = j.find("declaring_class"); it != j.end() && it->is_string())
            owner = it->get<std::string>();
        if (ref.kind == ApiKind::class_) {
            ref.declaring_class = owner.empty() ? ref.fqn : owner;
            if (ref.declaring_class != ref.fqn) {
                report(line_no, true, "class " + ref.fqn + " must declare itself");
                continue;
            }
        } else {
            if (owner.empty()) {
                report(line_no, true, ref.fqn + ": missing declaring_class");
                continue;
            }
            if (ref.fqn.size() <= owner.size() + 1 || ref.fqn.compare(0, owner.size(), owner) != 0 ||
                ref.fqn[owner.size()] != '.') {
                report(line_no, true, ref.fqn + ": declaring_class '" + owner + "' is not its owner");
                continue;
            }
            ref.declaring_class = owner;
        }
        std::string simple;
        if (auto it = j.find("simple_name"); it != j.end() && it->is_string())
            simple = it->get<std::string>();
        if (simple.empty())
            simple = std::string(ref.simple_name());
        if (simple.empty()) {
            report(line_no, true, ref.fqn + ": empty simple name");
            continue;
        }
        auto fqn = ref.fqn;
        if (!dict.add(std::move(ref), std::move(simple)))
            report(line_no, false, "duplicate fqn " + fqn + " (keeping first)");
    }
    return dict;
}

ApiDictionary load_dictionary(const std::filesystem::path& path, std::vector<DictionaryDiagnostic>* diagnostics) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open API dictionary " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return build_dictionary(buf.str(), diagnostics);
}

std::string_view to_string(Confidence c) {
    switch (c) {
    case Confidence::exact:
        return "exact";
    case Confidence::disambiguated:
        return "disambiguated";
    case Confidence::unresolved_dropped:
        return "unresolved_dropped";
    }
    return "unknown";
}

namespace {

struct CodeToken {
    std::string_view text;
    Span span;
    bool ident = false;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

/// Lexical scan. In code mode comments and string/char literals are skipped.
std::vector<CodeToken> lex(std::string_view s, bool code_mode) {
    std::vector<CodeToken> out;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (code_mode) {
            if (s.compare(i, 2, "//") == 0) {
                auto nl = s.find('\n', i);
                i = nl == std::string_view::npos ? n : nl;
                continue;
            }
            if (s.compare(i, 2, "/*") == 0) {
                auto end = s.find("*/", i + 2);
                i = end == std::string_view::npos ? n : end + 2;
                continue;
            }
            if (s.compare(i, 3, "\"\"\"") == 0) {
                auto end = s.find("\"\"\"", i + 3);
                i = end == std::string_view::npos ? n : end + 3;
                continue;
            }
            if (c == '"' || c == '\'') {
                std::size_t j = i + 1;
                while (j < n && s[j] != c && s[j] != '\n') {
                    if (s[j] == '\\')
                        ++j;
                    ++j;
                }
                i = std::min(n, j + 1);
                continue;
            }
        }
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && ident_char(s[j]))
                ++j;
            out.push_back({s.substr(i, j - i), {i, j}, true});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < n && (ident_char(s[j]) || s[j] == '.'))
                ++j;
            i = j;
            continue;
        }
        out.push_back({s.substr(i, 1), {i, i + 1}, false});
        ++i;
    }
    return out;
}

bool is_upper_start(std::string_view s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool is_punct(const CodeToken& t, char c) {
    return !t.ident && t.text.size() == 1 && t.text[0] == c;
}

std::string simple_of(std::string_view fqn) {
    auto dot = fqn.rfind('.');
    return std::string(dot == std::string_view::npos ? fqn : fqn.substr(dot + 1));
}

/// Variable name -> declared type simple name, from `Type name =`, `Type name;`,
/// `Type name,`, `Type name)` and Kotlin `val name: Type`.
std::unordered_map<std::string, std::string> declared_types(const std::vector<CodeToken>& toks) {
    std::unordered_map<std::string, std::string> types;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        const auto& t = toks[i];
        if (!t.ident)
            continue;
        if ((t.text == "val" || t.text == "var") && i + 3 < toks.size() && toks[i + 1].ident &&
            is_punct(toks[i + 2], ':') && toks[i + 3].ident) {
            types[std::string(toks[i + 1].text)] = std::string(toks[i + 3].text);
            continue;
        }
        if (!is_upper_start(t.text))
            continue;
        std::size_t j = i + 1;
        if (is_punct(toks[j], '<')) {
            int depth = 0;
            for (; j < toks.size(); ++j) {
                if (is_punct(toks[j], '<'))
                    ++depth;
                else if (is_punct(toks[j], '>') && --depth == 0)
                    break;
            }
            ++j;
        }
        while (j + 1 < toks.size() && is_punct(toks[j], '[') && is_punct(toks[j + 1], ']'))
            j += 2;
        if (j + 1 >= toks.size() || !toks[j].ident || is_upper_start(toks[j].text))
            continue;
        const auto& next = toks[j + 1];
        if (is_punct(next, '=') || is_punct(next, ';') || is_punct(next, ',') || is_punct(next, ')') ||
            is_punct(next, ':'))
            types[std::string(toks[j].text)] = std::string(t.text);
    }
    return types;
}

}  // namespace

std::vector<ApiMention> recognize(std::string_view code, const ApiDictionary& dict, std::string_view context,
                                  bool keep_dropped) {
    std::vector<ApiMention> out;
    if (dict.empty() || code.empty())
        return out;
    const auto toks = lex(code, true);
    const auto types = declared_types(toks);

    std::set<std::string, std::less<>> present;
    for (const auto& t : toks) {
        if (t.ident)
            present.emplace(t.text);
    }
    for (const auto& t : lex(context, false)) {
        if (t.ident)
            present.emplace(t.text);
    }
    auto class_present = [&](const ApiRef& r) { return present.contains(simple_of(r.declaring_class)); };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto& t = toks[i];
        if (!t.ident)
            continue;
        auto candidates = dict.by_simple_name(t.text);
        if (candidates.empty())
            continue;

        std::vector<const ApiRef*> members;
        std::vector<const ApiRef*> classes;
        for (const auto* c : candidates)
            (c->kind == ApiKind::class_ ? classes : members).push_back(c);

        const bool after_dot = i >= 1 && is_punct(toks[i - 1], '.');
        const bool call = i + 1 < toks.size() && is_punct(toks[i + 1], '(');
        std::string_view receiver;
        if (after_dot && i >= 2 && toks[i - 2].ident)
            receiver = toks[i - 2].text;

        bool member_path = !members.empty() && (after_dot || call || classes.empty());
        ApiMention m;
        m.span = t.span;
        if (member_path) {
            auto pool = members;
            bool narrowed = false;
            if (!receiver.empty() && pool.size() > 1) {
                std::string receiver_type;
                if (auto it = types.find(std::string(receiver)); it != types.end())
                    receiver_type = it->second;
                else if (is_upper_start(receiver))
                    receiver_type = std::string(receiver);
                if (!receiver_type.empty()) {
                    std::vector<const ApiRef*> filtered;
                    for (const auto* c : pool) {
                        if (simple_of(c->declaring_class) == receiver_type)
                            filtered.push_back(c);
                    }
                    if (!filtered.empty()) {
                        pool = std::move(filtered);
                        narrowed = true;
                    }
                }
            }
            if (members.size() == 1) {
                m.resolved = *members.front();
                m.confidence = Confidence::exact;
            } else {
                std::vector<const ApiRef*> survivors;
                for (const auto* c : pool) {
                    if (class_present(*c))
                        survivors.push_back(c);
                }
                if (survivors.empty() && narrowed && pool.size() == 1)
                    survivors = pool;
                if (survivors.size() == 1) {
                    m.resolved = *survivors.front();
                    m.confidence = Confidence::disambiguated;
                } else {
                    m.resolved = *pool.front();
                    m.confidence = Confidence::unresolved_dropped;
                }
            }
        } else {
            if (classes.size() == 1) {
                m.resolved = *classes.front();
                m.confidence = Confidence::exact;
            } else {
                std::vector<const ApiRef*> survivors;
                for (const auto* c : classes) {
                    for (const auto* member : dict.by_declaring_class(c->fqn)) {
                        if (member->kind != ApiKind::class_ && present.contains(simple_of(member->fqn))) {
                            survivors.push_back(c);
                            break;
                        }
                    }
                }
                if (survivors.size() == 1) {
                    m.resolved = *survivors.front();
                    m.confidence = Confidence::disambiguated;
                } else {
                    m.resolved = *classes.front();
                    m.confidence = Confidence::unresolved_dropped;
                }
            }
        }
        if (m.confidence != Confidence::unresolved_dropped || keep_dropped)
            out.push_back(std::move(m));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ApiMention& a, const ApiMention& b) { return a.span.start < b.span.start; });
    return out;
}

std::vector<ApiRef> distinct_refs(const std::vector<ApiMention>& mentions) {
    std::vector<ApiRef> out;
    std::set<std::string> seen;
    for (const auto& m : mentions) {
        if (seen.insert(m.resolved.fqn).second)
            out.push_back(m.resolved);
    }
    return out;
}

}  // namespace taskkg
