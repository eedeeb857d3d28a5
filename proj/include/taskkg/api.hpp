// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/model.hpp"
#include "taskkg/text.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

struct DictionaryDiagnostic {
    std::size_t line = 0;  // 1-based record line
    bool error = false;    // true: record rejected; false: warning
    std::string message;
};

/// Catalog of known API elements keyed by simple name and declaring class.
class ApiDictionary {
public:
    /// Adds an entry; returns false (and leaves the dictionary unchanged) when
    /// the fqn is already present.
    bool add(ApiRef ref, std::string simple_name = {});

    const std::vector<ApiRef>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const ApiRef* find(std::string_view fqn) const;
    std::vector<const ApiRef*> by_simple_name(std::string_view name) const;
    std::vector<const ApiRef*> by_declaring_class(std::string_view class_fqn) const;

    /// Dictionary over the distinct refs of a graph (snippets and attributes).
    static ApiDictionary from_graph(const KnowledgeGraph& graph);

private:
    std::vector<ApiRef> entries_;
    std::map<std::string, std::size_t, std::less<>> by_fqn_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_simple_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> by_class_;
};

/// Builds a dictionary from newline-delimited JSON records
/// `{kind, fqn, simple_name, declaring_class}`. Blank lines are skipped.
ApiDictionary build_dictionary(std::string_view records, std::vector<DictionaryDiagnostic>* diagnostics = nullptr);
ApiDictionary load_dictionary(const std::filesystem::path& path,
                              std::vector<DictionaryDiagnostic>* diagnostics = nullptr);

enum class Confidence { exact, disambiguated, unresolved_dropped };

std::string_view to_string(Confidence c);

struct ApiMention {
    ApiRef resolved;
    Span span;
    Confidence confidence = Confidence::exact;
};

/// Resolves API mentions in partial code. `context` is extra text whose
/// identifiers count as co-occurring code elements (used for prose mentions).
/// Dropped (ambiguous) mentions are returned only when `keep_dropped` is set.
std::vector<ApiMention> recognize(std::string_view code, const ApiDictionary& dict, std::string_view context = {},
                                  bool keep_dropped = false);

/// Distinct refs of the mentions, in first-mention order.
std::vector<ApiRef> distinct_refs(const std::vector<ApiMention>& mentions);

}  // namespace taskkg
