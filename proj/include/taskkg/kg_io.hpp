// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/model.hpp"

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace taskkg {

inline constexpr int kGraphFormatVersion = 1;

/// Malformed serialized graph. `offset` is the byte offset for syntax errors
/// (npos for schema errors); `field` is the JSON path of the offending field.
class GraphFormatError : public std::runtime_error {
public:
    GraphFormatError(std::string message, std::size_t offset, std::string field);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t offset_;
    std::string field_;
};

/// Well-formed graph that breaks model invariants (dangling ids etc).
class GraphValidationError : public std::runtime_error {
public:
    explicit GraphValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

nlohmann::json api_ref_to_json(const ApiRef& ref);
ApiRef api_ref_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json action_to_json(const Action& a);
nlohmann::json attributes_to_json(const ActionAttributes& attrs);
nlohmann::json relation_to_json(const Relation& r);
nlohmann::json snippet_to_json(const CodeSnippet& s);

nlohmann::json graph_to_json(const KnowledgeGraph& graph);

/// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string serialize_graph(const KnowledgeGraph& graph);

/// Parses and validates. Throws GraphFormatError or GraphValidationError.
KnowledgeGraph parse_graph(std::string_view text);

/// Throws GraphValidationError if the graph is invalid.
void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& destination);
KnowledgeGraph load_graph(const std::filesystem::path& source);

}  // namespace taskkg
