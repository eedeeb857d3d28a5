// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/text.hpp"

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

/// `tag`, `tag.class` or `.class`; a selector list is comma separated.
struct Selector {
    std::string tag;
    std::string cls;

    static std::vector<Selector> parse_list(std::string_view text);
};

struct IngestConfig {
    std::vector<Selector> code_block_selector = Selector::parse_list("devsite-code");
    std::vector<Selector> inline_api_selector = Selector::parse_list("code, tt");
    bool exclude_xml = true;
    /// Line markers (`//`, `#`) and block pairs written as `open close` (`/* */`).
    std::vector<std::string> comment_styles{"//", "/* */"};

    /// Keys absent from `j` keep their defaults.
    static IngestConfig from_json(const nlohmann::json& j);
    static IngestConfig load(const std::filesystem::path& path);
};

struct CommentSegment {
    /// Comment content with markers stripped; consecutive lines joined by a space.
    std::string text;
    /// Range of the comment lines in the enclosing block.
    Span comment_span;
    /// Range of the code the comment governs; empty when nothing follows.
    Span code_span;
    /// Block offset for each byte of `text`.
    std::vector<std::size_t> text_offsets;
};

enum class NodeKind { heading, paragraph, code_block, list_item };

std::string_view to_string(NodeKind k);

struct DocNode {
    NodeKind kind = NodeKind::paragraph;
    std::string text;
    // heading
    int level = 0;
    std::string anchor;
    // list_item
    bool ordered = false;
    int index = 0;
    int list_id = -1;
    // paragraph / list_item
    std::vector<Span> inline_api_spans;
    // code_block
    std::vector<CommentSegment> comments;
    std::optional<std::string> language_hint;
    bool is_xml = false;
    /// Index of the enclosing heading node, -1 at page level.
    int parent = -1;
};

/// One parsed page. `nodes` is in source order; the heading tree is carried
/// by each node's `parent` link.
struct TutorialDocument {
    std::string page_uri;
    std::string title;
    std::vector<DocNode> nodes;

    /// Index of the heading whose anchor matches, or -1.
    int find_heading(std::string_view anchor) const;
    /// Node indices of the section opened by `heading` (the heading itself plus
    /// everything up to the next heading of any level). heading == -1 selects
    /// the page preamble.
    std::vector<int> section(int heading) const;
};

/// Lenient HTML to TutorialDocument. Never throws on malformed markup.
TutorialDocument parse_page(std::string_view html, std::string page_uri, const IngestConfig& config);

/// Comment segments of a code block, per the configured comment styles.
std::vector<CommentSegment> extract_comments(const DocNode& block, const IngestConfig& config);

/// Parses every `.html` file under `dir` (recursively), sorted by relative path;
/// page_uri is the relative path with forward slashes.
std::vector<TutorialDocument> load_corpus(const std::filesystem::path& dir, const IngestConfig& config);

/// Lowercase slug used for headings without an id.
std::string slugify(std::string_view text);

}  // namespace taskkg
