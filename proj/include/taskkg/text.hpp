// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

/// Half-open byte range.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(const Span& o) const { return start <= o.start && o.end <= end; }
    bool overlaps(const Span& o) const { return start < o.end && o.start < end; }

    auto operator<=>(const Span&) const = default;
};

/// Word or punctuation token of natural-language text with its byte range.
struct Token {
    std::string text;
    Span span;
    bool word = true;
};

/// Splits prose into words and single-character punctuation. Identifier-like
/// words keep inner dots, underscores, apostrophes, hyphens and a trailing `()`
/// (`R.layout.x`, `fragment_container`, `here's`, `replace()`).
std::vector<Token> tokenize_words(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
/// Collapses whitespace runs into single spaces and trims.
std::string normalize_space(std::string_view s);

/// Porter (1980) suffix-stripping stemmer over lowercase ASCII words.
std::string porter_stem(std::string_view word);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);

/// Content-derived identifier: `<prefix>-<16 hex digits>` over the parts joined
/// with a unit separator.
std::string content_id(std::string_view prefix, std::initializer_list<std::string_view> parts);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace taskkg
