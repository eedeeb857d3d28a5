// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/text.hpp"

#include <gtest/gtest.h>

using namespace taskkg;

TEST(PorterStemTest, ReferenceVocabulary) {
    const std::vector<std::pair<std::string, std::string>> cases{
        {"caresses", "caress"}, {"ponies", "poni"},       {"ties", "ti"},          {"caress", "caress"},
        {"cats", "cat"},        {"feed", "feed"},         {"agreed", "agre"},      {"plastered", "plaster"},
        {"motoring", "motor"},  {"sing", "sing"},         {"conflated", "conflat"}, {"troubled", "troubl"},
        {"sized", "size"},      {"hopping", "hop"},       {"filing", "file"},      {"happy", "happi"},
        {"relational", "relat"}, {"adjustment", "adjust"}, {"roll", "roll"},       {"generalization", "gener"},
    };
    for (const auto& [word, stem] : cases)
        EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(TokenizeTest, KeepsIdentifierShapes) {
    auto toks = tokenize_words("Call replace() on R.layout.x, here's fragment_container.");
    std::vector<std::string> words;
    for (const auto& t : toks)
        words.push_back(t.text);
    EXPECT_EQ(words, (std::vector<std::string>{"Call", "replace()", "on", "R.layout.x", ",", "here's",
                                               "fragment_container", "."}));
    for (const auto& t : toks)
        EXPECT_EQ(std::string("Call replace() on R.layout.x, here's fragment_container.")
                      .substr(t.span.start, t.span.size()),
                  t.text);
}

TEST(TextTest, NormalizeAndTrim) {
    EXPECT_EQ(normalize_space("  a \n\t b  "), "a b");
    EXPECT_EQ(trim("\n x \t"), "x");
    EXPECT_EQ(to_lower("AbC"), "abc");
}

TEST(TextTest, Fnv1aVectors) {
    EXPECT_EQ(fnv1a(""), 14695981039346656037ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(TextTest, ContentIdIsStableAndShaped) {
    auto a = content_id("act", {"page.html", "x"});
    EXPECT_EQ(a, content_id("act", {"page.html", "x"}));
    EXPECT_NE(a, content_id("act", {"page.htmlx", ""}));
    ASSERT_EQ(a.size(), 4u + 16u);
    EXPECT_EQ(a.substr(0, 4), "act-");
}

TEST(TextTest, SanitizeUtf8) {
    EXPECT_EQ(sanitize_utf8("ok \xc3\xa9"), "ok \xc3\xa9");
    EXPECT_EQ(sanitize_utf8("bad \xff!"), "bad \xef\xbf\xbd!");
}

TEST(SpanTest, Relations) {
    Span a{0, 5};
    Span b{3, 8};
    EXPECT_TRUE(a.overlaps(b));
    EXPECT_FALSE(a.contains(b));
    EXPECT_TRUE((Span{0, 10}).contains(b));
    EXPECT_FALSE((Span{5, 8}).overlaps(a));
}
