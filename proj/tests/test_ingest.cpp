// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "support.hpp"

#include "taskkg/ingest.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace taskkg;
using namespace taskkg::testing;

namespace {

std::vector<const DocNode*> of_kind(const TutorialDocument& d, NodeKind k) {
    std::vector<const DocNode*> out;
    for (const auto& n : d.nodes) {
        if (n.kind == k)
            out.push_back(&n);
    }
    return out;
}

DocNode code_node(std::string text, std::string lang = "java") {
    DocNode n;
    n.kind = NodeKind::code_block;
    n.text = std::move(text);
    n.language_hint = std::move(lang);
    return n;
}

}  // namespace

TEST(IngestTest, HeadingsAnchorsAndTree) {
    const std::string html = R"(<html><head><title>T</title></head><body>
<h1 id="top">Top</h1><p>Intro.</p>
<h2>Second Level &amp; More</h2><p>Body <b>bold</b> text.</p>
<h3 id="deep">Deep</h3><p>Deeper.</p>
<h2 id="back">Back</h2></body></html>)";
    auto d = parse_page(html, "x.html", {});
    EXPECT_EQ(d.title, "T");
    auto hs = of_kind(d, NodeKind::heading);
    ASSERT_EQ(hs.size(), 4u);
    EXPECT_EQ(hs[0]->anchor, "top");
    EXPECT_EQ(hs[1]->text, "Second Level & More");
    EXPECT_EQ(hs[1]->anchor, slugify("Second Level & More"));
    EXPECT_EQ(hs[2]->level, 3);
    const int h2 = d.find_heading(hs[1]->anchor);
    const int h3 = d.find_heading("deep");
    ASSERT_GE(h2, 0);
    ASSERT_GE(h3, 0);
    EXPECT_EQ(d.nodes[h3].parent, h2);
    EXPECT_EQ(d.nodes[d.find_heading("back")].parent, d.find_heading("top"));
    EXPECT_EQ(d.find_heading("missing"), -1);
    // Section stops at the next heading of any level.
    auto sec = d.section(h2);
    ASSERT_EQ(sec.size(), 2u);
    EXPECT_EQ(d.nodes[sec[1]].text, "Body bold text.");
}

TEST(IngestTest, ListsAreNumbered) {
    auto d = parse_page("<h1>L</h1><ol><li>One</li><li>Two <code>x()</code></li></ol><ul><li>Dot</li></ul>",
                        "l.html", {});
    auto items = of_kind(d, NodeKind::list_item);
    ASSERT_EQ(items.size(), 3u);
    EXPECT_TRUE(items[0]->ordered);
    EXPECT_EQ(items[0]->index, 1);
    EXPECT_EQ(items[1]->index, 2);
    EXPECT_EQ(items[0]->list_id, items[1]->list_id);
    EXPECT_FALSE(items[2]->ordered);
    EXPECT_NE(items[2]->list_id, items[0]->list_id);
    ASSERT_EQ(items[1]->inline_api_spans.size(), 1u);
    auto sp = items[1]->inline_api_spans[0];
    EXPECT_EQ(items[1]->text.substr(sp.start, sp.size()), "x()");
}

TEST(IngestTest, CodeBlocksNeedSelectorAndXmlIsExcluded) {
    const std::string html = R"(<h1>C</h1>
<pre>int stray;</pre>
<devsite-code><pre class="prettyprint lang-xml">&lt;View /&gt;</pre></devsite-code>
<devsite-code><pre class="prettyprint lang-java">int a = 1 &lt; 2;</pre></devsite-code>)";
    auto d = parse_page(html, "c.html", {});
    auto blocks = of_kind(d, NodeKind::code_block);
    std::vector<const DocNode*> kept;
    for (auto* b : blocks) {
        if (!b->is_xml)
            kept.push_back(b);
    }
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0]->text, "int a = 1 < 2;");
    EXPECT_EQ(kept[0]->language_hint, std::optional<std::string>("java"));

    IngestConfig any;
    any.code_block_selector = Selector::parse_list("pre");
    auto d2 = parse_page(html, "c.html", any);
    EXPECT_GT(of_kind(d2, NodeKind::code_block).size(), 1u);
}

TEST(IngestTest, MalformedMarkupNeverThrows) {
    for (const char* html : {"", "<", "<p>open", "<h2 id='x'>unterminated", "</p></div><li>x", "<pre>&bogus;</pre>",
                             "<p>\xff\xfe bad bytes</p>"}) {
        EXPECT_NO_THROW(parse_page(html, "m.html", {})) << html;
    }
}

TEST(IngestTest, VisibleTextOnly) {
    auto d = parse_page(
        "<h1>V</h1><script>var hidden = 1;</script><style>p{}</style><p>Shown <!-- gone -->text<br>here.</p>", "v.html",
        {});
    for (const auto& n : d.nodes) {
        EXPECT_EQ(n.text.find("hidden"), std::string::npos);
        EXPECT_EQ(n.text.find("gone"), std::string::npos);
        EXPECT_EQ(n.text.find('<'), std::string::npos);
    }
    auto ps = of_kind(d, NodeKind::paragraph);
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_EQ(normalize_space(ps[0]->text), "Shown text here.");
}

TEST(CommentTest, LineCommentsJoinAndGovernCode) {
    auto block = code_node("// Replace whatever is here,\n// and add it\nt.replace(a);\nt.add(b);\n\n// Commit\nt.commit();");
    auto segs = extract_comments(block, {});
    ASSERT_EQ(segs.size(), 2u);
    EXPECT_EQ(segs[0].text, "Replace whatever is here, and add it");
    auto code0 = block.text.substr(segs[0].code_span.start, segs[0].code_span.size());
    EXPECT_NE(code0.find("t.replace(a);"), std::string::npos);
    EXPECT_NE(code0.find("t.add(b);"), std::string::npos);
    EXPECT_EQ(code0.find("commit"), std::string::npos);
    EXPECT_EQ(segs[1].text, "Commit");
    EXPECT_NE(block.text.substr(segs[1].code_span.start, segs[1].code_span.size()).find("t.commit();"),
              std::string::npos);
}

TEST(CommentTest, BlockAndTrailingComments) {
    auto block = code_node("/* Build it\n * carefully */\nBuilder b = new Builder();\nb.show(); // Show it\n");
    auto segs = extract_comments(block, {});
    // Trailing comments stay with their code line.
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_EQ(segs[0].text, "Build it carefully");
    auto code = block.text.substr(segs[0].code_span.start, segs[0].code_span.size());
    EXPECT_NE(code.find("b.show(); // Show it"), std::string::npos);
}

TEST(CommentTest, OffsetsMapBackAndSpansDoNotOverlap) {
    const std::string text = read_text(fixtures() / "corpus" / "fragments.html");
    auto d = parse_page(text, "fragments.html", {});
    auto blocks = of_kind(d, NodeKind::code_block);
    ASSERT_EQ(blocks.size(), 1u);
    const auto& b = *blocks[0];
    ASSERT_EQ(b.comments.size(), 3u);
    for (std::size_t i = 0; i < b.comments.size(); ++i) {
        const auto& s = b.comments[i];
        ASSERT_EQ(s.text_offsets.size(), s.text.size());
        for (std::size_t j = 0; j < s.text.size(); ++j) {
            if (s.text[j] != ' ')
                EXPECT_EQ(b.text[s.text_offsets[j]], s.text[j]);
        }
        EXPECT_FALSE(s.comment_span.overlaps(s.code_span));
        if (i > 0) {
            EXPECT_FALSE(b.comments[i - 1].code_span.overlaps(s.code_span));
            EXPECT_FALSE(b.comments[i - 1].comment_span.overlaps(s.comment_span));
        }
    }
    EXPECT_EQ(b.comments[1].text,
              "Replace whatever is in the fragment_container view with this fragment, and add the transaction to "
              "the back stack");
}

TEST(CommentTest, LanguageStyles) {
    auto py = code_node("# set up\nx = 1\n", "python");
    auto segs = extract_comments(py, {});
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_EQ(segs[0].text, "set up");
    auto java = code_node("String s = \"// not a comment\";\n", "java");
    EXPECT_TRUE(extract_comments(java, {}).empty());
}

TEST(CorpusTest, LoadsSortedRelativeUris) {
    auto docs = load_corpus(fixtures() / "corpus", {});
    ASSERT_EQ(docs.size(), 3u);
    EXPECT_EQ(docs[0].page_uri, "dialogs.html");
    EXPECT_EQ(docs[1].page_uri, "fragments.html");
    EXPECT_EQ(docs[2].page_uri, "location.html");
    auto empty = fresh_dir("ingest-empty");
    EXPECT_TRUE(load_corpus(empty, {}).empty());
}

TEST(ConfigTest, IngestConfigKeepsDefaults) {
    auto c = IngestConfig::from_json(nlohmann::json::parse(R"({"exclude_xml": false})"));
    EXPECT_FALSE(c.exclude_xml);
    ASSERT_EQ(c.code_block_selector.size(), 1u);
    EXPECT_EQ(c.code_block_selector[0].tag, "devsite-code");
    auto sel = Selector::parse_list("pre.code, .snippet");
    ASSERT_EQ(sel.size(), 2u);
    EXPECT_EQ(sel[0].tag, "pre");
    EXPECT_EQ(sel[0].cls, "code");
    EXPECT_EQ(sel[1].tag, "");
    EXPECT_EQ(sel[1].cls, "snippet");
}
