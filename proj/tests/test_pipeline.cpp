// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "support.hpp"

#include "taskkg/kg_io.hpp"
#include "taskkg/pipeline.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace taskkg;
using namespace taskkg::testing;

namespace {

const ApiDictionary& dict() {
    static const ApiDictionary d = load_dictionary(fixtures() / "dict.jsonl");
    return d;
}

BuildOptions fixture_options() {
    BuildOptions o;
    o.dictionary = &dict();
    o.corpus_id = "corpus";
    o.created = "2026-01-01T00:00:00Z";
    return o;
}

KnowledgeGraph fixture_graph() {
    auto o = fixture_options();
    return build_graph(load_corpus(fixtures() / "corpus", o.ingest), o);
}

const Action* by_clause(const KnowledgeGraph& g, std::string_view needle,
                        std::optional<ActionSource> src = std::nullopt) {
    for (const auto& a : g.actions) {
        if (a.clause.find(needle) != std::string::npos && (!src || a.source == *src))
            return &a;
    }
    return nullptr;
}

const Action* by_sentence(const KnowledgeGraph& g, std::string_view sentence) {
    for (const auto& a : g.actions) {
        if (a.sentence == sentence)
            return &a;
    }
    return nullptr;
}

bool has_edge(const KnowledgeGraph& g, RelationKind k, const std::string& src, const std::string& dst) {
    return std::find(g.relations.begin(), g.relations.end(), Relation{k, src, dst}) != g.relations.end();
}

}  // namespace

TEST(PipelineTest, MatchesGoldenFileExactly) {
    auto g = fixture_graph();
    EXPECT_TRUE(validate(g).empty());
    EXPECT_EQ(serialize_graph(g), read_text(fixtures() / "golden" / "kg.json"));
}

TEST(PipelineTest, ExpectedCounts) {
    auto g = fixture_graph();
    const auto& c = g.meta.counts;
    EXPECT_EQ(c.actions.at("heading"), 7u);
    EXPECT_EQ(c.actions.at("text"), 11u);
    EXPECT_EQ(c.actions.at("comment"), 11u);
    EXPECT_EQ(c.relations.at("hierarchical"), 26u);
    EXPECT_EQ(c.relations.at("descriptive_sibling"), 7u);
    EXPECT_EQ(c.relations.at("duplicate"), 5u);
    EXPECT_EQ(c.relations.at("precede_follow"), 2u);
    EXPECT_EQ(c.snippets.at("full_block"), 4u);
    EXPECT_EQ(c.snippets.at("comment_fragment"), 8u);
    EXPECT_TRUE(same_counts(c, g.recount()));
}

TEST(PipelineTest, FragmentTransactionTree) {
    auto g = fixture_graph();
    auto* task = by_sentence(g, "Performing Fragment Transactions");
    auto* replace = by_clause(g, "replace one fragment with another", ActionSource::text);
    auto* preserve = by_clause(g, "preserve the previous state", ActionSource::text);
    auto* back_stack = by_clause(g, "add the transaction to the back stack", ActionSource::comment);
    auto* whatever = by_clause(g, "Replace whatever", ActionSource::comment);
    ASSERT_TRUE(task && replace && preserve && back_stack && whatever);
    EXPECT_EQ(task->source, ActionSource::heading);
    EXPECT_EQ(replace->verb, "replace");
    EXPECT_EQ(replace->object, "fragment");
    EXPECT_EQ(preserve->verb, "preserve");
    EXPECT_EQ(preserve->object, "previous state");

    EXPECT_TRUE(has_edge(g, RelationKind::hierarchical, task->id, replace->id));
    EXPECT_TRUE(has_edge(g, RelationKind::hierarchical, task->id, preserve->id));
    EXPECT_TRUE(has_edge(g, RelationKind::descriptive_sibling, replace->id, preserve->id));
    EXPECT_TRUE(has_edge(g, RelationKind::duplicate, back_stack->id, preserve->id));
    EXPECT_TRUE(has_edge(g, RelationKind::duplicate, whatever->id, replace->id));

    // The transaction block is linked to both sibling actions.
    const auto* ra = g.find_attributes(replace->id);
    const auto* pa = g.find_attributes(preserve->id);
    ASSERT_TRUE(ra && pa);
    std::string block;
    for (const auto& id : ra->code) {
        if (g.find_snippet(id)->kind == SnippetKind::full_block)
            block = id;
    }
    ASSERT_FALSE(block.empty());
    EXPECT_NE(std::find(pa->code.begin(), pa->code.end(), block), pa->code.end());
    EXPECT_NE(g.find_snippet(block)->text.find("transaction.commit();"), std::string::npos);
}

TEST(PipelineTest, CommitFragmentLinksOnlyItsComment) {
    auto g = fixture_graph();
    auto* commit = by_clause(g, "Commit the transaction", ActionSource::comment);
    ASSERT_NE(commit, nullptr);
    const auto* a = g.find_attributes(commit->id);
    ASSERT_EQ(a->code.size(), 1u);
    const auto* frag = g.find_snippet(a->code[0]);
    EXPECT_EQ(frag->kind, SnippetKind::comment_fragment);
    EXPECT_NE(frag->text.find("transaction.commit();"), std::string::npos);
    EXPECT_EQ(g.actions_for_snippet(frag->id), (std::vector<std::string>{commit->id}));
}

TEST(PipelineTest, EverySnippetLinkedAndNoNonActivityLeaks) {
    auto g = fixture_graph();
    for (const auto& s : g.snippets)
        EXPECT_FALSE(g.actions_for_snippet(s.id).empty()) << s.id;
    for (const auto& a : g.actions) {
        if (a.source == ActionSource::text) {
            SentenceRecord r;
            r.text = a.sentence;
            EXPECT_EQ(classify_activity_default(r), Activity::activity) << a.sentence;
        }
    }
    EXPECT_EQ(by_clause(g, "learn more"), nullptr);
}

TEST(PipelineTest, RebuildIsIdempotent) {
    auto a = serialize_graph(fixture_graph());
    auto b = serialize_graph(fixture_graph());
    EXPECT_EQ(a, b);
    auto o = fixture_options();
    auto docs = load_corpus(fixtures() / "corpus", o.ingest);
    auto g = build_graph(docs, o);
    auto again = build_graph(docs, o);
    EXPECT_TRUE(g == again);
}

TEST(PipelineTest, EmptyAndXmlOnlyCorpora) {
    auto o = fixture_options();
    auto empty = build_graph({}, o);
    EXPECT_TRUE(empty.actions.empty());
    EXPECT_TRUE(validate(empty).empty());

    auto doc = parse_page(R"(<h1>Layouts</h1>
<devsite-code><pre class="prettyprint lang-xml">&lt;LinearLayout /&gt;</pre></devsite-code>)",
                          "xml.html", o.ingest);
    auto g = build_graph({doc}, o);
    EXPECT_TRUE(g.snippets.empty());
    EXPECT_TRUE(validate(g).empty());
}

TEST(PipelineTest, HeadingOnlyBlockFallsBackToHeading) {
    auto o = fixture_options();
    auto doc = parse_page(R"(<h1>Commit Work</h1>
<devsite-code><pre class="prettyprint lang-java">transaction.commit();</pre></devsite-code>)",
                          "h.html", o.ingest);
    auto g = build_graph({doc}, o);
    ASSERT_EQ(g.snippets.size(), 1u);
    auto linked = g.actions_for_snippet(g.snippets[0].id);
    ASSERT_EQ(linked.size(), 1u);
    EXPECT_EQ(g.find_action(linked[0])->source, ActionSource::heading);
    EXPECT_TRUE(validate(g).empty());
}

TEST(PipelineTest, OrderedListPrecedeFollow) {
    auto g = fixture_graph();
    std::size_t pf = 0;
    for (const auto& r : g.relations) {
        if (r.kind != RelationKind::precede_follow)
            continue;
        ++pf;
        EXPECT_EQ(g.find_action(r.src)->page_uri, "location.html");
        EXPECT_LT(g.action_position(r.src), g.action_position(r.dst));
    }
    EXPECT_EQ(pf, 2u);
}

TEST(DuplicateTest, JaccardThreshold) {
    JaccardDuplicateDetector d;
    EXPECT_TRUE(d.is_duplicate("add the transaction to the back stack", "preserve the previous state in the back stack"));
    EXPECT_FALSE(d.is_duplicate("Commit the transaction", "replace one fragment with another"));
    EXPECT_DOUBLE_EQ(d.similarity("back stack", "stack back"), 1.0);
    EXPECT_TRUE(default_duplicate_detector("Replace whatever is in the fragment_container view",
                                           "replace one fragment with another"));
}

TEST(ManifestTest, JsonRoundTrip) {
    BuildManifest m;
    m.corpus_dir = "corpus";
    m.api_dict_path = "dict.jsonl";
    m.output_path = "kg.json";
    m.counts = fixture_graph().meta.counts;
    auto back = BuildManifest::from_json(m.to_json());
    EXPECT_EQ(back.corpus_dir, m.corpus_dir);
    EXPECT_EQ(back.output_path, m.output_path);
    EXPECT_EQ(back.counts, m.counts);
    auto golden = nlohmann::json::parse(read_text(fixtures() / "golden" / "manifest.json"));
    EXPECT_EQ(BuildManifest::from_json(golden).counts, m.counts);
}
