// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "support.hpp"

#include "taskkg/kg_io.hpp"
#include "taskkg/match.hpp"

#include <gtest/gtest.h>

using namespace taskkg;
using namespace taskkg::testing;

namespace {

ApiRef method(const std::string& cls, const std::string& name) {
    return {cls + "." + name, ApiKind::method, cls};
}

std::vector<std::string> ids(const std::vector<ScoredCandidate>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs)
        out.push_back(c.snippet_id);
    return out;
}

}  // namespace

TEST(MatchConfigTest, ParsesEveryLabel) {
    const std::vector<std::string> labels{"A-B-U", "A-B-M", "A-S-U", "A-S-M", "C-B-U", "C-B-M", "C-S-U", "C-S-M"};
    auto all = MatchConfig::all();
    ASSERT_EQ(all.size(), labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_EQ(all[i].code(), labels[i]);
        EXPECT_EQ(MatchConfig::parse(labels[i]).code(), labels[i]);
    }
}

TEST(MatchConfigTest, BadTokenIsNamed) {
    try {
        MatchConfig::parse("Z-B-U");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.token(), "Z");
    }
    try {
        MatchConfig::parse("A-Q-U");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.token(), "Q");
    }
    EXPECT_THROW(MatchConfig::parse("A-B"), ConfigError);
    EXPECT_THROW(MatchConfig::parse(""), ConfigError);
    MatchConfig c;
    c.top_n = 0;
    EXPECT_THROW(c.check(), ConfigError);
}

TEST(ScoreTest, HandWorkedBag) {
    // Query {X.a}; snippet [X, X.a, X.a]: M=2, U=1 -> (2*2 + 1)/3.
    std::vector<ApiRef> snippet{class_ref("p.X"), method("p.X", "a"), method("p.X", "a")};
    std::vector<ApiRef> query{method("p.X", "a")};
    auto s = score(query, snippet, MatchConfig::parse("A-B-U"));
    ASSERT_TRUE(s);
    EXPECT_NEAR(*s, 5.0 / 3.0, 1e-12);
    // Set: {X, X.a}: M=1, U=1 -> 3/2.
    EXPECT_NEAR(*score(query, snippet, MatchConfig::parse("A-S-U")), 1.5, 1e-12);
    // Exclude unmatched: 4/3 and 1.
    EXPECT_NEAR(*score(query, snippet, MatchConfig::parse("A-B-M")), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(*score(query, snippet, MatchConfig::parse("A-S-M")), 1.0, 1e-12);
    // Class granularity: every element maps to p.X, all matched.
    EXPECT_NEAR(*score(query, snippet, MatchConfig::parse("C-B-U")), 2.0, 1e-12);
}

TEST(ScoreTest, EmptySnippetIsSkipped) {
    EXPECT_FALSE(score({class_ref("p.X")}, {}, MatchConfig{}));
}

TEST(ScoreTest, FuzzedAgainstOracleAndBounds) {
    std::mt19937_64 rng(7);
    auto universe = random_universe(rng, 6, 4);
    for (int i = 0; i < 2000; ++i) {
        auto q = random_bag(rng, universe, 6, 1);
        auto s = random_bag(rng, universe, 10);
        for (const auto& c : MatchConfig::all()) {
            auto got = score(q, s, c);
            auto want = oracle_score(q, s, c);
            ASSERT_EQ(got.has_value(), want.defined);
            if (!got)
                continue;
            ASSERT_NEAR(*got, to_double(want.value), 1e-9);
            const double lo = c.unmatched == Unmatched::include ? 1.0 : 0.0;
            ASSERT_GE(*got, lo - 1e-12);
            ASSERT_LE(*got, 2.0 + 1e-12);
        }
    }
}

TEST(ScoreTest, SetScoreIgnoresDuplicates) {
    std::mt19937_64 rng(11);
    auto universe = random_universe(rng, 4, 3);
    for (int i = 0; i < 300; ++i) {
        auto q = random_bag(rng, universe, 4, 1);
        auto s = random_bag(rng, universe, 8, 1);
        auto doubled = s;
        doubled.insert(doubled.end(), s.begin(), s.end());
        for (const auto& c : MatchConfig::all()) {
            if (c.multiplicity == Multiplicity::set)
                ASSERT_DOUBLE_EQ(*score(q, s, c), *score(q, doubled, c));
        }
    }
}

TEST(SearchTest, IndexAgreesWithBruteForceAndOracle) {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 10; ++round) {
        auto universe = random_universe(rng, 8, 5);
        auto g = random_graph(rng, universe, 120, 8);
        for (const auto& base : MatchConfig::all()) {
            auto index = build_index(g, base.granularity);
            for (int qi = 0; qi < 10; ++qi) {
                MatchQuery q;
                q.apis = random_bag(rng, universe, 3, 1);
                q.config = base;
                q.config.top_n = 5;
                auto fast = search(q, g, index);
                ASSERT_EQ(fast, search_brute_force(q, g));
                ASSERT_EQ(ids(fast), oracle_rank(q.apis, g, q.config));
            }
        }
    }
}

TEST(SearchTest, TieBreaksByMatchedKeysThenId) {
    KnowledgeGraph g;
    auto add = [&](const std::string& id, std::vector<ApiRef> apis) {
        CodeSnippet s;
        s.id = id;
        s.apis = std::move(apis);
        g.snippets.push_back(std::move(s));
    };
    // Both score 2 under A-S-M; "b" matches two distinct keys.
    add("a", {class_ref("p.X")});
    add("b", {class_ref("p.X"), class_ref("p.Y")});
    add("c", {class_ref("p.Y")});
    g.reindex();
    MatchQuery q;
    q.apis = {class_ref("p.X"), class_ref("p.Y")};
    q.config = MatchConfig::parse("A-S-M");
    EXPECT_EQ(ids(search(q, g, build_index(g, Granularity::api))), (std::vector<std::string>{"b", "a", "c"}));
}

TEST(SearchTest, GranularityMismatchThrows) {
    KnowledgeGraph g;
    g.reindex();
    MatchQuery q;
    q.config = MatchConfig::parse("C-B-U");
    EXPECT_THROW(search(q, g, build_index(g, Granularity::api)), std::invalid_argument);
}

TEST(SearchTest, RepeatedSearchIsDeterministic) {
    std::mt19937_64 rng(5);
    auto universe = random_universe(rng, 5, 4);
    auto g = random_graph(rng, universe, 60, 6);
    auto index = build_index(g, Granularity::api);
    MatchQuery q;
    q.apis = random_bag(rng, universe, 3, 1);
    auto first = search(q, g, index);
    for (int i = 0; i < 5; ++i)
        EXPECT_EQ(search(q, g, index), first);
}

TEST(QueryTest, KeyApiSelectionResolution) {
    ApiDictionary dict;
    dict.add(class_ref("android.location.LocationManager"));
    dict.add(method("android.location.LocationManager", "requestLocationUpdates"));
    auto q = key_api_query({"android.location.LocationManager.requestLocationUpdates"}, dict, MatchConfig{});
    ASSERT_EQ(q.apis.size(), 1u);
    EXPECT_EQ(q.apis[0].declaring_class, "android.location.LocationManager");
    EXPECT_EQ(q.origin, QueryOrigin::key_api);

    auto bare = key_api_query({"requestLocationUpdates()"}, dict, MatchConfig{});
    ASSERT_EQ(bare.apis.size(), 1u);
    EXPECT_EQ(bare.apis[0].fqn, "android.location.LocationManager.requestLocationUpdates");

    auto unknown = key_api_query({"com.example.Widget", "com.example.Widget.paint"}, dict, MatchConfig{});
    ASSERT_EQ(unknown.apis.size(), 2u);
    EXPECT_EQ(unknown.apis[0], class_ref("com.example.Widget"));
    EXPECT_EQ(unknown.apis[1].declaring_class, "com.example.Widget");
}

TEST(QueryRecordsTest, ParsesAndReportsIndex) {
    auto qs = parse_queries(
        "{\"query_id\":\"a\",\"origin\":\"key_api\",\"apis\":[\"p.X\"],\"truth_snippet_ids\":[\"s1\"]}\n\n"
        "{\"query_id\":\"b\",\"code\":\"x.y();\",\"truth_snippet_ids\":[\"s2\"]}\n");
    ASSERT_EQ(qs.size(), 2u);
    EXPECT_EQ(qs[1].origin, QueryOrigin::all_code);
    try {
        parse_queries("{\"query_id\":\"a\",\"code\":\"\",\"truth_snippet_ids\":[\"s\"]}\n{\"query_id\":1}\n");
        FAIL();
    } catch (const QueryRecordError& e) {
        EXPECT_EQ(e.index(), 1u);
    }
    EXPECT_THROW(parse_queries("{\"query_id\":\"a\",\"code\":\"x\",\"truth_snippet_ids\":[]}"), QueryRecordError);
    EXPECT_THROW(parse_queries("not json"), QueryRecordError);
}

class EvalFixture : public ::testing::Test {
protected:
    void SetUp() override {
        graph = load_graph(fixtures() / "eval" / "kg.json");
        queries = load_queries(fixtures() / "eval" / "queries.jsonl");
        dict = ApiDictionary::from_graph(graph);
    }
    KnowledgeGraph graph;
    std::vector<LabeledQuery> queries;
    ApiDictionary dict;
};

TEST_F(EvalFixture, HandComputedABU) {
    auto m = evaluate(queries, graph, dict, MatchConfig::parse("A-B-U"));
    EXPECT_EQ(m.accuracy, Rational(1, 2));
    EXPECT_EQ(m.precision, Rational(1, 4));
    EXPECT_EQ(m.recall, Rational(1, 2));
    EXPECT_EQ(m.f1, Rational(1, 3));
}

TEST_F(EvalFixture, HandComputedCSM) {
    auto m = evaluate(queries, graph, dict, MatchConfig::parse("C-S-M"));
    EXPECT_EQ(m.accuracy, Rational(3, 4));
    EXPECT_EQ(m.precision, Rational(1, 3));
    EXPECT_EQ(m.recall, Rational(3, 4));
    EXPECT_EQ(m.f1, Rational(6, 13));
}

TEST_F(EvalFixture, EveryConfigMatchesOracle) {
    for (const auto& c : MatchConfig::all()) {
        std::vector<std::vector<std::string>> ranked;
        std::vector<std::set<std::string>> truth;
        for (const auto& q : queries) {
            std::vector<ApiRef> apis;
            for (const auto& fqn : q.apis)
                apis.push_back(*dict.find(fqn));
            ranked.push_back(oracle_rank(apis, graph, c));
            truth.emplace_back(q.truth_snippet_ids.begin(), q.truth_snippet_ids.end());
        }
        auto want = oracle_metrics(ranked, truth, c.top_n);
        auto got = evaluate(queries, graph, dict, c);
        EXPECT_EQ(got.accuracy, want.acc) << c.code();
        EXPECT_EQ(got.precision, want.pre) << c.code();
        EXPECT_EQ(got.recall, want.rec) << c.code();
        EXPECT_EQ(got.f1, want.f1) << c.code();
    }
}

TEST_F(EvalFixture, UnknownTruthIdRejected) {
    auto bad = queries;
    bad[2].truth_snippet_ids = {"nope"};
    try {
        evaluate(bad, graph, dict, MatchConfig{});
        FAIL();
    } catch (const QueryRecordError& e) {
        EXPECT_EQ(e.index(), 2u);
    }
}

TEST_F(EvalFixture, SingleAllHitQuery) {
    std::vector<LabeledQuery> one{queries[0]};
    auto m = evaluate(one, graph, dict, MatchConfig{});
    EXPECT_EQ(m.accuracy, Rational(1));
    EXPECT_EQ(m.recall, Rational(1));
}
