// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

// Acceptance runner: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include "support.hpp"

#include "taskkg/extract.hpp"
#include "taskkg/kg_io.hpp"
#include "taskkg/pipeline.hpp"
#include "taskkg/service.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sys/wait.h>

using namespace taskkg;
using namespace taskkg::testing;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int shell(const std::string& cmd, std::string* out = nullptr) {
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return -1;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) {
        if (out)
            out->append(buf, n);
    }
    const int status = pclose(p);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const std::filesystem::path& p) {
    return "'" + p.string() + "'";
}

std::string cli() {
    return q(TASKKG_CLI) + " -q ";
}

Outcome score_formula() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20260101);
    const auto configs = MatchConfig::all();
    std::uniform_int_distribution<std::size_t> pick_cfg(0, configs.size() - 1);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        auto universe = random_universe(rng, 6, 4);
        auto query = random_bag(rng, universe, 8, 1);
        auto snippet = random_bag(rng, universe, 10, 1);
        const auto& cfg = configs[pick_cfg(rng)];
        auto got = score(query, snippet, cfg);
        auto ref = oracle_score(query, snippet, cfg);
        o.require(got.has_value() == ref.defined, "definedness differs");
        if (!got || !ref.defined)
            continue;
        ++checked;
        o.require(std::fabs(*got - to_double(ref.value)) <= 1e-9, "score differs from oracle at triple " +
                                                                        std::to_string(i));
        if (cfg.unmatched == Unmatched::include)
            o.require(*got >= 1.0 - 1e-12 && *got <= 2.0 + 1e-12, "U score outside [1,2]");
        else
            o.require(*got >= -1e-12 && *got <= 2.0 + 1e-12, "M score outside [0,2]");
    }
    const double secs = seconds_since(t0);
    o.require(secs < 5.0, "runtime " + std::to_string(secs) + " s");
    if (o.ok)
        o.detail = std::to_string(checked) + " triples in " + std::to_string(secs) + " s";
    return o;
}

Outcome index_equivalence() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> n_snip(1, 500);
    std::uniform_int_distribution<int> n_cls(1, 12);
    long long compared = 0;
    for (int k = 0; k < 50 && o.ok; ++k) {
        // Up to 12 classes with up to 3 members: at most 48 distinct APIs.
        auto universe = random_universe(rng, n_cls(rng), 3);
        auto g = random_graph(rng, universe, n_snip(rng), 8);
        const ApiIndex api(g, Granularity::api);
        const ApiIndex cls(g, Granularity::class_);
        for (int qi = 0; qi < 4; ++qi) {
            auto apis = random_bag(rng, universe, 6, 1);
            for (auto cfg : MatchConfig::all()) {
                cfg.top_n = 10;
                MatchQuery mq;
                mq.apis = apis;
                mq.config = cfg;
                auto fast = search(mq, g, cfg.granularity == Granularity::api ? api : cls);
                auto slow = search_brute_force(mq, g);
                o.require(fast == slow, "index differs from brute force (graph " + std::to_string(k) + ", " +
                                            cfg.code() + ")");
                std::vector<std::string> ids;
                for (const auto& c : fast)
                    ids.push_back(c.snippet_id);
                o.require(ids == oracle_rank(apis, g, cfg),
                          "ranking differs from oracle (graph " + std::to_string(k) + ", " + cfg.code() + ")");
                ++compared;
            }
        }
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "runtime " + std::to_string(secs) + " s");
    if (o.ok)
        o.detail = std::to_string(compared) + " rankings over 50 graphs in " + std::to_string(secs) + " s";
    return o;
}

const Action* find_clause(const KnowledgeGraph& g, std::string_view needle, ActionSource src) {
    for (const auto& a : g.actions) {
        if (a.source == src && a.clause.find(needle) != std::string::npos)
            return &a;
    }
    return nullptr;
}

bool has_edge(const KnowledgeGraph& g, RelationKind k, const std::string& s, const std::string& d) {
    return std::find(g.relations.begin(), g.relations.end(), Relation{k, s, d}) != g.relations.end();
}

Outcome golden_pipeline() {
    Outcome o;
    const auto dict = load_dictionary(fixtures() / "dict.jsonl");
    BuildOptions opt;
    opt.dictionary = &dict;
    opt.corpus_id = "corpus";
    opt.created = "2026-01-01T00:00:00Z";
    auto g = build_graph(load_corpus(fixtures() / "corpus", opt.ingest), opt);
    o.require(serialize_graph(g) == read_text(fixtures() / "golden" / "kg.json"), "KG differs from golden file");
    o.require(validate(g).empty(), "validate reports violations");
    const auto& c = g.meta.counts.actions;
    o.require(c.at("heading") == 7 && c.at("text") == 11 && c.at("comment") == 11, "action counts");

    auto* task = find_clause(g, "Performing Fragment Transactions", ActionSource::heading);
    auto* text = find_clause(g, "replace one fragment with another", ActionSource::text);
    auto* dup = find_clause(g, "add the transaction to the back stack", ActionSource::comment);
    o.require(task && text && dup, "fixture actions missing");
    if (!o.ok)
        return o;
    const Action* replace = nullptr;
    const Action* preserve = nullptr;
    for (const auto& a : g.actions) {
        if (a.sentence == text->sentence && a.verb == "replace")
            replace = &a;
        if (a.sentence == text->sentence && a.verb == "preserve")
            preserve = &a;
    }
    o.require(replace && preserve, "replace/preserve actions missing");
    if (!o.ok)
        return o;
    o.require(has_edge(g, RelationKind::hierarchical, task->id, replace->id) &&
                  has_edge(g, RelationKind::hierarchical, task->id, preserve->id),
              "hierarchical edges");
    o.require(has_edge(g, RelationKind::descriptive_sibling, replace->id, preserve->id), "sibling edge");
    o.require(has_edge(g, RelationKind::duplicate, dup->id, preserve->id), "duplicate pair");
    bool both = false;
    for (const auto& s : g.snippets) {
        if (s.kind != SnippetKind::full_block)
            continue;
        const auto& linked = g.actions_for_snippet(s.id);
        if (std::find(linked.begin(), linked.end(), replace->id) != linked.end() &&
            std::find(linked.begin(), linked.end(), preserve->id) != linked.end())
            both = true;
    }
    o.require(both, "code block not linked to both sibling actions");
    if (o.ok)
        o.detail = "golden KG, edges, duplicate pair, shared block, 0 violations";
    return o;
}

json q9_response() {
    static const auto corpus = load_corpus(fixtures() / "corpus", {});
    Recommender rec(make_service_data(load_graph(fixtures() / "golden" / "kg.json"),
                                      load_dictionary(fixtures() / "dict.jsonl"), &corpus));
    return rec.recommend(json{{"code", read_text(fixtures() / "queries" / "q9_create_dialog.java")}, {"top_n", 3}});
}

Outcome q9_end_to_end() {
    Outcome o;
    const auto res = q9_response();
    int rank = -1;
    bool span = false;
    for (const auto& r : res.at("recommendations")) {
        if (r.at("label") != "Showing a Dialog Fullscreen or as an Embedded Fragment")
            continue;
        rank = r.at("rank");
        const auto& ex = r.at("excerpt");
        const std::string text = ex.at("text");
        for (const auto& s : ex.at("spans")) {
            const std::size_t b = s.at("start");
            const std::size_t e = s.at("end");
            if (text.substr(b, e - b) == "remove the dialog title")
                span = true;
        }
    }
    o.require(rank >= 1 && rank <= 3, "fullscreen dialog action not in top 3");
    o.require(span, "no highlight over \"remove the dialog title\"");
    o.require(q9_response() == res, "response differs between runs");
    if (o.ok)
        o.detail = "rank " + std::to_string(rank) + ", comment span present, stable";
    return o;
}

Outcome metrics_harness() {
    Outcome o;
    std::string out;
    const int code = shell(cli() + "eval --kg " + q(fixtures() / "eval" / "kg.json") + " --queries " +
                               q(fixtures() / "eval" / "queries.jsonl") + " --config all --json",
                           &out);
    o.require(code == 0, "eval exited " + std::to_string(code));
    json rows;
    try {
        rows = json::parse(out);
    } catch (const std::exception& e) {
        o.require(false, std::string("bad eval output: ") + e.what());
        return o;
    }
    o.require(rows.size() == 8, "expected 8 config rows");
    // Hand-computed over the 4-query fixture.
    const std::map<char, std::array<std::string, 4>> expected{
        {'A', {"1/2", "1/4", "1/2", "1/3"}},
        {'C', {"3/4", "1/3", "3/4", "6/13"}},
    };
    std::set<std::string> seen;
    for (const auto& r : rows) {
        const std::string cfg = r.at("config");
        seen.insert(cfg);
        const auto& want = expected.at(cfg[0]);
        o.require(r.at("accuracy") == want[0] && r.at("precision") == want[1] && r.at("recall") == want[2] &&
                      r.at("f1") == want[3],
                  "metrics differ for " + cfg);
    }
    o.require(seen.size() == 8, "duplicate config rows");
    if (o.ok)
        o.detail = "8 rows, exact rationals";
    return o;
}

Outcome classifier_default() {
    Outcome o;
    auto rec = [](std::string s) {
        SentenceRecord r;
        r.text = std::move(s);
        return r;
    };
    o.require(classify_activity_default(
                  rec("replace one fragment with another, and preserve the previous state to the back stack")) ==
                  Activity::activity,
              "replace sentence");
    o.require(classify_activity_default(
                  rec("you can remove the dialog title, but you must call the superclass to get the Dialog")) ==
                  Activity::activity,
              "remove sentence");
    o.require(classify_activity_default(rec("you can learn more about the other app components")) ==
                  Activity::non_activity,
              "learn sentence");
    if (o.ok)
        o.detail = "activity / activity / non_activity";
    return o;
}

Outcome determinism() {
    Outcome o;
    auto dir = fresh_dir("acceptance-build");
    for (const char* name : {"one.json", "two.json"}) {
        const int code = shell("SOURCE_DATE_EPOCH=1767225600 " + cli() + "build --corpus " +
                               q(fixtures() / "corpus") + " --dict " + q(fixtures() / "dict.jsonl") + " --out " +
                               q(dir / name) + " >/dev/null 2>&1");
        o.require(code == 0, "build exited " + std::to_string(code));
    }
    o.require(read_text(dir / "one.json") == read_text(dir / "two.json"), "rebuilds differ");
    std::string first;
    std::string second;
    const std::string search = cli() + "search --kg " + q(dir / "one.json") + " --dict " +
                               q(fixtures() / "dict.jsonl") + " --code " +
                               q(fixtures() / "queries" / "q9_create_dialog.java") + " --top 5";
    shell(search, &first);
    shell(search, &second);
    o.require(!first.empty() && first == second, "repeated searches differ");
    if (o.ok)
        o.detail = "byte-identical rebuild, identical rankings";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"score formula exactness", score_formula},
        {"index/oracle equivalence", index_equivalence},
        {"golden pipeline", golden_pipeline},
        {"Q9 end-to-end", q9_end_to_end},
        {"metrics harness", metrics_harness},
        {"classifier default", classifier_default},
        {"determinism/idempotence", determinism},
    };
    spdlog::set_level(spdlog::level::warn);
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.ok ? 0 : 1;
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ")" << std::endl;
    }
    return failed;
}
