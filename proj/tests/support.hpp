// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

// Fixture paths, random graph generators and reference oracles shared by the
// unit tests and the acceptance runner. Oracles are written from the scoring
// and metric definitions and share no code with the engine.

#pragma once

#include "taskkg/match.hpp"
#include "taskkg/model.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace taskkg::testing {

inline std::filesystem::path fixtures() {
    return TASKKG_FIXTURES;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("taskkg-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// (λ1·M + λ2'·U)/|E| straight from the definition, in exact arithmetic.
struct OracleScore {
    Rational value;
    long long distinct_matched = 0;
    bool defined = false;
};

inline std::string oracle_key(const ApiRef& r, bool class_level) {
    return class_level ? r.declaring_class : r.fqn;
}

inline OracleScore oracle_score(const std::vector<ApiRef>& query, const std::vector<ApiRef>& snippet,
                                const MatchConfig& c, long long l1 = 2, long long l2 = 1) {
    const bool cls = c.granularity == Granularity::class_;
    std::set<std::string> q;
    for (const auto& r : query)
        q.insert(oracle_key(r, cls));
    std::vector<std::string> elems;
    for (const auto& r : snippet)
        elems.push_back(oracle_key(r, cls));
    if (c.multiplicity == Multiplicity::set) {
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    }
    OracleScore s;
    if (elems.empty())
        return s;
    long long m = 0;
    long long u = 0;
    std::set<std::string> hit;
    for (const auto& e : elems) {
        if (q.count(e)) {
            ++m;
            hit.insert(e);
        } else {
            ++u;
        }
    }
    const long long w2 = c.unmatched == Unmatched::include ? l2 : 0;
    s.value = Rational(l1 * m + w2 * u, static_cast<long long>(elems.size()));
    s.distinct_matched = static_cast<long long>(hit.size());
    s.defined = true;
    return s;
}

/// Snippet ids ranked by the oracle: every snippet sharing a key, score desc,
/// distinct matched keys desc, id asc; first top_n.
inline std::vector<std::string> oracle_rank(const std::vector<ApiRef>& query, const KnowledgeGraph& g,
                                            const MatchConfig& c) {
    struct Row {
        std::string id;
        Rational score;
        long long keys;
    };
    std::vector<Row> rows;
    for (const auto& s : g.snippets) {
        auto o = oracle_score(query, s.apis, c);
        if (o.defined && o.distinct_matched > 0)
            rows.push_back({s.id, o.value, o.distinct_matched});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.keys != b.keys)
            return a.keys > b.keys;
        return a.id < b.id;
    });
    std::vector<std::string> out;
    for (const auto& r : rows) {
        if (static_cast<int>(out.size()) == c.top_n)
            break;
        out.push_back(r.id);
    }
    return out;
}

struct OracleMetrics {
    Rational acc, pre, rec, f1;
};

/// Top-k metrics from per-query rankings and truth sets.
inline OracleMetrics oracle_metrics(const std::vector<std::vector<std::string>>& ranked,
                                    const std::vector<std::set<std::string>>& truth, int k) {
    OracleMetrics m;
    const auto n = static_cast<long long>(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        long long hits = 0;
        for (const auto& id : ranked[i])
            hits += truth[i].count(id) ? 1 : 0;
        m.acc += Rational(hits > 0 ? 1 : 0, n);
        m.pre += Rational(hits, k * n);
        m.rec += Rational(hits, static_cast<long long>(truth[i].size()) * n);
    }
    if (m.pre.numerator() != 0 || m.rec.numerator() != 0)
        m.f1 = Rational(2) * m.pre * m.rec / (m.pre + m.rec);
    return m;
}

/// Random API universe: `classes` classes with up to `members` methods each.
inline std::vector<ApiRef> random_universe(std::mt19937_64& rng, int classes, int members) {
    std::vector<ApiRef> out;
    std::uniform_int_distribution<int> count(0, members);
    for (int c = 0; c < classes; ++c) {
        auto cls = "pkg.C" + std::to_string(c);
        out.push_back(class_ref(cls));
        const int m = count(rng);
        for (int j = 0; j < m; ++j)
            out.push_back({cls + ".m" + std::to_string(j), ApiKind::method, cls});
    }
    return out;
}

inline std::vector<ApiRef> random_bag(std::mt19937_64& rng, const std::vector<ApiRef>& universe, int max_len,
                                      int min_len = 0) {
    std::uniform_int_distribution<int> len(min_len, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
    std::vector<ApiRef> out;
    const int n = len(rng);
    for (int i = 0; i < n; ++i)
        out.push_back(universe[pick(rng)]);
    return out;
}

/// Graph of `snippets` full blocks over `universe`, each linked from one text
/// action under a single heading. Reindexed.
inline KnowledgeGraph random_graph(std::mt19937_64& rng, const std::vector<ApiRef>& universe, int snippets,
                                   int max_apis) {
    KnowledgeGraph g;
    g.meta.corpus_id = "random";
    Action root;
    root.id = "act-root";
    root.object = "Random";
    root.sentence = "Random";
    root.source = ActionSource::heading;
    root.page_uri = "random.html";
    g.actions.push_back(root);
    g.attributes[root.id] = {};
    for (int i = 0; i < snippets; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "snip-%05d", i);
        CodeSnippet s;
        s.id = id;
        s.text = "code();";
        s.page_uri = "random.html";
        s.apis = random_bag(rng, universe, max_apis);
        Action a;
        a.id = "act-" + std::to_string(i);
        a.verb = "use";
        a.object = s.id;
        a.sentence = "Use " + s.id + ".";
        a.page_uri = "random.html";
        g.actions.push_back(a);
        g.attributes[a.id].code.push_back(s.id);
        g.relations.push_back({RelationKind::hierarchical, root.id, a.id});
        g.snippets.push_back(std::move(s));
    }
    g.meta.counts = g.recount();
    g.reindex();
    return g;
}

}  // namespace taskkg::testing
