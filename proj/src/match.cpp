// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/match.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace taskkg {

std::string MatchConfig::code() const {
    std::string s;
    s += granularity == Granularity::api ? 'A' : 'C';
    s += '-';
    s += multiplicity == Multiplicity::bag ? 'B' : 'S';
    s += '-';
    s += unmatched == Unmatched::include ? 'U' : 'M';
    return s;
}

void MatchConfig::check() const {
    if (!(lambda1 > 0))
        throw ConfigError("lambda1 must be > 0", "lambda1");
    if (!(lambda2 >= 0))
        throw ConfigError("lambda2 must be >= 0", "lambda2");
    if (top_n < 1)
        throw ConfigError("top_n must be >= 1", "top_n");
}

MatchConfig MatchConfig::parse(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        auto dash = text.find('-', pos);
        parts.emplace_back(text.substr(pos, dash == std::string_view::npos ? std::string_view::npos : dash - pos));
        if (dash == std::string_view::npos)
            break;
        pos = dash + 1;
    }
    if (parts.size() != 3)
        throw ConfigError("config must look like A-B-U, got '" + std::string(text) + "'", std::string(text));
    MatchConfig c;
    auto bad = [](const std::string& tok, const char* expected) {
        throw ConfigError("bad config token '" + tok + "' (expected " + expected + ")", tok);
    };
    const auto& g = parts[0];
    const auto& m = parts[1];
    const auto& u = parts[2];
    if (g == "A")
        c.granularity = Granularity::api;
    else if (g == "C")
        c.granularity = Granularity::class_;
    else
        bad(g, "A or C");
    if (m == "B")
        c.multiplicity = Multiplicity::bag;
    else if (m == "S")
        c.multiplicity = Multiplicity::set;
    else
        bad(m, "B or S");
    if (u == "U")
        c.unmatched = Unmatched::include;
    else if (u == "M")
        c.unmatched = Unmatched::exclude;
    else
        bad(u, "U or M");
    return c;
}

std::vector<MatchConfig> MatchConfig::all() {
    std::vector<MatchConfig> out;
    for (auto g : {Granularity::api, Granularity::class_}) {
        for (auto m : {Multiplicity::bag, Multiplicity::set}) {
            for (auto u : {Unmatched::include, Unmatched::exclude}) {
                MatchConfig c;
                c.granularity = g;
                c.multiplicity = m;
                c.unmatched = u;
                out.push_back(c);
            }
        }
    }
    return out;
}

const std::string& api_key(const ApiRef& ref, Granularity g) {
    return g == Granularity::api ? ref.fqn : ref.declaring_class;
}

ApiRef at_granularity(const ApiRef& ref, Granularity g) {
    return g == Granularity::api ? ref : class_ref(ref.declaring_class);
}

ScoreParts score_parts(const std::vector<ApiRef>& query_apis, const std::vector<ApiRef>& snippet_apis,
                       const MatchConfig& config) {
    std::set<std::string_view> query_keys;
    for (const auto& r : query_apis)
        query_keys.insert(api_key(r, config.granularity));
    std::map<std::string_view, long long> counts;
    for (const auto& r : snippet_apis)
        ++counts[api_key(r, config.granularity)];

    ScoreParts p;
    for (const auto& [key, n] : counts) {
        const long long weight = config.multiplicity == Multiplicity::bag ? n : 1;
        p.total += weight;
        if (query_keys.contains(key)) {
            p.matched += weight;
            ++p.matched_keys;
        }
    }
    p.unmatched = p.total - p.matched;
    return p;
}

std::optional<double> score(const std::vector<ApiRef>& query_apis, const std::vector<ApiRef>& snippet_apis,
                            const MatchConfig& config) {
    auto p = score_parts(query_apis, snippet_apis, config);
    if (p.total == 0)
        return std::nullopt;
    return (config.lambda1 * static_cast<double>(p.matched) +
            config.effective_lambda2() * static_cast<double>(p.unmatched)) /
           static_cast<double>(p.total);
}

std::string_view to_string(QueryOrigin o) {
    return o == QueryOrigin::all_code ? "all_code" : "key_api";
}

MatchQuery code_query(std::string code, const ApiDictionary& dict, const MatchConfig& config) {
    MatchQuery q;
    q.origin = QueryOrigin::all_code;
    for (const auto& m : recognize(code, dict))
        q.apis.push_back(m.resolved);
    q.code = std::move(code);
    q.config = config;
    return q;
}

MatchQuery key_api_query(const std::vector<std::string>& selection, const ApiDictionary& dict,
                         const MatchConfig& config) {
    MatchQuery q;
    q.origin = QueryOrigin::key_api;
    q.config = config;
    for (const auto& raw : selection) {
        auto s = std::string(trim(raw));
        while (s.size() > 2 && s.compare(s.size() - 2, 2, "()") == 0)
            s.resize(s.size() - 2);
        if (s.empty())
            continue;
        if (const auto* ref = dict.find(s)) {
            q.apis.push_back(*ref);
            continue;
        }
        auto dot = s.rfind('.');
        bool plain_name = std::all_of(s.begin(), s.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '.';
        });
        if (dot != std::string::npos && plain_name && dot + 1 < s.size() && dot > 0) {
            // Dotted name unknown to the dictionary: a qualified class when the
            // last segment is capitalized, else a member of the prefix.
            auto last = s.substr(dot + 1);
            auto owner = s.substr(0, dot);
            bool owner_is_class = std::isupper(static_cast<unsigned char>(owner[owner.rfind('.') == std::string::npos ? 0 : owner.rfind('.') + 1]));
            if (std::isupper(static_cast<unsigned char>(last[0])) && !owner_is_class) {
                q.apis.push_back(class_ref(s));
            } else if (owner.find('.') != std::string::npos || dict.find(owner)) {
                q.apis.push_back({s, ApiKind::method, owner});
            } else {
                for (const auto& m : recognize(s, dict))
                    q.apis.push_back(m.resolved);
            }
            continue;
        }
        for (const auto& m : recognize(s, dict))
            q.apis.push_back(m.resolved);
    }
    return q;
}

ApiIndex::ApiIndex(const KnowledgeGraph& graph, Granularity granularity) : granularity_(granularity) {
    for (std::size_t i = 0; i < graph.snippets.size(); ++i) {
        for (const auto& r : graph.snippets[i].apis) {
            auto& list = postings_[api_key(r, granularity)];
            if (list.empty() || list.back() != i)
                list.push_back(i);
        }
    }
}

const std::vector<std::size_t>& ApiIndex::postings(std::string_view key) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = postings_.find(key);
    return it == postings_.end() ? kEmpty : it->second;
}

ApiIndex build_index(const KnowledgeGraph& graph, Granularity granularity) {
    return ApiIndex(graph, granularity);
}

namespace {

std::optional<ScoredCandidate> score_snippet(const MatchQuery& query, const KnowledgeGraph& graph,
                                             const CodeSnippet& snippet) {
    const auto& cfg = query.config;
    auto parts = score_parts(query.apis, snippet.apis, cfg);
    if (parts.total == 0)
        return std::nullopt;
    ScoredCandidate c;
    c.snippet_id = snippet.id;
    c.score = (cfg.lambda1 * static_cast<double>(parts.matched) +
               cfg.effective_lambda2() * static_cast<double>(parts.unmatched)) /
              static_cast<double>(parts.total);
    c.matched_keys = parts.matched_keys;

    std::set<std::string> query_keys;
    for (const auto& r : query.apis)
        query_keys.insert(api_key(r, cfg.granularity));
    std::set<std::string> seen;
    for (const auto& r : snippet.apis) {
        auto ref = at_granularity(r, cfg.granularity);
        if (cfg.multiplicity == Multiplicity::set && !seen.insert(ref.fqn).second)
            continue;
        (query_keys.contains(ref.fqn) ? c.matched : c.unmatched).push_back(std::move(ref));
    }
    c.action_ids = graph.actions_for_snippet(snippet.id);
    return c;
}

void rank(std::vector<ScoredCandidate>& out, int top_n) {
    std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        if (a.score != b.score)
            return a.score > b.score;
        if (a.matched_keys != b.matched_keys)
            return a.matched_keys > b.matched_keys;
        return a.snippet_id < b.snippet_id;
    });
    if (out.size() > static_cast<std::size_t>(top_n))
        out.resize(static_cast<std::size_t>(top_n));
}

}  // namespace

std::vector<ScoredCandidate> search(const MatchQuery& query, const KnowledgeGraph& graph, const ApiIndex& index) {
    query.config.check();
    if (index.granularity() != query.config.granularity)
        throw std::invalid_argument("index granularity does not match the query config");
    std::set<std::size_t> candidates;
    for (const auto& r : query.apis) {
        const auto& list = index.postings(api_key(r, query.config.granularity));
        candidates.insert(list.begin(), list.end());
    }
    std::vector<ScoredCandidate> out;
    for (auto i : candidates) {
        if (auto c = score_snippet(query, graph, graph.snippets[i]))
            out.push_back(std::move(*c));
    }
    rank(out, query.config.top_n);
    return out;
}

std::vector<ScoredCandidate> search_brute_force(const MatchQuery& query, const KnowledgeGraph& graph) {
    query.config.check();
    std::vector<ScoredCandidate> out;
    for (const auto& s : graph.snippets) {
        auto c = score_snippet(query, graph, s);
        if (c && !c->matched.empty())
            out.push_back(std::move(*c));
    }
    rank(out, query.config.top_n);
    return out;
}

std::vector<LabeledQuery> parse_queries(std::string_view jsonl) {
    std::vector<LabeledQuery> out;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        auto nl = jsonl.find('\n', pos);
        auto line = trim(jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
        if (line.empty())
            continue;
        const std::size_t index = out.size();
        auto fail = [&](const std::string& why) -> void {
            throw QueryRecordError("query record " + std::to_string(index) + ": " + why, index);
        };
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            fail(std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object())
            fail("expected an object");
        LabeledQuery q;
        try {
            q.query_id = j.at("query_id").get<std::string>();
            auto origin = j.value("origin", std::string("all_code"));
            if (origin == "all_code")
                q.origin = QueryOrigin::all_code;
            else if (origin == "key_api")
                q.origin = QueryOrigin::key_api;
            else
                fail("unknown origin '" + origin + "'");
            if (q.origin == QueryOrigin::all_code)
                q.code = j.at("code").get<std::string>();
            else
                q.apis = j.at("apis").get<std::vector<std::string>>();
            q.truth_snippet_ids = j.at("truth_snippet_ids").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            fail(e.what());
        }
        if (q.truth_snippet_ids.empty())
            fail("no ground-truth snippet ids");
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<LabeledQuery> load_queries(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open query file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_queries(buf.str());
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Metrics evaluate(const std::vector<LabeledQuery>& queries, const KnowledgeGraph& graph, const ApiDictionary& dict,
                 const MatchConfig& config) {
    config.check();
    Metrics m;
    m.queries = queries.size();
    if (queries.empty())
        return m;
    const auto index = build_index(graph, config.granularity);
    const long long k = config.top_n;
    Rational acc(0), pre(0), rec(0);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto& lq = queries[i];
        if (lq.truth_snippet_ids.empty())
            throw QueryRecordError("query record " + std::to_string(i) + ": no ground-truth snippet ids", i);
        std::set<std::string> truth(lq.truth_snippet_ids.begin(), lq.truth_snippet_ids.end());
        for (const auto& id : truth) {
            if (!graph.find_snippet(id))
                throw QueryRecordError("query record " + std::to_string(i) + ": unknown snippet " + id, i);
        }
        auto q = lq.origin == QueryOrigin::all_code ? code_query(lq.code, dict, config)
                                                    : key_api_query(lq.apis, dict, config);
        long long hits = 0;
        for (const auto& c : search(q, graph, index))
            hits += truth.contains(c.snippet_id) ? 1 : 0;
        if (hits > 0)
            acc += 1;
        pre += Rational(hits, k);
        rec += Rational(hits, static_cast<long long>(truth.size()));
    }
    const auto n = static_cast<long long>(queries.size());
    m.accuracy = acc / n;
    m.precision = pre / n;
    m.recall = rec / n;
    // Boost 1.74 rational == int recurses under C++20 rewritten comparisons.
    const Rational sum = m.precision + m.recall;
    m.f1 = sum.numerator() == 0 ? Rational(0) : Rational(2) * m.precision * m.recall / sum;
    return m;
}

}  // namespace taskkg
