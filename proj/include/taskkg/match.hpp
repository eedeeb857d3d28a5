// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#pragma once

#include "taskkg/api.hpp"
#include "taskkg/model.hpp"

#include <boost/rational.hpp>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace taskkg {

enum class Granularity { api, class_ };
enum class Multiplicity { bag, set };
enum class Unmatched { include, exclude };

/// Bad `<A|C>-<B|S>-<U|M>` string or out-of-range parameter; `token` names the
/// offending piece.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& message, std::string token)
        : std::invalid_argument(message), token_(std::move(token)) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

struct MatchConfig {
    Granularity granularity = Granularity::api;
    Multiplicity multiplicity = Multiplicity::bag;
    Unmatched unmatched = Unmatched::include;
    double lambda1 = 2.0;
    double lambda2 = 1.0;
    int top_n = 3;

    double effective_lambda2() const { return unmatched == Unmatched::exclude ? 0.0 : lambda2; }
    /// `A-B-U` style label.
    std::string code() const;
    /// Throws ConfigError when an invariant fails.
    void check() const;

    /// Parses the label; lambdas and top_n keep their defaults.
    static MatchConfig parse(std::string_view text);
    /// The eight settings A-B-U … C-S-M in table order.
    static std::vector<MatchConfig> all();
};

/// Posting key of a ref: fqn at API granularity, declaring class at class granularity.
const std::string& api_key(const ApiRef& ref, Granularity g);

/// Ref as counted at a granularity (class granularity maps to the declaring class).
ApiRef at_granularity(const ApiRef& ref, Granularity g);

struct ScoreParts {
    long long matched = 0;
    long long unmatched = 0;
    long long total = 0;        // |API_{C_A}| under the multiplicity
    long long matched_keys = 0;  // distinct matched keys
};

ScoreParts score_parts(const std::vector<ApiRef>& query_apis, const std::vector<ApiRef>& snippet_apis,
                       const MatchConfig& config);

/// (λ1·Match + λ2'·Unmatch) / |API_{C_A}|; nullopt (skip) when the snippet has no APIs.
std::optional<double> score(const std::vector<ApiRef>& query_apis, const std::vector<ApiRef>& snippet_apis,
                            const MatchConfig& config);

enum class QueryOrigin { all_code, key_api };

std::string_view to_string(QueryOrigin o);

struct MatchQuery {
    QueryOrigin origin = QueryOrigin::all_code;
    std::optional<std::string> code;
    std::vector<ApiRef> apis;
    MatchConfig config;
};

/// all_code query: APIs recognized in `code`.
MatchQuery code_query(std::string code, const ApiDictionary& dict, const MatchConfig& config);
/// key_api query from selected names: an fqn known to the dictionary, a dotted
/// name (owner inferred from its prefix), or a simple name/code fragment run
/// through recognition.
MatchQuery key_api_query(const std::vector<std::string>& selection, const ApiDictionary& dict,
                         const MatchConfig& config);

struct ScoredCandidate {
    std::string snippet_id;
    double score = 0.0;
    std::vector<ApiRef> matched;
    std::vector<ApiRef> unmatched;
    std::vector<std::string> action_ids;
    long long matched_keys = 0;

    bool operator==(const ScoredCandidate&) const = default;
};

/// Inverted index: key -> snippet positions (graph order).
class ApiIndex {
public:
    ApiIndex() = default;
    ApiIndex(const KnowledgeGraph& graph, Granularity granularity);

    Granularity granularity() const { return granularity_; }
    const std::vector<std::size_t>& postings(std::string_view key) const;
    std::size_t key_count() const { return postings_.size(); }

private:
    Granularity granularity_ = Granularity::api;
    std::map<std::string, std::vector<std::size_t>, std::less<>> postings_;
};

ApiIndex build_index(const KnowledgeGraph& graph, Granularity granularity);

/// Ranked candidates sharing at least one key with the query, at most top_n.
/// Order: score desc, distinct matched keys desc, snippet id asc.
std::vector<ScoredCandidate> search(const MatchQuery& query, const KnowledgeGraph& graph, const ApiIndex& index);

/// Same ranking by scoring every snippet (reference for the index).
std::vector<ScoredCandidate> search_brute_force(const MatchQuery& query, const KnowledgeGraph& graph);

using Rational = boost::rational<long long>;

struct LabeledQuery {
    std::string query_id;
    QueryOrigin origin = QueryOrigin::all_code;
    std::string code;
    std::vector<std::string> apis;
    std::vector<std::string> truth_snippet_ids;
};

/// Malformed query record; `index` is the 0-based record number.
class QueryRecordError : public std::runtime_error {
public:
    QueryRecordError(const std::string& message, std::size_t index)
        : std::runtime_error(message), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// One JSON record per line: {query_id, origin, code | apis, truth_snippet_ids}.
std::vector<LabeledQuery> parse_queries(std::string_view jsonl);
std::vector<LabeledQuery> load_queries(const std::filesystem::path& path);

struct Metrics {
    Rational accuracy;
    Rational precision;
    Rational recall;
    Rational f1;
    std::size_t queries = 0;
};

double to_double(const Rational& r);

/// Top-k metrics, k = config.top_n. Throws QueryRecordError for queries with no
/// truth ids or with ids missing from the graph.
Metrics evaluate(const std::vector<LabeledQuery>& queries, const KnowledgeGraph& graph, const ApiDictionary& dict,
                 const MatchConfig& config);

}  // namespace taskkg
