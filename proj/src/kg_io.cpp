// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/kg_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace taskkg {

using nlohmann::json;

GraphFormatError::GraphFormatError(std::string message, std::size_t offset, std::string field)
    : std::runtime_error(std::move(message)), offset_(offset), field_(std::move(field)) {}

namespace {

std::string summarize(const ValidationReport& report) {
    std::string msg = "graph validation failed (" + std::to_string(report.size()) + " violation(s))";
    for (const auto& v : report)
        msg += "\n  " + v.rule + ": " + v.detail;
    return msg;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw GraphFormatError("field " + path + ": " + what, std::string::npos, path);
}

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        schema_error(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end())
        schema_error(path + "." + key, "missing");
    return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_string())
        schema_error(path + "." + key, "expected string");
    return v.get<std::string>();
}

std::optional<std::string> get_opt_string(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object())
        schema_error(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        schema_error(path + "." + key, "expected string or null");
    return it->get<std::string>();
}

const json& get_array(const json& obj, const char* key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_array())
        schema_error(path + "." + key, "expected array");
    return v;
}

template <typename E>
E get_enum(const json& obj, const char* key, const std::string& path, std::optional<E> (*parse)(std::string_view)) {
    auto s = get_string(obj, key, path);
    auto value = parse(s);
    if (!value)
        schema_error(path + "." + key, "unknown value '" + s + "'");
    return *value;
}

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::map<std::string, std::size_t> counts_from_json(const json& j, const std::string& path) {
    if (!j.is_object())
        schema_error(path, "expected object");
    std::map<std::string, std::size_t> out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            schema_error(path + "." + k, "expected non-negative integer");
        out[k] = v.get<std::size_t>();
    }
    return out;
}

}  // namespace

GraphValidationError::GraphValidationError(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

json api_ref_to_json(const ApiRef& ref) {
    return json{{"fqn", ref.fqn}, {"kind", to_string(ref.kind)}, {"declaring_class", ref.declaring_class}};
}

ApiRef api_ref_from_json(const json& j, const std::string& path) {
    ApiRef ref;
    ref.fqn = get_string(j, "fqn", path);
    ref.kind = get_enum(j, "kind", path, &parse_api_kind);
    ref.declaring_class = get_string(j, "declaring_class", path);
    return ref;
}

json action_to_json(const Action& a) {
    return json{
        {"id", a.id},
        {"verb", a.verb},
        {"object", a.object},
        {"sentence", a.sentence},
        {"source", to_string(a.source)},
        {"page_uri", a.page_uri},
        {"anchor", opt(a.anchor)},
        {"clause", a.clause},
        {"phrase", a.phrase},
    };
}

json attributes_to_json(const ActionAttributes& attrs) {
    json apis = json::array();
    for (const auto& ref : attrs.apis)
        apis.push_back(api_ref_to_json(ref));
    return json{
        {"apis", std::move(apis)},
        {"location", opt(attrs.location)},
        {"condition", opt(attrs.condition)},
        {"goal", opt(attrs.goal)},
        {"code", attrs.code},
    };
}

json relation_to_json(const Relation& r) {
    return json{{"kind", to_string(r.kind)}, {"src", r.src}, {"dst", r.dst}};
}

json snippet_to_json(const CodeSnippet& s) {
    json apis = json::array();
    for (const auto& ref : s.apis)
        apis.push_back(api_ref_to_json(ref));
    return json{
        {"id", s.id},
        {"text", s.text},
        {"kind", to_string(s.kind)},
        {"parent_block", opt(s.parent_block)},
        {"language_hint", opt(s.language_hint)},
        {"apis", std::move(apis)},
        {"page_uri", s.page_uri},
    };
}

json graph_to_json(const KnowledgeGraph& graph) {
    json doc;
    doc["version"] = kGraphFormatVersion;
    doc["meta"] = json{
        {"corpus_id", graph.meta.corpus_id},
        {"created", graph.meta.created},
        {"counts",
         json{{"actions", graph.meta.counts.actions},
              {"relations", graph.meta.counts.relations},
              {"snippets", graph.meta.counts.snippets}}},
    };

    json actions = json::array();
    for (const auto& a : graph.actions)
        actions.push_back(action_to_json(a));
    doc["actions"] = std::move(actions);

    json attributes = json::object();
    for (const auto& [id, attrs] : graph.attributes)
        attributes[id] = attributes_to_json(attrs);
    doc["attributes"] = std::move(attributes);

    json relations = json::array();
    for (const auto& r : graph.relations)
        relations.push_back(relation_to_json(r));
    doc["relations"] = std::move(relations);

    json snippets = json::array();
    for (const auto& s : graph.snippets)
        snippets.push_back(snippet_to_json(s));
    doc["snippets"] = std::move(snippets);
    return doc;
}

std::string serialize_graph(const KnowledgeGraph& graph) {
    return graph_to_json(graph).dump(2) + "\n";
}

KnowledgeGraph parse_graph(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw GraphFormatError(std::string("parse error at byte ") + std::to_string(e.byte) + ": " + e.what(),
                               e.byte, "");
    }
    if (!doc.is_object())
        schema_error("$", "expected object");

    const auto& version = member(doc, "version", "$");
    if (!version.is_number_integer() || version.get<long long>() != kGraphFormatVersion)
        schema_error("$.version", "unsupported version (expected 1)");

    KnowledgeGraph g;
    const auto& meta = member(doc, "meta", "$");
    g.meta.corpus_id = get_string(meta, "corpus_id", "$.meta");
    g.meta.created = get_string(meta, "created", "$.meta");
    const auto& counts = member(meta, "counts", "$.meta");
    g.meta.counts.actions = counts_from_json(member(counts, "actions", "$.meta.counts"), "$.meta.counts.actions");
    g.meta.counts.relations =
        counts_from_json(member(counts, "relations", "$.meta.counts"), "$.meta.counts.relations");
    g.meta.counts.snippets = counts_from_json(member(counts, "snippets", "$.meta.counts"), "$.meta.counts.snippets");

    const auto& actions = get_array(doc, "actions", "$");
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto path = "$.actions[" + std::to_string(i) + "]";
        const auto& j = actions[i];
        Action a;
        a.id = get_string(j, "id", path);
        a.verb = get_string(j, "verb", path);
        a.object = get_string(j, "object", path);
        a.sentence = get_string(j, "sentence", path);
        a.source = get_enum(j, "source", path, &parse_action_source);
        a.page_uri = get_string(j, "page_uri", path);
        a.anchor = get_opt_string(j, "anchor", path);
        a.clause = get_opt_string(j, "clause", path).value_or("");
        a.phrase = get_opt_string(j, "phrase", path).value_or("");
        g.actions.push_back(std::move(a));
    }

    const auto& attributes = member(doc, "attributes", "$");
    if (!attributes.is_object())
        schema_error("$.attributes", "expected object");
    for (const auto& [id, j] : attributes.items()) {
        const auto path = "$.attributes." + id;
        ActionAttributes attrs;
        const auto& apis = get_array(j, "apis", path);
        for (std::size_t i = 0; i < apis.size(); ++i)
            attrs.apis.push_back(api_ref_from_json(apis[i], path + ".apis[" + std::to_string(i) + "]"));
        attrs.location = get_opt_string(j, "location", path);
        attrs.condition = get_opt_string(j, "condition", path);
        attrs.goal = get_opt_string(j, "goal", path);
        const auto& code = get_array(j, "code", path);
        for (std::size_t i = 0; i < code.size(); ++i) {
            if (!code[i].is_string())
                schema_error(path + ".code[" + std::to_string(i) + "]", "expected string");
            attrs.code.push_back(code[i].get<std::string>());
        }
        g.attributes.emplace(id, std::move(attrs));
    }

    const auto& relations = get_array(doc, "relations", "$");
    for (std::size_t i = 0; i < relations.size(); ++i) {
        const auto path = "$.relations[" + std::to_string(i) + "]";
        Relation r;
        r.kind = get_enum(relations[i], "kind", path, &parse_relation_kind);
        r.src = get_string(relations[i], "src", path);
        r.dst = get_string(relations[i], "dst", path);
        g.relations.push_back(std::move(r));
    }

    const auto& snippets = get_array(doc, "snippets", "$");
    for (std::size_t i = 0; i < snippets.size(); ++i) {
        const auto path = "$.snippets[" + std::to_string(i) + "]";
        const auto& j = snippets[i];
        CodeSnippet s;
        s.id = get_string(j, "id", path);
        s.text = get_string(j, "text", path);
        s.kind = get_enum(j, "kind", path, &parse_snippet_kind);
        s.parent_block = get_opt_string(j, "parent_block", path);
        s.language_hint = get_opt_string(j, "language_hint", path);
        const auto& apis = get_array(j, "apis", path);
        for (std::size_t k = 0; k < apis.size(); ++k)
            s.apis.push_back(api_ref_from_json(apis[k], path + ".apis[" + std::to_string(k) + "]"));
        s.page_uri = get_string(j, "page_uri", path);
        g.snippets.push_back(std::move(s));
    }

    auto report = validate(g);
    if (!report.empty())
        throw GraphValidationError(std::move(report));
    g.reindex();
    return g;
}

void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& destination) {
    auto report = validate(graph);
    if (!report.empty())
        throw GraphValidationError(std::move(report));
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + destination.string() + " for writing");
    out << serialize_graph(graph);
    if (!out)
        throw std::runtime_error("write failed: " + destination.string());
}

KnowledgeGraph load_graph(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + source.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

}  // namespace taskkg
