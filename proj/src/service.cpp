// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/service.hpp"

#include "taskkg/kg_io.hpp"
#include "taskkg/pipeline.hpp"

#include <algorithm>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace taskkg {

using nlohmann::json;

std::string action_label(const Action& a) {
    if (a.source == ActionSource::heading || a.verb.empty())
        return a.sentence;
    if (!a.phrase.empty())
        return a.phrase;
    return a.object.empty() ? a.verb : a.verb + " " + a.object;
}

std::string top_level_ancestor(const std::string& action_id, const KnowledgeGraph& graph) {
    if (!graph.find_action(action_id))
        throw NotFoundError(action_id);
    std::string cur = action_id;
    while (auto p = graph.parent_of(cur))
        cur = *p;
    return cur;
}

HierarchyView assemble_hierarchy(const std::vector<std::pair<std::string, std::optional<int>>>& recommended,
                                 const KnowledgeGraph& graph) {
    if (recommended.empty())
        throw std::invalid_argument("no actions to assemble");
    std::optional<std::string> root;
    std::set<std::string> on_path;
    std::map<std::string, int> ranks;
    for (const auto& [id, rank] : recommended) {
        auto top = top_level_ancestor(id, graph);
        if (root && *root != top)
            throw std::invalid_argument("actions under different top-level tasks: " + *root + ", " + top);
        root = top;
        std::string cur = id;
        on_path.insert(cur);
        while (auto p = graph.parent_of(cur)) {
            cur = *p;
            on_path.insert(cur);
        }
        if (rank) {
            auto [it, fresh] = ranks.emplace(id, *rank);
            if (!fresh)
                it->second = std::min(it->second, *rank);
        }
    }

    std::function<HierarchyNode(const std::string&)> build = [&](const std::string& id) {
        const auto* a = graph.find_action(id);
        HierarchyNode n;
        n.action_id = id;
        n.label = action_label(*a);
        n.source = a->source;
        n.expanded = on_path.contains(id);
        if (auto it = ranks.find(id); it != ranks.end())
            n.rank = it->second;
        for (const auto& c : graph.children_of(id))
            n.children.push_back(build(c));
        return n;
    };
    return HierarchyView{build(*root)};
}

json to_json(const HierarchyNode& node) {
    json children = json::array();
    for (const auto& c : node.children)
        children.push_back(to_json(c));
    return json{
        {"action_id", node.action_id},
        {"label", node.label},
        {"source", to_string(node.source)},
        {"expanded", node.expanded},
        {"rank", node.rank ? json(*node.rank) : json(nullptr)},
        {"children", std::move(children)},
    };
}

json to_json(const HierarchyView& view) {
    return json{{"root", to_json(view.root)}};
}

std::string_view to_string(SpanKind k) {
    switch (k) {
    case SpanKind::action_phrase: return "action_phrase";
    case SpanKind::goal: return "goal";
    case SpanKind::location: return "location";
    case SpanKind::condition: return "condition";
    case SpanKind::api_bold: return "api_bold";
    case SpanKind::api_matched: return "api_matched";
    case SpanKind::recommended_snippet: return "recommended_snippet";
    }
    return "";
}

json to_json(const AnnotatedExcerpt& excerpt) {
    json spans = json::array();
    for (const auto& s : excerpt.spans)
        spans.push_back(json{{"start", s.span.start}, {"end", s.span.end}, {"kind", to_string(s.kind)}});
    return json{
        {"text", excerpt.text},
        {"spans", std::move(spans)},
        {"degraded", excerpt.degraded},
        {"page_uri", excerpt.page_uri},
        {"anchor", excerpt.anchor ? json(*excerpt.anchor) : json(nullptr)},
    };
}

namespace {

std::optional<std::size_t> find_text(std::string_view hay, std::string_view needle, std::size_t from = 0) {
    if (needle.empty() || from > hay.size())
        return std::nullopt;
    if (auto p = hay.find(needle, from); p != std::string_view::npos)
        return p;
    auto lh = to_lower(hay);
    auto ln = to_lower(needle);
    if (auto p = lh.find(ln, from); p != std::string::npos)
        return p;
    return std::nullopt;
}

// Spans inside one located sentence: phrase plus stored attributes.
void sentence_spans(const Action& a, const ActionAttributes* attrs, std::string_view sentence,
                    const std::function<void(std::size_t, std::size_t, SpanKind)>& emit) {
    auto put = [&](std::string_view what, SpanKind kind) {
        if (auto p = find_text(sentence, what))
            emit(*p, *p + what.size(), kind);
    };
    if (!a.phrase.empty())
        put(a.phrase, SpanKind::action_phrase);
    else if (!a.verb.empty())
        put(a.verb, SpanKind::action_phrase);
    if (attrs) {
        if (attrs->goal)
            put(*attrs->goal, SpanKind::goal);
        if (attrs->location)
            put(*attrs->location, SpanKind::location);
        if (attrs->condition)
            put(*attrs->condition, SpanKind::condition);
    }
}

std::string_view inline_name(std::string_view s) {
    s = trim(s);
    while (s.size() > 2 && s.substr(s.size() - 2) == "()")
        s.remove_suffix(2);
    if (auto paren = s.find('('); paren != std::string_view::npos)
        s = s.substr(0, paren);
    if (auto dot = s.rfind('.'); dot != std::string_view::npos)
        s = s.substr(dot + 1);
    return s;
}

void finish(AnnotatedExcerpt& ex) {
    std::sort(ex.spans.begin(), ex.spans.end(), [](const ExcerptSpan& a, const ExcerptSpan& b) {
        return std::tie(a.span.start, a.span.end, a.kind) < std::tie(b.span.start, b.span.end, b.kind);
    });
    std::map<SpanKind, std::size_t> last_end;
    std::vector<ExcerptSpan> kept;
    for (const auto& s : ex.spans) {
        if (s.span.empty() || s.span.end > ex.text.size())
            continue;
        auto it = last_end.find(s.kind);
        if (it != last_end.end() && s.span.start < it->second)
            continue;
        last_end[s.kind] = s.span.end;
        kept.push_back(s);
    }
    ex.spans = std::move(kept);
}

bool matched_ref(const ApiRef& ref, const ExcerptRequest& req) {
    auto key = at_granularity(ref, req.granularity);
    return std::find(req.matched.begin(), req.matched.end(), key) != req.matched.end();
}

AnnotatedExcerpt degraded_excerpt(const ExcerptRequest& req, const Action& action, const KnowledgeGraph& graph,
                                  const ApiDictionary& dict) {
    AnnotatedExcerpt ex;
    ex.degraded = true;
    ex.page_uri = action.page_uri;
    ex.anchor = action.anchor;
    auto emit_at = [&](std::size_t base) {
        return [&ex, base](std::size_t s, std::size_t e, SpanKind k) { ex.spans.push_back({{base + s, base + e}, k}); };
    };
    std::set<std::string> seen;
    std::map<std::string, std::size_t> sentence_at;
    for (const auto& a : graph.actions) {
        if (a.page_uri != action.page_uri || a.anchor != action.anchor || a.source == ActionSource::comment)
            continue;
        if (!seen.insert(a.sentence).second)
            continue;
        if (!ex.text.empty())
            ex.text += "\n\n";
        sentence_at[a.sentence] = ex.text.size();
        ex.text += a.sentence;
    }
    if (!sentence_at.contains(action.sentence)) {
        if (!ex.text.empty())
            ex.text += "\n\n";
        sentence_at[action.sentence] = ex.text.size();
        ex.text += action.sentence;
    }
    for (const auto& a : graph.actions) {
        auto it = sentence_at.find(a.sentence);
        if (it == sentence_at.end() || a.page_uri != action.page_uri || a.anchor != action.anchor)
            continue;
        sentence_spans(a, graph.find_attributes(a.id), a.sentence, emit_at(it->second));
    }
    if (req.snippet_id) {
        if (const auto* s = graph.find_snippet(*req.snippet_id)) {
            ex.text += "\n\n";
            const auto base = ex.text.size();
            ex.text += s->text;
            ex.spans.push_back({{base, ex.text.size()}, SpanKind::recommended_snippet});
            for (const auto& m : recognize(s->text, dict)) {
                if (matched_ref(m.resolved, req))
                    ex.spans.push_back({{base + m.span.start, base + m.span.end}, SpanKind::api_matched});
            }
        }
    }
    finish(ex);
    return ex;
}

}  // namespace

AnnotatedExcerpt annotate_excerpt(const ExcerptRequest& req, const KnowledgeGraph& graph, const ApiDictionary& dict,
                                  const TutorialDocument* doc) {
    const auto* action = graph.find_action(req.action_id);
    if (!action)
        throw NotFoundError(req.action_id);
    const CodeSnippet* snippet = nullptr;
    if (req.snippet_id) {
        snippet = graph.find_snippet(*req.snippet_id);
        if (!snippet)
            throw NotFoundError(*req.snippet_id);
    }
    int heading = -1;
    if (doc && action->anchor) {
        heading = doc->find_heading(*action->anchor);
        if (heading < 0)
            doc = nullptr;
    }
    if (!doc)
        return degraded_excerpt(req, *action, graph, dict);

    AnnotatedExcerpt ex;
    ex.page_uri = doc->page_uri;
    ex.anchor = action->anchor;
    auto nodes = doc->section(heading);

    // Block that holds the recommended snippet.
    const std::string* block_text = nullptr;
    if (snippet) {
        block_text = &snippet->text;
        if (snippet->parent_block) {
            if (const auto* parent = graph.find_snippet(*snippet->parent_block))
                block_text = &parent->text;
        }
    }
    int block_node = -1;
    if (block_text) {
        auto is_block = [&](int n) {
            const auto& node = doc->nodes[static_cast<std::size_t>(n)];
            return node.kind == NodeKind::code_block && node.text == *block_text;
        };
        for (int n : nodes) {
            if (is_block(n)) {
                block_node = n;
                break;
            }
        }
        if (block_node < 0) {
            for (int n = 0; n < static_cast<int>(doc->nodes.size()); ++n) {
                if (is_block(n)) {
                    block_node = n;
                    nodes.push_back(n);
                    break;
                }
            }
        }
    }

    std::map<int, std::size_t> offset;
    for (int n : nodes) {
        if (!ex.text.empty())
            ex.text += "\n\n";
        offset[n] = ex.text.size();
        ex.text += doc->nodes[static_cast<std::size_t>(n)].text;
    }
    std::size_t loose_snippet = std::string::npos;
    if (snippet && block_node < 0) {
        ex.text += ex.text.empty() ? "" : "\n\n";
        loose_snippet = ex.text.size();
        ex.text += snippet->text;
    }

    auto emit_at = [&](std::size_t base) {
        return [&ex, base](std::size_t s, std::size_t e, SpanKind k) { ex.spans.push_back({{base + s, base + e}, k}); };
    };

    // Action phrases and attributes.
    for (const auto& a : graph.actions) {
        if (a.page_uri != doc->page_uri || a.anchor != action->anchor)
            continue;
        const auto* attrs = graph.find_attributes(a.id);
        bool placed = false;
        for (int n : nodes) {
            if (placed)
                break;
            const auto& node = doc->nodes[static_cast<std::size_t>(n)];
            const auto base = offset[n];
            if (a.source == ActionSource::comment) {
                if (node.kind != NodeKind::code_block)
                    continue;
                for (const auto& seg : node.comments) {
                    auto p = find_text(seg.text, a.sentence);
                    if (!p)
                        continue;
                    sentence_spans(a, attrs, std::string_view(seg.text).substr(*p, a.sentence.size()),
                                   [&](std::size_t s, std::size_t e, SpanKind k) {
                                       const auto ts = *p + s;
                                       const auto te = *p + e;
                                       if (te == 0 || te > seg.text_offsets.size())
                                           return;
                                       ex.spans.push_back(
                                           {{base + seg.text_offsets[ts], base + seg.text_offsets[te - 1] + 1}, k});
                                   });
                    placed = true;
                    break;
                }
                continue;
            }
            const bool wanted = a.source == ActionSource::heading ? node.kind == NodeKind::heading
                                                                  : node.kind == NodeKind::paragraph ||
                                                                        node.kind == NodeKind::list_item;
            if (!wanted)
                continue;
            if (auto p = find_text(node.text, a.sentence)) {
                sentence_spans(a, attrs, std::string_view(node.text).substr(*p, a.sentence.size()),
                               emit_at(base + *p));
                placed = true;
            }
        }
    }

    // Prose API mentions that also appear in the excerpt's code.
    std::set<std::string, std::less<>> code_names;
    for (int n : nodes) {
        const auto& node = doc->nodes[static_cast<std::size_t>(n)];
        if (node.kind != NodeKind::code_block)
            continue;
        for (const auto& m : recognize(node.text, dict))
            code_names.insert(std::string(m.resolved.simple_name()));
    }
    for (int n : nodes) {
        const auto& node = doc->nodes[static_cast<std::size_t>(n)];
        if (node.kind != NodeKind::paragraph && node.kind != NodeKind::list_item)
            continue;
        for (const auto& sp : node.inline_api_spans) {
            if (sp.end > node.text.size())
                continue;
            auto name = inline_name(std::string_view(node.text).substr(sp.start, sp.size()));
            if (!name.empty() && code_names.contains(name))
                ex.spans.push_back({{offset[n] + sp.start, offset[n] + sp.end}, SpanKind::api_bold});
        }
    }

    // Recommended block and matched APIs inside the snippet's range.
    if (block_node >= 0) {
        const auto& node = doc->nodes[static_cast<std::size_t>(block_node)];
        const auto base = offset[block_node];
        ex.spans.push_back({{base, base + node.text.size()}, SpanKind::recommended_snippet});
        Span range{0, node.text.size()};
        if (snippet->parent_block) {
            if (auto p = node.text.find(snippet->text); p != std::string::npos)
                range = {p, p + snippet->text.size()};
        }
        for (const auto& m : recognize(node.text, dict)) {
            if (range.contains(m.span) && matched_ref(m.resolved, req))
                ex.spans.push_back({{base + m.span.start, base + m.span.end}, SpanKind::api_matched});
        }
    } else if (loose_snippet != std::string::npos) {
        ex.spans.push_back({{loose_snippet, ex.text.size()}, SpanKind::recommended_snippet});
        for (const auto& m : recognize(snippet->text, dict)) {
            if (matched_ref(m.resolved, req))
                ex.spans.push_back(
                    {{loose_snippet + m.span.start, loose_snippet + m.span.end}, SpanKind::api_matched});
        }
    }
    finish(ex);
    return ex;
}

const TutorialDocument* ServiceData::document(std::string_view uri) const {
    auto it = documents.find(uri);
    return it == documents.end() ? nullptr : &it->second;
}

std::shared_ptr<const ServiceData> make_service_data(KnowledgeGraph graph, std::optional<ApiDictionary> dictionary,
                                                     const std::vector<TutorialDocument>* corpus) {
    auto data = std::make_shared<ServiceData>();
    data->graph = std::move(graph);
    data->graph.reindex();
    data->dictionary = dictionary && !dictionary->empty() ? std::move(*dictionary)
                                                          : ApiDictionary::from_graph(data->graph);
    if (corpus) {
        data->corpus_available = true;
        for (const auto& d : *corpus)
            data->documents.emplace(d.page_uri, d);
    }
    data->api_index = build_index(data->graph, Granularity::api);
    data->class_index = build_index(data->graph, Granularity::class_);
    return data;
}

Recommender::Recommender(std::shared_ptr<const ServiceData> data) : data_(std::move(data)) {}

std::shared_ptr<const ServiceData> Recommender::data() const {
    std::lock_guard lock(mutex_);
    return data_;
}

void Recommender::swap(std::shared_ptr<const ServiceData> data) {
    std::lock_guard lock(mutex_);
    data_ = std::move(data);
}

json Recommender::recommend(const json& request) const {
    const auto data = this->data();
    if (!request.is_object())
        throw RequestError("request body must be a JSON object");
    MatchConfig config;
    if (request.contains("config") && !request["config"].is_null()) {
        if (!request["config"].is_string())
            throw RequestError("config must be a string", "config");
        config = MatchConfig::parse(request["config"].get<std::string>());
    }
    if (request.contains("top_n") && !request["top_n"].is_null()) {
        if (!request["top_n"].is_number_integer())
            throw RequestError("top_n must be an integer", "top_n");
        config.top_n = request["top_n"].get<int>();
    }
    config.check();

    std::vector<std::string> selection;
    if (request.contains("selection") && !request["selection"].is_null()) {
        const auto& sel = request["selection"];
        if (!sel.is_array())
            throw RequestError("selection must be a list of strings", "selection");
        for (const auto& s : sel) {
            if (!s.is_string())
                throw RequestError("selection must be a list of strings", "selection");
            if (!trim(s.get_ref<const std::string&>()).empty())
                selection.push_back(s.get<std::string>());
        }
    }
    std::string code;
    if (request.contains("code") && !request["code"].is_null()) {
        if (!request["code"].is_string())
            throw RequestError("code must be a string", "code");
        code = request["code"].get<std::string>();
    }
    MatchQuery query;
    if (!selection.empty())
        query = key_api_query(selection, data->dictionary, config);
    else if (!trim(code).empty())
        query = code_query(code, data->dictionary, config);
    else
        throw RequestError("request needs non-empty code or selection", selection.empty() ? "code" : "selection");

    auto candidates = search(query, data->graph, data->index(config.granularity));

    // Recommendations under one top-level task share a merged tree.
    std::map<std::string, std::vector<std::pair<std::string, std::optional<int>>>> groups;
    std::vector<std::optional<std::string>> tops;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (c.action_ids.empty()) {
            tops.emplace_back();
            continue;
        }
        auto top = top_level_ancestor(c.action_ids.front(), data->graph);
        groups[top].emplace_back(c.action_ids.front(), static_cast<int>(i) + 1);
        tops.emplace_back(top);
    }
    std::map<std::string, json> trees;
    for (const auto& [top, members] : groups)
        trees[top] = to_json(assemble_hierarchy(members, data->graph));

    json query_apis = json::array();
    for (const auto& r : query.apis)
        query_apis.push_back(api_ref_to_json(r));
    json recs = json::array();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        json matched = json::array();
        for (const auto& r : c.matched) {
            if (std::find(matched.begin(), matched.end(), r.fqn) == matched.end())
                matched.push_back(r.fqn);
        }
        json rec{
            {"rank", i + 1},
            {"score", c.score},
            {"snippet_id", c.snippet_id},
            {"matched_apis", std::move(matched)},
            {"action_ids", c.action_ids},
        };
        if (c.action_ids.empty()) {
            rec["action_id"] = nullptr;
            rec["label"] = nullptr;
            rec["hierarchy"] = nullptr;
            rec["excerpt"] = nullptr;
        } else {
            const auto& aid = c.action_ids.front();
            const auto* a = data->graph.find_action(aid);
            rec["action_id"] = aid;
            rec["label"] = action_label(*a);
            rec["hierarchy"] = trees.at(*tops[i]);
            ExcerptRequest er{aid, c.snippet_id, c.matched, config.granularity};
            rec["excerpt"] = to_json(annotate_excerpt(er, data->graph, data->dictionary, data->document(a->page_uri)));
        }
        recs.push_back(std::move(rec));
    }
    return json{
        {"origin", to_string(query.origin)},
        {"config", config.code()},
        {"top_n", config.top_n},
        {"query_apis", std::move(query_apis)},
        {"recommendations", std::move(recs)},
    };
}

json Recommender::action(const std::string& id) const {
    const auto data = this->data();
    const auto* a = data->graph.find_action(id);
    if (!a)
        throw NotFoundError(id);
    json rels = json::array();
    for (const auto& r : data->graph.relations) {
        if (r.src == id || r.dst == id)
            rels.push_back(relation_to_json(r));
    }
    const auto* attrs = data->graph.find_attributes(id);
    json snippets = json::array();
    if (attrs) {
        for (const auto& sid : attrs->code) {
            if (const auto* s = data->graph.find_snippet(sid))
                snippets.push_back(snippet_to_json(*s));
        }
    }
    return json{
        {"action", action_to_json(*a)},
        {"label", action_label(*a)},
        {"attributes", attrs ? attributes_to_json(*attrs) : json(nullptr)},
        {"relations", std::move(rels)},
        {"snippets", std::move(snippets)},
    };
}

json Recommender::hierarchy(const std::string& id) const {
    const auto data = this->data();
    return to_json(assemble_hierarchy({{id, std::nullopt}}, data->graph));
}

json Recommender::stats() const {
    const auto data = this->data();
    auto j = counts_to_json(data->graph.recount());
    j["corpus_available"] = data->corpus_available;
    return j;
}

std::string_view index_html() {
    return R"html(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>TaskKG</title>
<style>
body { font-family: sans-serif; margin: 1em; display: grid; grid-template-columns: 1fr 1fr; gap: 1em; }
textarea { width: 100%; height: 24em; font-family: monospace; }
pre { white-space: pre-wrap; background: #f4f4f4; padding: .5em; }
.api_matched { background: #ff0; }
.api_bold { font-weight: bold; }
.recommended_snippet { background: #ddd; }
.action_phrase { text-decoration: underline; text-decoration-color: #c00; }
.goal, .location, .condition { text-decoration: underline dotted; }
.rank { border: 1px solid #333; border-radius: 4px; padding: 0 .3em; margin-right: .3em; }
</style>
</head>
<body>
<div>
<textarea id="code" placeholder="Paste method code here"></textarea>
<p><input id="config" value="A-B-U" size="6"> <button id="go">Recommend</button></p>
</div>
<div id="out"></div>
<script>
function spans(ex) {
  const t = ex.text, marks = [];
  ex.spans.forEach(s => { marks.push([s.start, 1, s.kind]); marks.push([s.end, 0, s.kind]); });
  marks.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  let html = '', pos = 0;
  const esc = s => s.replace(/[&<>]/g, c => ({'&': '&amp;', '<': '&lt;', '>': '&gt;'}[c]));
  marks.forEach(([at, open, kind]) => {
    html += esc(t.slice(pos, at)); pos = at;
    html += open ? '<span class="' + kind + '">' : '</span>';
  });
  return html + esc(t.slice(pos));
}
function tree(n) {
  const badge = n.rank ? '<span class="rank">' + n.rank + '</span>' : '';
  const kids = n.expanded ? '<ul>' + n.children.map(c => '<li>' + tree(c) + '</li>').join('') + '</ul>' : '';
  return badge + (n.rank ? '<u>' : '') + n.label + (n.rank ? '</u>' : '') + kids;
}
document.getElementById('go').onclick = async () => {
  const body = { code: document.getElementById('code').value, config: document.getElementById('config').value };
  const r = await fetch('/api/recommend', { method: 'POST', body: JSON.stringify(body) });
  const j = await r.json();
  const out = document.getElementById('out');
  if (!r.ok) { out.textContent = j.error; return; }
  out.innerHTML = j.recommendations.map(x =>
    '<h3>#' + x.rank + ' ' + (x.label || x.snippet_id) + ' (' + x.score.toFixed(4) + ')</h3>' +
    (x.hierarchy ? tree(x.hierarchy.root) : '') +
    (x.excerpt ? '<pre>' + spans(x.excerpt) + '</pre>' : '')).join('');
};
</script>
</body>
</html>
)html";
}

struct HttpServer::Impl {
    Recommender& recommender;
    httplib::Server server;
    explicit Impl(Recommender& r) : recommender(r) {}
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& body) {
    try {
        send_json(res, 200, body());
    } catch (const ConfigError& e) {
        send_json(res, 400, json{{"error", e.what()}, {"token", e.token()}});
    } catch (const RequestError& e) {
        send_json(res, 400, json{{"error", e.what()}, {"token", e.token()}});
    } catch (const NotFoundError& e) {
        send_json(res, 404, json{{"error", e.what()}, {"token", e.id()}});
    } catch (const json::exception& e) {
        send_json(res, 400, json{{"error", std::string("malformed JSON: ") + e.what()}, {"token", "body"}});
    } catch (const std::exception& e) {
        send_json(res, 500, json{{"error", e.what()}});
    }
}

}  // namespace

HttpServer::HttpServer(Recommender& recommender) : impl_(std::make_unique<Impl>(recommender)) {
    auto& srv = impl_->server;
    auto& rec = impl_->recommender;
    // SO_REUSEPORT (the library default) would let a second server share a busy port.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    srv.Get("/",[](const httplib::Request&, httplib::Response& res) {
        res.set_content(std::string(index_html()), "text/html; charset=utf-8");
    });
    srv.Post("/api/recommend", [&rec](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            if (trim(req.body).empty())
                throw RequestError("empty request body", "body");
            return rec.recommend(json::parse(req.body));
        });
    });
    srv.Get(R"(/api/action/([^/]+))", [&rec](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return rec.action(req.matches[1].str()); });
    });
    srv.Get(R"(/api/hierarchy/([^/]+))", [&rec](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { return rec.hierarchy(req.matches[1].str()); });
    });
    srv.Get("/api/stats", [&rec](const httplib::Request&, httplib::Response& res) {
        guarded(res, [&] { return rec.stats(); });
    });
    srv.set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} {} {}B", req.method, req.path, res.status, res.body.size());
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0)
        return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() {
    return impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running())
        impl_->server.stop();
}

bool HttpServer::running() const {
    return impl_->server.is_running();
}

}  // namespace taskkg
