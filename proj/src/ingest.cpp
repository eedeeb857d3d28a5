// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 TaskKG Contributors

#include "taskkg/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

namespace taskkg {

std::vector<Selector> Selector::parse_list(std::string_view text) {
    std::vector<Selector> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (!item.empty()) {
            Selector sel;
            auto dot = item.find('.');
            sel.tag = to_lower(item.substr(0, dot));
            if (dot != std::string_view::npos)
                sel.cls = std::string(item.substr(dot + 1));
            out.push_back(std::move(sel));
        }
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

IngestConfig IngestConfig::from_json(const nlohmann::json& j) {
    IngestConfig c;
    if (!j.is_object())
        throw std::invalid_argument("ingest config must be a JSON object");
    if (auto it = j.find("code_block_selector"); it != j.end())
        c.code_block_selector = Selector::parse_list(it->get<std::string>());
    if (auto it = j.find("inline_api_selector"); it != j.end())
        c.inline_api_selector = Selector::parse_list(it->get<std::string>());
    if (auto it = j.find("exclude_xml"); it != j.end())
        c.exclude_xml = it->get<bool>();
    if (auto it = j.find("comment_styles"); it != j.end())
        c.comment_styles = it->get<std::vector<std::string>>();
    return c;
}

IngestConfig IngestConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open ingest config " + path.string());
    return from_json(nlohmann::json::parse(in));
}

std::string_view to_string(NodeKind k) {
    switch (k) {
    case NodeKind::heading:
        return "heading";
    case NodeKind::paragraph:
        return "paragraph";
    case NodeKind::code_block:
        return "code_block";
    case NodeKind::list_item:
        return "list_item";
    }
    return "unknown";
}

int TutorialDocument::find_heading(std::string_view anchor) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].kind == NodeKind::heading && nodes[i].anchor == anchor)
            return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> TutorialDocument::section(int heading) const {
    std::vector<int> out;
    std::size_t i = 0;
    if (heading >= 0) {
        out.push_back(heading);
        i = static_cast<std::size_t>(heading) + 1;
    }
    for (; i < nodes.size(); ++i) {
        if (nodes[i].kind == NodeKind::heading)
            break;
        out.push_back(static_cast<int>(i));
    }
    return out;
}

std::string slugify(std::string_view text) {
    std::string out;
    bool dash = false;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            if (dash && !out.empty())
                out.push_back('-');
            dash = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            dash = true;
        }
    }
    return out.empty() ? "section" : out;
}

namespace {

// ---------------------------------------------------------------------------
// Markup tokens
// ---------------------------------------------------------------------------

struct Tag {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    bool closing = false;
    bool self_closing = false;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs) {
            if (k == key)
                return &v;
        }
        return nullptr;
    }

    bool has_class(std::string_view cls) const {
        const auto* c = attr("class");
        if (c == nullptr)
            return false;
        std::istringstream in(*c);
        std::string word;
        while (in >> word) {
            if (word == cls)
                return true;
        }
        return false;
    }
};

bool matches(const std::vector<Selector>& selectors, const Tag& tag) {
    for (const auto& s : selectors) {
        if (!s.tag.empty() && s.tag != tag.name)
            continue;
        if (!s.cls.empty() && !tag.has_class(s.cls))
            continue;
        return true;
    }
    return false;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

const std::map<std::string, std::uint32_t, std::less<>>& named_entities() {
    static const std::map<std::string, std::uint32_t, std::less<>> table{
        {"amp", '&'},     {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
        {"nbsp", ' '},    {"copy", 0xA9},    {"reg", 0xAE},     {"trade", 0x2122}, {"mdash", 0x2014},
        {"ndash", 0x2013}, {"hellip", 0x2026}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
        {"rdquo", 0x201D}, {"times", 0xD7},   {"larr", 0x2190},  {"rarr", 0x2192},  {"middot", 0xB7},
    };
    return table;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        auto semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        auto body = s.substr(i + 1, semi - i - 1);
        bool done = false;
        if (!body.empty() && body[0] == '#') {
            std::uint32_t cp = 0;
            bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            auto digits = body.substr(hex ? 2 : 1);
            bool ok = !digits.empty();
            for (char c : digits) {
                int v = -1;
                if (c >= '0' && c <= '9')
                    v = c - '0';
                else if (hex && c >= 'a' && c <= 'f')
                    v = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F')
                    v = c - 'A' + 10;
                if (v < 0 || cp > 0x10FFFF) {
                    ok = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
            }
            if (ok) {
                append_utf8(out, cp == 0xA0 ? ' ' : cp);
                done = true;
            }
        } else {
            const auto& table = named_entities();
            if (auto it = table.find(body); it != table.end()) {
                append_utf8(out, it->second);
                done = true;
            }
        }
        if (done) {
            i = semi + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

std::optional<std::string> language_of(const Tag& tag) {
    for (const char* key : {"data-language", "language", "data-lang"}) {
        if (const auto* v = tag.attr(key); v != nullptr && !v->empty())
            return to_lower(*v);
    }
    if (const auto* c = tag.attr("class"); c != nullptr) {
        std::istringstream in(*c);
        std::string word;
        while (in >> word) {
            for (std::string_view prefix : {"lang-", "language-"}) {
                if (word.size() > prefix.size() && word.compare(0, prefix.size(), prefix) == 0)
                    return to_lower(word.substr(prefix.size()));
            }
        }
    }
    return std::nullopt;
}

bool is_block_tag(std::string_view t) {
    static const std::set<std::string_view> kBlocks{
        "p",       "div",    "section", "article", "table",      "tr",     "td",   "th",    "blockquote",
        "dl",      "dt",     "dd",      "hr",      "main",       "header", "footer", "aside", "figure",
        "figcaption", "nav", "form",    "tbody",   "thead",      "caption", "body", "html",  "devsite-content",
    };
    return kBlocks.contains(t);
}

bool is_skipped_tag(std::string_view t) {
    return t == "noscript" || t == "template" || t == "svg";
}

int heading_level(std::string_view t) {
    if (t.size() == 2 && t[0] == 'h' && t[1] >= '1' && t[1] <= '6')
        return t[1] - '0';
    return 0;
}

/// Whitespace-collapsing text accumulator that tracks inline API spans.
struct TextBuf {
    std::string s;
    bool pending = false;
    std::vector<Span> spans;
    int api_depth = 0;
    bool api_waiting = false;
    std::size_t api_start = 0;

    void add(std::string_view t) {
        for (char c : t) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                pending = !s.empty();
                continue;
            }
            if (pending)
                s.push_back(' ');
            pending = false;
            if (api_waiting) {
                api_start = s.size();
                api_waiting = false;
            }
            s.push_back(c);
        }
    }

    void soft_break() {
        if (!s.empty())
            pending = true;
    }

    void api_open() {
        if (api_depth++ == 0)
            api_waiting = true;
    }

    void api_close() {
        if (api_depth == 0 || --api_depth > 0)
            return;
        if (!api_waiting && s.size() > api_start)
            spans.push_back({api_start, s.size()});
        api_waiting = false;
    }

    void clear() { *this = TextBuf{}; }
};

std::string clean_code(std::string text) {
    // Drop leading blank lines and trailing whitespace; keep indentation.
    std::size_t first = 0;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            line_start = i + 1;
            first = line_start;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(text[i]))) {
            first = line_start;
            break;
        }
        if (i + 1 == text.size())
            first = text.size();
    }
    text.erase(0, first);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.pop_back();
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '\r')
            out.push_back(c);
    }
    return out;
}

class PageBuilder {
public:
    PageBuilder(const IngestConfig& config, std::string page_uri) : config_(config) {
        doc_.page_uri = std::move(page_uri);
    }

    void set_title(std::string_view raw) {
        if (title_.empty())
            title_ = normalize_space(decode_entities(raw));
    }

    void open(const Tag& tag) {
        const auto& t = tag.name;
        if (t == "head") {
            in_head_ = true;
            return;
        }
        if (t == "body") {
            in_head_ = false;
            return;
        }
        if (in_head_)
            return;
        if (is_skipped_tag(t)) {
            if (!tag.self_closing)
                ++skip_;
            return;
        }
        if (skip_ > 0)
            return;

        if (container_depth_ > 0) {
            if (t == container_tag_)
                ++container_depth_;
            if (t == "pre") {
                if (pre_depth_++ == 0) {
                    code_text_.clear();
                    pre_lang_ = language_of(tag);
                }
            } else if (t == "br") {
                (pre_depth_ > 0 ? code_text_ : loose_text_) += '\n';
            } else if (pre_depth_ > 0 && !pre_lang_) {
                pre_lang_ = language_of(tag);
            }
            return;
        }

        if (matches(config_.code_block_selector, tag)) {
            flush_text();
            container_tag_ = t;
            container_depth_ = tag.self_closing ? 0 : 1;
            container_lang_ = language_of(tag);
            emitted_in_container_ = false;
            code_text_.clear();
            loose_text_.clear();
            pre_lang_.reset();
            if (t == "pre")
                pre_depth_ = container_depth_;
            return;
        }

        if (int level = heading_level(t); level > 0) {
            flush_text();
            heading_active_ = true;
            heading_level_ = level;
            heading_.clear();
            const auto* id = tag.attr("id");
            heading_anchor_ = id ? *id : std::string();
            return;
        }
        if (heading_active_) {
            if (t == "a" && heading_anchor_.empty()) {
                if (const auto* id = tag.attr("id"))
                    heading_anchor_ = *id;
                else if (const auto* name = tag.attr("name"))
                    heading_anchor_ = *name;
            } else if (t == "br") {
                heading_.soft_break();
            }
            return;
        }

        if (t == "ol" || t == "ul") {
            flush_text();
            int start = 1;
            if (const auto* s = tag.attr("start")) {
                try {
                    start = std::stoi(*s);
                } catch (const std::exception&) {
                    start = 1;
                }
            }
            lists_.push_back({t == "ol", start - 1, next_list_id_++});
            return;
        }
        if (t == "li") {
            flush_text();
            if (!lists_.empty()) {
                auto& list = lists_.back();
                ++list.counter;
                li_active_ = true;
                li_ordered_ = list.ordered;
                li_index_ = list.counter;
                li_list_ = list.id;
            }
            return;
        }
        if (t == "br") {
            text_.soft_break();
            return;
        }
        if (matches(config_.inline_api_selector, tag) && !tag.self_closing) {
            api_tags_.push_back(t);
            text_.api_open();
            return;
        }
        if (is_block_tag(t)) {
            if (li_active_)
                text_.soft_break();
            else
                flush_text();
        }
    }

    void close(const std::string& t) {
        if (t == "head") {
            in_head_ = false;
            return;
        }
        if (in_head_)
            return;
        if (is_skipped_tag(t)) {
            if (skip_ > 0)
                --skip_;
            return;
        }
        if (skip_ > 0)
            return;

        if (container_depth_ > 0) {
            if (t == "pre" && pre_depth_ > 0 && --pre_depth_ == 0) {
                emit_code(code_text_, pre_lang_ ? pre_lang_ : container_lang_);
                code_text_.clear();
                pre_lang_.reset();
                emitted_in_container_ = true;
            }
            if (t == container_tag_ && --container_depth_ == 0)
                end_container();
            return;
        }

        if (heading_active_) {
            if (heading_level(t) > 0)
                finish_heading();
            return;
        }
        if (t == "li") {
            flush_text();
            return;
        }
        if (t == "ol" || t == "ul") {
            flush_text();
            if (!lists_.empty())
                lists_.pop_back();
            return;
        }
        if (!api_tags_.empty() && api_tags_.back() == t) {
            api_tags_.pop_back();
            text_.api_close();
            return;
        }
        if (is_block_tag(t)) {
            if (li_active_)
                text_.soft_break();
            else
                flush_text();
        }
    }

    void text(std::string_view raw) {
        if (in_head_ || skip_ > 0)
            return;
        auto decoded = decode_entities(raw);
        if (container_depth_ > 0) {
            (pre_depth_ > 0 ? code_text_ : loose_text_) += decoded;
            return;
        }
        if (heading_active_) {
            heading_.add(decoded);
            return;
        }
        text_.add(decoded);
    }

    TutorialDocument finish() {
        if (container_depth_ > 0) {
            if (pre_depth_ > 0) {
                emit_code(code_text_, pre_lang_ ? pre_lang_ : container_lang_);
                emitted_in_container_ = true;
            }
            end_container();
        }
        if (heading_active_)
            finish_heading();
        flush_text();

        std::vector<std::pair<int, int>> stack;  // (level, node index)
        for (std::size_t i = 0; i < doc_.nodes.size(); ++i) {
            auto& node = doc_.nodes[i];
            if (node.kind == NodeKind::heading) {
                while (!stack.empty() && stack.back().first >= node.level)
                    stack.pop_back();
                node.parent = stack.empty() ? -1 : stack.back().second;
                stack.emplace_back(node.level, static_cast<int>(i));
            } else {
                node.parent = stack.empty() ? -1 : stack.back().second;
            }
        }

        doc_.title = title_;
        if (doc_.title.empty()) {
            for (const auto& n : doc_.nodes) {
                if (n.kind == NodeKind::heading && n.level == 1) {
                    doc_.title = n.text;
                    break;
                }
            }
        }
        if (doc_.title.empty())
            doc_.title = doc_.page_uri;
        return std::move(doc_);
    }

private:
    struct ListState {
        bool ordered = false;
        int counter = 0;
        int id = -1;
    };

    void flush_text() {
        if (!text_.s.empty()) {
            DocNode node;
            node.kind = li_active_ ? NodeKind::list_item : NodeKind::paragraph;
            node.text = text_.s;
            node.inline_api_spans = text_.spans;
            if (li_active_) {
                node.ordered = li_ordered_;
                node.index = li_index_;
                node.list_id = li_list_;
            }
            doc_.nodes.push_back(std::move(node));
        }
        text_.clear();
        api_tags_.clear();
        li_active_ = false;
    }

    void finish_heading() {
        heading_active_ = false;
        if (heading_.s.empty())
            return;
        DocNode node;
        node.kind = NodeKind::heading;
        node.text = heading_.s;
        node.level = heading_level_;
        std::string anchor = heading_anchor_.empty() ? slugify(node.text) : heading_anchor_;
        std::string unique = anchor;
        for (int n = 2; anchors_.contains(unique); ++n)
            unique = anchor + "-" + std::to_string(n);
        anchors_.insert(unique);
        node.anchor = std::move(unique);
        doc_.nodes.push_back(std::move(node));
    }

    void end_container() {
        container_depth_ = 0;
        pre_depth_ = 0;
        if (!emitted_in_container_)
            emit_code(loose_text_, container_lang_);
        loose_text_.clear();
        code_text_.clear();
    }

    void emit_code(const std::string& raw, const std::optional<std::string>& lang) {
        auto text = clean_code(raw);
        if (text.empty())
            return;
        DocNode node;
        node.kind = NodeKind::code_block;
        node.text = std::move(text);
        node.language_hint = lang;
        if (lang) {
            node.is_xml = *lang == "xml" || *lang == "html";
        } else {
            node.is_xml = node.text.front() == '<';
        }
        node.comments = extract_comments(node, config_);
        doc_.nodes.push_back(std::move(node));
    }

    const IngestConfig& config_;
    TutorialDocument doc_;
    std::string title_;
    std::set<std::string> anchors_;
    bool in_head_ = false;
    int skip_ = 0;

    TextBuf text_;
    std::vector<std::string> api_tags_;
    bool li_active_ = false;
    bool li_ordered_ = false;
    int li_index_ = 0;
    int li_list_ = -1;
    std::vector<ListState> lists_;
    int next_list_id_ = 0;

    bool heading_active_ = false;
    int heading_level_ = 0;
    std::string heading_anchor_;
    TextBuf heading_;

    std::string container_tag_;
    int container_depth_ = 0;
    int pre_depth_ = 0;
    std::optional<std::string> container_lang_;
    std::optional<std::string> pre_lang_;
    std::string code_text_;
    std::string loose_text_;
    bool emitted_in_container_ = false;
};

bool istarts_with(std::string_view s, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > s.size())
        return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i])
            return false;
    }
    return true;
}

/// Parses a tag starting at `html[pos] == '<'`; returns npos when the markup is
/// not a well-formed tag (the caller then treats '<' as text).
std::size_t parse_tag(std::string_view html, std::size_t pos, Tag& tag) {
    std::size_t i = pos + 1;
    const std::size_t n = html.size();
    if (i < n && html[i] == '/') {
        tag.closing = true;
        ++i;
    }
    std::size_t name_start = i;
    while (i < n && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-' || html[i] == ':'))
        ++i;
    if (i == name_start || !std::isalpha(static_cast<unsigned char>(html[name_start])))
        return std::string_view::npos;
    tag.name = to_lower(html.substr(name_start, i - name_start));
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(html[i])))
            ++i;
        if (i >= n)
            return std::string_view::npos;
        if (html[i] == '>')
            return i + 1;
        if (html[i] == '/') {
            if (i + 1 < n && html[i + 1] == '>') {
                tag.self_closing = true;
                return i + 2;
            }
            ++i;
            continue;
        }
        std::size_t key_start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(html[i])) && html[i] != '=' && html[i] != '>' &&
               html[i] != '/')
            ++i;
        std::string key = to_lower(html.substr(key_start, i - key_start));
        while (i < n && std::isspace(static_cast<unsigned char>(html[i])))
            ++i;
        std::string value;
        if (i < n && html[i] == '=') {
            ++i;
            while (i < n && std::isspace(static_cast<unsigned char>(html[i])))
                ++i;
            if (i < n && (html[i] == '"' || html[i] == '\'')) {
                char q = html[i++];
                auto end = html.find(q, i);
                if (end == std::string_view::npos)
                    return std::string_view::npos;
                value = decode_entities(html.substr(i, end - i));
                i = end + 1;
            } else {
                std::size_t v_start = i;
                while (i < n && !std::isspace(static_cast<unsigned char>(html[i])) && html[i] != '>')
                    ++i;
                value = decode_entities(html.substr(v_start, i - v_start));
            }
        }
        if (!key.empty())
            tag.attrs.emplace_back(std::move(key), std::move(value));
    }
    return std::string_view::npos;
}

}  // namespace

TutorialDocument parse_page(std::string_view bytes, std::string page_uri, const IngestConfig& config) {
    const std::string html = sanitize_utf8(bytes);
    PageBuilder builder(config, std::move(page_uri));
    const std::size_t n = html.size();
    std::size_t i = 0;
    std::string_view view = html;
    while (i < n) {
        if (html[i] != '<') {
            auto next = html.find('<', i);
            if (next == std::string::npos)
                next = n;
            builder.text(view.substr(i, next - i));
            i = next;
            continue;
        }
        if (view.compare(i, 4, "<!--") == 0) {
            auto end = html.find("-->", i + 4);
            i = end == std::string::npos ? n : end + 3;
            continue;
        }
        if (i + 1 < n && (html[i + 1] == '!' || html[i + 1] == '?')) {
            auto end = html.find('>', i);
            i = end == std::string::npos ? n : end + 1;
            continue;
        }
        Tag tag;
        auto after = parse_tag(view, i, tag);
        if (after == std::string_view::npos) {
            builder.text(view.substr(i, 1));
            ++i;
            continue;
        }
        i = after;
        if (tag.closing) {
            builder.close(tag.name);
            continue;
        }
        if (tag.name == "script" || tag.name == "style" || tag.name == "title" || tag.name == "textarea") {
            if (tag.self_closing)
                continue;
            std::string closer = "</" + tag.name;
            std::size_t end = i;
            while (end < n && !istarts_with(view, end, closer))
                ++end;
            if (tag.name == "title")
                builder.set_title(view.substr(i, end - i));
            else if (tag.name == "textarea")
                builder.text(view.substr(i, end - i));
            auto gt = html.find('>', end);
            i = (end >= n || gt == std::string::npos) ? n : gt + 1;
            continue;
        }
        builder.open(tag);
        if (tag.self_closing)
            builder.close(tag.name);
    }
    return builder.finish();
}

// ---------------------------------------------------------------------------
// Comments inside code blocks
// ---------------------------------------------------------------------------

namespace {

struct CommentStyles {
    std::vector<std::string> line;
    std::vector<std::pair<std::string, std::string>> block;
};

CommentStyles styles_for(const DocNode& block, const IngestConfig& config) {
    std::vector<std::string> raw = config.comment_styles;
    if (block.language_hint) {
        static const std::set<std::string_view> kHash{"python", "py", "shell", "sh", "bash", "ruby", "yaml", "console"};
        const auto& lang = *block.language_hint;
        if (kHash.contains(lang))
            raw = {"#"};
        else if (lang == "xml" || lang == "html")
            raw = {"<!-- -->"};
    }
    CommentStyles out;
    for (const auto& s : raw) {
        auto parts = trim(s);
        auto space = parts.find(' ');
        if (space == std::string_view::npos) {
            if (!parts.empty())
                out.line.emplace_back(parts);
        } else {
            out.block.emplace_back(std::string(trim(parts.substr(0, space))), std::string(trim(parts.substr(space + 1))));
        }
    }
    return out;
}

enum class LineKind { blank, code, comment };

struct CodeLine {
    std::size_t start = 0;
    std::size_t end = 0;
    LineKind kind = LineKind::blank;
    std::string text;
    std::vector<std::size_t> offsets;
    int depth_start = 0;
    int min_depth = 0;
};

void tidy_comment_line(CodeLine& line) {
    auto& t = line.text;
    auto& o = line.offsets;
    std::size_t b = 0;
    std::size_t e = t.size();
    auto skip_space = [&] {
        while (b < e && std::isspace(static_cast<unsigned char>(t[b])))
            ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(t[e - 1])))
            --e;
    };
    skip_space();
    // Javadoc gutters, extra slashes and trailing stars.
    while (b < e && (t[b] == '*' || t[b] == '/' || t[b] == '!'))
        ++b;
    while (e > b && t[e - 1] == '*')
        --e;
    skip_space();
    t = t.substr(b, e - b);
    o = std::vector<std::size_t>(o.begin() + static_cast<std::ptrdiff_t>(b), o.begin() + static_cast<std::ptrdiff_t>(e));
}

std::vector<CodeLine> scan_lines(std::string_view code, const CommentStyles& styles) {
    std::vector<CodeLine> lines;
    std::size_t i = 0;
    const std::size_t n = code.size();
    int depth = 0;
    const std::string* block_close = nullptr;
    char quote = 0;

    while (i <= n) {
        CodeLine line;
        line.start = i;
        line.depth_start = depth;
        line.min_depth = depth;
        bool has_code = false;
        bool has_comment = block_close != nullptr;
        bool line_comment = false;

        while (i < n && code[i] != '\n') {
            char c = code[i];
            if (line_comment) {
                line.text.push_back(c);
                line.offsets.push_back(i);
                ++i;
                continue;
            }
            if (block_close != nullptr) {
                if (code.compare(i, block_close->size(), *block_close) == 0) {
                    i += block_close->size();
                    block_close = nullptr;
                    continue;
                }
                line.text.push_back(c);
                line.offsets.push_back(i);
                ++i;
                continue;
            }
            if (quote != 0) {
                has_code = true;
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == quote)
                    quote = 0;
                ++i;
                continue;
            }
            bool matched = false;
            for (const auto& marker : styles.line) {
                if (code.compare(i, marker.size(), marker) == 0) {
                    // Trailing comments after code belong to the code line.
                    if (has_code) {
                        i = code.find('\n', i);
                        if (i == std::string_view::npos)
                            i = n;
                    } else {
                        line_comment = true;
                        has_comment = true;
                        i += marker.size();
                    }
                    matched = true;
                    break;
                }
            }
            if (matched)
                continue;
            for (const auto& [open, close] : styles.block) {
                if (code.compare(i, open.size(), open) == 0) {
                    i += open.size();
                    if (has_code) {
                        auto end = code.find(close, i);
                        if (end == std::string_view::npos) {
                            block_close = &close;
                        } else {
                            i = end + close.size();
                        }
                    } else {
                        block_close = &close;
                        has_comment = true;
                    }
                    matched = true;
                    break;
                }
            }
            if (matched)
                continue;
            if (c == '"' || c == '\'') {
                quote = c;
                has_code = true;
            } else if (c == '{') {
                ++depth;
                has_code = true;
            } else if (c == '}') {
                --depth;
                line.min_depth = std::min(line.min_depth, depth);
                has_code = true;
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                has_code = true;
            }
            ++i;
        }
        line.end = i;
        // Strings do not span lines in the languages we target.
        quote = 0;
        if (has_code)
            line.kind = LineKind::code;
        else if (has_comment)
            line.kind = LineKind::comment;
        else
            line.kind = LineKind::blank;
        if (line.kind == LineKind::comment)
            tidy_comment_line(line);
        lines.push_back(std::move(line));
        if (i >= n)
            break;
        ++i;  // newline
    }
    return lines;
}

}  // namespace

std::vector<CommentSegment> extract_comments(const DocNode& block, const IngestConfig& config) {
    std::vector<CommentSegment> out;
    if (block.kind != NodeKind::code_block)
        return out;
    const auto styles = styles_for(block, config);
    const auto lines = scan_lines(block.text, styles);

    std::size_t i = 0;
    while (i < lines.size()) {
        if (lines[i].kind != LineKind::comment) {
            ++i;
            continue;
        }
        std::size_t first = i;
        CommentSegment seg;
        while (i < lines.size() && lines[i].kind == LineKind::comment) {
            const auto& l = lines[i];
            if (!l.text.empty()) {
                if (!seg.text.empty()) {
                    seg.text.push_back(' ');
                    seg.text_offsets.push_back(seg.text_offsets.back() + 1);
                }
                seg.text += l.text;
                seg.text_offsets.insert(seg.text_offsets.end(), l.offsets.begin(), l.offsets.end());
            }
            ++i;
        }
        seg.comment_span = {lines[first].start, lines[i - 1].end};
        if (seg.text.empty())
            continue;

        const int depth = lines[first].depth_start;
        std::optional<std::size_t> code_first;
        std::optional<std::size_t> code_last;
        for (std::size_t k = i; k < lines.size(); ++k) {
            const auto& l = lines[k];
            if (l.kind == LineKind::comment)
                break;
            if (l.kind == LineKind::blank)
                continue;
            if (l.min_depth < depth)
                break;
            if (!code_first)
                code_first = k;
            code_last = k;
        }
        if (code_first) {
            seg.code_span = {lines[*code_first].start, lines[*code_last].end};
        } else {
            seg.code_span = {seg.comment_span.end, seg.comment_span.end};
        }
        out.push_back(std::move(seg));
    }
    return out;
}

std::vector<TutorialDocument> load_corpus(const std::filesystem::path& dir, const IngestConfig& config) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        auto ext = to_lower(entry.path().extension().string());
        if (ext != ".html" && ext != ".htm")
            continue;
        files.emplace_back(fs::relative(entry.path(), dir).generic_string(), entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<TutorialDocument> docs;
    docs.reserve(files.size());
    for (const auto& [uri, path] : files) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        docs.push_back(parse_page(buf.str(), uri, config));
    }
    return docs;
}

}  // namespace taskkg
