#include "tpsqli/html.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace tpsqli {
namespace {

// Tag scanner sufficient for the markup this tool crawls. Not a general HTML
// parser: no comments-in-attributes, no CDATA, no script-content awareness.

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        const auto semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 6) {
            out.push_back(s[i]);
            continue;
        }
        const std::string_view entity = s.substr(i + 1, semi - i - 1);
        if (entity == "amp") out.push_back('&');
        else if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "#39" || entity == "apos") out.push_back('\'');
        else {
            out.push_back(s[i]);
            continue;
        }
        i = semi;
    }
    return out;
}

struct Tag {
    std::string name;  // lowercased, without '/'
    bool closing = false;
    std::map<std::string, std::string> attrs;
    std::size_t end = 0;  // index just past '>'
};

std::map<std::string, std::string> parse_attributes(std::string_view body) {
    std::map<std::string, std::string> attrs;
    std::size_t i = 0;
    while (i < body.size()) {
        while (i < body.size() && (std::isspace((unsigned char)body[i]) || body[i] == '/')) ++i;
        std::size_t name_start = i;
        while (i < body.size() && !std::isspace((unsigned char)body[i]) && body[i] != '=' &&
               body[i] != '/' && body[i] != '>') {
            ++i;
        }
        if (i == name_start) break;
        const std::string name = lower(body.substr(name_start, i - name_start));

        while (i < body.size() && std::isspace((unsigned char)body[i])) ++i;
        if (i >= body.size() || body[i] != '=') {
            attrs[name] = "";  // bare attribute
            continue;
        }
        ++i;
        while (i < body.size() && std::isspace((unsigned char)body[i])) ++i;
        std::string value;
        if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
            const char quote = body[i++];
            const std::size_t start = i;
            while (i < body.size() && body[i] != quote) ++i;
            value = std::string(body.substr(start, i - start));
            if (i < body.size()) ++i;
        } else {
            const std::size_t start = i;
            while (i < body.size() && !std::isspace((unsigned char)body[i]) && body[i] != '>') ++i;
            value = std::string(body.substr(start, i - start));
        }
        attrs[name] = decode_entities(value);
    }
    return attrs;
}

// Next tag at or after pos; nullopt when none remain.
std::optional<Tag> next_tag(std::string_view html, std::size_t pos) {
    while (true) {
        const auto lt = html.find('<', pos);
        if (lt == std::string_view::npos) return std::nullopt;
        if (html.compare(lt, 4, "<!--") == 0) {
            const auto end = html.find("-->", lt);
            if (end == std::string_view::npos) return std::nullopt;
            pos = end + 3;
            continue;
        }
        const auto gt = html.find('>', lt);
        if (gt == std::string_view::npos) return std::nullopt;

        std::string_view inner = html.substr(lt + 1, gt - lt - 1);
        Tag tag;
        tag.end = gt + 1;
        if (!inner.empty() && inner.front() == '/') {
            tag.closing = true;
            inner.remove_prefix(1);
        }
        std::size_t name_end = 0;
        while (name_end < inner.size() && !std::isspace((unsigned char)inner[name_end]) &&
               inner[name_end] != '/') {
            ++name_end;
        }
        tag.name = lower(inner.substr(0, name_end));
        if (tag.name.empty() || !std::isalpha((unsigned char)tag.name[0])) {
            pos = gt + 1;
            continue;
        }
        if (!tag.closing) tag.attrs = parse_attributes(inner.substr(name_end));
        return tag;
    }
}

}  // namespace

std::vector<std::string> extract_links(std::string_view html) {
    std::vector<std::string> links;
    std::size_t pos = 0;
    while (auto tag = next_tag(html, pos)) {
        pos = tag->end;
        if (tag->closing || tag->name != "a") continue;
        auto it = tag->attrs.find("href");
        if (it != tag->attrs.end() && !it->second.empty()) links.push_back(it->second);
    }
    return links;
}

std::vector<FormInfo> extract_forms(std::string_view html) {
    std::vector<FormInfo> forms;
    FormInfo current;
    bool in_form = false;
    std::size_t pos = 0;

    while (auto tag = next_tag(html, pos)) {
        pos = tag->end;

        if (tag->name == "form") {
            if (tag->closing) {
                if (in_form) forms.push_back(std::move(current));
                in_form = false;
                current = FormInfo{};
            } else {
                // A new <form> implicitly closes a dangling one.
                if (in_form) forms.push_back(std::move(current));
                current = FormInfo{};
                in_form = true;
                auto action = tag->attrs.find("action");
                current.action = action == tag->attrs.end() ? "" : action->second;
                auto method = tag->attrs.find("method");
                current.method = Method::GET;
                if (method != tag->attrs.end() && lower(method->second) == "post") {
                    current.method = Method::POST;
                }
            }
            continue;
        }

        if (!in_form || tag->closing) continue;

        if (tag->name == "input" || tag->name == "select" || tag->name == "textarea") {
            auto name = tag->attrs.find("name");
            if (name == tag->attrs.end() || name->second.empty()) continue;
            std::string value;
            if (tag->name == "input") {
                auto v = tag->attrs.find("value");
                if (v != tag->attrs.end()) value = v->second;
            }
            current.fields.push_back({name->second, value});
        } else if (tag->name == "option" && !current.fields.empty()) {
            // First option supplies the default value of the preceding select.
            if (current.fields.back().value.empty()) {
                auto v = tag->attrs.find("value");
                if (v != tag->attrs.end()) current.fields.back().value = v->second;
            }
        }
    }
    if (in_form) forms.push_back(std::move(current));
    return forms;
}

}  // namespace tpsqli
