#include "tpsqli/url.hpp"

#include <algorithm>
#include <cctype>

#include "tpsqli/errors.hpp"

namespace tpsqli {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_unreserved(unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~';
}

}  // namespace

std::string_view method_name(Method m) { return m == Method::GET ? "GET" : "POST"; }

Method method_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "get") return Method::GET;
    if (n == "post") return Method::POST;
    throw ValidationError("unsupported HTTP method '" + std::string(name) + "'");
}

std::optional<Url> Url::parse(std::string_view text) {
    const auto scheme_end = text.find("://");
    if (scheme_end == std::string_view::npos) return std::nullopt;

    Url url;
    url.scheme = lower(text.substr(0, scheme_end));
    if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
    url.port = url.scheme == "https" ? 443 : 80;

    std::string_view rest = text.substr(scheme_end + 3);
    const auto frag = rest.find('#');
    if (frag != std::string_view::npos) rest = rest.substr(0, frag);

    const auto path_start = rest.find('/');
    std::string_view authority = path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
    std::string_view path_query =
        path_start == std::string_view::npos ? std::string_view("/") : rest.substr(path_start);

    const auto colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
        url.host = lower(authority.substr(0, colon));
        try {
            url.port = std::stoi(std::string(authority.substr(colon + 1)));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    } else {
        url.host = lower(authority);
    }
    if (url.host.empty()) return std::nullopt;

    const auto q = path_query.find('?');
    if (q == std::string_view::npos) {
        url.path = std::string(path_query);
    } else {
        url.path = std::string(path_query.substr(0, q));
        url.query = std::string(path_query.substr(q + 1));
    }
    if (url.path.empty()) url.path = "/";
    return url;
}

std::string Url::origin() const {
    return scheme + "://" + host + ":" + std::to_string(port);
}

std::string Url::path_and_query() const {
    return query.empty() ? path : path + "?" + query;
}

std::string Url::str() const { return origin() + path_and_query(); }

bool Url::same_origin(const Url& other) const {
    return scheme == other.scheme && host == other.host && port == other.port;
}

std::optional<Url> resolve_url(const Url& base, std::string_view href) {
    std::string_view h = href;
    const auto frag = h.find('#');
    if (frag != std::string_view::npos) h = h.substr(0, frag);
    if (h.empty()) return std::nullopt;

    if (h.find("://") != std::string_view::npos) return Url::parse(h);
    // Reject other scheme-prefixed references (mailto:, javascript:, data:).
    const auto colon = h.find(':');
    const auto slash = h.find('/');
    if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
        return std::nullopt;
    }

    Url url = base;
    url.query.clear();
    std::string target;
    if (h.front() == '/') {
        target = std::string(h);
    } else {
        const auto dir_end = base.path.rfind('/');
        target = base.path.substr(0, dir_end + 1) + std::string(h);
    }

    const auto q = target.find('?');
    if (q == std::string::npos) {
        url.path = target;
    } else {
        url.path = target.substr(0, q);
        url.query = target.substr(q + 1);
    }
    if (url.path.empty()) url.path = "/";
    return url;
}

std::string url_encode(std::string_view value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(value.size());
    for (unsigned char c : value) {
        if (is_unreserved(c)) {
            out.push_back(static_cast<char>(c));
        } else if (c == ' ') {
            out.push_back('+');
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string url_decode(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        const char c = value[i];
        if (c == '+') {
            out.push_back(' ');
        } else if (c == '%' && i + 2 < value.size() && std::isxdigit((unsigned char)value[i + 1]) &&
                   std::isxdigit((unsigned char)value[i + 2])) {
            out.push_back(static_cast<char>(std::stoi(std::string(value.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query) {
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t pos = 0;
    while (pos <= query.size() && !query.empty()) {
        auto amp = query.find('&', pos);
        if (amp == std::string_view::npos) amp = query.size();
        const std::string_view pair = query.substr(pos, amp - pos);
        if (!pair.empty()) {
            const auto eq = pair.find('=');
            if (eq == std::string_view::npos) {
                params.emplace_back(url_decode(pair), "");
            } else {
                params.emplace_back(url_decode(pair.substr(0, eq)), url_decode(pair.substr(eq + 1)));
            }
        }
        if (amp == query.size()) break;
        pos = amp + 1;
    }
    return params;
}

std::string encode_query(const std::vector<std::pair<std::string, std::string>>& params) {
    std::string out;
    for (const auto& [name, value] : params) {
        if (!out.empty()) out.push_back('&');
        out += url_encode(name) + "=" + url_encode(value);
    }
    return out;
}

}  // namespace tpsqli
