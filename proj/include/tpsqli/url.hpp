#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tpsqli {

enum class Method { GET, POST };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);  // case-insensitive; throws ValidationError

// Just enough of a URL type for same-origin crawling over http.
struct Url {
    std::string scheme = "http";
    std::string host;
    int port = 80;
    std::string path = "/";
    std::string query;  // without the leading '?'

    static std::optional<Url> parse(std::string_view text);

    std::string origin() const;          // scheme://host:port
    std::string path_and_query() const;  // /path?query
    std::string str() const;
    bool same_origin(const Url& other) const;
};

// Resolves href against base: absolute URLs pass through, "/x" replaces the
// path, anything else is relative to the base directory. Fragments are
// dropped. Returns nullopt for unsupported schemes (mailto:, javascript:, ...).
std::optional<Url> resolve_url(const Url& base, std::string_view href);

// Query-string / form-body helpers (application/x-www-form-urlencoded).
std::vector<std::pair<std::string, std::string>> parse_query(std::string_view query);
std::string encode_query(const std::vector<std::pair<std::string, std::string>>& params);
std::string url_encode(std::string_view value);
std::string url_decode(std::string_view value);

}  // namespace tpsqli
