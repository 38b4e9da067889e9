#include "tpsqli/http_probe.hpp"

#include <cctype>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "tpsqli/errors.hpp"
#include "tpsqli/html.hpp"

namespace tpsqli {
namespace {

double monotonic_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

std::string InjectionPoint::id() const {
    return std::string(method_name(method)) + " " + url + "#" + parameter;
}

double body_similarity(std::string_view a, std::string_view b) {
    const auto tokenize = [](std::string_view text) {
        std::map<std::string, int> counts;
        double total_weight = 0.0;
        std::string token;
        for (char c : text) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                token.push_back(c);
            } else if (!token.empty()) {
                counts[token] += 1;
                total_weight += static_cast<double>(token.size());
                token.clear();
            }
        }
        if (!token.empty()) {
            counts[token] += 1;
            total_weight += static_cast<double>(token.size());
        }
        return std::make_pair(counts, total_weight);
    };

    const auto [counts_a, weight_a] = tokenize(a);
    const auto [counts_b, weight_b] = tokenize(b);
    if (weight_a == 0.0 && weight_b == 0.0) return 1.0;
    if (weight_a == 0.0 || weight_b == 0.0) return 0.0;

    double common = 0.0;
    for (const auto& [token, count] : counts_a) {
        auto it = counts_b.find(token);
        if (it == counts_b.end()) continue;
        common += static_cast<double>(token.size()) * std::min(count, it->second);
    }
    return 2.0 * common / (weight_a + weight_b);
}

struct HttpProbe::Impl {
    CrawlConfig config;
    std::map<std::string, std::unique_ptr<httplib::Client>> clients;  // by origin
    std::map<std::string, std::map<std::string, std::string>> cookies;  // origin -> jar
    double last_request_end = 0.0;
    std::vector<std::string> warnings;

    explicit Impl(CrawlConfig cfg) : config(std::move(cfg)) {
        if (config.request_timeout <= 0.0) {
            throw ValidationError("request_timeout must be positive");
        }
        if (config.max_depth < 0) {
            throw ValidationError("max_depth must be nonnegative");
        }
    }

    httplib::Client& client_for(const Url& url) {
        const std::string origin = url.origin();
        auto it = clients.find(origin);
        if (it == clients.end()) {
            auto cli = std::make_unique<httplib::Client>(url.host, url.port);
            const auto timeout = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::duration<double>(config.request_timeout));
            cli->set_connection_timeout(timeout);
            cli->set_read_timeout(timeout);
            cli->set_keep_alive(true);
            it = clients.emplace(origin, std::move(cli)).first;
        }
        return *it->second;
    }

    struct Response {
        bool ok = false;
        int status = 0;
        std::string body;
        double latency = 0.0;
        std::string error;
    };

    // The single request primitive: politeness, cookies, timing.
    Response send(const Url& url, Method method,
                  const std::vector<std::pair<std::string, std::string>>& params) {
        if (config.politeness_delay > 0.0) {
            const double wait = last_request_end + config.politeness_delay - monotonic_seconds();
            if (wait > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
        }

        httplib::Headers headers{{"User-Agent", config.user_agent}};
        auto& jar = cookies[url.origin()];
        if (!jar.empty()) {
            std::string cookie_header;
            for (const auto& [name, value] : jar) {
                if (!cookie_header.empty()) cookie_header += "; ";
                cookie_header += name + "=" + value;
            }
            headers.emplace("Cookie", cookie_header);
        }

        httplib::Client& cli = client_for(url);
        const std::string query = encode_query(params);

        Response out;
        const double start = monotonic_seconds();
        httplib::Result result;
        if (method == Method::GET) {
            const std::string target = query.empty() ? url.path : url.path + "?" + query;
            result = cli.Get(target, headers);
        } else {
            result = cli.Post(url.path, headers, query, "application/x-www-form-urlencoded");
        }
        out.latency = monotonic_seconds() - start;
        last_request_end = monotonic_seconds();

        if (!result) {
            out.error = httplib::to_string(result.error());
            return out;
        }
        out.ok = true;
        out.status = result->status;
        out.body = result->body;

        auto range = result->headers.equal_range("Set-Cookie");
        for (auto it = range.first; it != range.second; ++it) {
            const std::string& raw = it->second;
            const auto semi = raw.find(';');
            const std::string kv = raw.substr(0, semi);
            const auto eq = kv.find('=');
            if (eq != std::string::npos) jar[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        return out;
    }

    std::vector<std::pair<std::string, std::string>> request_params(const InjectionPoint& point,
                                                                    const std::string& value) {
        std::vector<std::pair<std::string, std::string>> params = point.other_params;
        params.emplace_back(point.parameter, value);
        return params;
    }
};

HttpProbe::HttpProbe(CrawlConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpProbe::~HttpProbe() = default;

const CrawlConfig& HttpProbe::config() const { return impl_->config; }

const std::vector<std::string>& HttpProbe::warnings() const { return impl_->warnings; }

BaselineResponse HttpProbe::fetch_baseline(const InjectionPoint& point) {
    const auto url = Url::parse(point.url);
    if (!url) throw ValidationError("bad point url '" + point.url + "'");
    const auto res = impl_->send(*url, point.method,
                                 impl_->request_params(point, point.original_value));
    if (!res.ok) {
        throw FetchError("baseline request for " + point.id() + " failed: " + res.error);
    }
    return {res.status, res.body, res.latency};
}

std::vector<InjectionPoint> HttpProbe::crawl() {
    const auto seed = Url::parse(impl_->config.seed_url);
    if (!seed) throw ValidationError("seed url '" + impl_->config.seed_url + "' is not valid");

    std::vector<InjectionPoint> points;
    std::set<std::string> point_keys;
    std::set<std::string> visited;
    std::deque<std::pair<Url, int>> queue;
    queue.emplace_back(*seed, 0);
    visited.insert(seed->str());
    bool seed_fetched = false;

    const auto add_point = [&](const Url& base, Method method, const std::string& parameter,
                               const std::string& original_value,
                               std::vector<std::pair<std::string, std::string>> others) {
        Url bare = base;
        bare.query.clear();
        const std::string key = std::string(method_name(method)) + " " + bare.str() + "#" + parameter;
        if (!point_keys.insert(key).second) return;

        InjectionPoint point;
        point.url = bare.str();
        point.method = method;
        point.parameter = parameter;
        point.original_value = original_value;
        point.other_params = std::move(others);
        try {
            point.baseline = fetch_baseline(point);
        } catch (const FetchError& e) {
            impl_->warnings.push_back(std::string(e.what()) + "; point skipped");
            point_keys.erase(key);
            return;
        }
        points.push_back(std::move(point));
    };

    while (!queue.empty()) {
        const auto [url, depth] = queue.front();
        queue.pop_front();

        const auto page = impl_->send(url, Method::GET, parse_query(url.query));
        if (!page.ok) {
            if (!seed_fetched) {
                throw FetchError("seed url " + url.str() + " is unreachable: " + page.error);
            }
            impl_->warnings.push_back("page " + url.str() + " skipped: " + page.error);
            continue;
        }
        seed_fetched = true;

        // GET parameters of the visited page's own URL.
        const auto query_params = parse_query(url.query);
        for (std::size_t i = 0; i < query_params.size(); ++i) {
            std::vector<std::pair<std::string, std::string>> others;
            for (std::size_t j = 0; j < query_params.size(); ++j) {
                if (j != i) others.push_back(query_params[j]);
            }
            add_point(url, Method::GET, query_params[i].first, query_params[i].second,
                      std::move(others));
        }

        // Form fields become points at the form's action URL.
        for (const FormInfo& form : extract_forms(page.body)) {
            const auto action = form.action.empty() ? std::optional<Url>(url)
                                                    : resolve_url(url, form.action);
            if (!action) continue;
            if (impl_->config.same_origin_only && !action->same_origin(*seed)) continue;

            // Last occurrence wins for duplicate names; field order preserved.
            std::vector<FormField> fields;
            for (const FormField& field : form.fields) {
                bool replaced = false;
                for (FormField& existing : fields) {
                    if (existing.name == field.name) {
                        existing.value = field.value;
                        replaced = true;
                        break;
                    }
                }
                if (!replaced) fields.push_back(field);
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                std::vector<std::pair<std::string, std::string>> others;
                for (std::size_t j = 0; j < fields.size(); ++j) {
                    if (j != i) others.emplace_back(fields[j].name, fields[j].value);
                }
                add_point(*action, form.method, fields[i].name, fields[i].value, std::move(others));
            }
        }

        // Same-origin links feed the next level.
        if (depth < impl_->config.max_depth) {
            for (const std::string& href : extract_links(page.body)) {
                const auto next = resolve_url(url, href);
                if (!next) continue;
                if (impl_->config.same_origin_only && !next->same_origin(*seed)) continue;
                if (!visited.insert(next->str()).second) continue;
                queue.emplace_back(*next, depth + 1);
            }
        }
    }
    return points;
}

TrialRecord HttpProbe::execute_payload(const InjectionPoint& point, const Payload& payload) {
    const auto url = Url::parse(point.url);
    if (!url) throw ValidationError("bad point url '" + point.url + "'");

    TrialRecord rec;
    rec.payload_id = payload.id;
    rec.technique = payload.technique;
    rec.start_time = monotonic_seconds();

    const auto transport_fail = [&](const std::string& error) {
        rec.end_time = monotonic_seconds();
        rec.outcome = Outcome::TransportError;
        rec.evidence = error;
        return rec;
    };

    const CrawlConfig& cfg = impl_->config;
    const auto send_value = [&](const std::string& value) {
        return impl_->send(*url, point.method, impl_->request_params(point, value));
    };

    switch (payload.technique) {
        case Technique::BooleanBlind: {
            const auto true_res = send_value(payload.render(point.original_value));
            if (!true_res.ok) return transport_fail(true_res.error);
            const auto false_res = send_value(payload.render_false(point.original_value));
            if (!false_res.ok) return transport_fail(false_res.error);

            const double sim_true = body_similarity(true_res.body, point.baseline.body);
            const double sim_false = body_similarity(false_res.body, point.baseline.body);
            const bool true_matches =
                sim_true >= cfg.similarity_threshold && true_res.status == point.baseline.status;
            const bool false_differs = sim_false < cfg.similarity_threshold;
            if (true_matches && false_differs) {
                rec.outcome = Outcome::Exploited;
                std::ostringstream ev;
                ev << "boolean divergence: true-condition similarity " << sim_true
                   << ", false-condition similarity " << sim_false;
                rec.evidence = ev.str();
            }
            break;
        }
        case Technique::ErrorBased: {
            const auto res = send_value(payload.render(point.original_value));
            if (!res.ok) return transport_fail(res.error);
            for (const std::string& signature : payload.hint.error_signatures) {
                if (res.body.find(signature) != std::string::npos) {
                    rec.outcome = Outcome::Exploited;
                    rec.evidence = "database error signature present: \"" + signature + "\"";
                    break;
                }
            }
            break;
        }
        case Technique::UnionBased:
        case Technique::InlineQuery: {
            const auto res = send_value(payload.render(point.original_value));
            if (!res.ok) return transport_fail(res.error);
            if (res.body.find(payload.hint.marker) != std::string::npos &&
                point.baseline.body.find(payload.hint.marker) == std::string::npos) {
                rec.outcome = Outcome::Exploited;
                rec.evidence = "marker \"" + payload.hint.marker + "\" reflected in response";
            }
            break;
        }
        case Technique::StackBased: {
            const auto res = send_value(payload.render(point.original_value));
            if (!res.ok) return transport_fail(res.error);
            if (payload.hint.delay_seconds > 0.0) {
                const double required =
                    point.baseline.latency_seconds + cfg.delay_factor * payload.hint.delay_seconds;
                if (res.latency >= required) {
                    rec.outcome = Outcome::Exploited;
                    std::ostringstream ev;
                    ev << "stacked delay observed: " << res.latency << "s >= " << required << "s";
                    rec.evidence = ev.str();
                }
            } else if (res.body.find(payload.hint.marker) != std::string::npos &&
                       point.baseline.body.find(payload.hint.marker) == std::string::npos) {
                rec.outcome = Outcome::Exploited;
                rec.evidence = "stacked marker \"" + payload.hint.marker + "\" reflected";
            }
            break;
        }
        case Technique::TimeBlind: {
            const auto res = send_value(payload.render(point.original_value));
            if (!res.ok) return transport_fail(res.error);
            const double required =
                point.baseline.latency_seconds + cfg.delay_factor * payload.hint.delay_seconds;
            if (res.latency >= required) {
                rec.outcome = Outcome::Exploited;
                std::ostringstream ev;
                ev << "response delayed " << res.latency << "s (baseline "
                   << point.baseline.latency_seconds << "s, required " << required << "s)";
                rec.evidence = ev.str();
            }
            break;
        }
    }

    rec.end_time = monotonic_seconds();
    return rec;
}

Injector HttpProbe::injector_for(const InjectionPoint& point) {
    return [this, point](const Payload& payload) { return execute_payload(point, payload); };
}

}  // namespace tpsqli
